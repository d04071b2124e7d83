#pragma once

#include <optional>
#include <string>
#include <vector>

#include "simjudge/units.hpp"

namespace simjudge::specmd {

// One entry of a section: either a scalar `key: value` or a block. Blocks are
// introduced by the literal `|` value or by an empty value followed by
// indented lines (the form the format's own examples use for nested maps).
struct Entry {
  enum class Kind { scalar, block };
  enum class BlockStyle { pipe, plain };

  std::string key;
  Kind kind = Kind::scalar;
  std::string value;                     // scalar only, trailing comment stripped
  std::vector<std::string> block_lines;  // block only, stored verbatim
  std::string comment;                   // trailing `# ...` of the introducer line
  BlockStyle block_style = BlockStyle::pipe;
  int line = 0;  // 1-based source line of the key

  bool operator==(const Entry& other) const {
    return key == other.key && kind == other.kind && value == other.value &&
           block_lines == other.block_lines && comment == other.comment &&
           block_style == other.block_style;
  }

  bool empty_content() const;
  // Flattened text of the entry (scalar value or joined block lines).
  std::string joined_text() const;
};

struct Section {
  std::string name;  // source order and case preserved
  std::vector<Entry> entries;
  int line = 0;

  bool operator==(const Section& other) const {
    return name == other.name && entries == other.entries;
  }
};

struct SpecDocument {
  std::string title;
  std::vector<Section> sections;
  std::string source_digest;  // lowercase hex SHA-256 of the raw input bytes

  // Structural equality; the digest identifies source bytes, not structure.
  bool operator==(const SpecDocument& other) const {
    return title == other.title && sections == other.sections;
  }

  const Section* find_section(const std::string& name) const;
};

struct Violation {
  std::string rule;  // V1-sections, V2-tolerance, V3-equations
  std::string message;
  int line = 0;
};

struct ValidationReport {
  bool valid = false;
  std::vector<Violation> violations;
  std::vector<std::string> warnings;  // non-fatal (e.g. duplicate keys)
  std::string digest;
};

// ---- six-tuple -------------------------------------------------------------

struct Param {
  std::string name;
  std::string raw;
  std::optional<units::Quantity> quantity;
};

struct DomainDesc {
  std::string kind;
  int dimension = 0;  // 0 = unspecified
  std::vector<Param> params;
};

struct EquationDesc {
  std::string name;
  std::string expression;
  std::vector<Param> params;  // section-level parameters, shared by the set
};

enum class ConditionKind { dirichlet, neumann, robin, periodic, inequality, support };

struct ConditionDesc {
  ConditionKind kind = ConditionKind::dirichlet;
  std::string target;
  std::string expression;
  std::optional<double> numeric_value;  // trailing number, when one parses
};

struct ObservableDesc {
  std::string name;
  std::string unit;
};

struct ToleranceDesc {
  std::vector<Param> thresholds;  // numeric thresholds, as Quantities
  std::string metric;
};

struct ProblemSpec {
  DomainDesc domain_omega;
  std::vector<EquationDesc> equations;
  std::vector<ConditionDesc> boundary;
  std::vector<ConditionDesc> initial;
  bool initial_none = false;  // explicit N/A / none marker
  std::vector<ObservableDesc> observables;
  ToleranceDesc tolerance;
  std::optional<std::string> archetype_hint;  // explicit `archetype:` key
  std::string source_digest;

  int dimension(int fallback = 1) const {
    return domain_omega.dimension > 0 ? domain_omega.dimension : fallback;
  }
  std::optional<units::Quantity> find_param(const std::string& name) const;
};

// ---- operations ------------------------------------------------------------

// Parses a UTF-8 spec document; throws ParseError on grammar violations.
SpecDocument parse_spec(const std::string& text);

// Always produces a report; never throws.
ValidationReport validate_spec(const SpecDocument& doc);

// Requires validate_spec(doc).valid; throws ExtractionError when a mandatory
// value is present but unusable.
ProblemSpec extract_six_tuple(const SpecDocument& doc);

// Canonical text form; parse(serialize(d)) == d.
std::string serialize(const SpecDocument& doc);

// Re-renders an extracted ProblemSpec as a spec document (used by the
// completeness property: extracted specs re-validate as valid).
std::string render_problem_spec(const ProblemSpec& spec, const std::string& title);

// Splits "key: rest" inside a block line; returns false if no key form.
bool split_key_value(const std::string& line, std::string& key, std::string& rest);

// Strips a trailing ` # ...` comment; returns the comment text (may be empty).
std::string strip_comment(std::string& value);

extern const std::vector<std::string> kMandatorySections;

}  // namespace simjudge::specmd

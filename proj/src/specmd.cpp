#include "simjudge/specmd.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "simjudge/sha256.hpp"

namespace simjudge::specmd {

const std::vector<std::string> kMandatorySections = {
    "Domain", "Equations", "Boundary Conditions", "Initial Conditions", "Observables",
    "Tolerance"};

namespace {

constexpr const char* kHeaderPrefix = "# Specification:";

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_blank(const std::string& s) { return trim(s).empty(); }

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(key[0])) || key[0] == '_')) return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) lines.push_back(current);
  return lines;
}

bool is_number(const std::string& text, double* out = nullptr) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* begin = t.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
  if (*end != '\0') return false;
  if (out) *out = v;
  return true;
}

// Leading number, possibly followed by a unit annotation.
bool starts_with_number(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* begin = t.c_str();
  char* end = nullptr;
  std::strtod(begin, &end);
  return end != begin;
}

}  // namespace

std::string strip_comment(std::string& value) {
  // Trailing `# ...`; a hash at position 0 comments the whole value.
  std::string comment;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (value[i] != '#') continue;
    if (i == 0 || std::isspace(static_cast<unsigned char>(value[i - 1]))) {
      comment = trim(value.substr(i + 1));
      value = trim(value.substr(0, i));
      return comment;
    }
  }
  value = trim(value);
  return comment;
}

bool split_key_value(const std::string& line, std::string& key, std::string& rest) {
  const std::string t = trim(line);
  auto colon = t.find(':');
  if (colon == std::string::npos) return false;
  key = trim(t.substr(0, colon));
  rest = trim(t.substr(colon + 1));
  return valid_key(key);
}

bool Entry::empty_content() const {
  if (kind == Kind::scalar) return trim(value).empty();
  return std::all_of(block_lines.begin(), block_lines.end(),
                     [](const std::string& l) { return is_blank(l); });
}

std::string Entry::joined_text() const {
  if (kind == Kind::scalar) return value;
  std::string out;
  for (const auto& l : block_lines) {
    if (!out.empty()) out += "\n";
    out += trim(l);
  }
  return out;
}

const Section* SpecDocument::find_section(const std::string& name) const {
  for (const auto& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

SpecDocument parse_spec(const std::string& text) {
  SpecDocument doc;
  doc.source_digest = sha256_hex(text);

  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "'# Specification:' header");

  // Header must be the first line.
  {
    const std::string first = trim(lines[0]);
    if (first.rfind(kHeaderPrefix, 0) != 0)
      throw ParseError(1, 1, "'# Specification:' header");
    doc.title = trim(first.substr(std::string(kHeaderPrefix).size()));
    if (doc.title.empty()) throw ParseError(1, int(first.size()) + 1, "non-empty title");
  }

  Section* current_section = nullptr;
  Entry* open_block = nullptr;  // block collecting indented lines

  for (std::size_t idx = 1; idx < lines.size(); ++idx) {
    const std::string& raw = lines[idx];
    const int lineno = int(idx) + 1;

    if (is_blank(raw)) {
      open_block = nullptr;
      continue;
    }

    const bool indented = raw[0] == ' ' || raw[0] == '\t';
    if (indented) {
      if (open_block == nullptr)
        throw ParseError(lineno, 1, "no open block for indented line");
      open_block->block_lines.push_back(raw);
      continue;
    }

    const std::string line = trim(raw);

    if (line.rfind("## ", 0) == 0) {
      open_block = nullptr;
      Section section;
      section.name = trim(line.substr(3));
      section.line = lineno;
      if (section.name.empty()) throw ParseError(lineno, 4, "section name");
      doc.sections.push_back(std::move(section));
      current_section = &doc.sections.back();
      continue;
    }

    if (line[0] == '#') {
      // Full-line comment; structurally ignored.
      open_block = nullptr;
      continue;
    }

    // key_value or equation_block production
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError(lineno, 1, "'key: value' entry or '## Section' header");
    Entry entry;
    entry.key = trim(line.substr(0, colon));
    entry.line = lineno;
    if (!valid_key(entry.key))
      throw ParseError(lineno, 1, "key matching [a-zA-Z_][a-zA-Z0-9_]*");
    if (current_section == nullptr)
      throw ParseError(lineno, 1, "'## Section' header before entries");

    std::string rest = trim(line.substr(colon + 1));
    entry.comment = strip_comment(rest);
    if (rest == "|") {
      entry.kind = Entry::Kind::block;
      entry.block_style = Entry::BlockStyle::pipe;
      current_section->entries.push_back(std::move(entry));
      open_block = &current_section->entries.back();
    } else if (rest.empty()) {
      // Empty value: becomes a plain block if indented lines follow.
      entry.kind = Entry::Kind::block;
      entry.block_style = Entry::BlockStyle::plain;
      current_section->entries.push_back(std::move(entry));
      open_block = &current_section->entries.back();
    } else {
      entry.kind = Entry::Kind::scalar;
      entry.value = rest;
      current_section->entries.push_back(std::move(entry));
      open_block = nullptr;
    }
  }

  // Normalize: a plain block that collected no lines is a scalar with an
  // empty value (validation reports it as an empty entry).
  for (auto& section : doc.sections) {
    for (auto& entry : section.entries) {
      if (entry.kind == Entry::Kind::block &&
          entry.block_style == Entry::BlockStyle::plain && entry.block_lines.empty()) {
        entry.kind = Entry::Kind::scalar;
        entry.value.clear();
      }
    }
  }

  return doc;
}

namespace {

// Sub-entries of an entry: scalar -> itself; block -> parsed block lines.
// Leading `- ` list markers are tolerated inside blocks.
struct SubEntry {
  std::string key;
  std::string value;
  std::string comment;
};

std::vector<SubEntry> sub_entries(const Entry& entry) {
  std::vector<SubEntry> out;
  if (entry.kind == Entry::Kind::scalar) {
    out.push_back({entry.key, entry.value, entry.comment});
    return out;
  }
  for (const auto& raw : entry.block_lines) {
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.rfind("- ", 0) == 0) line = trim(line.substr(2));
    std::string key, rest;
    if (split_key_value(line, key, rest)) {
      SubEntry se{key, rest, ""};
      se.comment = strip_comment(se.value);
      out.push_back(std::move(se));
    } else {
      std::string value = line;
      SubEntry se{"", value, ""};
      se.comment = strip_comment(se.value);
      out.push_back(std::move(se));
    }
  }
  return out;
}

bool has_math_expression(const std::string& text) {
  static const std::set<std::string> kOperatorTokens = {
      "grad",   "div",     "curl", "laplacian", "nabla", "radon",   "min",
      "max",    "sum",     "integral",          "exp",   "sin",     "cos",
      "sqrt",   "abs",     "tv",   "norm",      "mean",  "argmin",  "argmax"};
  for (char c : text) {
    if (c == '=' || c == '+' || c == '-' || c == '*' || c == '/' || c == '^' || c == '(' ||
        c == ')')
      return true;
  }
  std::string lowered;
  lowered.reserve(text.size());
  for (char c : text) lowered.push_back(char(std::tolower(static_cast<unsigned char>(c))));
  std::istringstream iss(lowered);
  std::string word;
  while (iss >> word) {
    if (kOperatorTokens.count(word)) return true;
  }
  return false;
}

}  // namespace

ValidationReport validate_spec(const SpecDocument& doc) {
  ValidationReport report;
  report.digest = doc.source_digest;

  // Rule 1: all six mandatory sections present, each with >= 1 non-empty entry.
  for (const auto& name : kMandatorySections) {
    const Section* section = doc.find_section(name);
    if (section == nullptr) {
      report.violations.push_back({"V1-sections", "missing mandatory section '## " + name + "'", 0});
      continue;
    }
    const bool any_content = std::any_of(section->entries.begin(), section->entries.end(),
                                         [](const Entry& e) { return !e.empty_content(); });
    if (!any_content) {
      report.violations.push_back(
          {"V1-sections", "section '## " + name + "' has no non-empty entry", section->line});
    }
  }

  // Rule 2: Tolerance contains at least one numeric threshold (optional unit).
  if (const Section* tol = doc.find_section("Tolerance")) {
    bool any_numeric = false;
    for (const auto& entry : tol->entries) {
      for (const auto& se : sub_entries(entry)) {
        if (starts_with_number(se.value)) {
          any_numeric = true;
          break;
        }
      }
    }
    if (!any_numeric) {
      report.violations.push_back(
          {"V2-tolerance", "Tolerance section has no entry with a numerical threshold",
           tol->line});
    }
  }

  // Rule 3: Equations contains at least one mathematical expression. The test
  // is a checkable proxy: the value carries an operator character or a named
  // operator token.
  if (const Section* eq = doc.find_section("Equations")) {
    bool any_expr = false;
    for (const auto& entry : eq->entries) {
      if (entry.key == "parameters") continue;
      if (has_math_expression(entry.joined_text())) {
        any_expr = true;
        break;
      }
    }
    if (!any_expr) {
      report.violations.push_back(
          {"V3-equations",
           "Equations section has no entry containing a mathematical expression "
           "(operator character or named operator token)",
           eq->line});
    }
  }

  // Duplicate keys: last occurrence wins; recorded as warnings.
  for (const auto& section : doc.sections) {
    std::map<std::string, int> seen;
    for (const auto& entry : section.entries) {
      auto [it, inserted] = seen.emplace(entry.key, entry.line);
      if (!inserted) {
        report.warnings.push_back("duplicate key '" + entry.key + "' in section '" +
                                  section.name + "' (line " + std::to_string(entry.line) +
                                  "); last occurrence wins");
      }
    }
  }

  report.valid = report.violations.empty();
  return report;
}

namespace {

// Applies last-occurrence-wins to a section's entries.
std::vector<Entry> effective_entries(const Section& section) {
  std::vector<Entry> out;
  for (const auto& entry : section.entries) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Entry& e) { return e.key == entry.key; });
    if (it != out.end()) {
      *it = entry;
    } else {
      out.push_back(entry);
    }
  }
  return out;
}

std::optional<units::Quantity> quantity_from(const std::string& value,
                                             const std::string& comment) {
  auto q = units::parse_quantity(value);
  if (!q) return std::nullopt;
  if (q->unit_text.empty() && !comment.empty()) {
    // The format's examples annotate units in trailing comments
    // (`PSNR_minimum: 30.0 # dB`); adopt the comment when it parses as a unit.
    try {
      const units::UnitInfo info = units::parse_unit_info(comment);
      q->dim = info.dim;
      q->scale = info.scale;
      q->logarithmic = info.logarithmic;
      q->unit_text = comment;
    } catch (const UnknownUnitError&) {
      // Not a unit annotation; leave the quantity dimensionless.
    }
  }
  return q;
}

ConditionKind condition_kind_of(const std::string& key, const std::string& value) {
  std::string text = key + " " + value;
  std::string lowered;
  lowered.reserve(text.size());
  for (char c : text) lowered.push_back(char(std::tolower(static_cast<unsigned char>(c))));
  auto contains = [&](const char* needle) { return lowered.find(needle) != std::string::npos; };
  if (contains("dirichlet")) return ConditionKind::dirichlet;
  if (contains("neumann")) return ConditionKind::neumann;
  if (contains("robin")) return ConditionKind::robin;
  if (contains("periodic")) return ConditionKind::periodic;
  if (contains("support")) return ConditionKind::support;
  if (contains(">=") || contains("<=") || contains("<") || contains(">"))
    return ConditionKind::inequality;
  return ConditionKind::dirichlet;
}

const std::set<std::string>& position_words() {
  static const std::set<std::string> kWords = {"left",  "right", "top",   "bottom",
                                               "north", "south", "east",  "west",
                                               "all",   "inlet", "outlet"};
  return kWords;
}

std::string condition_target_of(const std::string& key, const std::string& value) {
  if (position_words().count(key)) return key;
  std::string lowered;
  lowered.reserve(value.size());
  for (char c : value) lowered.push_back(char(std::tolower(static_cast<unsigned char>(c))));
  std::istringstream iss(lowered);
  std::string word;
  while (iss >> word) {
    if (position_words().count(word)) return word;
  }
  return key;
}

std::optional<double> trailing_number(const std::string& value) {
  // Number after the last '=' if present, else a trailing numeric token.
  std::string tail = value;
  auto eq = value.rfind('=');
  if (eq != std::string::npos) tail = value.substr(eq + 1);
  double v = 0;
  if (is_number(tail, &v)) return v;
  std::istringstream iss(value);
  std::string word, last;
  while (iss >> word) last = word;
  if (is_number(last, &v)) return v;
  return std::nullopt;
}

std::vector<ConditionDesc> conditions_from_section(const Section& section, bool* none_marker) {
  std::vector<ConditionDesc> out;
  if (none_marker) *none_marker = false;
  for (const auto& entry : effective_entries(section)) {
    for (const auto& se : sub_entries(entry)) {
      std::string value = se.value.empty() ? se.key : se.value;
      std::string lowered;
      for (char c : value) lowered.push_back(char(std::tolower(static_cast<unsigned char>(c))));
      if (none_marker && (lowered == "n/a" || lowered == "none")) {
        *none_marker = true;
        continue;
      }
      ConditionDesc cond;
      cond.kind = condition_kind_of(se.key, value);
      cond.target = condition_target_of(se.key, value);
      cond.expression = value;
      cond.numeric_value = trailing_number(value);
      out.push_back(std::move(cond));
    }
  }
  return out;
}

}  // namespace

ProblemSpec extract_six_tuple(const SpecDocument& doc) {
  ProblemSpec spec;
  spec.source_digest = doc.source_digest;

  // Domain
  if (const Section* domain = doc.find_section("Domain")) {
    for (const auto& entry : effective_entries(*domain)) {
      for (const auto& se : sub_entries(entry)) {
        if (se.key == "domain") {
          spec.domain_omega.kind = se.value;
        } else if (spec.domain_omega.kind.empty() && se.key == "geometry") {
          spec.domain_omega.kind = se.value;
        }
        if (se.key == "dimension") {
          double v = 0;
          if (is_number(se.value, &v)) spec.domain_omega.dimension = int(v);
        }
        if (se.key == "archetype") spec.archetype_hint = se.value;
        Param p{se.key, se.value, quantity_from(se.value, se.comment)};
        spec.domain_omega.params.push_back(std::move(p));
      }
    }
  }

  // Equations
  std::vector<Param> shared_params;
  if (const Section* eq = doc.find_section("Equations")) {
    for (const auto& entry : effective_entries(*eq)) {
      if (entry.key == "archetype" && entry.kind == Entry::Kind::scalar) {
        spec.archetype_hint = entry.value;
        continue;
      }
      if (entry.key == "parameters") {
        for (const auto& se : sub_entries(entry)) {
          if (se.key.empty()) continue;
          shared_params.push_back({se.key, se.value, quantity_from(se.value, se.comment)});
        }
        continue;
      }
      for (const auto& se : sub_entries(entry)) {
        EquationDesc desc;
        desc.name = se.key.empty() ? entry.key : se.key;
        desc.expression = se.value.empty() ? se.key : se.value;
        spec.equations.push_back(std::move(desc));
      }
    }
  }
  for (auto& e : spec.equations) e.params = shared_params;
  if (spec.equations.empty())
    throw ExtractionError("Equations", "", "no equation entries present");

  // Boundary Conditions
  if (const Section* bc = doc.find_section("Boundary Conditions")) {
    spec.boundary = conditions_from_section(*bc, nullptr);
  }

  // Initial Conditions (explicit N/A / none yields the none marker)
  if (const Section* ic = doc.find_section("Initial Conditions")) {
    bool none = false;
    spec.initial = conditions_from_section(*ic, &none);
    spec.initial_none = none && spec.initial.empty();
  }

  // Observables
  if (const Section* obs = doc.find_section("Observables")) {
    for (const auto& entry : effective_entries(*obs)) {
      for (const auto& se : sub_entries(entry)) {
        ObservableDesc desc;
        if (!se.key.empty() && se.key != "observables") {
          desc.name = se.key;
          desc.unit = se.value;
        } else {
          desc.name = se.value;
        }
        if (!desc.name.empty()) spec.observables.push_back(std::move(desc));
      }
    }
  }

  // Tolerance
  if (const Section* tol = doc.find_section("Tolerance")) {
    for (const auto& entry : effective_entries(*tol)) {
      for (const auto& se : sub_entries(entry)) {
        if (se.key == "metric") {
          spec.tolerance.metric = se.value;
          continue;
        }
        auto q = quantity_from(se.value, se.comment);
        if (q) {
          if (q->value < 0.0)
            throw ExtractionError("Tolerance", se.key, "negative threshold value");
          spec.tolerance.thresholds.push_back({se.key, se.value, q});
        }
      }
    }
  }
  if (spec.tolerance.thresholds.empty())
    throw ExtractionError("Tolerance", "", "no numeric threshold present");

  return spec;
}

std::optional<units::Quantity> ProblemSpec::find_param(const std::string& name) const {
  for (const auto& eq : equations) {
    for (const auto& p : eq.params) {
      if (p.name == name && p.quantity) return p.quantity;
    }
  }
  for (const auto& p : domain_omega.params) {
    if (p.name == name && p.quantity) return p.quantity;
  }
  return std::nullopt;
}

std::string serialize(const SpecDocument& doc) {
  std::string out = std::string(kHeaderPrefix) + " " + doc.title + "\n";
  for (const auto& section : doc.sections) {
    out += "\n## " + section.name + "\n";
    for (const auto& entry : section.entries) {
      out += entry.key + ":";
      if (entry.kind == Entry::Kind::scalar) {
        if (!entry.value.empty()) out += " " + entry.value;
        if (!entry.comment.empty()) out += " # " + entry.comment;
        out += "\n";
      } else {
        if (entry.block_style == Entry::BlockStyle::pipe) out += " |";
        if (!entry.comment.empty()) out += " # " + entry.comment;
        out += "\n";
        for (const auto& line : entry.block_lines) out += line + "\n";
      }
    }
  }
  return out;
}

std::string render_problem_spec(const ProblemSpec& spec, const std::string& title) {
  std::ostringstream out;
  out << kHeaderPrefix << " " << title << "\n\n## Domain\n";
  if (!spec.domain_omega.kind.empty()) out << "domain: " << spec.domain_omega.kind << "\n";
  if (spec.domain_omega.dimension > 0)
    out << "dimension: " << spec.domain_omega.dimension << "\n";
  for (const auto& p : spec.domain_omega.params) {
    if (p.name == "domain" || p.name == "dimension") continue;
    out << p.name << ": " << p.raw << "\n";
  }
  if (spec.domain_omega.kind.empty() && spec.domain_omega.dimension == 0 &&
      spec.domain_omega.params.empty())
    out << "domain: unspecified\n";

  out << "\n## Equations\n";
  for (const auto& eq : spec.equations) out << eq.name << ": " << eq.expression << "\n";
  if (!spec.equations.empty() && !spec.equations.front().params.empty()) {
    out << "parameters:\n";
    for (const auto& p : spec.equations.front().params)
      out << "  " << p.name << ": " << p.raw << "\n";
  }

  out << "\n## Boundary Conditions\n";
  if (spec.boundary.empty()) {
    out << "boundary: none declared\n";
  } else {
    int i = 0;
    for (const auto& c : spec.boundary) out << "bc_" << i++ << ": " << c.expression << "\n";
  }

  out << "\n## Initial Conditions\n";
  if (spec.initial_none || spec.initial.empty()) {
    out << "initial: N/A\n";
  } else {
    int i = 0;
    for (const auto& c : spec.initial) out << "ic_" << i++ << ": " << c.expression << "\n";
  }

  out << "\n## Observables\n";
  out << "observables:\n";
  for (const auto& o : spec.observables) {
    out << "  - " << o.name;
    if (!o.unit.empty()) out << ": " << o.unit;
    out << "\n";
  }
  if (spec.observables.empty()) out << "  - solution: dimensionless\n";

  out << "\n## Tolerance\n";
  for (const auto& t : spec.tolerance.thresholds) out << t.name << ": " << t.raw << "\n";
  if (!spec.tolerance.metric.empty()) out << "metric: " << spec.tolerance.metric << "\n";
  return out.str();
}

}  // namespace simjudge::specmd

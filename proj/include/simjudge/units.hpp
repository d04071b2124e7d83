#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>

#include "simjudge/errors.hpp"

namespace simjudge::units {

// Exact rational, normalized with positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num(n), den(1) {}
  Rational(std::int64_t n, std::int64_t d);

  bool operator==(const Rational&) const = default;
  bool zero() const { return num == 0; }
};

Rational operator+(Rational a, Rational b);
Rational operator-(Rational a, Rational b);
Rational operator*(Rational a, Rational b);
std::string to_string(Rational r);

// SI base-unit order: length, mass, time, current, temperature, amount, luminosity.
enum BaseUnit : int { kLength = 0, kMass, kTime, kCurrent, kTemperature, kAmount, kLuminosity };

struct Dimension {
  std::array<Rational, 7> exponents{};

  bool operator==(const Dimension&) const = default;
  bool dimensionless() const;

  static Dimension base(BaseUnit which, Rational power = Rational(1));
};

enum class DimOp { mul, div, pow };

Dimension mul(const Dimension& a, const Dimension& b);
Dimension div(const Dimension& a, const Dimension& b);
Dimension pow(const Dimension& a, Rational r);
// Uniform entry point matching the op enum; `r` is used only for pow.
Dimension combine(const Dimension& a, const Dimension& b, DimOp op, Rational r = Rational(1));

// Human-readable form like "L^2 T^-1"; "1" for dimensionless.
std::string to_string(const Dimension& d);

// Result of parsing a unit annotation. Scale converts the annotated unit to SI
// base units (e.g. mm -> 1e-3); logarithmic marks ratio units such as dB.
struct UnitInfo {
  Dimension dim;
  double scale = 1.0;
  bool logarithmic = false;
};

// Parses annotations like "m^2/s", "kg*m/s^2", "atm", "dB". Throws
// UnknownUnitError for tokens outside the documented vocabulary.
UnitInfo parse_unit_info(const std::string& text);
Dimension parse_unit(const std::string& text);

struct Quantity {
  double value = 0.0;
  Dimension dim;
  std::string unit_text;
  double scale = 1.0;         // multiplier to SI base units
  bool logarithmic = false;   // dB-style ratio annotation
  bool unit_parsed = true;    // false when the annotation is outside the vocabulary

  double si_value() const { return value * scale; }
};

// Two quantities are comparable only with equal dimensions and matching
// logarithmic annotation (prevents silent dB/linear confusion).
bool compatible(const Quantity& a, const Quantity& b);

// Parses "<number> [unit]" (e.g. "1.0e-4 m^2/s", "30.0"). Returns nullopt when
// the text does not start with a number. An annotation outside the vocabulary
// is kept as text with unit_parsed = false rather than raising.
std::optional<Quantity> parse_quantity(const std::string& text);

// Parses a full numeric dimension string used in archetype templates, e.g.
// "m^2/s" or "dimensionless".
Dimension dimension_from_string(const std::string& text);

}  // namespace simjudge::units

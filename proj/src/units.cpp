#include "simjudge/units.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <vector>

namespace simjudge::units {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (den == 0) throw Error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
}

Rational operator+(Rational a, Rational b) {
  return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
}
Rational operator-(Rational a, Rational b) {
  return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
}
Rational operator*(Rational a, Rational b) { return Rational(a.num * b.num, a.den * b.den); }

std::string to_string(Rational r) {
  if (r.den == 1) return std::to_string(r.num);
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

bool Dimension::dimensionless() const {
  for (const auto& e : exponents)
    if (!e.zero()) return false;
  return true;
}

Dimension Dimension::base(BaseUnit which, Rational power) {
  Dimension d;
  d.exponents[which] = power;
  return d;
}

Dimension mul(const Dimension& a, const Dimension& b) {
  Dimension out;
  for (int i = 0; i < 7; ++i) out.exponents[i] = a.exponents[i] + b.exponents[i];
  return out;
}

Dimension div(const Dimension& a, const Dimension& b) {
  Dimension out;
  for (int i = 0; i < 7; ++i) out.exponents[i] = a.exponents[i] - b.exponents[i];
  return out;
}

Dimension pow(const Dimension& a, Rational r) {
  Dimension out;
  for (int i = 0; i < 7; ++i) out.exponents[i] = a.exponents[i] * r;
  return out;
}

Dimension combine(const Dimension& a, const Dimension& b, DimOp op, Rational r) {
  switch (op) {
    case DimOp::mul:
      return mul(a, b);
    case DimOp::div:
      return div(a, b);
    case DimOp::pow:
      return pow(a, r);
  }
  return {};
}

std::string to_string(const Dimension& d) {
  static const char* kNames[7] = {"L", "M", "T", "I", "Th", "N", "J"};
  std::string out;
  for (int i = 0; i < 7; ++i) {
    if (d.exponents[i].zero()) continue;
    if (!out.empty()) out += " ";
    out += kNames[i];
    if (!(d.exponents[i] == Rational(1))) out += "^" + to_string(d.exponents[i]);
  }
  return out.empty() ? "1" : out;
}

namespace {

struct VocabEntry {
  Dimension dim;
  double scale;
  bool logarithmic;
};

const std::map<std::string, VocabEntry>& vocabulary() {
  static const std::map<std::string, VocabEntry> kVocab = [] {
    std::map<std::string, VocabEntry> v;
    auto L = Dimension::base(kLength);
    auto M = Dimension::base(kMass);
    auto T = Dimension::base(kTime);
    v["m"] = {L, 1.0, false};
    v["mm"] = {L, 1e-3, false};
    v["cm"] = {L, 1e-2, false};
    v["km"] = {L, 1e3, false};
    v["s"] = {T, 1.0, false};
    v["min"] = {T, 60.0, false};
    v["h"] = {T, 3600.0, false};
    v["kg"] = {M, 1.0, false};
    v["K"] = {Dimension::base(kTemperature), 1.0, false};
    v["A"] = {Dimension::base(kCurrent), 1.0, false};
    v["mol"] = {Dimension::base(kAmount), 1.0, false};
    v["cd"] = {Dimension::base(kLuminosity), 1.0, false};
    v["Hz"] = {pow(T, Rational(-1)), 1.0, false};
    // Pa = kg m^-1 s^-2
    auto pa = mul(M, mul(pow(L, Rational(-1)), pow(T, Rational(-2))));
    v["Pa"] = {pa, 1.0, false};
    v["atm"] = {pa, 101325.0, false};
    // J = kg m^2 s^-2, W = J/s
    auto joule = mul(M, mul(pow(L, Rational(2)), pow(T, Rational(-2))));
    v["J"] = {joule, 1.0, false};
    v["W"] = {div(joule, T), 1.0, false};
    v["dB"] = {Dimension{}, 1.0, true};
    v["dimensionless"] = {Dimension{}, 1.0, false};
    return v;
  }();
  return kVocab;
}

struct Token {
  std::string unit;
  std::int64_t exponent = 1;
};

// Splits "kg*m/s^2" into factors with signs applied by '/' from the left.
std::vector<std::pair<Token, bool>> tokenize(const std::string& text) {
  std::vector<std::pair<Token, bool>> out;  // (token, inverted)
  std::string current;
  bool inverted = false;
  auto flush = [&](bool next_inverted) {
    std::string t = current;
    current.clear();
    // trim
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    if (!t.empty()) {
      Token tok;
      auto caret = t.find('^');
      if (caret == std::string::npos) {
        tok.unit = t;
      } else {
        tok.unit = t.substr(0, caret);
        const std::string exp = t.substr(caret + 1);
        char* end = nullptr;
        tok.exponent = std::strtoll(exp.c_str(), &end, 10);
        if (end == exp.c_str() || *end != '\0') throw UnknownUnitError(t);
      }
      out.emplace_back(tok, inverted);
    }
    inverted = next_inverted;
  };
  for (char c : text) {
    if (c == '*') {
      flush(inverted);
    } else if (c == '/') {
      flush(true);
    } else {
      current.push_back(c);
    }
  }
  flush(inverted);
  return out;
}

}  // namespace

UnitInfo parse_unit_info(const std::string& text) {
  UnitInfo info;
  std::string trimmed = text;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front())))
    trimmed.erase(trimmed.begin());
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
    trimmed.pop_back();
  if (trimmed.empty()) return info;

  for (const auto& [tok, inverted] : tokenize(trimmed)) {
    auto it = vocabulary().find(tok.unit);
    if (it == vocabulary().end()) throw UnknownUnitError(tok.unit);
    const VocabEntry& entry = it->second;
    const std::int64_t e = inverted ? -tok.exponent : tok.exponent;
    info.dim = mul(info.dim, pow(entry.dim, Rational(e)));
    info.scale *= std::pow(entry.scale, double(e));
    info.logarithmic = info.logarithmic || entry.logarithmic;
  }
  return info;
}

Dimension parse_unit(const std::string& text) { return parse_unit_info(text).dim; }

bool compatible(const Quantity& a, const Quantity& b) {
  return a.dim == b.dim && a.logarithmic == b.logarithmic;
}

std::optional<Quantity> parse_quantity(const std::string& text) {
  std::string trimmed = text;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front())))
    trimmed.erase(trimmed.begin());
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
    trimmed.pop_back();
  if (trimmed.empty()) return std::nullopt;

  const char* begin = trimmed.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin) return std::nullopt;

  std::string unit_text(end);
  while (!unit_text.empty() && std::isspace(static_cast<unsigned char>(unit_text.front())))
    unit_text.erase(unit_text.begin());

  Quantity q;
  q.value = value;
  q.unit_text = unit_text;
  if (!unit_text.empty()) {
    try {
      const UnitInfo info = parse_unit_info(unit_text);
      q.dim = info.dim;
      q.scale = info.scale;
      q.logarithmic = info.logarithmic;
    } catch (const UnknownUnitError&) {
      q.unit_parsed = false;
    }
  }
  return q;
}

Dimension dimension_from_string(const std::string& text) { return parse_unit(text); }

}  // namespace simjudge::units

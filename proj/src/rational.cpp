#include "ctd/rational.hpp"

#include <cctype>
#include <sstream>

#include "ctd/errors.hpp"

namespace ctd {

Rational parseRational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParseError("empty rational literal");
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) {
      return Rational(boost::multiprecision::cpp_int(s));
    }
    boost::multiprecision::cpp_int num(s.substr(0, slash));
    boost::multiprecision::cpp_int den(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw ParseError("bad rational literal '" + text + "'");
  }
}

std::string formatRational(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

bool isInteger(const Rational& r) { return denominator(r) == 1; }

double toDouble(const Rational& r) { return static_cast<double>(r); }

TauPoly::TauPoly(const Rational& constant) {
  if (constant != 0) m_coeffs = {constant};
}

TauPoly::TauPoly(int constant) {
  if (constant != 0) m_coeffs = {Rational(constant)};
}

TauPoly::TauPoly(std::vector<Rational> coeffs) : m_coeffs(std::move(coeffs)) {
  trim();
}

TauPoly TauPoly::tau() { return TauPoly(std::vector<Rational>{0, 1}); }

const Rational& TauPoly::coeff(int k) const {
  static const Rational zero(0);
  if (k < 0 || k >= static_cast<int>(m_coeffs.size())) return zero;
  return m_coeffs[static_cast<size_t>(k)];
}

void TauPoly::trim() {
  while (!m_coeffs.empty() && m_coeffs.back() == 0) m_coeffs.pop_back();
}

TauPoly TauPoly::operator-() const {
  TauPoly out = *this;
  for (auto& c : out.m_coeffs) c = -c;
  return out;
}

TauPoly& TauPoly::operator+=(const TauPoly& o) {
  if (o.m_coeffs.size() > m_coeffs.size()) m_coeffs.resize(o.m_coeffs.size());
  for (size_t k = 0; k < o.m_coeffs.size(); ++k) m_coeffs[k] += o.m_coeffs[k];
  trim();
  return *this;
}

TauPoly& TauPoly::operator-=(const TauPoly& o) { return *this += -o; }

TauPoly TauPoly::operator+(const TauPoly& o) const {
  TauPoly out = *this;
  out += o;
  return out;
}

TauPoly TauPoly::operator-(const TauPoly& o) const {
  TauPoly out = *this;
  out -= o;
  return out;
}

TauPoly TauPoly::operator*(const TauPoly& o) const {
  if (isZero() || o.isZero()) return {};
  std::vector<Rational> prod(m_coeffs.size() + o.m_coeffs.size() - 1, Rational(0));
  for (size_t i = 0; i < m_coeffs.size(); ++i)
    for (size_t j = 0; j < o.m_coeffs.size(); ++j)
      prod[i + j] += m_coeffs[i] * o.m_coeffs[j];
  return TauPoly(std::move(prod));
}

TauPoly TauPoly::operator*(const Rational& r) const {
  if (r == 0) return {};
  TauPoly out = *this;
  for (auto& c : out.m_coeffs) c *= r;
  return out;
}

double TauPoly::evalDouble(double tau) const {
  double acc = 0.0;
  for (size_t k = m_coeffs.size(); k-- > 0;)
    acc = acc * tau + toDouble(m_coeffs[k]);
  return acc;
}

std::string TauPoly::toString() const {
  if (isZero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t k = 0; k < m_coeffs.size(); ++k) {
    if (m_coeffs[k] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (k == 0) {
      os << formatRational(m_coeffs[k]);
    } else {
      os << formatRational(m_coeffs[k]) << "*t";
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

TauPoly TauPoly::parse(const std::string& text) {
  // Accepts "a0 + a1*t + a2*t^2" with rational a_k; also bare rationals
  // and "-" joins ("1 - 2*t").
  std::vector<Rational> coeffs;
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParseError("empty tau-polynomial literal");

  size_t pos = 0;
  bool negate = false;
  if (s[0] == '+' || s[0] == '-') {
    negate = s[0] == '-';
    pos = 1;
  }
  while (pos < s.size()) {
    size_t end = pos;
    while (end < s.size() &&
           !((s[end] == '+' || s[end] == '-') && end > pos &&
             s[end - 1] != '/' && s[end - 1] != '+' && s[end - 1] != '-' &&
             s[end - 1] != '^' && s[end - 1] != '*'))
      ++end;
    std::string term = s.substr(pos, end - pos);
    if (term.empty()) throw ParseError("bad tau-polynomial '" + text + "'");

    Rational value(1);
    int power = 0;
    auto tpos = term.find('t');
    if (tpos == std::string::npos) {
      value = parseRational(term);
    } else {
      std::string head = term.substr(0, tpos);
      if (!head.empty() && head.back() == '*') head.pop_back();
      if (!head.empty()) value = parseRational(head);
      power = 1;
      std::string tail = term.substr(tpos + 1);
      if (!tail.empty()) {
        if (tail[0] != '^') throw ParseError("bad tau term '" + term + "'");
        power = std::stoi(tail.substr(1));
        if (power < 0) throw ParseError("negative tau power in '" + term + "'");
      }
    }
    if (negate) value = -value;
    if (static_cast<int>(coeffs.size()) <= power)
      coeffs.resize(static_cast<size_t>(power) + 1, Rational(0));
    coeffs[static_cast<size_t>(power)] += value;

    if (end < s.size()) {
      negate = s[end] == '-';
      pos = end + 1;
    } else {
      pos = end;
    }
  }
  return TauPoly(std::move(coeffs));
}

}  // namespace ctd

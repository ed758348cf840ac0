#include "ctd/trig.hpp"

#include <cmath>

#include "ctd/errors.hpp"

namespace ctd {

namespace {

/// Sign of the first nonzero entry; 0 for the zero vector.
int lexSign(const TrigScalar::Freq& v) {
  for (int e : v) {
    if (e > 0) return 1;
    if (e < 0) return -1;
  }
  return 0;
}

TrigScalar::Freq negated(const TrigScalar::Freq& v) {
  TrigScalar::Freq out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = -v[i];
  return out;
}

TrigScalar::Freq added(const TrigScalar::Freq& a, const TrigScalar::Freq& b) {
  TrigScalar::Freq out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

TrigScalar::Freq subtracted(const TrigScalar::Freq& a, const TrigScalar::Freq& b) {
  TrigScalar::Freq out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

}  // namespace

TrigScalar TrigScalar::constant(int baseDim, const TauPoly& value) {
  TrigScalar f(baseDim);
  f.addMode(Freq(static_cast<size_t>(baseDim), 0), value, TauPoly());
  return f;
}

TrigScalar TrigScalar::constant(int baseDim, const Rational& value) {
  return constant(baseDim, TauPoly(value));
}

TrigScalar TrigScalar::cosMode(int baseDim, const Freq& kappa) {
  TrigScalar f(baseDim);
  f.addMode(kappa, TauPoly(1), TauPoly());
  return f;
}

TrigScalar TrigScalar::sinMode(int baseDim, const Freq& kappa) {
  TrigScalar f(baseDim);
  f.addMode(kappa, TauPoly(), TauPoly(1));
  return f;
}

void TrigScalar::addMode(const Freq& kappa, const TauPoly& cosCoeff,
                         const TauPoly& sinCoeff) {
  if (static_cast<int>(kappa.size()) != m_dim)
    throw ParseError("frequency dimension mismatch");
  int sign = lexSign(kappa);
  if (sign >= 0) {
    insertRaw(kappa, cosCoeff, sign == 0 ? TauPoly() : sinCoeff);
  } else {
    insertRaw(negated(kappa), cosCoeff, -sinCoeff);
  }
}

void TrigScalar::insertRaw(const Freq& kappa, const TauPoly& c, const TauPoly& s) {
  if (c.isZero() && s.isZero()) return;
  auto it = m_modes.find(kappa);
  if (it == m_modes.end()) {
    m_modes.emplace(kappa, Mode{c, s});
    return;
  }
  it->second.cos += c;
  it->second.sin += s;
  if (it->second.cos.isZero() && it->second.sin.isZero()) m_modes.erase(it);
}

TrigScalar TrigScalar::operator-() const {
  TrigScalar out(m_dim);
  for (const auto& [k, mode] : m_modes)
    out.insertRaw(k, -mode.cos, -mode.sin);
  return out;
}

TrigScalar& TrigScalar::operator+=(const TrigScalar& o) {
  for (const auto& [k, mode] : o.m_modes) insertRaw(k, mode.cos, mode.sin);
  return *this;
}

TrigScalar& TrigScalar::operator-=(const TrigScalar& o) {
  for (const auto& [k, mode] : o.m_modes) insertRaw(k, -mode.cos, -mode.sin);
  return *this;
}

TrigScalar TrigScalar::operator+(const TrigScalar& o) const {
  TrigScalar out = *this;
  out += o;
  return out;
}

TrigScalar TrigScalar::operator-(const TrigScalar& o) const {
  TrigScalar out = *this;
  out -= o;
  return out;
}

TrigScalar TrigScalar::operator*(const TrigScalar& o) const {
  // Product-to-sum identities, everything with exact 1/2 factors:
  //   cosA cosB = ( cos(A-B) + cos(A+B) )/2
  //   sinA sinB = ( cos(A-B) - cos(A+B) )/2
  //   sinA cosB = ( sin(A-B) + sin(A+B) )/2
  //   cosA sinB = ( -sin(A-B) + sin(A+B) )/2
  TrigScalar out(m_dim);
  const Rational half(1, 2);
  for (const auto& [ka, ma] : m_modes) {
    for (const auto& [kb, mb] : o.m_modes) {
      Freq diff = subtracted(ka, kb);
      Freq sum = added(ka, kb);
      TauPoly cc = ma.cos * mb.cos;
      TauPoly ss = ma.sin * mb.sin;
      TauPoly sc = ma.sin * mb.cos;
      TauPoly cs = ma.cos * mb.sin;
      out.addMode(diff, (cc + ss) * half, (sc - cs) * half);
      out.addMode(sum, (cc - ss) * half, (sc + cs) * half);
    }
  }
  return out;
}

TrigScalar TrigScalar::operator*(const TauPoly& p) const {
  TrigScalar out(m_dim);
  if (p.isZero()) return out;
  for (const auto& [k, mode] : m_modes)
    out.insertRaw(k, mode.cos * p, mode.sin * p);
  return out;
}

TrigScalar TrigScalar::operator*(const Rational& r) const {
  return *this * TauPoly(r);
}

TrigScalar operator*(const Rational& r, const TrigScalar& f) {
  return f * TauPoly(r);
}

bool TrigScalar::operator==(const TrigScalar& o) const {
  if (m_dim != o.m_dim) return false;
  if (m_modes.size() != o.m_modes.size()) return false;
  for (auto ia = m_modes.begin(), ib = o.m_modes.begin(); ia != m_modes.end();
       ++ia, ++ib) {
    if (ia->first != ib->first) return false;
    if (ia->second.cos != ib->second.cos || ia->second.sin != ib->second.sin)
      return false;
  }
  return true;
}

TrigScalar TrigScalar::partialDerivative(int axis) const {
  TrigScalar out(m_dim);
  const TauPoly tau = TauPoly::tau();
  for (const auto& [k, mode] : m_modes) {
    if (k[static_cast<size_t>(axis)] == 0) continue;
    TauPoly factor = tau * Rational(k[static_cast<size_t>(axis)]);
    // d/dx cos = -tau k sin,  d/dx sin = tau k cos
    out.insertRaw(k, mode.sin * factor, -(mode.cos * factor));
  }
  return out;
}

Rational TrigScalar::harmonicPart() const {
  Freq zero(static_cast<size_t>(m_dim), 0);
  auto it = m_modes.find(zero);
  if (it == m_modes.end()) return Rational(0);
  if (it->second.cos.degree() > 0)
    throw NonConstantTauContent("constant Fourier mode carries a tau factor");
  return it->second.cos.constantTerm();
}

bool TrigScalar::isConstantRational() const {
  if (m_modes.empty()) return true;
  if (m_modes.size() != 1) return false;
  const auto& [k, mode] = *m_modes.begin();
  if (lexSign(k) != 0) return false;
  return mode.cos.degree() <= 0;
}

Rational TrigScalar::constantValue() const {
  if (m_modes.empty()) return Rational(0);
  if (!isConstantRational())
    throw NonConstantTauContent("value is not a constant rational");
  return m_modes.begin()->second.cos.constantTerm();
}

double TrigScalar::evalDouble(const std::vector<double>& x, double tau) const {
  double acc = 0.0;
  for (const auto& [k, mode] : m_modes) {
    double phase = 0.0;
    for (size_t i = 0; i < k.size(); ++i) phase += k[i] * x[i];
    phase *= tau;
    acc += mode.cos.evalDouble(tau) * std::cos(phase) +
           mode.sin.evalDouble(tau) * std::sin(phase);
  }
  return acc;
}

}  // namespace ctd

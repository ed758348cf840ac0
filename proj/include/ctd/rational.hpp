#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace ctd {

/// Exact rational scalar. All core arithmetic in the engine is done over Q
/// (or Q[tau], see TauPoly); floating point appears only in test oracles.
using Rational = boost::multiprecision::cpp_rational;

Rational parseRational(const std::string& text);
std::string formatRational(const Rational& r);
bool isInteger(const Rational& r);
double toDouble(const Rational& r);

/// Polynomial in the formal variable tau (which stands for 2*pi) with
/// rational coefficients. tau is transcendental for our purposes, so a
/// TauPoly is zero iff every coefficient is zero; this is what makes the
/// exterior derivative exact.
class TauPoly {
public:
  TauPoly() = default;
  TauPoly(const Rational& constant);  // NOLINT(google-explicit-constructor)
  TauPoly(int constant);              // NOLINT(google-explicit-constructor)
  explicit TauPoly(std::vector<Rational> coeffs);

  static TauPoly tau();  ///< the monomial tau

  bool isZero() const { return m_coeffs.empty(); }
  /// Degree in tau; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(m_coeffs.size()) - 1; }
  const Rational& coeff(int k) const;
  Rational constantTerm() const { return coeff(0); }

  TauPoly operator-() const;
  TauPoly& operator+=(const TauPoly& o);
  TauPoly& operator-=(const TauPoly& o);
  TauPoly operator+(const TauPoly& o) const;
  TauPoly operator-(const TauPoly& o) const;
  TauPoly operator*(const TauPoly& o) const;
  TauPoly operator*(const Rational& r) const;
  bool operator==(const TauPoly& o) const { return m_coeffs == o.m_coeffs; }
  bool operator!=(const TauPoly& o) const { return !(*this == o); }

  double evalDouble(double tau) const;

  /// "a0 + a1*t + a2*t^2", zero terms skipped, "0" for zero.
  std::string toString() const;
  static TauPoly parse(const std::string& text);

private:
  void trim();
  std::vector<Rational> m_coeffs;  // coefficient of tau^k at index k
};

}  // namespace ctd

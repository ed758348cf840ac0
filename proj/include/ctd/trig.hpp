#pragma once

#include <map>
#include <vector>

#include "ctd/rational.hpp"

namespace ctd {

/// Exact scalar function on the base torus T^m: a finite Fourier sum
///
///   f(x) = sum_kappa  c_kappa(tau) cos(tau kappa.x) + s_kappa(tau) sin(tau kappa.x)
///
/// with coordinates x in [0,1)^m and tau a formal symbol standing for 2*pi.
/// Only lexicographically nonnegative frequencies are stored (the sign is
/// folded into the coefficients via cos(-v)=cos(v), sin(-v)=-sin(v)); the
/// zero frequency has no sine part. Products re-expand into the basis with
/// the product-to-sum identities, so the ring is closed and exact.
class TrigScalar {
public:
  struct Mode {
    TauPoly cos;
    TauPoly sin;
  };
  using Freq = std::vector<int>;

  explicit TrigScalar(int baseDim) : m_dim(baseDim) {}

  static TrigScalar zero(int baseDim) { return TrigScalar(baseDim); }
  static TrigScalar constant(int baseDim, const TauPoly& value);
  static TrigScalar constant(int baseDim, const Rational& value);
  /// cos(tau kappa.x), resp. sin(tau kappa.x)
  static TrigScalar cosMode(int baseDim, const Freq& kappa);
  static TrigScalar sinMode(int baseDim, const Freq& kappa);

  int baseDim() const { return m_dim; }
  bool isZero() const { return m_modes.empty(); }
  const std::map<Freq, Mode>& modes() const { return m_modes; }

  /// Adds value*cos(tau kappa.x) + ... after canonicalizing the frequency sign.
  void addMode(const Freq& kappa, const TauPoly& cosCoeff, const TauPoly& sinCoeff);

  TrigScalar operator-() const;
  TrigScalar& operator+=(const TrigScalar& o);
  TrigScalar& operator-=(const TrigScalar& o);
  TrigScalar operator+(const TrigScalar& o) const;
  TrigScalar operator-(const TrigScalar& o) const;
  TrigScalar operator*(const TrigScalar& o) const;
  TrigScalar operator*(const TauPoly& p) const;
  TrigScalar operator*(const Rational& r) const;
  bool operator==(const TrigScalar& o) const;
  bool operator!=(const TrigScalar& o) const { return !(*this == o); }

  /// d/dx_axis. Each mode picks up a factor tau*kappa_axis and cos/sin swap.
  TrigScalar partialDerivative(int axis) const;

  /// Integral over the unit-volume torus: the tau-free constant coefficient.
  /// Throws NonConstantTauContent if the constant coefficient has tau-degree > 0.
  Rational harmonicPart() const;

  /// True iff the function is a constant rational (no oscillating modes, no tau).
  bool isConstantRational() const;
  /// The value as a rational; requires isConstantRational() (or zero).
  Rational constantValue() const;

  /// Float evaluation for test oracles only; tau defaults to 2*pi.
  double evalDouble(const std::vector<double>& x, double tau = 6.283185307179586476925287) const;

private:
  void insertRaw(const Freq& kappa, const TauPoly& c, const TauPoly& s);
  int m_dim;
  std::map<Freq, Mode> m_modes;
};

TrigScalar operator*(const Rational& r, const TrigScalar& f);

}  // namespace ctd

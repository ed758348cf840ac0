#pragma once

// Shared helpers for the test suites: seeded random generators for exact
// inputs (kept small so products stay fast) and the float oracles used to
// cross-check symbolic results by numerical substitution.

#include <functional>
#include <random>
#include <vector>

#include "ctd/courant.hpp"
#include "ctd/exterior.hpp"
#include "ctd/linalg.hpp"
#include "ctd/qla.hpp"
#include "ctd/spinor.hpp"
#include "ctd/trig.hpp"

namespace ctdtest {

using ctd::InvariantForm;
using ctd::Rational;
using ctd::RMat;
using ctd::RVec;
using ctd::SigPtr;
using ctd::TauPoly;
using ctd::TrigScalar;
using ctd::TVec;

using Rng = std::mt19937_64;

inline int randInt(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return d(rng);
}

inline Rational randRational(Rng& rng, int maxAbs = 4) {
  int num = randInt(rng, -maxAbs, maxAbs);
  int den = randInt(rng, 1, 3);
  return Rational(num, den);
}

inline Rational randNonzeroRational(Rng& rng, int maxAbs = 4) {
  Rational r = randRational(rng, maxAbs);
  return r == 0 ? Rational(1) : r;
}

inline TauPoly randTauPoly(Rng& rng, bool allowTau = true) {
  TauPoly p(randRational(rng));
  if (allowTau && randInt(rng, 0, 3) == 0)
    p += TauPoly::tau() * randRational(rng, 2);
  return p;
}

/// Small Fourier sum: 1-2 modes, frequencies in [-1,1]^m (occasionally 2).
inline TrigScalar randTrig(Rng& rng, int m, bool allowTau = true) {
  TrigScalar f(m);
  int nModes = randInt(rng, 1, 2);
  for (int t = 0; t < nModes; ++t) {
    TrigScalar::Freq k(static_cast<size_t>(m), 0);
    for (int i = 0; i < m; ++i) {
      k[static_cast<size_t>(i)] = randInt(rng, -1, 1);
      if (randInt(rng, 0, 7) == 0) k[static_cast<size_t>(i)] = 2;
    }
    f.addMode(k, randTauPoly(rng, allowTau), randTauPoly(rng, allowTau));
  }
  return f;
}

/// Random form with 1..maxTerms terms of the given degree.
inline InvariantForm randForm(Rng& rng, const SigPtr& sig, int degree,
                              int maxTerms = 2, bool allowTau = true) {
  InvariantForm out(sig);
  int total = sig->totalGens();
  std::vector<uint32_t> masks;
  for (uint32_t mask = 0; mask < (1u << total); ++mask)
    if (std::popcount(mask) == degree) masks.push_back(mask);
  if (masks.empty()) return out;
  int nTerms = randInt(rng, 1, maxTerms);
  for (int t = 0; t < nTerms; ++t) {
    uint32_t mask = masks[static_cast<size_t>(randInt(rng, 0, static_cast<int>(masks.size()) - 1))];
    out.addTerm(mask, randTrig(rng, sig->baseDim(), allowTau));
  }
  return out;
}

inline InvariantForm randInhomogeneousForm(Rng& rng, const SigPtr& sig,
                                           int maxDegree, int terms = 3) {
  InvariantForm out(sig);
  for (int t = 0; t < terms; ++t)
    out += randForm(rng, sig, randInt(rng, 0, maxDegree), 1);
  return out;
}

inline RVec randRVec(Rng& rng, int n, int maxAbs = 3) {
  RVec v(static_cast<size_t>(n));
  for (auto& x : v) x = randRational(rng, maxAbs);
  return v;
}

inline TVec randTVec(Rng& rng, int n, int baseDim, bool allowTau = true) {
  TVec v(static_cast<size_t>(n), TrigScalar::zero(baseDim));
  for (auto& x : v) x = randTrig(rng, baseDim, allowTau);
  return v;
}

inline std::vector<double> randPoint(Rng& rng, int m) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<double> x(static_cast<size_t>(m));
  for (auto& xi : x) xi = d(rng);
  return x;
}

/// Rational sample point (the spec's "random rational points").
inline std::vector<double> randRationalPoint(Rng& rng, int m) {
  std::vector<double> x(static_cast<size_t>(m));
  for (auto& xi : x) xi = randInt(rng, 0, 23) / 24.0;
  return x;
}

/// Central finite difference oracle, independent of partialDerivative.
inline double finiteDifference(const std::function<double(const std::vector<double>&)>& f,
                               std::vector<double> x, int axis, double h = 1e-5) {
  std::vector<double> xp = x, xm = x;
  xp[static_cast<size_t>(axis)] += h;
  xm[static_cast<size_t>(axis)] -= h;
  return (f(xp) - f(xm)) / (2 * h);
}

inline ctd::Section randSection(Rng& rng, const ctd::CourantData& data,
                                bool allowTau = true) {
  ctd::Section s = ctd::Section::zero(data.sig(), data.n());
  s.xi = randForm(rng, data.sig(), 1, 2, allowTau);
  for (auto& x : s.r) x = randTrig(rng, data.baseDim(), allowTau);
  for (auto& x : s.vec) x = randTrig(rng, data.baseDim(), allowTau);
  return s;
}

inline ctd::Section scaleSection(const ctd::Section& s, const ctd::TrigScalar& f) {
  ctd::Section out = s;
  out.xi = s.xi * f;
  for (auto& x : out.r) x = x * f;
  for (auto& x : out.vec) x = x * f;
  return out;
}

/// Random K = exp(ad_x) with x in the abelian half of the affine so(3)
/// algebra (nilpotent, so the exponential is an exact polynomial).
inline ctd::RMat randNilpotentAutomorphism(Rng& rng, const ctd::QuadraticLieAlgebra& g,
                                           ctd::RMat* logOut = nullptr) {
  ctd::RVec x(static_cast<size_t>(g.dim()), ctd::Rational(0));
  for (int i = g.dim() / 2; i < g.dim(); ++i)
    x[static_cast<size_t>(i)] = randRational(rng, 2);
  ctd::RMat d = g.adOf(x);
  if (logOut) *logOut = d;
  auto e = ctd::rexpNilpotent(d);
  return e ? *e : ctd::ridentity(g.dim());
}

inline ctd::IsoData randIso(Rng& rng, const ctd::CourantData& data, bool withK,
                            bool allowTau = true) {
  ctd::IsoData iso = ctd::IsoData::identity(data.sig(), data.n());
  iso.beta = randForm(rng, data.sig(), 2, 2, allowTau);
  for (auto& p : iso.phi) p = randForm(rng, data.sig(), 1, 1, allowTau);
  if (withK && data.n() > 0 && randInt(rng, 0, 1) == 0) {
    ctd::RMat logK;
    iso.K = randNilpotentAutomorphism(rng, data.g(), &logK);
    iso.logK = logK;
  }
  return iso;
}

inline ctd::InvariantSpinor randSpinor(Rng& rng, const ctd::CourantData& data,
                                       bool allowTau = true, int nTerms = 2) {
  ctd::InvariantSpinor s(data.sig(), data.fockPtr());
  int total = data.sig()->totalGens();
  int d = data.fock().dim();
  for (int t = 0; t < nTerms; ++t)
    s.addTerm(static_cast<uint32_t>(randInt(rng, 0, (1 << total) - 1)),
              static_cast<uint32_t>(randInt(rng, 0, d - 1)),
              randTrig(rng, data.baseDim(), allowTau));
  return s;
}

/// All basis spinors e_S (x) w_F; a spanning set of the invariant model.
inline std::vector<ctd::InvariantSpinor> spanningSpinors(const ctd::CourantData& data) {
  std::vector<ctd::InvariantSpinor> out;
  int total = data.sig()->totalGens();
  int d = data.fock().dim();
  for (uint32_t ms = 0; ms < (1u << total); ++ms)
    for (uint32_t mf = 0; mf < static_cast<uint32_t>(d); ++mf)
      out.push_back(ctd::InvariantSpinor::basis(data.sig(), data.fockPtr(), ms, mf));
  return out;
}

/// Equally spaced Riemann sum over [0,1)^m; exact (to rounding) for trig
/// polynomials once nGrid exceeds the largest frequency.
inline double quadrature(const ctd::TrigScalar& f, int nGrid = 64) {
  int m = f.baseDim();
  std::vector<int> idx(static_cast<size_t>(m), 0);
  double sum = 0.0;
  long count = 1;
  for (int i = 0; i < m; ++i) count *= nGrid;
  for (long it = 0; it < count; ++it) {
    long rem = it;
    std::vector<double> x(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
      x[static_cast<size_t>(i)] = static_cast<double>(rem % nGrid) / nGrid;
      rem /= nGrid;
    }
    sum += f.evalDouble(x);
  }
  return sum / static_cast<double>(count);
}

}  // namespace ctdtest

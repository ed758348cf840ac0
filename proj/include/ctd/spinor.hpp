#pragma once

#include <map>
#include <memory>
#include <utility>

#include "ctd/courant.hpp"

namespace ctd {

/// Section of the canonical weighted spinor bundle in the invariant model:
/// Lambda(T*.) (x) S_g with the density factor trivialized. Terms are pairs
/// (form word, Fock word) with TrigScalar coefficients; total parity is
/// form parity plus Fock parity.
class InvariantSpinor {
public:
  InvariantSpinor(SigPtr sig, std::shared_ptr<const SpinorModule> fock)
      : m_sig(std::move(sig)), m_fock(std::move(fock)) {}

  static InvariantSpinor basis(const SigPtr& sig,
                               const std::shared_ptr<const SpinorModule>& fock,
                               uint32_t formMask, uint32_t fockMask);

  const SigPtr& signature() const { return m_sig; }
  const std::shared_ptr<const SpinorModule>& fock() const { return m_fock; }
  const std::map<std::pair<uint32_t, uint32_t>, TrigScalar>& terms() const {
    return m_terms;
  }
  bool isZero() const { return m_terms.empty(); }
  void addTerm(uint32_t formMask, uint32_t fockMask, const TrigScalar& c);
  TrigScalar coefficient(uint32_t formMask, uint32_t fockMask) const;

  InvariantSpinor operator-() const;
  InvariantSpinor& operator+=(const InvariantSpinor& o);
  InvariantSpinor& operator-=(const InvariantSpinor& o);
  InvariantSpinor operator+(const InvariantSpinor& o) const;
  InvariantSpinor operator-(const InvariantSpinor& o) const;
  InvariantSpinor operator*(const TrigScalar& f) const;
  InvariantSpinor operator*(const Rational& r) const;
  bool operator==(const InvariantSpinor& o) const;
  bool operator!=(const InvariantSpinor& o) const { return !(*this == o); }

private:
  SigPtr m_sig;
  std::shared_ptr<const SpinorModule> m_fock;
  std::map<std::pair<uint32_t, uint32_t>, TrigScalar> m_terms;
};

/// gamma_{xi + r + X}(w (x) s) = (i_X w + xi ^ w) (x) s + (-1)^{|w|} w (x) (r.s)
InvariantSpinor gamma(const CourantData& data, const Section& u,
                      const InvariantSpinor& s);

/// The canonical Dirac generating operator in the invariant model.
InvariantSpinor dirac(const CourantData& data, const InvariantSpinor& s);

/// First-order part (d and the frame sum of the spinor connection) of the
/// Dirac operator; the operator whose symmetrized pairing identity is the
/// adjointness ingredient of the pushforward.
InvariantSpinor diracE(const CourantData& data, const InvariantSpinor& s);

/// Torus action on spinors for the fiber index a; vanishes exactly on the
/// invariant model (which only represents invariant spinors).
InvariantSpinor spinorAction(const CourantData& data, int a,
                             const InvariantSpinor& s);
bool isInvariantSpinor(const CourantData& data, const InvariantSpinor& s);

/// Canonical pairing of weighted spinors, valued in top-degree forms:
/// (-1)^{|s|(|w| + |w~|)} (w^t ^ w~)_top <s, s~>.
InvariantForm spinorPairing(const InvariantSpinor& a, const InvariantSpinor& b);

/// Coefficient-preserving inclusion into a larger complex (pullback along
/// the correspondence-space projection).
InvariantSpinor pullbackSpinor(const InvariantSpinor& s, const SigPtr& target,
                               const std::shared_ptr<const SpinorModule>& fock);

/// Fiber integration over the generators of the given kind, with the sign
/// (-1)^{r|s| + nr + r(r-1)/2}; lands in the target complex.
InvariantSpinor pushforwardSpinor(const InvariantSpinor& s, GenKind kind,
                                  const SigPtr& target,
                                  const std::shared_ptr<const SpinorModule>& fock);

/// Integral over the total space of the fibration that integrates out the
/// given kind, in the product orientation vol_target ^ vol_fiber. With the
/// canonical generator order this differs from the plain integral by the
/// permutation sign moving the fiber block to the end.
Rational fibrationIntegral(const InvariantForm& w, GenKind fiberKind);

/// Matrix of the quantized bivector of a skew endomorphism with TrigScalar
/// entries: gamma_{omega_W} with W(r) = -1/2 [omega_W, r]_Cl.
TMat gammaBivector(const SpinorModule& fock, const TMat& w, int baseDim);

/// Spin lift of a fiber-preserving isomorphism: e^{-beta} ^ composed with
/// the Clifford exponential of the Phi part and the Fock lift of K. Built
/// once, applied to many spinors.
class SpinLift {
public:
  SpinLift(const IsoData& iso, const CourantData& data);
  InvariantSpinor apply(const InvariantSpinor& s) const;

private:
  SigPtr m_sig;
  std::shared_ptr<const SpinorModule> m_fock;
  InvariantForm m_expBeta;  ///< e^{-beta} as a form
  GForm m_phi;
  RMat m_fockLift;
  bool m_fockIdentity;
};

}  // namespace ctd

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "ctd/linalg.hpp"

namespace ctd {

/// Element of the exterior algebra over the Lie algebra, kept in the basis
/// of wedge words (bitmasks over the n basis vectors) with rational
/// coefficients. Acts on spinors through the canonical quantization map
/// into the Clifford algebra.
class Multivector {
public:
  Multivector() = default;
  explicit Multivector(int dim) : m_dim(dim) {}
  static Multivector vector(const RVec& v);

  int dim() const { return m_dim; }
  const std::map<uint32_t, Rational>& terms() const { return m_terms; }
  bool isZero() const { return m_terms.empty(); }
  void addTerm(uint32_t mask, const Rational& c);

  Multivector operator+(const Multivector& o) const;
  Multivector operator-(const Multivector& o) const;
  Multivector operator*(const Rational& r) const;
  Multivector wedge(const Multivector& o) const;

private:
  int m_dim = 0;
  std::map<uint32_t, Rational> m_terms;
};

/// Quadratic Lie algebra with rational structure constants and a neutral
/// invariant scalar product. Antisymmetry, Jacobi, invariance, symmetry,
/// nondegeneracy and neutrality are all verified exactly at construction.
class QuadraticLieAlgebra {
public:
  /// bracketTable[i][j] = coordinates of [e_i, e_j].
  QuadraticLieAlgebra(int dim, std::vector<std::vector<RVec>> bracketTable,
                      RMat gram,
                      std::optional<std::pair<RMat, RMat>> wittBasis = {});

  static QuadraticLieAlgebra zero();
  /// so(3) |x so(3)* with the duality pairing of neutral signature; the
  /// standard class-C example whose adjoint map is an isomorphism.
  static QuadraticLieAlgebra affineSo3();
  /// Abelian algebra with the given neutral Gram matrix.
  static QuadraticLieAlgebra abelian(RMat gram);

  int dim() const { return m_dim; }
  const RMat& gram() const { return m_gram; }
  const RMat& gramInverse() const { return m_gramInv; }

  RVec bracket(const RVec& u, const RVec& v) const;
  TVec bracketT(const TVec& u, const TVec& v) const;
  Rational inner(const RVec& u, const RVec& v) const;
  TrigScalar innerT(const TVec& u, const TVec& v) const;

  /// ad_{e_i} as a matrix.
  const RMat& adBasis(int i) const { return m_adBasis[static_cast<size_t>(i)]; }
  RMat adOf(const RVec& x) const;
  TMat adOfT(const TVec& x) const;

  /// Exact solve of ad_x = M; nullopt when M is not in the image.
  std::optional<RVec> solveAdEquals(const RMat& m) const;
  std::optional<TVec> solveAdEqualsT(const TMat& m) const;

  /// Dimension of the space of skew-symmetric derivations, computed as an
  /// exact nullspace dimension.
  int skewDerivationDimension() const;
  /// ad : g -> Der(g) is injective with image all skew derivations.
  bool adIsIsomorphism() const;

  bool isSkewDerivation(const RMat& a) const;

  const std::optional<std::pair<RMat, RMat>>& wittBasis() const { return m_witt; }

private:
  void deriveWittBasis();
  int m_dim;
  std::vector<std::vector<RVec>> m_bracket;
  std::vector<RMat> m_adBasis;
  RMat m_gram;
  RMat m_gramInv;
  std::optional<std::pair<RMat, RMat>> m_witt;  // rows: w_alpha / w'_alpha
};

/// The Cartan 3-form <[u,v],w> with indices raised metrically, as a
/// Lambda^3 element ready for Clifford action.
Multivector cartanForm(const QuadraticLieAlgebra& g);

/// The bivector omega with A(r) = -1/2 [omega, r]_Cl for a skew derivation
/// (or any skew endomorphism) A; throws NotSkew otherwise.
Multivector bivectorOfDerivation(const QuadraticLieAlgebra& g, const RMat& a);

/// Irreducible Clifford module of the algebra in the Fock model S = Lambda W
/// over a rational Witt basis; basis elements are subsets of the W half.
/// The W half acts by exterior multiplication and the W' half by twice the
/// contraction, so gamma_v gamma_v = <v,v> id exactly.
class SpinorModule {
public:
  explicit SpinorModule(std::shared_ptr<const QuadraticLieAlgebra> g);

  const QuadraticLieAlgebra& algebra() const { return *m_g; }
  int halfDim() const { return m_h; }
  int dim() const { return 1 << m_h; }
  int parity(uint32_t fockMask) const;

  /// gamma of the i-th Lie algebra basis vector.
  const RMat& gammaBasis(int i) const { return m_gammaBasis[static_cast<size_t>(i)]; }
  RMat gammaVector(const RVec& v) const;

  /// Matrix of the canonical quantization of a multivector.
  RMat cliffordMatrix(const Multivector& x) const;

  /// Canonical bilinear pairing (Fock analogue of (omega^t ^ tilde)_top),
  /// det-normalized; the vacuum-sector sign is fixed positive.
  const RMat& pairingMatrix() const { return m_pairing; }
  Rational pairingDet() const { return m_pairingDet; }
  /// Square of the normalization applied to reach det +-1 (1 in this model;
  /// kept so downstream checks can run against the squared pairing).
  Rational pairingScaleSquared() const { return m_scaleSquared; }

  /// exp of the Clifford matrix of x, exact when nilpotent; throws
  /// NotNilpotent when powers do not truncate within the dimension bound.
  RMat cliffordExpMatrix(const Multivector& x) const;
  RVec cliffordExp(const Multivector& x, const RVec& s) const;

private:
  RMat wordMatrix(uint32_t word) const;
  std::shared_ptr<const QuadraticLieAlgebra> m_g;
  int m_h;
  std::vector<RMat> m_gammaBasis;
  RMat m_pairing;
  Rational m_pairingDet;
  Rational m_scaleSquared;
  mutable std::map<uint32_t, RMat> m_wordCache;
  mutable std::mutex m_cacheMutex;
};

}  // namespace ctd

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ctd/exterior.hpp"
#include "ctd/qla.hpp"

namespace ctd {

/// g-valued forms are kept componentwise: one InvariantForm per Lie algebra
/// basis index.
using GForm = std::vector<InvariantForm>;
/// End(g)-valued forms: an n x n matrix of forms.
using EndForm = std::vector<std::vector<InvariantForm>>;

GForm gformZero(const SigPtr& sig, int n);
GForm gformAdd(const GForm& a, const GForm& b);
GForm gformSub(const GForm& a, const GForm& b);
bool gformIsZero(const GForm& a);
GForm gformD(const GForm& a);
/// <a ^ b> with the Gram pairing: sum g_kl a^k ^ b^l.
InvariantForm gramWedge(const SigPtr& sig, const QuadraticLieAlgebra& g,
                        const GForm& a, const GForm& b);
/// <a, r> for a pairing of a g-valued form with a g-vector of scalars.
InvariantForm gramPairVec(const SigPtr& sig, const QuadraticLieAlgebra& g,
                          const GForm& a, const TVec& r);

EndForm endZero(const SigPtr& sig, int n);
EndForm endAdd(const EndForm& a, const EndForm& b);
EndForm endSub(const EndForm& a, const EndForm& b);
bool endIsZero(const EndForm& a);
EndForm endD(const EndForm& a);
EndForm endWedgeCompose(const EndForm& a, const EndForm& b);
/// (a . v)^k = sum_l a_kl ^ v^l
GForm endApply(const EndForm& a, const GForm& v);
/// Constant matrix action m . v (componentwise scaling of the forms).
GForm matApply(const TMat& m, const GForm& v);
EndForm endFromTMat(const SigPtr& sig, const TMat& m, const InvariantForm& factor);
/// ad_R for a g-valued form R.
EndForm adOfGForm(const QuadraticLieAlgebra& g, const SigPtr& sig, const GForm& r);

/// Invariant section xi + r + X of the standard Courant algebroid in the
/// fixed global frame: the vector part is stored by its coefficients along
/// the horizontal lifts X_a and the vertical fields X_i (one slot per
/// generator of the complex).
struct Section {
  InvariantForm xi;  ///< degree-1 form part
  TVec r;            ///< fiber part, one TrigScalar per g basis vector
  TVec vec;          ///< vector part, one TrigScalar per generator/frame index

  static Section zero(const SigPtr& sig, int n);
};

Section sectionAdd(const Section& a, const Section& b);
Section sectionSub(const Section& a, const Section& b);
bool sectionIsZero(const Section& a);
/// Interior product of a form with the vector part of an invariant field.
InvariantForm contractVector(const InvariantForm& w, const TVec& vec);

/// Fiber-preserving isomorphism data (beta, K, Phi) in the sense of the
/// standard-form classification. K is a constant quadratic Lie algebra
/// automorphism; when it is exp of a (nilpotent) skew derivation the
/// generator can be supplied so the spin lift exists.
struct IsoData {
  SigPtr sig;
  InvariantForm beta;        ///< 2-form
  RMat K;                    ///< constant automorphism of g
  std::optional<RMat> logK;  ///< skew derivation D with K = exp(D), if known
  GForm phi;                 ///< g-valued 1-form

  static IsoData identity(const SigPtr& sig, int n);
  bool isIdentityK() const;
};

/// Named residual with its payload forms; zero payload means the check is
/// structural (asserted by the model).
struct Residual {
  std::string name;
  std::vector<InvariantForm> forms;
  bool isZero() const;
};

struct ResidualReport {
  std::vector<Residual> items;
  bool allZero() const;
  const Residual* find(const std::string& name) const;
};

struct BaseRecord {
  std::vector<RVec> rB;  ///< the sections r_i^B (constant)
  GForm frakrB;          ///< curvature potential of the base connection
  InvariantForm H3B;
  std::vector<InvariantForm> H2B;
};

/// Standard Courant algebroid data (nabla, R, H) over the invariant complex,
/// with the torus-action layer: base connection nabla^B = d + sum dx_a W_a
/// on the trivialized fiber algebra and one derivation A_i per fiber
/// generator (nabla = nabla^theta - sum theta_i A_i).
class CourantData {
public:
  CourantData(SigPtr sig, std::shared_ptr<const QuadraticLieAlgebra> g,
              std::vector<TMat> omegaB, std::vector<TMat> actionDerivations,
              GForm r, InvariantForm h,
              std::optional<BaseRecord> base = std::nullopt);

  const SigPtr& sig() const { return m_sig; }
  const QuadraticLieAlgebra& g() const { return *m_g; }
  const std::shared_ptr<const QuadraticLieAlgebra>& gPtr() const { return m_g; }
  int n() const { return m_g->dim(); }
  int baseDim() const { return m_sig->baseDim(); }
  int fiberCount() const { return m_sig->fiberCount(); }
  const std::vector<TMat>& omegaB() const { return m_omegaB; }
  const std::vector<TMat>& A() const { return m_A; }
  const GForm& R() const { return m_R; }
  const InvariantForm& H() const { return m_H; }
  const std::optional<BaseRecord>& base() const { return m_base; }
  /// Fock module of the fiber algebra; throws NoWittBasis when absent.
  const SpinorModule& fock() const;
  std::shared_ptr<const SpinorModule> fockPtr() const { return m_fock; }

  /// Connection form of nabla in the trivialization:
  /// sum_a dx_a W_a - sum_i theta_i A_i as an End-valued 1-form.
  EndForm connectionForm() const;
  /// The matrix of nabla along the frame field of generator g.
  TMat connectionAt(int frame) const;
  /// nabla_X r for an invariant fiber section along an invariant field.
  TVec covariantDerivative(const TVec& vec, const TVec& r) const;
  /// <nabla r1, r2> as an invariant 1-form.
  InvariantForm gradPair(const TVec& r1, const TVec& r2) const;
  /// R(X, .) contracted componentwise.
  GForm contractR(const TVec& vec) const;
  TVec evalR(const TVec& vecA, const TVec& vecB) const;

  /// Scalar product 1/2(eta(Y)+xi(X)) + <r1,r2>.
  TrigScalar pair(const Section& u, const Section& v) const;

private:
  SigPtr m_sig;
  std::shared_ptr<const QuadraticLieAlgebra> m_g;
  std::vector<TMat> m_omegaB;
  std::vector<TMat> m_A;
  GForm m_R;
  InvariantForm m_H;
  std::optional<BaseRecord> m_base;
  std::shared_ptr<const SpinorModule> m_fock;
};

/// Residuals of dH = <R^R>, d^nabla R = 0, R^nabla = ad_R.
ResidualReport checkCompatibility(const CourantData& data);

/// Dorfman bracket of invariant sections (all five defining lines plus the
/// symmetrization rule folded into one non-skew formula).
Section dorfman(const CourantData& data, const Section& u, const Section& v);

Section applyIso(const IsoData& iso, const CourantData& data, const Section& u);
IsoData composeIso(const CourantData& data, const IsoData& second, const IsoData& first);
IsoData inverseIso(const CourantData& data, const IsoData& iso);

/// Unique target data making iso a Courant isomorphism from `data`.
CourantData transportData(const IsoData& iso, const CourantData& data);

/// Residuals of the torus-action layer: A_i constant skew derivations,
/// invariance of H and R (structural in the invariant model), the
/// nabla A = [R(X_i, .), .] relation and the abelian parallelism of A.
ResidualReport checkActionCompat(const CourantData& data);

/// theta-degree decomposition of H and R together with the underlying
/// connection data, everything expressed over the base complex.
struct HRDecomposition {
  SigPtr baseSig;
  std::shared_ptr<const QuadraticLieAlgebra> g;
  int k = 0;  ///< number of fiber generators
  std::vector<TMat> omegaB;
  std::vector<TMat> A;
  std::vector<InvariantForm> F;  ///< curvatures over the base
  InvariantForm H3;
  std::vector<InvariantForm> H2;
  std::vector<std::vector<InvariantForm>> H1;       ///< antisymmetric
  std::vector<std::vector<std::vector<TrigScalar>>> H0;  ///< totally antisym
  GForm R2;
  std::vector<GForm> R1;
  std::vector<std::vector<TVec>> R0;  ///< antisymmetric in the upper indices
};

HRDecomposition decomposeHR(const CourantData& data);
/// All twelve displayed equations of the decomposition lemma plus the
/// nabla A relation expressed on the base.
ResidualReport checkDecompEquations(const HRDecomposition& d);

struct BaseInput {
  int baseDim = 0;
  std::shared_ptr<const QuadraticLieAlgebra> g;
  std::vector<TMat> omegaB;          ///< per base axis, n x n
  std::vector<RVec> rB;              ///< constant sections, one per fiber gen
  InvariantForm H3B;                 ///< over ComplexSignature::base(baseDim)
  std::vector<InvariantForm> H2B;
  std::vector<InvariantForm> F;      ///< closed curvature 2-forms
  std::vector<std::string> names;    ///< generator names
  GenKind kind = GenKind::Theta;
};

/// The three reduced relations (with c_ijp = 0) for the base data; the
/// builder requires them to vanish.
ResidualReport reducedRelationResiduals(const BaseInput& in);
/// Assembles the full invariant (nabla, R, H); throws AdNotIso or
/// ReducedRelationsViolated.
CourantData buildFromBaseData(const BaseInput& in);

/// Solve ad_x = curvature of omegaB for the g-valued curvature potential;
/// throws AdNotIso when the curvature is not inner.
GForm curvaturePotential(const QuadraticLieAlgebra& g, const SigPtr& baseSig,
                         const std::vector<TMat>& omegaB);

}  // namespace ctd

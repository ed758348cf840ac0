#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ctd/trig.hpp"

namespace ctd {

class InvariantForm;

enum class GenKind { Theta, ThetaTilde };

/// The invariant de Rham complex of a torus bundle over a torus base:
/// generators dx_1..dx_m (base), then the theta generators, then the
/// theta-tilde generators, in this fixed global order. Each fiber generator
/// carries its curvature d(theta_i) = F_i, a closed 2-form of pure base
/// degree. Signatures are immutable and shared by the forms built over them.
class ComplexSignature {
public:
  struct FiberGenerator {
    std::string name;
    GenKind kind;
    std::shared_ptr<const InvariantForm> curvature;  // over the base signature
  };

  static std::shared_ptr<const ComplexSignature> base(int baseDim);
  /// Curvatures must be closed 2-forms over base(baseDim).
  static std::shared_ptr<const ComplexSignature> make(
      int baseDim, std::vector<std::string> names, std::vector<GenKind> kinds,
      std::vector<InvariantForm> curvatures);

  int baseDim() const { return m_baseDim; }
  int fiberCount() const { return static_cast<int>(m_fiber.size()); }
  int totalGens() const { return m_baseDim + fiberCount(); }
  int thetaCount() const;
  int thetaTildeCount() const;
  const FiberGenerator& fiberGen(int i) const { return m_fiber[static_cast<size_t>(i)]; }
  GenKind kindOf(int fiberIdx) const { return m_fiber[static_cast<size_t>(fiberIdx)].kind; }

  /// Generator index g ranges over [0, totalGens): base axes first.
  std::string genName(int g) const;
  /// -1 when absent.
  int genIndexByName(const std::string& name) const;
  bool isFiberGen(int g) const { return g >= m_baseDim; }
  /// Bitmask of all fiber generators of the given kind.
  uint32_t fiberMask(GenKind kind) const;

  static bool equivalent(const std::shared_ptr<const ComplexSignature>& a,
                         const std::shared_ptr<const ComplexSignature>& b);

private:
  ComplexSignature(int baseDim, std::vector<FiberGenerator> fiber)
      : m_baseDim(baseDim), m_fiber(std::move(fiber)) {}
  int m_baseDim;
  std::vector<FiberGenerator> m_fiber;
};

using SigPtr = std::shared_ptr<const ComplexSignature>;

/// Element of the invariant complex: a finite sum of wedge words in the
/// generators with TrigScalar coefficients. Words are kept in the canonical
/// ascending order as bitmasks; no zero coefficients are stored.
class InvariantForm {
public:
  /// Empty form with no signature; assign a real one before use.
  InvariantForm() = default;
  explicit InvariantForm(SigPtr sig) : m_sig(std::move(sig)) {}

  static InvariantForm zero(const SigPtr& sig) { return InvariantForm(sig); }
  static InvariantForm scalar(const SigPtr& sig, const TrigScalar& f);
  static InvariantForm scalar(const SigPtr& sig, const Rational& r);
  static InvariantForm generator(const SigPtr& sig, int g);
  static InvariantForm generator(const SigPtr& sig, const std::string& name);

  const SigPtr& signature() const { return m_sig; }
  const std::map<uint32_t, TrigScalar>& terms() const { return m_terms; }
  bool isZero() const { return m_terms.empty(); }
  /// Adds coeff * e_mask (mask bits in canonical order, no reordering done).
  void addTerm(uint32_t mask, const TrigScalar& coeff);
  TrigScalar coefficient(uint32_t mask) const;

  InvariantForm operator-() const;
  InvariantForm& operator+=(const InvariantForm& o);
  InvariantForm& operator-=(const InvariantForm& o);
  InvariantForm operator+(const InvariantForm& o) const;
  InvariantForm operator-(const InvariantForm& o) const;
  InvariantForm operator*(const TrigScalar& f) const;
  InvariantForm operator*(const Rational& r) const;
  InvariantForm wedge(const InvariantForm& o) const;
  bool operator==(const InvariantForm& o) const;
  bool operator!=(const InvariantForm& o) const { return !(*this == o); }

  /// Graded Leibniz differential with d(dx)=0 and d(theta_i)=F_i.
  InvariantForm d() const;
  /// Reverses every wedge word: degree-p terms pick up (-1)^{p(p-1)/2}.
  InvariantForm transpose() const;
  /// Keeps only terms of full degree totalGens().
  InvariantForm topComponent() const;
  /// Keeps only terms of the given degree.
  InvariantForm degreeComponent(int p) const;
  int maxDegree() const;
  /// True iff all terms have the same degree; fills deg (0 for the zero form).
  bool isHomogeneous(int* deg = nullptr) const;

  /// Interior product with the frame field dual to generator g
  /// (horizontal lifts for base axes, vertical fundamental fields for fiber
  /// generators).
  InvariantForm contractFrame(int g) const;
  /// Lie derivative along the frame field of g via Cartan's formula.
  InvariantForm lieFrame(int g) const;

  /// Extracts the coefficient of the full wedge of the selected fiber
  /// generators, moved rightmost with the sign of the permutation; all terms
  /// of lower fiber degree are discarded. Fiber volume is 1.
  InvariantForm fiberIntegrate(GenKind kind) const;

  /// Coefficient-preserving relabel into another complex containing all
  /// generators in use (matched by name); the inclusion/pullback map.
  InvariantForm mapToSignature(const SigPtr& target) const;

  /// Integral over the whole model: harmonic part of the top coefficient.
  Rational integrate() const;

private:
  SigPtr m_sig;
  std::map<uint32_t, TrigScalar> m_terms;
};

/// Sign of e_A ^ e_B -> e_{A|B} for disjoint masks.
int wedgeSign(uint32_t a, uint32_t b);

}  // namespace ctd

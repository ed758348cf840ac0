// Acceptance suite: every exit criterion of the engine, one pass/fail line
// each, all checks exact (zero tolerance). Returns nonzero when any
// criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "ctd/errors.hpp"
#include "ctd/examples.hpp"
#include "ctd/tdual.hpp"
#include "support.hpp"

using namespace ctd;
using namespace ctdtest;

namespace {

struct Criterion {
  std::string name;
  std::function<bool(std::string&)> run;
};

const std::vector<std::string> kExampleNames = {
    "exact-flux-1", "exact-flux-2", "exact-flux-3", "trivial", "affine-so3"};

std::vector<RVec> zeroRTilde(const CourantData& data) {
  return std::vector<RVec>(static_cast<size_t>(data.fiberCount()),
                           RVec(static_cast<size_t>(data.n()), Rational(0)));
}

double seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// 1. Compatibility suite on the built-in examples, under 10 s total.
bool criterionCompatibility(std::string& detail) {
  auto start = std::chrono::steady_clock::now();
  for (const auto& name : kExampleNames) {
    CourantData data = examples::byName(name);
    if (!checkCompatibility(data).allZero()) {
      detail = name + ": compatibility residual nonzero";
      return false;
    }
    if (!checkActionCompat(data).allZero()) {
      detail = name + ": action residual nonzero";
      return false;
    }
  }
  double t = seconds(start);
  if (t >= 10.0) {
    detail = "runtime " + std::to_string(t) + " s exceeds 10 s";
    return false;
  }
  return true;
}

// 2. Exact-case T-duality for n in {1,2,3}: flux model dualizes to the
// Heisenberg model with zero H, all residuals zero and the nondegeneracy
// determinant exactly 1.
bool criterionExactDual(std::string& detail) {
  for (int n : {1, 2, 3}) {
    CourantData data = examples::exactFlux(n);
    DualityPackage pkg = dualize(data, zeroRTilde(data));
    InvariantForm expect(ComplexSignature::base(2));
    expect.addTerm(0b11, TrigScalar::constant(2, Rational(n)));
    if (*pkg.dual.sig()->fiberGen(0).curvature != expect) {
      detail = "n=" + std::to_string(n) + ": dual curvature wrong";
      return false;
    }
    if (!pkg.dual.H().isZero()) {
      detail = "n=" + std::to_string(n) + ": dual H nonzero";
      return false;
    }
    // the nondegeneracy residual is det - 1, so allZero pins det to exactly 1
    if (!verifyDuality(pkg).allZero()) {
      detail = "n=" + std::to_string(n) + ": duality residual nonzero";
      return false;
    }
  }
  return true;
}

// 3. Dirac intertwining on a spanning set per example, under 60 s each.
bool criterionDiracIntertwining(std::string& detail) {
  for (const auto& name : kExampleNames) {
    auto start = std::chrono::steady_clock::now();
    CourantData data = examples::byName(name);
    DualityPackage pkg = dualize(data, zeroRTilde(data));
    auto span = spanningSpinors(data);
    size_t needed = 1u << (static_cast<size_t>(data.fiberCount()) +
                           static_cast<size_t>(data.fock().halfDim()));
    if (span.size() < needed) {
      detail = name + ": spanning set too small";
      return false;
    }
    for (const auto& s : span) {
      if (tau(pkg, dirac(data, s)) != dirac(pkg.dual, tau(pkg, s))) {
        detail = name + ": intertwining residual nonzero";
        return false;
      }
    }
    double t = seconds(start);
    if (t >= 60.0) {
      detail = name + ": runtime " + std::to_string(t) + " s exceeds 60 s";
      return false;
    }
  }
  return true;
}

// 4. rho preserves products and brackets on 100 randomized pairs per example.
bool criterionRho(std::string& detail) {
  Rng rng(20240810);
  for (const auto& name : kExampleNames) {
    CourantData data = examples::byName(name);
    DualityPackage pkg = dualize(data, zeroRTilde(data));
    for (int t = 0; t < 100; ++t) {
      Section u = randSection(rng, data, false);
      Section v = randSection(rng, data, false);
      Section ru = rho(pkg, u);
      Section rv = rho(pkg, v);
      if (data.pair(u, v) != pkg.dual.pair(ru, rv)) {
        detail = name + ": scalar product not preserved";
        return false;
      }
      if (!sectionIsZero(sectionSub(rho(pkg, dorfman(data, u, v)),
                                    dorfman(pkg.dual, ru, rv)))) {
        detail = name + ": bracket not preserved";
        return false;
      }
    }
  }
  return true;
}

// 5. Spin-lift compatibility on every frame section of the correspondence
// model, every example.
bool criterionSpinLift(std::string& detail) {
  for (const auto& name : kExampleNames) {
    CourantData data = examples::byName(name);
    DualityPackage pkg = dualize(data, zeroRTilde(data));
    const CourantData& dataN = pkg.sourceN;
    SpinLift lift(pkg.F, dataN);
    std::vector<Section> frames;
    for (int g = 0; g < dataN.sig()->totalGens(); ++g) {
      Section sf = Section::zero(dataN.sig(), dataN.n());
      sf.xi = InvariantForm::generator(dataN.sig(), g);
      frames.push_back(sf);
      Section sv = Section::zero(dataN.sig(), dataN.n());
      sv.vec[static_cast<size_t>(g)] =
          TrigScalar::constant(dataN.baseDim(), Rational(1));
      frames.push_back(sv);
    }
    for (int k = 0; k < dataN.n(); ++k) {
      Section sr = Section::zero(dataN.sig(), dataN.n());
      sr.r[static_cast<size_t>(k)] =
          TrigScalar::constant(dataN.baseDim(), Rational(1));
      frames.push_back(sr);
    }
    auto span = spanningSpinors(dataN);
    for (const auto& u : frames) {
      Section fu = applyIso(pkg.F, dataN, u);
      for (const auto& s : span) {
        if (lift.apply(gamma(dataN, u, s)) != gamma(dataN, fu, lift.apply(s))) {
          detail = name + ": lift does not intertwine a frame section";
          return false;
        }
      }
    }
  }
  return true;
}

// 6. [[d, gamma_u], gamma_v] s = gamma_{[u,v]} s on 50 randomized triples
// per example.
bool criterionDerivedBracket(std::string& detail) {
  Rng rng(20260810);
  for (const auto& name : kExampleNames) {
    CourantData data = examples::byName(name);
    for (int t = 0; t < 50; ++t) {
      Section u = randSection(rng, data, false);
      Section v = randSection(rng, data, false);
      InvariantSpinor s = randSpinor(rng, data, false, 1);
      auto anti = [&](const InvariantSpinor& x) {
        return dirac(data, gamma(data, u, x)) + gamma(data, u, dirac(data, x));
      };
      InvariantSpinor lhs = anti(gamma(data, v, s)) - gamma(data, v, anti(s));
      if (lhs != gamma(data, dorfman(data, u, v), s)) {
        detail = name + ": derived bracket mismatch";
        return false;
      }
    }
  }
  return true;
}

// 7. Pairing normalization: determinant, symmetry sign mod 4, and the
// orthogonal/isotropic behavior of the parity halves.
bool criterionPairing(std::string& detail) {
  RMat hyp2 = rzeros(2, 2);
  hyp2[0][1] = 1;
  hyp2[1][0] = 1;
  RMat diag4 = rzeros(4, 4);
  diag4[0][0] = 1;
  diag4[1][1] = 1;
  diag4[2][2] = -1;
  diag4[3][3] = -1;
  struct Case {
    int halfDim;
    std::shared_ptr<const QuadraticLieAlgebra> g;
  };
  std::vector<Case> cases = {
      {0, std::make_shared<const QuadraticLieAlgebra>(QuadraticLieAlgebra::zero())},
      {1, std::make_shared<const QuadraticLieAlgebra>(QuadraticLieAlgebra::abelian(hyp2))},
      {2, std::make_shared<const QuadraticLieAlgebra>(QuadraticLieAlgebra::abelian(diag4))},
      {3, std::make_shared<const QuadraticLieAlgebra>(QuadraticLieAlgebra::affineSo3())}};
  for (const auto& c : cases) {
    SpinorModule fock(c.g);
    Rational expectedDet = c.halfDim == 1 ? Rational(-1) : Rational(1);
    if (fock.pairingDet() != expectedDet) {
      detail = "halfDim " + std::to_string(c.halfDim) + ": determinant wrong";
      return false;
    }
    const RMat& p = fock.pairingMatrix();
    bool symmetric = c.halfDim % 4 == 0 || c.halfDim % 4 == 1;
    for (uint32_t a = 0; a < static_cast<uint32_t>(fock.dim()); ++a)
      for (uint32_t b = 0; b < static_cast<uint32_t>(fock.dim()); ++b) {
        if (p[a][b] != (symmetric ? p[b][a] : -p[b][a])) {
          detail = "halfDim " + std::to_string(c.halfDim) + ": symmetry sign wrong";
          return false;
        }
        bool sameParity = fock.parity(a) == fock.parity(b);
        // even halfDim: parity halves orthogonal; odd halfDim: isotropic
        bool mustVanish = c.halfDim % 2 == 0 ? !sameParity : sameParity;
        if (mustVanish && p[a][b] != 0) {
          detail = "halfDim " + std::to_string(c.halfDim) + ": parity behavior wrong";
          return false;
        }
      }
  }
  return true;
}

// 8. Pushforward calculus: Stokes, projection formula, adjointness, and the
// closed-form pushforward sign, on 100 randomized forms/spinors.
bool criterionPushforward(std::string& detail) {
  Rng rng(812);
  CourantData data = examples::affineSo3();
  DualityPackage pkg = dualize(data, {RVec{0, 1, 0, 0, 1, 0}});
  const SigPtr& sigN = pkg.sigN;
  for (int t = 0; t < 100; ++t) {
    InvariantForm w = randInhomogeneousForm(rng, sigN, 3);
    for (GenKind kind : {GenKind::Theta, GenKind::ThetaTilde}) {
      if (w.d().fiberIntegrate(kind) != w.fiberIntegrate(kind).d()) {
        detail = "Stokes fails";
        return false;
      }
    }
    InvariantForm alpha =
        randForm(rng, ComplexSignature::base(2), 1).mapToSignature(sigN);
    if (alpha.wedge(w).fiberIntegrate(GenKind::Theta) !=
        alpha.wedge(w.fiberIntegrate(GenKind::Theta))) {
      detail = "projection formula fails";
      return false;
    }
    // adjointness for the theta pushforward, upstairs integral in the
    // product orientation of the fibration
    InvariantSpinor s1 = randSpinor(rng, pkg.dualN, false, 2);
    InvariantSpinor s2 = randSpinor(rng, pkg.dual, false, 2);
    InvariantSpinor pushed = pushforwardSpinor(s1, GenKind::Theta, pkg.dual.sig(),
                                               pkg.dual.fockPtr());
    Rational lhs = spinorPairing(pushed, s2).integrate();
    Rational rhs = fibrationIntegral(
        spinorPairing(s1, pullbackSpinor(s2, sigN, pkg.dualN.fockPtr())),
        GenKind::Theta);
    if (lhs != rhs) {
      detail = "adjointness fails";
      return false;
    }
    // closed-form sign check against an independent slice computation
    InvariantSpinor sn = randSpinor(rng, pkg.dualN, false, 1);
    InvariantSpinor viaOp = pushforwardSpinor(sn, GenKind::Theta, pkg.dual.sig(),
                                              pkg.dual.fockPtr());
    const auto& [key, coeff] = *sn.terms().begin();
    InvariantForm slice(sigN);
    slice.addTerm(key.first, coeff);
    int r = 1;  // one theta generator integrated out
    int n = pkg.dual.sig()->totalGens();
    int exponent = r * pkg.dualN.fock().parity(key.second) + n * r + r * (r - 1) / 2;
    InvariantForm pushedSlice =
        slice.fiberIntegrate(GenKind::Theta).mapToSignature(pkg.dual.sig()) *
        Rational(exponent % 2 == 0 ? 1 : -1);
    InvariantSpinor expect(pkg.dual.sig(), pkg.dual.fockPtr());
    for (const auto& [mask, c] : pushedSlice.terms())
      expect.addTerm(mask, key.second, c);
    if (viaOp != expect) {
      detail = "pushforward sign mismatch";
      return false;
    }
  }
  return true;
}

// 9. With ad an isomorphism and the first structure relation arranged, the
// second relation residual vanishes; 50 randomized (K, Phi, nabla) over the
// affine so(3) algebra.
bool criterionSecondRelation(std::string& detail) {
  Rng rng(99);
  auto g = std::make_shared<const QuadraticLieAlgebra>(QuadraticLieAlgebra::affineSo3());
  auto bs = ComplexSignature::base(2);
  for (int t = 0; t < 50; ++t) {
    std::vector<TMat> omega1;
    for (int a = 0; a < 2; ++a) omega1.push_back(g->adOfT(randTVec(rng, 6, 2)));
    RMat logK;
    RMat k = randNilpotentAutomorphism(rng, *g, &logK);
    GForm phi = gformZero(bs, 6);
    for (auto& p : phi) p = randForm(rng, bs, 1, 1);
    TMat kt = tfromRational(k, 2);
    TMat kinv = tfromRational(*rinverse(k), 2);
    std::vector<TMat> omega2;
    for (int a = 0; a < 2; ++a) {
      TVec phiA(6, TrigScalar::zero(2));
      for (size_t kk = 0; kk < 6; ++kk)
        phiA[kk] = phi[kk].contractFrame(a).coefficient(0);
      omega2.push_back(tsub(tmul(kt, tmul(omega1[static_cast<size_t>(a)], kinv)),
                            g->adOfT(phiA)));
    }
    GForm r1 = curvaturePotential(*g, bs, omega1);
    GForm r2 = curvaturePotential(*g, bs, omega2);
    EndForm conn2 = endZero(bs, 6);
    for (int a = 0; a < 2; ++a)
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
          if (!omega2[static_cast<size_t>(a)][static_cast<size_t>(i)][static_cast<size_t>(j)]
                   .isZero())
            conn2[static_cast<size_t>(i)][static_cast<size_t>(j)].addTerm(
                1u << a,
                omega2[static_cast<size_t>(a)][static_cast<size_t>(i)][static_cast<size_t>(j)]);
    GForm dphi = gformAdd(gformD(phi), endApply(conn2, phi));
    GForm c2 = gformZero(bs, 6);
    for (int kk = 0; kk < 6; ++kk)
      for (int l = 0; l < 6; ++l)
        for (int mm = 0; mm < 6; ++mm) {
          const Rational& c = g->adBasis(l)[kk][mm];
          if (c == 0) continue;
          c2[static_cast<size_t>(kk)] +=
              phi[static_cast<size_t>(l)].wedge(phi[static_cast<size_t>(mm)]) *
              (c * Rational(1, 2));
        }
    GForm resid = gformSub(gformSub(matApply(kt, r1), r2), gformAdd(dphi, c2));
    if (!gformIsZero(resid)) {
      detail = "second relation residual nonzero at trial " + std::to_string(t);
      return false;
    }
  }
  return true;
}

// 10. Decomposition suite: all twelve displayed equations vanish on built
// data; one targeted corruption per equation produces a nonzero residual in
// the expected slot.
bool criterionDecomposition(std::string& detail) {
  for (const auto& name : kExampleNames) {
    CourantData data = examples::byName(name);
    if (!checkDecompEquations(decomposeHR(data)).allZero()) {
      detail = name + ": baseline decomposition residual nonzero";
      return false;
    }
  }
  CourantData probe = examples::decompProbe();
  HRDecomposition base = decomposeHR(probe);
  if (!checkDecompEquations(base).allZero()) {
    detail = "probe baseline nonzero";
    return false;
  }
  const int m = 4;
  auto nonConstant = [&](int axis) {
    TrigScalar::Freq k(static_cast<size_t>(m), 0);
    k[static_cast<size_t>(axis)] = 1;
    return TrigScalar::cosMode(m, k);
  };
  auto expectNonzero = [&](const std::string& slot,
                           const std::function<void(HRDecomposition&)>& corrupt) {
    HRDecomposition d = base;
    corrupt(d);
    ResidualReport rep = checkDecompEquations(d);
    const Residual* r = rep.find(slot);
    if (!r || r->isZero()) {
      detail = "corruption did not reach slot " + slot;
      return false;
    }
    return true;
  };

  bool ok =
      expectNonzero("dHeqs-0",
                    [&](HRDecomposition& d) {
                      // non-closed 3-form: cos(2 pi x4) dx1^dx2^dx3
                      d.H3.addTerm(0b0111, nonConstant(3));
                    }) &&
      expectNonzero("dHeqs-1",
                    [&](HRDecomposition& d) {
                      d.H2[0].addTerm(0b0011, nonConstant(2));
                    }) &&
      expectNonzero("dHeqs-2",
                    [&](HRDecomposition& d) {
                      d.H1[0][1].addTerm(0b0001, nonConstant(1));
                      d.H1[1][0].addTerm(0b0001, -nonConstant(1));
                    }) &&
      expectNonzero("dHeqs-3",
                    [&](HRDecomposition& d) {
                      TrigScalar f = nonConstant(0);
                      int idx[3] = {0, 1, 2};
                      const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                               {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
                      for (int p = 0; p < 6; ++p) {
                        TrigScalar v = p < 3 ? f : -f;
                        d.H0[static_cast<size_t>(idx[perms[p][0]])]
                            [static_cast<size_t>(idx[perms[p][1]])]
                            [static_cast<size_t>(idx[perms[p][2]])] += v;
                      }
                    }) &&
      expectNonzero("dHeqs-4",
                    [&](HRDecomposition& d) {
                      // make <R0^{01}, R0^{23}> asymmetric under the pairing
                      for (int p = 0; p < 6; ++p) {
                        TrigScalar v = TrigScalar::constant(
                            m, d.g->gramInverse()[p][0] + d.g->gramInverse()[p][3]);
                        d.R0[0][1][static_cast<size_t>(p)] += v;
                        d.R0[1][0][static_cast<size_t>(p)] -= v;
                      }
                    }) &&
      expectNonzero("dHprime",
                    [&](HRDecomposition& d) {
                      d.R2[0].addTerm(0b0011, nonConstant(2));
                    }) &&
      expectNonzero("dHprime-1",
                    [&](HRDecomposition& d) {
                      d.R1[0][0].addTerm(0b0001, nonConstant(1));
                    }) &&
      expectNonzero("eval-1",
                    [&](HRDecomposition& d) {
                      TrigScalar f = nonConstant(0);
                      d.R0[0][1][0] += f;
                      d.R0[1][0][0] -= f;
                    }) &&
      expectNonzero("eval-2",
                    [&](HRDecomposition& d) {
                      TrigScalar one = TrigScalar::constant(m, Rational(1));
                      d.R0[0][1][0] += one;
                      d.R0[1][0][0] -= one;
                    }) &&
      expectNonzero("eval-eqs-1",
                    [&](HRDecomposition& d) {
                      d.R2[0].addTerm(0b0011, TrigScalar::constant(m, Rational(1)));
                    }) &&
      expectNonzero("eval-eqs-2",
                    [&](HRDecomposition& d) {
                      TrigScalar one = TrigScalar::constant(m, Rational(1));
                      d.R0[0][1][0] += one;
                      d.R0[1][0][0] -= one;
                    }) &&
      expectNonzero("nabla-A-t", [&](HRDecomposition& d) {
        d.R1[0][0].addTerm(0b0001, TrigScalar::constant(m, Rational(1)));
      });
  return ok;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"1 compatibility suite (5 built-in examples, < 10 s)", criterionCompatibility},
      {"2 exact-case T-duality (flux <-> Heisenberg, n = 1,2,3)", criterionExactDual},
      {"3 Dirac intertwining on spanning sets (< 60 s each)", criterionDiracIntertwining},
      {"4 rho preserves products and brackets (100 pairs/example)", criterionRho},
      {"5 spin lift intertwines every frame section", criterionSpinLift},
      {"6 Dirac generates the bracket (50 triples/example)", criterionDerivedBracket},
      {"7 pairing normalization, symmetry and parity", criterionPairing},
      {"8 pushforward calculus (100 randomized checks)", criterionPushforward},
      {"9 second structure relation follows from the first (50 runs)", criterionSecondRelation},
      {"10 decomposition equations and per-slot corruption sweep", criterionDecomposition},
  };
  int failures = 0;
  for (auto& c : criteria) {
    std::string detail;
    bool ok = false;
    auto start = std::chrono::steady_clock::now();
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    double t = seconds(start);
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << c.name << "  ["
              << t << " s]";
    if (!ok) std::cout << "  -- " << detail;
    std::cout << "\n";
    if (!ok) ++failures;
  }
  if (failures) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}

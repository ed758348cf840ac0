#include "ctd/tdual.hpp"

#include <bit>

#include "ctd/errors.hpp"

namespace ctd {

std::vector<RVec> actionSections(const CourantData& data) {
  if (data.base()) return data.base()->rB;
  std::vector<RVec> out;
  for (int i = 0; i < data.fiberCount(); ++i) {
    RMat constant;
    if (!tisConstant(data.A()[static_cast<size_t>(i)], &constant))
      throw AdNotIso("action derivation is not constant");
    auto r = data.g().solveAdEquals(constant);
    if (!r) throw AdNotIso("action derivation is not an inner derivation");
    out.push_back(*r);
  }
  return out;
}

std::vector<InvariantForm> computeKForms(const CourantData& data) {
  const QuadraticLieAlgebra& g = data.g();
  auto bs = ComplexSignature::base(data.baseDim());
  if (!g.adIsIsomorphism())
    throw AdNotIso("K-forms need a fiber algebra with ad an isomorphism");
  GForm frakr = curvaturePotential(g, bs, data.omegaB());
  std::vector<RVec> r = actionSections(data);
  HRDecomposition d = decomposeHR(data);
  std::vector<InvariantForm> out;
  for (int i = 0; i < data.fiberCount(); ++i) {
    TVec ri(static_cast<size_t>(g.dim()), TrigScalar::zero(data.baseDim()));
    for (int p = 0; p < g.dim(); ++p)
      ri[static_cast<size_t>(p)] = TrigScalar::constant(
          data.baseDim(), r[static_cast<size_t>(i)][static_cast<size_t>(p)]);
    InvariantForm ki = d.H2[static_cast<size_t>(i)];
    if (g.dim() > 0) ki += gramPairVec(bs, g, frakr, ri) * Rational(2);
    for (int j = 0; j < data.fiberCount(); ++j)
      ki -= d.F[static_cast<size_t>(j)] *
            g.inner(r[static_cast<size_t>(i)], r[static_cast<size_t>(j)]);
    if (!ki.d().isZero())
      throw NotClosed("K-form " + std::to_string(i + 1) + " is not closed");
    for (const auto& [mask, c] : ki.terms())
      if (!isInteger(c.harmonicPart()))
        throw NotIntegral("K-form " + std::to_string(i + 1) +
                          " has a non-integral harmonic coefficient");
    out.push_back(std::move(ki));
  }
  return out;
}

CourantData pullbackToCorrespondence(const CourantData& data, const SigPtr& sigN) {
  std::vector<TMat> a;
  for (int f = 0; f < sigN->fiberCount(); ++f) {
    const std::string& name = sigN->fiberGen(f).name;
    int idx = -1;
    for (int i = 0; i < data.fiberCount(); ++i)
      if (data.sig()->fiberGen(i).name == name) idx = i;
    a.push_back(idx >= 0 ? data.A()[static_cast<size_t>(idx)]
                         : tzeros(data.n(), data.n(), data.baseDim()));
  }
  GForm r = gformZero(sigN, data.n());
  for (int k = 0; k < data.n(); ++k)
    r[static_cast<size_t>(k)] = data.R()[static_cast<size_t>(k)].mapToSignature(sigN);
  return CourantData(sigN, data.gPtr(), data.omegaB(), std::move(a), std::move(r),
                     data.H().mapToSignature(sigN));
}

DualityPackage dualize(const CourantData& data, const std::vector<RVec>& rTilde) {
  const QuadraticLieAlgebra& g = data.g();
  const int k = data.fiberCount();
  const int m = data.baseDim();
  const int n = g.dim();
  auto bs = ComplexSignature::base(m);
  std::vector<InvariantForm> kforms = computeKForms(data);
  std::vector<RVec> r = actionSections(data);
  GForm frakr = curvaturePotential(g, bs, data.omegaB());
  HRDecomposition d = decomposeHR(data);

  auto asTVec = [&](const RVec& v) {
    TVec out(static_cast<size_t>(n), TrigScalar::zero(m));
    for (int p = 0; p < n; ++p)
      out[static_cast<size_t>(p)] = TrigScalar::constant(m, v[static_cast<size_t>(p)]);
    return out;
  };

  // dual base data: F~_i = K_i, H~3 = H3,
  // H~2^i = F_i - 2<frakr, r~_i> + <r~_i, r~_j> K_j
  BaseInput dualIn;
  dualIn.baseDim = m;
  dualIn.g = data.gPtr();
  dualIn.omegaB = data.omegaB();
  dualIn.rB = rTilde;
  dualIn.H3B = d.H3;
  for (int i = 0; i < k; ++i) {
    InvariantForm h2 = d.F[static_cast<size_t>(i)];
    if (n > 0)
      h2 -= gramPairVec(bs, g, frakr, asTVec(rTilde[static_cast<size_t>(i)])) * Rational(2);
    for (int j = 0; j < k; ++j)
      h2 += kforms[static_cast<size_t>(j)] *
            g.inner(rTilde[static_cast<size_t>(i)], rTilde[static_cast<size_t>(j)]);
    dualIn.H2B.push_back(std::move(h2));
    dualIn.F.push_back(kforms[static_cast<size_t>(i)]);
    dualIn.names.push_back("tt" + std::to_string(i + 1));
  }
  dualIn.kind = GenKind::ThetaTilde;
  CourantData dual = buildFromBaseData(dualIn);

  // correspondence complex
  std::vector<std::string> names;
  std::vector<GenKind> kinds;
  std::vector<InvariantForm> curvatures;
  for (int i = 0; i < k; ++i) {
    names.push_back(data.sig()->fiberGen(i).name);
    kinds.push_back(GenKind::Theta);
    curvatures.push_back(d.F[static_cast<size_t>(i)]);
  }
  for (int i = 0; i < k; ++i) {
    names.push_back("tt" + std::to_string(i + 1));
    kinds.push_back(GenKind::ThetaTilde);
    curvatures.push_back(kforms[static_cast<size_t>(i)]);
  }
  SigPtr sigN = ComplexSignature::make(m, names, kinds, curvatures);

  // F = (beta, id, Phi): Phi = theta~_i (x) r~_i - theta_i (x) r_i,
  // beta = (<r_i, r~_j> - delta_ij) theta_i ^ theta~_j
  IsoData f = IsoData::identity(sigN, n);
  for (int i = 0; i < k; ++i) {
    uint32_t thBit = 1u << (m + i);
    uint32_t ttBit = 1u << (m + k + i);
    for (int p = 0; p < n; ++p) {
      f.phi[static_cast<size_t>(p)].addTerm(
          ttBit, TrigScalar::constant(m, rTilde[static_cast<size_t>(i)][static_cast<size_t>(p)]));
      f.phi[static_cast<size_t>(p)].addTerm(
          thBit, TrigScalar::constant(m, -r[static_cast<size_t>(i)][static_cast<size_t>(p)]));
    }
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Rational c = g.inner(r[static_cast<size_t>(i)], rTilde[static_cast<size_t>(j)]);
      if (i == j) c -= 1;
      if (c == 0) continue;
      uint32_t mask = (1u << (m + i)) | (1u << (m + k + j));
      f.beta.addTerm(mask, TrigScalar::constant(m, c));
    }

  CourantData sourceN = pullbackToCorrespondence(data, sigN);
  CourantData dualN = pullbackToCorrespondence(dual, sigN);
  return DualityPackage{data,          std::move(dual), sigN,
                        std::move(sourceN), std::move(dualN), std::move(f),
                        rTilde,        std::move(kforms)};
}

ResidualReport verifyDuality(const DualityPackage& pkg) {
  ResidualReport report;
  const QuadraticLieAlgebra& g = pkg.source.g();
  const SigPtr& sigN = pkg.sigN;
  const int n = g.dim();
  const int m = sigN->baseDim();
  const int k = pkg.source.fiberCount();
  TMat kt = tfromRational(pkg.F.K, m);
  auto kinv = rinverse(pkg.F.K);
  if (!kinv) throw SingularSystem("F has a singular K component");
  TMat kinvT = tfromRational(*kinv, m);

  // con-T: omega~ - K omega K^{-1} + ad_Phi = 0
  {
    EndForm omega = pkg.sourceN.connectionForm();
    EndForm omegaT = pkg.dualN.connectionForm();
    EndForm conj = endZero(sigN, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) {
            if (pkg.F.K[static_cast<size_t>(i)][static_cast<size_t>(p)] == 0 ||
                (*kinv)[static_cast<size_t>(q)][static_cast<size_t>(j)] == 0)
              continue;
            conj[static_cast<size_t>(i)][static_cast<size_t>(j)] +=
                omega[static_cast<size_t>(p)][static_cast<size_t>(q)] *
                (pkg.F.K[static_cast<size_t>(i)][static_cast<size_t>(p)] *
                 (*kinv)[static_cast<size_t>(q)][static_cast<size_t>(j)]);
          }
    EndForm adPhi = adOfGForm(g, sigN, pkg.F.phi);
    EndForm resid = endAdd(endSub(omegaT, conj), adPhi);
    Residual res{"con-T", {}};
    for (const auto& row : resid)
      for (const auto& f : row)
        if (!f.isZero()) res.forms.push_back(f);
    report.items.push_back(std::move(res));
  }

  // tilde-T: K R - R~ - d^{nabla~} Phi - [Phi ^ Phi]/2 = 0
  {
    GForm kr = matApply(kt, pkg.sourceN.R());
    GForm dPhi = gformAdd(gformD(pkg.F.phi),
                          endApply(pkg.dualN.connectionForm(), pkg.F.phi));
    GForm c2 = gformZero(sigN, n);
    for (int kk = 0; kk < n; ++kk)
      for (int l = 0; l < n; ++l)
        for (int mm = 0; mm < n; ++mm) {
          const Rational& c = g.adBasis(l)[kk][mm];
          if (c == 0) continue;
          c2[static_cast<size_t>(kk)] +=
              pkg.F.phi[static_cast<size_t>(l)].wedge(pkg.F.phi[static_cast<size_t>(mm)]) *
              (c * Rational(1, 2));
        }
    GForm resid = gformSub(gformSub(kr, pkg.dualN.R()), gformAdd(dPhi, c2));
    Residual res{"tilde-T", {}};
    for (const auto& f : resid)
      if (!f.isZero()) res.forms.push_back(f);
    report.items.push_back(std::move(res));

    // H-tH: H - H~ - d beta - <(K R + R~) ^ Phi> + c3 = 0
    InvariantForm c3 = gramWedge(sigN, g, pkg.F.phi, c2) * Rational(1, 3);
    InvariantForm h = pkg.sourceN.H() - pkg.dualN.H() - pkg.F.beta.d() -
                      gramWedge(sigN, g, gformAdd(kr, pkg.dualN.R()), pkg.F.phi) +
                      c3;
    report.items.push_back({"H-tH", {h}});
  }

  // nondegeneracy of (beta - Phi*Phi) on Ker(d pi_N) x Ker(d pi~_N):
  // D_ab = (beta - Phi*Phi)(X~_a, X_b); expected the identity matrix.
  {
    TMat dmat = tzeros(k, k, m);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        int tilde = m + k + a;
        int plain = m + b;
        TrigScalar beta =
            pkg.F.beta.contractFrame(tilde).contractFrame(plain).coefficient(0);
        // <Phi(X~_a), Phi(X_b)>
        TVec phiTilde(static_cast<size_t>(n), TrigScalar::zero(m));
        TVec phiPlain(static_cast<size_t>(n), TrigScalar::zero(m));
        for (int p = 0; p < n; ++p) {
          phiTilde[static_cast<size_t>(p)] =
              pkg.F.phi[static_cast<size_t>(p)].contractFrame(tilde).coefficient(0);
          phiPlain[static_cast<size_t>(p)] =
              pkg.F.phi[static_cast<size_t>(p)].contractFrame(plain).coefficient(0);
        }
        dmat[static_cast<size_t>(a)][static_cast<size_t>(b)] =
            beta - g.innerT(phiTilde, phiPlain);
      }
    TrigScalar det = tdet(dmat, m);
    Residual res{"nondegeneracy", {}};
    TrigScalar resid = det - TrigScalar::constant(m, Rational(1));
    if (!resid.isZero())
      res.forms.push_back(InvariantForm::scalar(sigN, resid));
    report.items.push_back(std::move(res));
  }

  // chern classes: harmonic part of sum F_i ^ K_i - <frakr ^ frakr>
  {
    auto bs = ComplexSignature::base(m);
    GForm frakr = curvaturePotential(g, bs, pkg.source.omegaB());
    HRDecomposition d = decomposeHR(pkg.source);
    InvariantForm four(bs);
    for (int i = 0; i < k; ++i)
      four += d.F[static_cast<size_t>(i)].wedge(pkg.kforms[static_cast<size_t>(i)]);
    four -= gramWedge(bs, g, frakr, frakr);
    Residual res{"chern-classes", {}};
    for (const auto& [mask, c] : four.terms()) {
      Rational h = c.harmonicPart();
      if (h != 0)
        res.forms.push_back(InvariantForm::scalar(bs, TrigScalar::constant(m, h)));
    }
    report.items.push_back(std::move(res));
  }
  return report;
}

InvariantSpinor tau(const DualityPackage& pkg, const InvariantSpinor& s) {
  if (!isInvariantSpinor(pkg.source, s))
    throw NotInvariantInput("tau needs an invariant spinor");
  InvariantSpinor up = pullbackSpinor(s, pkg.sigN, pkg.sourceN.fockPtr());
  SpinLift lift(pkg.F, pkg.sourceN);
  InvariantSpinor moved = lift.apply(up);
  return pushforwardSpinor(moved, GenKind::Theta, pkg.dual.sig(), pkg.dual.fockPtr());
}

Section rho(const DualityPackage& pkg, const Section& u) {
  const SigPtr& sigN = pkg.sigN;
  const int m = sigN->baseDim();
  const int k = pkg.source.fiberCount();
  const int n = pkg.source.n();
  // lift with undetermined theta-tilde components
  Section lifted = Section::zero(sigN, n);
  lifted.xi = u.xi.mapToSignature(sigN);
  lifted.r = u.r;
  for (int g = 0; g < pkg.source.sig()->totalGens(); ++g) {
    int target = sigN->genIndexByName(pkg.source.sig()->genName(g));
    lifted.vec[static_cast<size_t>(target)] = u.vec[static_cast<size_t>(g)];
  }
  Section v0 = applyIso(pkg.F, pkg.sourceN, lifted);
  // unit tilde-vertical sections span the lift ambiguity
  std::vector<Section> cols;
  for (int j = 0; j < k; ++j) {
    Section e = Section::zero(sigN, n);
    e.vec[static_cast<size_t>(m + k + j)] = TrigScalar::constant(m, Rational(1));
    cols.push_back(applyIso(pkg.F, pkg.sourceN, e));
  }
  // theta_i coefficients must vanish: M lambda = -b
  RMat mat = rzeros(k, k);
  TVec rhs(static_cast<size_t>(k), TrigScalar::zero(m));
  for (int i = 0; i < k; ++i) {
    uint32_t thMask = 1u << (m + i);
    rhs[static_cast<size_t>(i)] = -v0.xi.coefficient(thMask);
    for (int j = 0; j < k; ++j) {
      TrigScalar entry = cols[static_cast<size_t>(j)].xi.coefficient(thMask);
      if (!entry.isConstantRational())
        throw SingularSystem("bi-fiber pairing has non-constant coefficients");
      mat[static_cast<size_t>(i)][static_cast<size_t>(j)] = entry.constantValue();
    }
  }
  auto minv = rinverse(mat);
  if (!minv) throw SingularSystem("bi-fiber pairing matrix is singular");
  TVec lambda(static_cast<size_t>(k), TrigScalar::zero(m));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      lambda[static_cast<size_t>(i)] += rhs[static_cast<size_t>(j)] * (*minv)[i][j];
  Section lifted0 = lifted;
  for (int j = 0; j < k; ++j)
    lifted0.vec[static_cast<size_t>(m + k + j)] = lambda[static_cast<size_t>(j)];
  Section image = applyIso(pkg.F, pkg.sourceN, lifted0);
  // project to the dual model: drop the theta-vertical part of the vector
  Section out = Section::zero(pkg.dual.sig(), n);
  out.xi = image.xi.mapToSignature(pkg.dual.sig());
  out.r = image.r;
  for (int g = 0; g < pkg.dual.sig()->totalGens(); ++g) {
    int idx = sigN->genIndexByName(pkg.dual.sig()->genName(g));
    out.vec[static_cast<size_t>(g)] = image.vec[static_cast<size_t>(idx)];
  }
  return out;
}

}  // namespace ctd

#include "ctd/spinor.hpp"

#include <bit>

#include "ctd/errors.hpp"

namespace ctd {

InvariantSpinor InvariantSpinor::basis(const SigPtr& sig,
                                       const std::shared_ptr<const SpinorModule>& fock,
                                       uint32_t formMask, uint32_t fockMask) {
  InvariantSpinor s(sig, fock);
  s.addTerm(formMask, fockMask, TrigScalar::constant(sig->baseDim(), Rational(1)));
  return s;
}

void InvariantSpinor::addTerm(uint32_t formMask, uint32_t fockMask,
                              const TrigScalar& c) {
  if (c.isZero()) return;
  auto key = std::make_pair(formMask, fockMask);
  auto it = m_terms.find(key);
  if (it == m_terms.end()) {
    m_terms.emplace(key, c);
    return;
  }
  it->second += c;
  if (it->second.isZero()) m_terms.erase(it);
}

TrigScalar InvariantSpinor::coefficient(uint32_t formMask, uint32_t fockMask) const {
  auto it = m_terms.find(std::make_pair(formMask, fockMask));
  if (it == m_terms.end()) return TrigScalar::zero(m_sig->baseDim());
  return it->second;
}

InvariantSpinor InvariantSpinor::operator-() const {
  InvariantSpinor out(m_sig, m_fock);
  for (const auto& [key, c] : m_terms) out.m_terms.emplace(key, -c);
  return out;
}

InvariantSpinor& InvariantSpinor::operator+=(const InvariantSpinor& o) {
  for (const auto& [key, c] : o.m_terms) addTerm(key.first, key.second, c);
  return *this;
}

InvariantSpinor& InvariantSpinor::operator-=(const InvariantSpinor& o) {
  for (const auto& [key, c] : o.m_terms) addTerm(key.first, key.second, -c);
  return *this;
}

InvariantSpinor InvariantSpinor::operator+(const InvariantSpinor& o) const {
  InvariantSpinor out = *this;
  out += o;
  return out;
}

InvariantSpinor InvariantSpinor::operator-(const InvariantSpinor& o) const {
  InvariantSpinor out = *this;
  out -= o;
  return out;
}

InvariantSpinor InvariantSpinor::operator*(const TrigScalar& f) const {
  InvariantSpinor out(m_sig, m_fock);
  for (const auto& [key, c] : m_terms) out.addTerm(key.first, key.second, c * f);
  return out;
}

InvariantSpinor InvariantSpinor::operator*(const Rational& r) const {
  InvariantSpinor out(m_sig, m_fock);
  for (const auto& [key, c] : m_terms) out.addTerm(key.first, key.second, c * r);
  return out;
}

bool InvariantSpinor::operator==(const InvariantSpinor& o) const {
  return (*this - o).isZero();
}

namespace {

/// wedge a 1-generator form gen ^ e_mask with sign.
void wedgeGenInto(InvariantSpinor& out, int gen, uint32_t formMask,
                  uint32_t fockMask, const TrigScalar& c) {
  uint32_t bit = 1u << gen;
  if (formMask & bit) return;
  int sign = wedgeSign(bit, formMask);
  out.addTerm(bit | formMask, fockMask, sign > 0 ? c : -c);
}

/// Apply a Fock matrix slice-wise: out += (coeff * M[row][fock]) at (form, row).
template <typename Mat>
void applyFockMatrix(InvariantSpinor& out, const Mat& m, uint32_t formMask,
                     uint32_t fockMask, const TrigScalar& c) {
  for (size_t row = 0; row < m.size(); ++row) {
    const auto& entry = m[row][fockMask];
    if constexpr (std::is_same_v<std::decay_t<decltype(entry)>, Rational>) {
      if (entry == 0) continue;
      out.addTerm(formMask, static_cast<uint32_t>(row), c * entry);
    } else {
      if (entry.isZero()) continue;
      out.addTerm(formMask, static_cast<uint32_t>(row), c * entry);
    }
  }
}

}  // namespace

InvariantSpinor gamma(const CourantData& data, const Section& u,
                      const InvariantSpinor& s) {
  InvariantSpinor out(s.signature(), s.fock());
  const SpinorModule& fock = *s.fock();
  for (const auto& [key, c] : s.terms()) {
    const auto [ms, mf] = key;
    // xi ^ : wedge the 1-form into the form factor
    for (const auto& [mxi, fxi] : u.xi.terms()) {
      if (mxi & ms) continue;
      int sign = wedgeSign(mxi, ms);
      TrigScalar v = fxi * c;
      out.addTerm(mxi | ms, mf, sign > 0 ? v : -v);
    }
    // i_X : contraction with the frame components
    for (size_t g = 0; g < u.vec.size(); ++g) {
      if (u.vec[g].isZero()) continue;
      uint32_t bit = 1u << g;
      if (!(ms & bit)) continue;
      int pos = std::popcount(ms & (bit - 1));
      TrigScalar v = u.vec[g] * c;
      out.addTerm(ms & ~bit, mf, pos % 2 == 0 ? v : -v);
    }
    // (-1)^{|w|} w (x) (r . s)
    int formSign = std::popcount(ms) % 2 == 0 ? 1 : -1;
    for (size_t k = 0; k < u.r.size(); ++k) {
      if (u.r[k].isZero()) continue;
      const RMat& gk = fock.gammaBasis(static_cast<int>(k));
      for (size_t row = 0; row < gk.size(); ++row) {
        if (gk[row][mf] == 0) continue;
        TrigScalar v = u.r[k] * c * gk[row][mf];
        out.addTerm(ms, static_cast<uint32_t>(row), formSign > 0 ? v : -v);
      }
    }
  }
  return out;
}

TMat gammaBivector(const SpinorModule& fock, const TMat& w, int baseDim) {
  const QuadraticLieAlgebra& g = fock.algebra();
  const int n = g.dim();
  const int d = fock.dim();
  // omega_W = sum_{p<q} c_pq e_p ^ e_q,  c_pq = -1/2 (W G^{-1} - (W G^{-1})^T)_pq
  TMat wginv = tmul(w, tfromRational(g.gramInverse(), baseDim));
  TMat out = tzeros(d, d, baseDim);
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      TrigScalar c =
          (wginv[static_cast<size_t>(p)][static_cast<size_t>(q)] -
           wginv[static_cast<size_t>(q)][static_cast<size_t>(p)]) *
          Rational(-1, 2);
      if (c.isZero()) continue;
      Multivector word(n);
      word.addTerm((1u << p) | (1u << q), Rational(1));
      RMat b = fock.cliffordMatrix(word);
      for (int r = 0; r < d; ++r)
        for (int cc = 0; cc < d; ++cc) {
          if (b[static_cast<size_t>(r)][static_cast<size_t>(cc)] == 0) continue;
          out[static_cast<size_t>(r)][static_cast<size_t>(cc)] +=
              c * b[static_cast<size_t>(r)][static_cast<size_t>(cc)];
        }
    }
  return out;
}

namespace {

/// Frame matrices of the spinor connection induced by nabla:
/// sigma(W) = -1/2 gamma_{omega_W} with W the connection coefficient.
std::vector<TMat> spinorConnectionFrames(const CourantData& data) {
  const SpinorModule& fock = data.fock();
  std::vector<TMat> out;
  for (int frame = 0; frame < data.sig()->totalGens(); ++frame) {
    TMat w = data.connectionAt(frame);
    TMat m = gammaBivector(fock, w, data.baseDim());
    for (auto& row : m)
      for (auto& x : row) x = x * Rational(-1, 2);
    out.push_back(std::move(m));
  }
  return out;
}

InvariantSpinor applyFormD(const InvariantSpinor& s) {
  // d on the form factor, slice-wise over the Fock index
  InvariantSpinor out(s.signature(), s.fock());
  std::map<uint32_t, InvariantForm> slices;
  for (const auto& [key, c] : s.terms()) {
    auto it = slices.find(key.second);
    if (it == slices.end())
      it = slices.emplace(key.second, InvariantForm(s.signature())).first;
    it->second.addTerm(key.first, c);
  }
  for (const auto& [fockMask, form] : slices) {
    InvariantForm df = form.d();
    for (const auto& [mask, c] : df.terms()) out.addTerm(mask, fockMask, c);
  }
  return out;
}

InvariantSpinor wedgeFormInto(const InvariantForm& w, const InvariantSpinor& s,
                              bool withParity, int extraSign = 1) {
  // (w ^ .) (x) id, optionally with (-1)^{|form|} parity and a global sign
  InvariantSpinor out(s.signature(), s.fock());
  for (const auto& [key, c] : s.terms()) {
    const auto [ms, mf] = key;
    int parity = withParity ? (std::popcount(ms) % 2 == 0 ? 1 : -1) : 1;
    for (const auto& [mw, cw] : w.terms()) {
      if (mw & ms) continue;
      int sign = wedgeSign(mw, ms) * parity * extraSign;
      TrigScalar v = cw * c;
      out.addTerm(mw | ms, mf, sign > 0 ? v : -v);
    }
  }
  return out;
}

}  // namespace

InvariantSpinor diracE(const CourantData& data, const InvariantSpinor& s) {
  InvariantSpinor out = applyFormD(s);
  std::vector<TMat> conn = spinorConnectionFrames(data);
  for (const auto& [key, c] : s.terms()) {
    const auto [ms, mf] = key;
    for (int frame = 0; frame < data.sig()->totalGens(); ++frame) {
      const TMat& v = conn[static_cast<size_t>(frame)];
      for (size_t row = 0; row < v.size(); ++row) {
        const TrigScalar& entry = v[row][mf];
        if (entry.isZero()) continue;
        wedgeGenInto(out, frame, ms, static_cast<uint32_t>(row), c * entry);
      }
    }
  }
  return out;
}

InvariantSpinor dirac(const CourantData& data, const InvariantSpinor& s) {
  const SpinorModule& fock = data.fock();
  InvariantSpinor out = diracE(data, s);
  // - H ^ .
  out -= wedgeFormInto(data.H(), s, false);
  // + 1/4 (-1)^{|w|+1} w (x) C s
  RMat cartan = fock.cliffordMatrix(cartanForm(data.g()));
  for (const auto& [key, c] : s.terms()) {
    const auto [ms, mf] = key;
    int sign = std::popcount(ms) % 2 == 0 ? -1 : 1;  // (-1)^{|w|+1}
    for (size_t row = 0; row < cartan.size(); ++row) {
      if (cartan[row][mf] == 0) continue;
      TrigScalar v = c * (cartan[row][mf] * Rational(1, 4));
      out.addTerm(ms, static_cast<uint32_t>(row), sign > 0 ? v : -v);
    }
  }
  // + (-1)^{|w|+1} sum_k (R^k ^ w) (x) gamma_{e_k} s
  for (const auto& [key, c] : s.terms()) {
    const auto [ms, mf] = key;
    int sign = std::popcount(ms) % 2 == 0 ? -1 : 1;
    for (int k = 0; k < data.n(); ++k) {
      const RMat& gk = fock.gammaBasis(k);
      for (size_t row = 0; row < gk.size(); ++row) {
        if (gk[row][mf] == 0) continue;
        for (const auto& [mr, cr] : data.R()[static_cast<size_t>(k)].terms()) {
          if (mr & ms) continue;
          int ws = wedgeSign(mr, ms) * sign;
          TrigScalar v = cr * c * gk[row][mf];
          out.addTerm(mr | ms, static_cast<uint32_t>(row), ws > 0 ? v : -v);
        }
      }
    }
  }
  return out;
}

InvariantSpinor spinorAction(const CourantData& data, int a,
                             const InvariantSpinor& s) {
  const SpinorModule& fock = data.fock();
  const int m = data.baseDim();
  InvariantSpinor out(s.signature(), s.fock());
  // Lie derivative of the form factor along the vertical frame (identically
  // zero on invariant forms; computed through Cartan's formula anyway)
  std::map<uint32_t, InvariantForm> slices;
  for (const auto& [key, c] : s.terms()) {
    auto it = slices.find(key.second);
    if (it == slices.end())
      it = slices.emplace(key.second, InvariantForm(s.signature())).first;
    it->second.addTerm(key.first, c);
  }
  for (const auto& [fockMask, form] : slices) {
    InvariantForm lf = form.lieFrame(m + a);
    for (const auto& [mask, c] : lf.terms()) out.addTerm(mask, fockMask, c);
  }
  // nabla^{Psi,S}_{X_a} = nabla^{S}_{X_a} - 1/2 gamma_{omega_{A_a}}:
  // on basic-coefficient spinors the two halves cancel exactly.
  TMat vertical = gammaBivector(fock, data.connectionAt(m + a), m);
  TMat half = gammaBivector(fock, data.A()[static_cast<size_t>(a)], m);
  // nabla^S vertical part = -1/2 gamma_{omega_{-A_a}} = +1/2 gamma_{omega_{A_a}}
  TMat op = tzeros(fock.dim(), fock.dim(), m);
  for (size_t i = 0; i < op.size(); ++i)
    for (size_t j = 0; j < op.size(); ++j)
      op[i][j] = (vertical[i][j] * Rational(-1, 2)) - (half[i][j] * Rational(1, 2));
  for (const auto& [key, c] : s.terms())
    applyFockMatrix(out, op, key.first, key.second, c);
  return out;
}

bool isInvariantSpinor(const CourantData& data, const InvariantSpinor& s) {
  for (int a = 0; a < data.fiberCount(); ++a)
    if (!spinorAction(data, a, s).isZero()) return false;
  return true;
}

InvariantForm spinorPairing(const InvariantSpinor& a, const InvariantSpinor& b) {
  const SpinorModule& fock = *a.fock();
  const SigPtr& sig = a.signature();
  InvariantForm out(sig);
  uint32_t full = (1u << sig->totalGens()) - 1;
  for (const auto& [ka, ca] : a.terms()) {
    const auto [msa, mfa] = ka;
    int ps = std::popcount(msa);
    int transposeSign = (ps * (ps - 1) / 2) % 2 == 0 ? 1 : -1;
    int fockParity = fock.parity(mfa);
    for (const auto& [kb, cb] : b.terms()) {
      const auto [msb, mfb] = kb;
      if ((msa | msb) != full || (msa & msb)) continue;
      const Rational& p = fock.pairingMatrix()[mfa][mfb];
      if (p == 0) continue;
      int sign = transposeSign * wedgeSign(msa, msb);
      if (fockParity == 1 && (ps + std::popcount(msb)) % 2 != 0) sign = -sign;
      TrigScalar v = ca * cb * p;
      out.addTerm(full, sign > 0 ? v : -v);
    }
  }
  return out;
}

InvariantSpinor pullbackSpinor(const InvariantSpinor& s, const SigPtr& target,
                               const std::shared_ptr<const SpinorModule>& fock) {
  InvariantSpinor out(target, fock);
  std::map<uint32_t, InvariantForm> slices;
  for (const auto& [key, c] : s.terms()) {
    auto it = slices.find(key.second);
    if (it == slices.end())
      it = slices.emplace(key.second, InvariantForm(s.signature())).first;
    it->second.addTerm(key.first, c);
  }
  for (const auto& [fockMask, form] : slices) {
    InvariantForm mapped = form.mapToSignature(target);
    for (const auto& [mask, c] : mapped.terms()) out.addTerm(mask, fockMask, c);
  }
  return out;
}

InvariantSpinor pushforwardSpinor(const InvariantSpinor& s, GenKind kind,
                                  const SigPtr& target,
                                  const std::shared_ptr<const SpinorModule>& fock) {
  const SigPtr& source = s.signature();
  const int r = std::popcount(source->fiberMask(kind));
  const int n = target->totalGens();
  InvariantSpinor out(target, fock);
  std::map<uint32_t, InvariantForm> slices;
  for (const auto& [key, c] : s.terms()) {
    auto it = slices.find(key.second);
    if (it == slices.end())
      it = slices.emplace(key.second, InvariantForm(source)).first;
    it->second.addTerm(key.first, c);
  }
  for (const auto& [fockMask, form] : slices) {
    // (-1)^{r|s| + nr + r(r-1)/2}
    int exponent = r * s.fock()->parity(fockMask) + n * r + r * (r - 1) / 2;
    int sign = exponent % 2 == 0 ? 1 : -1;
    InvariantForm pushed = form.fiberIntegrate(kind).mapToSignature(target);
    for (const auto& [mask, c] : pushed.terms())
      out.addTerm(mask, fockMask, sign > 0 ? c : -c);
  }
  return out;
}

Rational fibrationIntegral(const InvariantForm& w, GenKind fiberKind) {
  const SigPtr& sig = w.signature();
  uint32_t full = (1u << sig->totalGens()) - 1;
  uint32_t fiber = sig->fiberMask(fiberKind);
  uint32_t rest = full & ~fiber;
  int inv = 0;
  for (uint32_t bits = fiber; bits; bits &= bits - 1) {
    uint32_t low = bits & ~(bits - 1);
    inv += std::popcount(rest & ~(low | (low - 1)));
  }
  Rational value = w.coefficient(full).harmonicPart();
  return inv % 2 == 0 ? value : -value;
}

SpinLift::SpinLift(const IsoData& iso, const CourantData& data)
    : m_sig(data.sig()), m_fock(data.fockPtr()), m_phi(iso.phi) {
  if (!m_fock) throw NoWittBasis("spin lift needs a Fock module");
  // e^{-beta} as a finite wedge exponential
  m_expBeta = InvariantForm::scalar(m_sig, Rational(1));
  InvariantForm power = InvariantForm::scalar(m_sig, Rational(1));
  Rational fact(1);
  for (int p = 1; p <= m_sig->totalGens() / 2 + 1; ++p) {
    power = power.wedge(-iso.beta);
    if (power.isZero()) break;
    fact *= p;
    m_expBeta += power * (Rational(1) / fact);
  }
  // Fock lift of K
  const int d = m_fock->dim();
  m_fockIdentity = iso.isIdentityK();
  if (m_fockIdentity) {
    m_fockLift = ridentity(d);
  } else {
    if (!iso.logK)
      throw UnsupportedK("K is not the identity and no exp generator was supplied");
    auto expLog = rexpNilpotent(*iso.logK);
    if (!expLog || !requal(*expLog, iso.K))
      throw UnsupportedK("supplied generator does not exponentiate to K");
    if (!data.g().isSkewDerivation(*iso.logK))
      throw UnsupportedK("exp generator is not a skew derivation");
    Multivector omega = bivectorOfDerivation(data.g(), *iso.logK);
    m_fockLift = m_fock->cliffordExpMatrix(omega * Rational(-1, 2));
  }
}

InvariantSpinor SpinLift::apply(const InvariantSpinor& s) const {
  // Fock lift first
  InvariantSpinor cur(m_sig, m_fock);
  if (m_fockIdentity) {
    cur = s;
  } else {
    for (const auto& [key, c] : s.terms())
      applyFockMatrix(cur, m_fockLift, key.first, key.second, c);
  }
  // Clifford exponential of the Phi part: exp(sum_k gamma_{e_k} gamma_{Phi^k});
  // each application wedges a 1-form, so the series truncates within the
  // number of generators.
  InvariantSpinor acc = cur;
  InvariantSpinor power = cur;
  Rational fact(1);
  const int bound = m_sig->totalGens() + 1;
  int p = 1;
  for (; p <= bound; ++p) {
    // T(power): for term (ms, mf): sum_k (-1)^{|ms|+1}... note the operator
    // gamma_{e_k} acts after the wedge: (Phi^k ^ w) (x) e_k . s with the
    // Fock action sign (-1)^{|ms|+1} for the new form degree.
    InvariantSpinor next(m_sig, m_fock);
    for (const auto& [key, c] : power.terms()) {
      const auto [ms, mf] = key;
      for (size_t k = 0; k < m_phi.size(); ++k) {
        if (m_phi[k].isZero()) continue;
        const RMat& gk = m_fock->gammaBasis(static_cast<int>(k));
        for (const auto& [mphi, cphi] : m_phi[k].terms()) {
          if (mphi & ms) continue;
          int sign = wedgeSign(mphi, ms);
          int parity = std::popcount(ms | mphi) % 2 == 0 ? 1 : -1;
          for (size_t row = 0; row < gk.size(); ++row) {
            if (gk[row][mf] == 0) continue;
            TrigScalar v = cphi * c * gk[row][mf];
            next.addTerm(mphi | ms, static_cast<uint32_t>(row),
                         sign * parity > 0 ? v : -v);
          }
        }
      }
    }
    if (next.isZero()) break;
    fact *= p;
    power = next;
    acc += power * (Rational(1) / fact);
  }
  if (p > bound)
    throw NotNilpotent("Phi part of the spin lift did not truncate");
  // e^{-beta} ^
  return wedgeFormInto(m_expBeta, acc, false);
}

}  // namespace ctd

#include "ctd/exterior.hpp"

#include <bit>

#include "ctd/errors.hpp"

namespace ctd {

int ComplexSignature::thetaCount() const {
  int n = 0;
  for (const auto& g : m_fiber)
    if (g.kind == GenKind::Theta) ++n;
  return n;
}

int ComplexSignature::thetaTildeCount() const {
  return fiberCount() - thetaCount();
}

std::shared_ptr<const ComplexSignature> ComplexSignature::base(int baseDim) {
  return std::shared_ptr<const ComplexSignature>(
      new ComplexSignature(baseDim, {}));
}

std::shared_ptr<const ComplexSignature> ComplexSignature::make(
    int baseDim, std::vector<std::string> names, std::vector<GenKind> kinds,
    std::vector<InvariantForm> curvatures) {
  if (names.size() != kinds.size() || names.size() != curvatures.size())
    throw ParseError("signature: generator lists disagree in length");
  std::vector<FiberGenerator> fiber;
  for (size_t i = 0; i < names.size(); ++i) {
    const InvariantForm& f = curvatures[i];
    if (f.signature()->baseDim() != baseDim ||
        f.signature()->fiberCount() != 0)
      throw ParseError("curvature of " + names[i] +
                       " must live over the base complex");
    int deg = 0;
    if (!f.isHomogeneous(&deg) || (!f.isZero() && deg != 2))
      throw ParseError("curvature of " + names[i] + " must be a 2-form");
    if (!f.d().isZero())
      throw NotClosed("curvature of " + names[i] + " is not closed");
    fiber.push_back({names[i], kinds[i],
                     std::make_shared<const InvariantForm>(f)});
  }
  // fixed global order: thetas before theta-tildes
  for (size_t i = 0; i + 1 < fiber.size(); ++i)
    if (fiber[i].kind == GenKind::ThetaTilde &&
        fiber[i + 1].kind == GenKind::Theta)
      throw ParseError("theta generators must precede theta-tilde generators");
  return std::shared_ptr<const ComplexSignature>(
      new ComplexSignature(baseDim, std::move(fiber)));
}

std::string ComplexSignature::genName(int g) const {
  if (g < m_baseDim) return "dx" + std::to_string(g + 1);
  return m_fiber[static_cast<size_t>(g - m_baseDim)].name;
}

int ComplexSignature::genIndexByName(const std::string& name) const {
  for (int g = 0; g < totalGens(); ++g)
    if (genName(g) == name) return g;
  return -1;
}

uint32_t ComplexSignature::fiberMask(GenKind kind) const {
  uint32_t mask = 0;
  for (int i = 0; i < fiberCount(); ++i)
    if (m_fiber[static_cast<size_t>(i)].kind == kind)
      mask |= 1u << (m_baseDim + i);
  return mask;
}

bool ComplexSignature::equivalent(const SigPtr& a, const SigPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->baseDim() != b->baseDim() || a->fiberCount() != b->fiberCount())
    return false;
  for (int i = 0; i < a->fiberCount(); ++i) {
    const auto& ga = a->fiberGen(i);
    const auto& gb = b->fiberGen(i);
    if (ga.name != gb.name || ga.kind != gb.kind) return false;
    if (*ga.curvature != *gb.curvature) return false;
  }
  return true;
}

int wedgeSign(uint32_t a, uint32_t b) {
  // (-1)^{#inversions}: pairs (i in a, j in b) with i > j.
  int inv = 0;
  for (uint32_t bits = a; bits; bits &= bits - 1) {
    uint32_t low = bits & ~(bits - 1);
    inv += std::popcount(b & (low - 1));
  }
  return inv % 2 == 0 ? 1 : -1;
}

InvariantForm InvariantForm::scalar(const SigPtr& sig, const TrigScalar& f) {
  InvariantForm out(sig);
  out.addTerm(0, f);
  return out;
}

InvariantForm InvariantForm::scalar(const SigPtr& sig, const Rational& r) {
  return scalar(sig, TrigScalar::constant(sig->baseDim(), r));
}

InvariantForm InvariantForm::generator(const SigPtr& sig, int g) {
  InvariantForm out(sig);
  out.addTerm(1u << g, TrigScalar::constant(sig->baseDim(), Rational(1)));
  return out;
}

InvariantForm InvariantForm::generator(const SigPtr& sig, const std::string& name) {
  int g = sig->genIndexByName(name);
  if (g < 0) throw ParseError("unknown generator '" + name + "'");
  return generator(sig, g);
}

void InvariantForm::addTerm(uint32_t mask, const TrigScalar& coeff) {
  if (coeff.isZero()) return;
  auto it = m_terms.find(mask);
  if (it == m_terms.end()) {
    m_terms.emplace(mask, coeff);
    return;
  }
  it->second += coeff;
  if (it->second.isZero()) m_terms.erase(it);
}

TrigScalar InvariantForm::coefficient(uint32_t mask) const {
  auto it = m_terms.find(mask);
  if (it == m_terms.end()) return TrigScalar::zero(m_sig->baseDim());
  return it->second;
}

InvariantForm InvariantForm::operator-() const {
  InvariantForm out(m_sig);
  for (const auto& [mask, c] : m_terms) out.m_terms.emplace(mask, -c);
  return out;
}

InvariantForm& InvariantForm::operator+=(const InvariantForm& o) {
  for (const auto& [mask, c] : o.m_terms) addTerm(mask, c);
  return *this;
}

InvariantForm& InvariantForm::operator-=(const InvariantForm& o) {
  for (const auto& [mask, c] : o.m_terms) addTerm(mask, -c);
  return *this;
}

InvariantForm InvariantForm::operator+(const InvariantForm& o) const {
  InvariantForm out = *this;
  out += o;
  return out;
}

InvariantForm InvariantForm::operator-(const InvariantForm& o) const {
  InvariantForm out = *this;
  out -= o;
  return out;
}

InvariantForm InvariantForm::operator*(const TrigScalar& f) const {
  InvariantForm out(m_sig);
  for (const auto& [mask, c] : m_terms) out.addTerm(mask, c * f);
  return out;
}

InvariantForm InvariantForm::operator*(const Rational& r) const {
  InvariantForm out(m_sig);
  for (const auto& [mask, c] : m_terms) out.addTerm(mask, c * r);
  return out;
}

InvariantForm InvariantForm::wedge(const InvariantForm& o) const {
  InvariantForm out(m_sig);
  for (const auto& [ma, ca] : m_terms)
    for (const auto& [mb, cb] : o.m_terms) {
      if (ma & mb) continue;
      int sign = wedgeSign(ma, mb);
      TrigScalar c = ca * cb;
      out.addTerm(ma | mb, sign > 0 ? c : -c);
    }
  return out;
}

bool InvariantForm::operator==(const InvariantForm& o) const {
  return (*this - o).isZero();
}

InvariantForm InvariantForm::d() const {
  InvariantForm out(m_sig);
  const int m = m_sig->baseDim();
  for (const auto& [mask, c] : m_terms) {
    // coefficient part: sum_a (d_a c) dx_a ^ e_mask
    for (int a = 0; a < m; ++a) {
      uint32_t dxa = 1u << a;
      if (mask & dxa) continue;
      TrigScalar dc = c.partialDerivative(a);
      if (dc.isZero()) continue;
      int sign = wedgeSign(dxa, mask);
      out.addTerm(dxa | mask, sign > 0 ? dc : -dc);
    }
    // generator part: d(e_S) = sum_j (-1)^{pos_j} F_{g_j} ^ e_{S minus g_j}
    int pos = 0;
    for (uint32_t bits = mask; bits; bits &= bits - 1, ++pos) {
      int g = std::countr_zero(bits);
      if (!m_sig->isFiberGen(g)) continue;
      const auto& gen = m_sig->fiberGen(g - m);
      if (gen.curvature->isZero()) continue;
      InvariantForm curv = gen.curvature->mapToSignature(m_sig);
      uint32_t rest = mask & ~(1u << g);
      TrigScalar cc = pos % 2 == 0 ? c : -c;
      for (const auto& [fm, fc] : curv.terms()) {
        if (fm & rest) continue;
        int sign = wedgeSign(fm, rest);
        TrigScalar t = fc * cc;
        out.addTerm(fm | rest, sign > 0 ? t : -t);
      }
    }
  }
  return out;
}

InvariantForm InvariantForm::transpose() const {
  InvariantForm out(m_sig);
  for (const auto& [mask, c] : m_terms) {
    int p = std::popcount(mask);
    bool flip = (p * (p - 1) / 2) % 2 != 0;
    out.addTerm(mask, flip ? -c : c);
  }
  return out;
}

InvariantForm InvariantForm::topComponent() const {
  return degreeComponent(m_sig->totalGens());
}

InvariantForm InvariantForm::degreeComponent(int p) const {
  InvariantForm out(m_sig);
  for (const auto& [mask, c] : m_terms)
    if (std::popcount(mask) == p) out.addTerm(mask, c);
  return out;
}

int InvariantForm::maxDegree() const {
  int deg = 0;
  for (const auto& [mask, c] : m_terms)
    deg = std::max(deg, std::popcount(mask));
  return deg;
}

bool InvariantForm::isHomogeneous(int* deg) const {
  int d = 0;
  bool first = true;
  for (const auto& [mask, c] : m_terms) {
    int p = std::popcount(mask);
    if (first) {
      d = p;
      first = false;
    } else if (p != d) {
      return false;
    }
  }
  if (deg) *deg = d;
  return true;
}

InvariantForm InvariantForm::contractFrame(int g) const {
  InvariantForm out(m_sig);
  uint32_t bit = 1u << g;
  for (const auto& [mask, c] : m_terms) {
    if (!(mask & bit)) continue;
    int pos = std::popcount(mask & (bit - 1));
    out.addTerm(mask & ~bit, pos % 2 == 0 ? c : -c);
  }
  return out;
}

InvariantForm InvariantForm::lieFrame(int g) const {
  return d().contractFrame(g) + contractFrame(g).d();
}

InvariantForm InvariantForm::fiberIntegrate(GenKind kind) const {
  InvariantForm out(m_sig);
  uint32_t fiber = m_sig->fiberMask(kind);
  for (const auto& [mask, c] : m_terms) {
    if ((mask & fiber) != fiber) continue;
    uint32_t rest = mask & ~fiber;
    // sign of moving the fiber factors (ascending) to the rightmost slots:
    // one inversion per pair (f in fiber, b in rest) with f < b.
    int inv = 0;
    for (uint32_t bits = fiber; bits; bits &= bits - 1) {
      uint32_t low = bits & ~(bits - 1);
      inv += std::popcount(rest & ~(low | (low - 1)));
    }
    out.addTerm(rest, inv % 2 == 0 ? c : -c);
  }
  return out;
}

InvariantForm InvariantForm::mapToSignature(const SigPtr& target) const {
  if (target == m_sig) return *this;
  if (target->baseDim() != m_sig->baseDim())
    throw ParseError("mapToSignature: base dimension mismatch");
  std::vector<int> relabel(static_cast<size_t>(m_sig->totalGens()), -1);
  for (int g = 0; g < m_sig->totalGens(); ++g)
    relabel[static_cast<size_t>(g)] = target->genIndexByName(m_sig->genName(g));
  InvariantForm out(target);
  for (const auto& [mask, c] : m_terms) {
    uint32_t newMask = 0;
    int sign = 1;
    // the relabel is order-preserving for our signatures (base first, thetas
    // before theta-tildes), so no extra sign arises; verify monotonicity.
    int last = -1;
    for (uint32_t bits = mask; bits; bits &= bits - 1) {
      int g = std::countr_zero(bits);
      int t = relabel[static_cast<size_t>(g)];
      if (t < 0)
        throw ParseError("mapToSignature: generator " + m_sig->genName(g) +
                         " absent in target");
      if (t <= last) throw ParseError("mapToSignature: order not preserved");
      last = t;
      newMask |= 1u << t;
    }
    out.addTerm(newMask, sign > 0 ? c : -c);
  }
  return out;
}

Rational InvariantForm::integrate() const {
  uint32_t top = (1u << m_sig->totalGens()) - 1;
  return coefficient(top).harmonicPart();
}

}  // namespace ctd

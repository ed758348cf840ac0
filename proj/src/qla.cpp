#include "ctd/qla.hpp"

#include <bit>

#include "ctd/errors.hpp"
#include "ctd/exterior.hpp"

namespace ctd {

Multivector Multivector::vector(const RVec& v) {
  Multivector out(static_cast<int>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out.addTerm(1u << i, v[i]);
  return out;
}

void Multivector::addTerm(uint32_t mask, const Rational& c) {
  if (c == 0) return;
  auto it = m_terms.find(mask);
  if (it == m_terms.end()) {
    m_terms.emplace(mask, c);
    return;
  }
  it->second += c;
  if (it->second == 0) m_terms.erase(it);
}

Multivector Multivector::operator+(const Multivector& o) const {
  Multivector out = *this;
  for (const auto& [m, c] : o.m_terms) out.addTerm(m, c);
  return out;
}

Multivector Multivector::operator-(const Multivector& o) const {
  Multivector out = *this;
  for (const auto& [m, c] : o.m_terms) out.addTerm(m, -c);
  return out;
}

Multivector Multivector::operator*(const Rational& r) const {
  Multivector out(m_dim);
  for (const auto& [m, c] : m_terms) out.addTerm(m, c * r);
  return out;
}

Multivector Multivector::wedge(const Multivector& o) const {
  Multivector out(m_dim);
  for (const auto& [ma, ca] : m_terms)
    for (const auto& [mb, cb] : o.m_terms) {
      if (ma & mb) continue;
      Rational c = ca * cb;
      if (wedgeSign(ma, mb) < 0) c = -c;
      out.addTerm(ma | mb, c);
    }
  return out;
}

QuadraticLieAlgebra::QuadraticLieAlgebra(
    int dim, std::vector<std::vector<RVec>> bracketTable, RMat gram,
    std::optional<std::pair<RMat, RMat>> wittBasis)
    : m_dim(dim), m_bracket(std::move(bracketTable)), m_gram(std::move(gram)),
      m_witt(std::move(wittBasis)) {
  const size_t n = static_cast<size_t>(dim);
  if (m_bracket.size() != n || m_gram.size() != n)
    throw ParseError("quadratic Lie algebra: dimension mismatch");
  // antisymmetry
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k)
        if (m_bracket[i][j][k] != -m_bracket[j][i][k])
          throw ParseError("structure constants are not antisymmetric");
  m_adBasis.resize(n);
  for (size_t i = 0; i < n; ++i) {
    m_adBasis[i] = rzeros(dim, dim);
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k) m_adBasis[i][k][j] = m_bracket[i][j][k];
  }
  // Jacobi: [e_i,[e_j,e_k]] + cyclic = 0
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k) {
        RVec ei(n, Rational(0)), ej(n, Rational(0)), ek(n, Rational(0));
        ei[i] = 1;
        ej[j] = 1;
        ek[k] = 1;
        RVec s = bracket(ei, bracket(ej, ek));
        RVec t = bracket(ej, bracket(ek, ei));
        RVec u = bracket(ek, bracket(ei, ej));
        for (size_t p = 0; p < n; ++p)
          if (s[p] + t[p] + u[p] != 0)
            throw ParseError("Jacobi identity fails");
      }
  // gram symmetric, invariance
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (m_gram[i][j] != m_gram[j][i])
        throw ParseError("Gram matrix is not symmetric");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k) {
        Rational lhs(0);
        for (size_t p = 0; p < n; ++p)
          lhs += m_bracket[i][j][p] * m_gram[p][k] +
                 m_bracket[i][k][p] * m_gram[j][p];
        if (lhs != 0) throw ParseError("scalar product is not invariant");
      }
  auto inv = rinverse(m_gram);
  if (dim > 0 && !inv) throw ParseError("Gram matrix is degenerate");
  m_gramInv = inv ? *inv : RMat{};
  auto [pos, neg] = rsignature(m_gram);
  if (pos != neg || pos + neg != dim)
    throw ParseError("scalar product is not of neutral signature");
  if (m_witt) {
    const auto& [w, wp] = *m_witt;
    if (static_cast<int>(w.size()) != dim / 2 ||
        static_cast<int>(wp.size()) != dim / 2)
      throw ParseError("Witt basis has wrong size");
    for (size_t a = 0; a < w.size(); ++a)
      for (size_t b = 0; b < w.size(); ++b) {
        if (inner(w[a], w[b]) != 0 || inner(wp[a], wp[b]) != 0)
          throw ParseError("Witt halves are not isotropic");
        if (inner(w[a], wp[b]) != ((a == b) ? Rational(1) : Rational(0)))
          throw ParseError("Witt pairing is not the identity");
      }
  } else {
    deriveWittBasis();
  }
}

QuadraticLieAlgebra QuadraticLieAlgebra::zero() {
  return QuadraticLieAlgebra(0, {}, {}, std::make_pair(RMat{}, RMat{}));
}

QuadraticLieAlgebra QuadraticLieAlgebra::abelian(RMat gram) {
  int n = static_cast<int>(gram.size());
  std::vector<std::vector<RVec>> table(
      static_cast<size_t>(n),
      std::vector<RVec>(static_cast<size_t>(n), RVec(static_cast<size_t>(n), Rational(0))));
  return QuadraticLieAlgebra(n, std::move(table), std::move(gram));
}

QuadraticLieAlgebra QuadraticLieAlgebra::affineSo3() {
  // basis e_1,e_2,e_3 (so(3)), f_1,f_2,f_3 (so(3)* = R^3 as abelian ideal):
  //   [e_i,e_j] = eps_ijk e_k,  [e_i,f_j] = eps_ijk f_k,  [f_i,f_j] = 0,
  // duality pairing <e_i,f_j> = delta_ij (neutral).
  const int n = 6;
  auto eps = [](int i, int j, int k) -> int {
    if (i == j || j == k || i == k) return 0;
    int sign = 1;
    int v[3] = {i, j, k};
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        if (v[a] > v[b]) {
          std::swap(v[a], v[b]);
          sign = -sign;
        }
    return sign;
  };
  std::vector<std::vector<RVec>> table(
      6, std::vector<RVec>(6, RVec(6, Rational(0))));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        int e = eps(i, j, k);
        if (e == 0) continue;
        table[i][j][k] = e;              // [e_i, e_j] = eps e_k
        table[i][3 + j][3 + k] = e;      // [e_i, f_j] = eps f_k
        table[3 + j][i][3 + k] = -e;     // antisymmetry
      }
  RMat gram = rzeros(n, n);
  for (int i = 0; i < 3; ++i) {
    gram[i][3 + i] = 1;
    gram[3 + i][i] = 1;
  }
  return QuadraticLieAlgebra(n, std::move(table), std::move(gram));
}

RVec QuadraticLieAlgebra::bracket(const RVec& u, const RVec& v) const {
  RVec out(static_cast<size_t>(m_dim), Rational(0));
  for (size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0) continue;
    for (size_t j = 0; j < v.size(); ++j) {
      if (v[j] == 0) continue;
      Rational f = u[i] * v[j];
      for (size_t k = 0; k < out.size(); ++k)
        out[k] += f * m_bracket[i][j][k];
    }
  }
  return out;
}

TVec QuadraticLieAlgebra::bracketT(const TVec& u, const TVec& v) const {
  int dim = u.empty() ? 0 : u[0].baseDim();
  TVec out(static_cast<size_t>(m_dim), TrigScalar::zero(dim));
  for (size_t i = 0; i < u.size(); ++i) {
    if (u[i].isZero()) continue;
    for (size_t j = 0; j < v.size(); ++j) {
      if (v[j].isZero()) continue;
      TrigScalar f = u[i] * v[j];
      for (size_t k = 0; k < out.size(); ++k)
        out[k] += f * m_bracket[i][j][k];
    }
  }
  return out;
}

Rational QuadraticLieAlgebra::inner(const RVec& u, const RVec& v) const {
  Rational out(0);
  for (size_t i = 0; i < u.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) out += u[i] * m_gram[i][j] * v[j];
  return out;
}

TrigScalar QuadraticLieAlgebra::innerT(const TVec& u, const TVec& v) const {
  int dim = u.empty() ? 0 : u[0].baseDim();
  TrigScalar out = TrigScalar::zero(dim);
  for (size_t i = 0; i < u.size(); ++i) {
    if (u[i].isZero()) continue;
    for (size_t j = 0; j < v.size(); ++j) {
      if (m_gram[i][j] == 0) continue;
      out += u[i] * v[j] * m_gram[i][j];
    }
  }
  return out;
}

RMat QuadraticLieAlgebra::adOf(const RVec& x) const {
  RMat out = rzeros(m_dim, m_dim);
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    out = radd(out, rscale(m_adBasis[i], x[i]));
  }
  return out;
}

TMat QuadraticLieAlgebra::adOfT(const TVec& x) const {
  int dim = x.empty() ? 0 : x[0].baseDim();
  TMat out = tzeros(m_dim, m_dim, dim);
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i].isZero()) continue;
    for (int r = 0; r < m_dim; ++r)
      for (int c = 0; c < m_dim; ++c) {
        if (m_adBasis[i][r][c] == 0) continue;
        out[r][c] += x[i] * m_adBasis[i][r][c];
      }
  }
  return out;
}

std::optional<RVec> QuadraticLieAlgebra::solveAdEquals(const RMat& m) const {
  const size_t n = static_cast<size_t>(m_dim);
  RMat a = rzeros(m_dim * m_dim, m_dim);
  RVec b(n * n, Rational(0));
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < n; ++c) {
      for (size_t k = 0; k < n; ++k) a[r * n + c][k] = m_adBasis[k][r][c];
      b[r * n + c] = m[r][c];
    }
  if (m_dim == 0) return RVec{};
  return rsolveExactOverdetermined(a, b);
}

std::optional<TVec> QuadraticLieAlgebra::solveAdEqualsT(const TMat& m) const {
  // The flattened ad map has full column rank when ad is injective; pick a
  // set of coordinate rows forming an invertible square system once, solve
  // for the TrigScalar entries, then verify the full system exactly.
  const size_t n = static_cast<size_t>(m_dim);
  int baseDim = (n && !m.empty()) ? m[0][0].baseDim() : 0;
  if (m_dim == 0) return TVec{};
  RMat a = rzeros(m_dim * m_dim, m_dim);
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < n; ++c)
      for (size_t k = 0; k < n; ++k) a[r * n + c][k] = m_adBasis[k][r][c];
  // choose n independent rows
  std::vector<size_t> rows;
  RMat chosen;
  for (size_t r = 0; r < n * n && rows.size() < n; ++r) {
    RMat trial = chosen;
    trial.push_back(a[r]);
    if (rrank(trial) == static_cast<int>(trial.size())) {
      chosen = std::move(trial);
      rows.push_back(r);
    }
  }
  if (rows.size() != n) return std::nullopt;
  auto inv = rinverse(chosen);
  if (!inv) return std::nullopt;
  TVec rhs;
  rhs.reserve(n);
  for (size_t r : rows) rhs.push_back(m[r / n][r % n]);
  TVec x(n, TrigScalar::zero(baseDim));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) x[i] += rhs[j] * (*inv)[i][j];
  if (!tisZero(tsub(adOfT(x), m))) return std::nullopt;
  return x;
}

int QuadraticLieAlgebra::skewDerivationDimension() const {
  const size_t n = static_cast<size_t>(m_dim);
  if (n == 0) return 0;
  // unknowns D_{rc}; derivation: D[e_i,e_j] = [De_i,e_j] + [e_i,De_j];
  // skew: (D^T g + g D) = 0.
  RMat rowsMat;
  auto pushRow = [&](RVec row) { rowsMat.push_back(std::move(row)); };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = 0; k < n; ++k) {
        RVec row(n * n, Rational(0));
        // k-component of D[e_i,e_j]: sum_p c_ij^p D_{kp}
        for (size_t p = 0; p < n; ++p) row[k * n + p] += m_bracket[i][j][p];
        // minus [De_i, e_j]_k = sum_p D_{pi} c_pj^k
        for (size_t p = 0; p < n; ++p) row[p * n + i] -= m_bracket[p][j][k];
        // minus [e_i, De_j]_k = sum_p D_{pj} c_ip^k
        for (size_t p = 0; p < n; ++p) row[p * n + j] -= m_bracket[i][p][k];
        pushRow(std::move(row));
      }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      RVec row(n * n, Rational(0));
      for (size_t p = 0; p < n; ++p) {
        row[p * n + i] += m_gram[p][j];  // (D^T g)_{ij}
        row[p * n + j] += m_gram[i][p];  // (g D)_{ij}
      }
      pushRow(std::move(row));
    }
  return static_cast<int>(rnullspace(std::move(rowsMat)).size());
}

bool QuadraticLieAlgebra::adIsIsomorphism() const {
  if (m_dim == 0) return true;
  RMat flat = rzeros(m_dim * m_dim, m_dim);
  const size_t n = static_cast<size_t>(m_dim);
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < n; ++c)
      for (size_t k = 0; k < n; ++k) flat[r * n + c][k] = m_adBasis[k][r][c];
  if (rrank(flat) != m_dim) return false;
  return skewDerivationDimension() == m_dim;
}

bool QuadraticLieAlgebra::isSkewDerivation(const RMat& a) const {
  const size_t n = static_cast<size_t>(m_dim);
  if (!risZero(radd(rmul(rtranspose(a), m_gram), rmul(m_gram, a)))) return false;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      RVec ei(n, Rational(0)), ej(n, Rational(0));
      ei[i] = 1;
      ej[j] = 1;
      RVec lhs = rmulVec(a, bracket(ei, ej));
      RVec rhs = bracket(rmulVec(a, ei), ej);
      RVec rhs2 = bracket(ei, rmulVec(a, ej));
      for (size_t k = 0; k < n; ++k)
        if (lhs[k] != rhs[k] + rhs2[k]) return false;
    }
  return true;
}

void QuadraticLieAlgebra::deriveWittBasis() {
  const int n = m_dim;
  const int h = n / 2;
  if (n == 0) {
    m_witt = std::make_pair(RMat{}, RMat{});
    return;
  }
  auto unit = [&](int i) {
    RVec v(static_cast<size_t>(n), Rational(0));
    v[static_cast<size_t>(i)] = 1;
    return v;
  };
  // block form: both half-blocks isotropic, cross block invertible
  bool blockZero = true;
  for (int i = 0; i < h && blockZero; ++i)
    for (int j = 0; j < h; ++j)
      if (m_gram[i][j] != 0 || m_gram[h + i][h + j] != 0) {
        blockZero = false;
        break;
      }
  if (blockZero) {
    RMat cross = rzeros(h, h);
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < h; ++j) cross[i][j] = m_gram[i][h + j];
    if (auto cinv = rinverse(cross)) {
      RMat w, wp;
      for (int a = 0; a < h; ++a) {
        w.push_back(unit(a));
        RVec v(static_cast<size_t>(n), Rational(0));
        for (int k = 0; k < h; ++k) v[static_cast<size_t>(h + k)] = (*cinv)[k][a];
        wp.push_back(std::move(v));
      }
      m_witt = std::make_pair(std::move(w), std::move(wp));
      return;
    }
  }
  // diagonal +-1 form: pair each +1 axis with a -1 axis
  bool diagonalPm1 = true;
  std::vector<int> plus, minus;
  for (int i = 0; i < n && diagonalPm1; ++i) {
    for (int j = 0; j < n; ++j)
      if (i != j && m_gram[i][j] != 0) {
        diagonalPm1 = false;
        break;
      }
    if (!diagonalPm1) break;
    if (m_gram[i][i] == 1)
      plus.push_back(i);
    else if (m_gram[i][i] == -1)
      minus.push_back(i);
    else
      diagonalPm1 = false;
  }
  if (diagonalPm1 && static_cast<int>(plus.size()) == h) {
    RMat w, wp;
    for (int a = 0; a < h; ++a) {
      RVec v1(static_cast<size_t>(n), Rational(0));
      v1[static_cast<size_t>(plus[static_cast<size_t>(a)])] = Rational(1, 2);
      v1[static_cast<size_t>(minus[static_cast<size_t>(a)])] = Rational(1, 2);
      RVec v2(static_cast<size_t>(n), Rational(0));
      v2[static_cast<size_t>(plus[static_cast<size_t>(a)])] = 1;
      v2[static_cast<size_t>(minus[static_cast<size_t>(a)])] = -1;
      w.push_back(std::move(v1));
      wp.push_back(std::move(v2));
    }
    m_witt = std::make_pair(std::move(w), std::move(wp));
    return;
  }
  // leave unset; SpinorModule will reject with NoWittBasis
}

Multivector cartanForm(const QuadraticLieAlgebra& g) {
  const int n = g.dim();
  Multivector out(n);
  auto dualVector = [&](int i) {
    RVec v(static_cast<size_t>(n), Rational(0));
    for (int j = 0; j < n; ++j) v[static_cast<size_t>(j)] = g.gramInverse()[i][j];
    return Multivector::vector(v);
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        RVec ei(static_cast<size_t>(n), Rational(0)),
            ej(static_cast<size_t>(n), Rational(0)),
            ek(static_cast<size_t>(n), Rational(0));
        ei[static_cast<size_t>(i)] = 1;
        ej[static_cast<size_t>(j)] = 1;
        ek[static_cast<size_t>(k)] = 1;
        Rational c = g.inner(g.bracket(ei, ej), ek);
        if (c == 0) continue;
        out = out + dualVector(i).wedge(dualVector(j)).wedge(dualVector(k)) * c;
      }
  return out;
}

Multivector bivectorOfDerivation(const QuadraticLieAlgebra& g, const RMat& a) {
  const int n = g.dim();
  if (!risZero(radd(rmul(rtranspose(a), g.gram()), rmul(g.gram(), a))))
    throw NotSkew("endomorphism is not skew-symmetric for the scalar product");
  // omega = -1/2 sum_i A(e_i) ^ e~_i  solves  A(r) = -1/2 [omega, r]_Cl.
  Multivector out(n);
  for (int i = 0; i < n; ++i) {
    RVec aei(static_cast<size_t>(n), Rational(0));
    for (int r = 0; r < n; ++r) aei[static_cast<size_t>(r)] = a[r][i];
    RVec dual(static_cast<size_t>(n), Rational(0));
    for (int j = 0; j < n; ++j) dual[static_cast<size_t>(j)] = g.gramInverse()[i][j];
    out = out + Multivector::vector(aei).wedge(Multivector::vector(dual)) *
                    Rational(-1, 2);
  }
  return out;
}

SpinorModule::SpinorModule(std::shared_ptr<const QuadraticLieAlgebra> g)
    : m_g(std::move(g)), m_h(m_g->dim() / 2) {
  if (!m_g->wittBasis())
    throw NoWittBasis(
        "Gram matrix is not in a supported split form and no Witt basis was "
        "supplied");
  const auto& [w, wp] = *m_g->wittBasis();
  const int n = m_g->dim();
  const int d = dim();
  // exterior multiplication by w_alpha and twice the contraction by w'_alpha
  std::vector<RMat> ext(static_cast<size_t>(m_h)), con(static_cast<size_t>(m_h));
  for (int al = 0; al < m_h; ++al) {
    RMat e = rzeros(d, d), c = rzeros(d, d);
    for (uint32_t s = 0; s < static_cast<uint32_t>(d); ++s) {
      uint32_t bit = 1u << al;
      if (!(s & bit)) {
        int sign = std::popcount(s & (bit - 1)) % 2 == 0 ? 1 : -1;
        e[s | bit][s] = sign;
      } else {
        int sign = std::popcount(s & (bit - 1)) % 2 == 0 ? 1 : -1;
        c[s & ~bit][s] = 2 * sign;
      }
    }
    ext[static_cast<size_t>(al)] = std::move(e);
    con[static_cast<size_t>(al)] = std::move(c);
  }
  // coordinates of e_i in the Witt basis: e_i = sum_a x_a w_a + y_a w'_a
  // with x_a = <e_i, w'_a>, y_a = <e_i, w_a>.
  m_gammaBasis.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    RVec ei(static_cast<size_t>(n), Rational(0));
    ei[static_cast<size_t>(i)] = 1;
    RMat gamma = rzeros(d, d);
    for (int al = 0; al < m_h; ++al) {
      Rational x = m_g->inner(ei, wp[static_cast<size_t>(al)]);
      Rational y = m_g->inner(ei, w[static_cast<size_t>(al)]);
      if (x != 0) gamma = radd(gamma, rscale(ext[static_cast<size_t>(al)], x));
      if (y != 0) gamma = radd(gamma, rscale(con[static_cast<size_t>(al)], y));
    }
    m_gammaBasis[static_cast<size_t>(i)] = std::move(gamma);
  }
  // consistency: gamma_u gamma_v + gamma_v gamma_u = 2 <u,v>
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      RMat anti = radd(rmul(m_gammaBasis[static_cast<size_t>(i)],
                            m_gammaBasis[static_cast<size_t>(j)]),
                       rmul(m_gammaBasis[static_cast<size_t>(j)],
                            m_gammaBasis[static_cast<size_t>(i)]));
      RMat expect = rscale(ridentity(d), 2 * m_g->gram()[i][j]);
      if (!requal(anti, expect))
        throw NoWittBasis("supplied Witt basis does not span the algebra");
    }
  // canonical pairing: <w_S, w_T> = top coefficient of (w_S)^t ^ w_T
  m_pairing = rzeros(d, d);
  uint32_t full = static_cast<uint32_t>(d - 1);
  for (uint32_t s = 0; s < static_cast<uint32_t>(d); ++s) {
    uint32_t t = full & ~s;
    int p = std::popcount(s);
    int sign = (p * (p - 1) / 2) % 2 == 0 ? 1 : -1;
    sign *= wedgeSign(s, t);
    m_pairing[s][t] = sign;
  }
  m_pairingDet = rdet(m_pairing);
  m_scaleSquared = 1;
  // Fock-basis pairing is already det-normalized (Lemma-level fact; the
  // n=2 case has det -1 by design).
  if (m_pairingDet != 1 && m_pairingDet != -1)
    throw NoWittBasis("canonical pairing failed to normalize");
}

int SpinorModule::parity(uint32_t fockMask) const {
  return std::popcount(fockMask) % 2;
}

RMat SpinorModule::gammaVector(const RVec& v) const {
  RMat out = rzeros(dim(), dim());
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    out = radd(out, rscale(m_gammaBasis[i], v[i]));
  }
  return out;
}

RMat SpinorModule::wordMatrix(uint32_t word) const {
  if (word == 0) return ridentity(dim());
  {
    std::lock_guard<std::mutex> lock(m_cacheMutex);
    auto it = m_wordCache.find(word);
    if (it != m_wordCache.end()) return it->second;
  }
  // quantization recursion: lambda(v ^ rest) = gamma_v lambda(rest)
  //                                            - lambda(iota_v rest)
  int i = std::countr_zero(word);
  uint32_t rest = word & ~(1u << i);
  RMat out = rmul(m_gammaBasis[static_cast<size_t>(i)], wordMatrix(rest));
  int pos = 0;
  for (uint32_t bits = rest; bits; bits &= bits - 1, ++pos) {
    int j = std::countr_zero(bits);
    Rational gij = m_g->gram()[i][j];
    if (gij == 0) continue;
    Rational c = (pos % 2 == 0) ? gij : -gij;
    out = rsub(out, rscale(wordMatrix(rest & ~(1u << j)), c));
  }
  std::lock_guard<std::mutex> lock(m_cacheMutex);
  m_wordCache.emplace(word, out);
  return out;
}

RMat SpinorModule::cliffordMatrix(const Multivector& x) const {
  RMat out = rzeros(dim(), dim());
  for (const auto& [word, c] : x.terms())
    out = radd(out, rscale(wordMatrix(word), c));
  return out;
}

RMat SpinorModule::cliffordExpMatrix(const Multivector& x) const {
  auto e = rexpNilpotent(cliffordMatrix(x));
  if (!e)
    throw NotNilpotent("Clifford powers do not truncate within the dimension bound");
  return *e;
}

RVec SpinorModule::cliffordExp(const Multivector& x, const RVec& s) const {
  return rmulVec(cliffordExpMatrix(x), s);
}

}  // namespace ctd

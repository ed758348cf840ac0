#include "ctd/linalg.hpp"

#include <cassert>

namespace ctd {

RMat rzeros(int rows, int cols) {
  return RMat(static_cast<size_t>(rows), RVec(static_cast<size_t>(cols), Rational(0)));
}

RMat ridentity(int n) {
  RMat a = rzeros(n, n);
  for (int i = 0; i < n; ++i) a[i][i] = 1;
  return a;
}

RMat radd(const RMat& a, const RMat& b) {
  RMat out = a;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) out[i][j] += b[i][j];
  return out;
}

RMat rsub(const RMat& a, const RMat& b) {
  RMat out = a;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) out[i][j] -= b[i][j];
  return out;
}

RMat rmul(const RMat& a, const RMat& b) {
  size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
  RMat out = rzeros(static_cast<int>(n), static_cast<int>(m));
  for (size_t i = 0; i < n; ++i)
    for (size_t p = 0; p < k; ++p) {
      if (a[i][p] == 0) continue;
      for (size_t j = 0; j < m; ++j) out[i][j] += a[i][p] * b[p][j];
    }
  return out;
}

RVec rmulVec(const RMat& a, const RVec& v) {
  RVec out(a.size(), Rational(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
  return out;
}

RMat rscale(const RMat& a, const Rational& s) {
  RMat out = a;
  for (auto& row : out)
    for (auto& x : row) x *= s;
  return out;
}

RMat rtranspose(const RMat& a) {
  if (a.empty()) return a;
  RMat out = rzeros(static_cast<int>(a[0].size()), static_cast<int>(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) out[j][i] = a[i][j];
  return out;
}

bool risZero(const RMat& a) {
  for (const auto& row : a)
    for (const auto& x : row)
      if (x != 0) return false;
  return true;
}

bool requal(const RMat& a, const RMat& b) { return risZero(rsub(a, b)); }

Rational rdet(RMat a) {
  size_t n = a.size();
  Rational det(1);
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

namespace {

/// Row-reduces in place; returns pivot columns.
std::vector<size_t> rowReduce(RMat& a) {
  std::vector<size_t> pivots;
  if (a.empty()) return pivots;
  size_t rows = a.size(), cols = a[0].size(), row = 0;
  for (size_t col = 0; col < cols && row < rows; ++col) {
    size_t pivot = row;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[row]);
    Rational inv = Rational(1) / a[row][col];
    for (size_t c = col; c < cols; ++c) a[row][c] *= inv;
    for (size_t r = 0; r < rows; ++r) {
      if (r == row || a[r][col] == 0) continue;
      Rational f = a[r][col];
      for (size_t c = col; c < cols; ++c) a[r][c] -= f * a[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

int rrank(RMat a) { return static_cast<int>(rowReduce(a).size()); }

std::optional<RMat> rinverse(RMat a) {
  size_t n = a.size();
  for (size_t i = 0; i < n; ++i) {
    RVec id(n, Rational(0));
    id[i] = 1;
    a[i].insert(a[i].end(), id.begin(), id.end());
  }
  auto pivots = rowReduce(a);
  if (pivots.size() != n) return std::nullopt;
  for (size_t i = 0; i < n; ++i)
    if (pivots[i] != i) return std::nullopt;
  RMat out = rzeros(static_cast<int>(n), static_cast<int>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) out[i][j] = a[i][n + j];
  return out;
}

std::vector<RVec> rnullspace(RMat a) {
  if (a.empty()) return {};
  size_t cols = a[0].size();
  auto pivots = rowReduce(a);
  std::vector<bool> isPivot(cols, false);
  for (size_t p : pivots) isPivot[p] = true;
  std::vector<RVec> basis;
  for (size_t freeCol = 0; freeCol < cols; ++freeCol) {
    if (isPivot[freeCol]) continue;
    RVec v(cols, Rational(0));
    v[freeCol] = 1;
    for (size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = -a[r][freeCol];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RVec> rsolve(RMat a, RVec b) {
  size_t n = a.size();
  for (size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
  auto pivots = rowReduce(a);
  if (pivots.size() != n) return std::nullopt;
  RVec x(n, Rational(0));
  for (size_t i = 0; i < n; ++i) x[i] = a[i][n];
  return x;
}

std::optional<RVec> rsolveExactOverdetermined(const RMat& a, const RVec& b) {
  if (a.empty()) return RVec{};
  size_t rows = a.size(), cols = a[0].size();
  RMat aug = a;
  for (size_t i = 0; i < rows; ++i) aug[i].push_back(b[i]);
  auto pivots = rowReduce(aug);
  RVec x(cols, Rational(0));
  for (size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == cols) return std::nullopt;  // inconsistent
    x[pivots[r]] = aug[r][cols];
  }
  size_t realPivots = 0;
  for (size_t p : pivots)
    if (p != cols) ++realPivots;
  if (realPivots != cols) return std::nullopt;  // rank-deficient
  return x;
}

std::optional<RMat> rexpNilpotent(const RMat& a) {
  int n = static_cast<int>(a.size());
  RMat sum = ridentity(n);
  RMat power = ridentity(n);
  Rational fact(1);
  for (int p = 1; p <= n + 1; ++p) {
    power = rmul(power, a);
    if (risZero(power)) return sum;
    fact *= p;
    sum = radd(sum, rscale(power, Rational(1) / fact));
  }
  return std::nullopt;
}

std::pair<int, int> rsignature(RMat a) {
  int n = static_cast<int>(a.size());
  int pos = 0, neg = 0;
  for (int k = 0; k < n; ++k) {
    if (a[k][k] == 0) {
      int j = -1;
      for (int c = k + 1; c < n; ++c)
        if (a[k][c] != 0) {
          j = c;
          break;
        }
      if (j < 0) continue;  // zero row/col in the remaining block
      // congruence: add row/col j to row/col k to make the pivot nonzero
      for (int c = 0; c < n; ++c) a[k][c] += a[j][c];
      for (int r = 0; r < n; ++r) a[r][k] += a[r][j];
    }
    Rational d = a[k][k];
    if (d > 0)
      ++pos;
    else
      ++neg;
    for (int r = k + 1; r < n; ++r) {
      if (a[r][k] == 0) continue;
      Rational f = a[r][k] / d;
      for (int c = 0; c < n; ++c) a[r][c] -= f * a[k][c];
    }
    for (int c = k + 1; c < n; ++c) {
      if (a[k][c] == 0) continue;
      Rational f = a[k][c] / d;
      for (int r = 0; r < n; ++r) a[r][c] -= f * a[r][k];
    }
  }
  return {pos, neg};
}

TMat tzeros(int rows, int cols, int baseDim) {
  return TMat(static_cast<size_t>(rows),
              TVec(static_cast<size_t>(cols), TrigScalar::zero(baseDim)));
}

TMat tfromRational(const RMat& a, int baseDim) {
  TMat out = tzeros(static_cast<int>(a.size()),
                    a.empty() ? 0 : static_cast<int>(a[0].size()), baseDim);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j)
      out[i][j] = TrigScalar::constant(baseDim, a[i][j]);
  return out;
}

TMat tadd(const TMat& a, const TMat& b) {
  TMat out = a;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) out[i][j] += b[i][j];
  return out;
}

TMat tsub(const TMat& a, const TMat& b) {
  TMat out = a;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) out[i][j] -= b[i][j];
  return out;
}

TMat tmul(const TMat& a, const TMat& b) {
  size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
  int dim = n && a[0].size() ? a[0][0].baseDim() : 0;
  TMat out = tzeros(static_cast<int>(n), static_cast<int>(m), dim);
  for (size_t i = 0; i < n; ++i)
    for (size_t p = 0; p < k; ++p) {
      if (a[i][p].isZero()) continue;
      for (size_t j = 0; j < m; ++j) out[i][j] += a[i][p] * b[p][j];
    }
  return out;
}

TVec tmulVec(const TMat& a, const TVec& v) {
  int dim = v.empty() ? (a.empty() || a[0].empty() ? 0 : a[0][0].baseDim())
                      : v[0].baseDim();
  TVec out(a.size(), TrigScalar::zero(dim));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
  return out;
}

TMat tscale(const TMat& a, const TrigScalar& s) {
  TMat out = a;
  for (auto& row : out)
    for (auto& x : row) x = x * s;
  return out;
}

TMat ttranspose(const TMat& a) {
  if (a.empty()) return a;
  int dim = a[0].empty() ? 0 : a[0][0].baseDim();
  TMat out = tzeros(static_cast<int>(a[0].size()), static_cast<int>(a.size()), dim);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) out[j][i] = a[i][j];
  return out;
}

bool tisZero(const TMat& a) {
  for (const auto& row : a)
    for (const auto& x : row)
      if (!x.isZero()) return false;
  return true;
}

TMat tcommutator(const TMat& a, const TMat& b) {
  return tsub(tmul(a, b), tmul(b, a));
}

TMat tpartial(const TMat& a, int axis) {
  TMat out = a;
  for (auto& row : out)
    for (auto& x : row) x = x.partialDerivative(axis);
  return out;
}

bool tisConstant(const TMat& a, RMat* out) {
  if (out)
    *out = rzeros(static_cast<int>(a.size()),
                  a.empty() ? 0 : static_cast<int>(a[0].size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) {
      if (!a[i][j].isConstantRational()) return false;
      if (out) (*out)[i][j] = a[i][j].constantValue();
    }
  return true;
}

TrigScalar tdet(const TMat& a, int baseDim) {
  size_t n = a.size();
  if (n == 0) return TrigScalar::constant(baseDim, Rational(1));
  if (n == 1) return a[0][0];
  TrigScalar det = TrigScalar::zero(baseDim);
  for (size_t j = 0; j < n; ++j) {
    if (a[0][j].isZero()) continue;
    TMat minor;
    for (size_t r = 1; r < n; ++r) {
      TVec row;
      for (size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(a[r][c]);
      minor.push_back(std::move(row));
    }
    TrigScalar cofactor = a[0][j] * tdet(minor, baseDim);
    if (j % 2 == 0)
      det += cofactor;
    else
      det -= cofactor;
  }
  return det;
}

}  // namespace ctd

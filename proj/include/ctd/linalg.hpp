#pragma once

#include <optional>
#include <vector>

#include "ctd/rational.hpp"
#include "ctd/trig.hpp"

namespace ctd {

/// Small dense matrices/vectors over Q. Dimensions in this engine never
/// exceed a few dozen, so plain vectors with exact Gaussian elimination are
/// the right tool.
using RVec = std::vector<Rational>;
using RMat = std::vector<RVec>;

RMat rzeros(int rows, int cols);
RMat ridentity(int n);
RMat radd(const RMat& a, const RMat& b);
RMat rsub(const RMat& a, const RMat& b);
RMat rmul(const RMat& a, const RMat& b);
RVec rmulVec(const RMat& a, const RVec& v);
RMat rscale(const RMat& a, const Rational& s);
RMat rtranspose(const RMat& a);
bool risZero(const RMat& a);
bool requal(const RMat& a, const RMat& b);
Rational rdet(RMat a);
int rrank(RMat a);
std::optional<RMat> rinverse(RMat a);
/// Basis of the right nullspace (column vectors).
std::vector<RVec> rnullspace(RMat a);
/// Solves a x = b (a square, invertible); nullopt if singular.
std::optional<RVec> rsolve(RMat a, RVec b);
/// Least structure: solve the (possibly overdetermined, full column rank)
/// system a x = b exactly; nullopt if inconsistent or rank-deficient.
std::optional<RVec> rsolveExactOverdetermined(const RMat& a, const RVec& b);
/// Matrix exponential of a nilpotent matrix; nullopt if powers do not
/// vanish within the dimension bound.
std::optional<RMat> rexpNilpotent(const RMat& a);

/// Signature (p, q) of a symmetric rational matrix via exact congruence
/// diagonalization.
std::pair<int, int> rsignature(RMat a);

/// Matrices with TrigScalar entries (used for connection coefficients and
/// derivation-valued data with non-constant coefficients).
using TVec = std::vector<TrigScalar>;
using TMat = std::vector<TVec>;

TMat tzeros(int rows, int cols, int baseDim);
TMat tfromRational(const RMat& a, int baseDim);
TMat tadd(const TMat& a, const TMat& b);
TMat tsub(const TMat& a, const TMat& b);
TMat tmul(const TMat& a, const TMat& b);
TVec tmulVec(const TMat& a, const TVec& v);
TMat tscale(const TMat& a, const TrigScalar& s);
TMat ttranspose(const TMat& a);
bool tisZero(const TMat& a);
TMat tcommutator(const TMat& a, const TMat& b);
/// Entry-wise partial derivative.
TMat tpartial(const TMat& a, int axis);
/// True iff every entry is a constant rational; fills out if non-null.
bool tisConstant(const TMat& a, RMat* out = nullptr);
/// Exact determinant by cofactor expansion (k <= 4 in practice).
TrigScalar tdet(const TMat& a, int baseDim);

}  // namespace ctd

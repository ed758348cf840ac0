#include "ctd/examples.hpp"

#include <memory>

#include "ctd/errors.hpp"

namespace ctd::examples {

namespace {

std::shared_ptr<const QuadraticLieAlgebra> zeroAlgebra() {
  static auto g = std::make_shared<const QuadraticLieAlgebra>(QuadraticLieAlgebra::zero());
  return g;
}

std::shared_ptr<const QuadraticLieAlgebra> affineAlgebra() {
  static auto g =
      std::make_shared<const QuadraticLieAlgebra>(QuadraticLieAlgebra::affineSo3());
  return g;
}

InvariantForm baseTwoForm(const SigPtr& bs, int coeff) {
  InvariantForm f(bs);
  if (coeff != 0) f.addTerm(0b11, TrigScalar::constant(bs->baseDim(), Rational(coeff)));
  return f;
}

}  // namespace

CourantData trivial() {
  auto bs = ComplexSignature::base(2);
  BaseInput in;
  in.baseDim = 2;
  in.g = zeroAlgebra();
  in.omegaB = {tzeros(0, 0, 2), tzeros(0, 0, 2)};
  in.rB = {RVec{}};
  in.H3B = InvariantForm(bs);
  in.H2B = {InvariantForm(bs)};
  in.F = {InvariantForm(bs)};
  in.names = {"th1"};
  return buildFromBaseData(in);
}

CourantData exactFlux(int n) {
  auto bs = ComplexSignature::base(2);
  BaseInput in;
  in.baseDim = 2;
  in.g = zeroAlgebra();
  in.omegaB = {tzeros(0, 0, 2), tzeros(0, 0, 2)};
  in.rB = {RVec{}};
  in.H3B = InvariantForm(bs);
  in.H2B = {baseTwoForm(bs, n)};
  in.F = {InvariantForm(bs)};
  in.names = {"th1"};
  return buildFromBaseData(in);
}

CourantData heisenberg(int n) {
  auto bs = ComplexSignature::base(2);
  BaseInput in;
  in.baseDim = 2;
  in.g = zeroAlgebra();
  in.omegaB = {tzeros(0, 0, 2), tzeros(0, 0, 2)};
  in.rB = {RVec{}};
  in.H3B = InvariantForm(bs);
  in.H2B = {InvariantForm(bs)};
  in.F = {baseTwoForm(bs, n)};
  in.names = {"th1"};
  return buildFromBaseData(in);
}

BaseInput affineSo3Input() {
  auto bs = ComplexSignature::base(2);
  BaseInput in;
  in.baseDim = 2;
  in.g = affineAlgebra();
  in.omegaB = {tzeros(6, 6, 2), tzeros(6, 6, 2)};
  // r_1 = e_1 + f_1, <r_1, r_1> = 2
  in.rB = {RVec{1, 0, 0, 1, 0, 0}};
  in.H3B = InvariantForm(bs);
  in.H2B = {baseTwoForm(bs, 3)};
  in.F = {baseTwoForm(bs, 1)};
  in.names = {"th1"};
  return in;
}

CourantData affineSo3() { return buildFromBaseData(affineSo3Input()); }

CourantData decompProbe() {
  const int m = 4;
  auto bs = ComplexSignature::base(m);
  BaseInput in;
  in.baseDim = m;
  in.g = affineAlgebra();
  in.omegaB = {tzeros(6, 6, m), tzeros(6, 6, m), tzeros(6, 6, m), tzeros(6, 6, m)};
  in.rB = {RVec{1, 0, 0, 0, 1, 0}, RVec{0, 1, 0, 1, 0, 0},
           RVec{0, 0, 1, 0, 1, 1}, RVec{1, 1, 0, 0, 0, 1}};
  // closed but non-constant pieces: coefficients depend only on coordinates
  // already wedged in
  InvariantForm h3(bs);
  h3.addTerm(0b0111, TrigScalar::constant(m, Rational(2)));
  h3.addTerm(0b1011, TrigScalar::cosMode(m, {1, 0, 0, 1}));
  in.H3B = h3;
  in.H2B.assign(4, InvariantForm(bs));
  in.H2B[0].addTerm(0b0011, TrigScalar::constant(m, Rational(1)));
  in.H2B[1].addTerm(0b0110, TrigScalar::sinMode(m, {0, 1, 1, 0}));
  in.F.assign(4, InvariantForm(bs));
  in.names = {"th1", "th2", "th3", "th4"};
  return buildFromBaseData(in);
}

CourantData byName(const std::string& name) {
  if (name == "trivial") return trivial();
  if (name == "affine-so3") return affineSo3();
  if (name.rfind("exact-flux-", 0) == 0)
    return exactFlux(std::stoi(name.substr(11)));
  if (name.rfind("heisenberg-", 0) == 0)
    return heisenberg(std::stoi(name.substr(11)));
  if (name == "heisenberg") return heisenberg(1);
  if (name == "decomp-probe") return decompProbe();
  throw ParseError("unknown example '" + name + "'");
}

}  // namespace ctd::examples

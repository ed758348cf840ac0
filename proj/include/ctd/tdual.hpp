#pragma once

#include "ctd/spinor.hpp"

namespace ctd {

/// A verified T-duality configuration: the two standard Courant algebroids,
/// their pullbacks to the correspondence complex (theta and theta-tilde
/// generators together), and the fiber-preserving isomorphism F between the
/// pullbacks given by (beta, K = id, Phi).
struct DualityPackage {
  CourantData source;   ///< M-model
  CourantData dual;     ///< dual-model (theta-tilde generators)
  SigPtr sigN;          ///< correspondence complex
  CourantData sourceN;  ///< pullback of source to N
  CourantData dualN;    ///< pullback of dual to N
  IsoData F;
  std::vector<RVec> rTilde;
  std::vector<InvariantForm> kforms;  ///< dual curvatures over the base
};

/// The sections r_i recovered from the action derivations A_i = ad_{r_i};
/// throws AdNotIso when some A_i is not inner or not constant.
std::vector<RVec> actionSections(const CourantData& data);

/// K_i = H2^i + 2<frakr, r_i> - <r_i, r_j> F_j, each verified closed and
/// with integral harmonic coefficients. Throws NotClosed / NotIntegral.
std::vector<InvariantForm> computeKForms(const CourantData& data);

/// Pullback of standard data to a larger invariant complex; generators are
/// matched by name and new fiber generators carry the zero derivation.
CourantData pullbackToCorrespondence(const CourantData& data, const SigPtr& sigN);

/// The existence construction: dual curvatures K_i, dual H-pieces, and the
/// isomorphism F with K = id, Phi = theta~_i (x) r~_i - theta_i (x) r_i and
/// beta = (<r_i, r~_j> - delta_ij) theta_i ^ theta~_j.
DualityPackage dualize(const CourantData& data, const std::vector<RVec>& rTilde);

/// The three structure relations on the correspondence space, the
/// nondegeneracy determinant of (beta - Phi*Phi) on the bi-fiber directions
/// (named "nondegeneracy", residual det - 1), and the harmonic part of
/// sum F_i ^ K_i - <frakr ^ frakr> ("chern-classes").
ResidualReport verifyDuality(const DualityPackage& pkg);

/// tau = (pi~_N)_! o F_S o pi_N^! on invariant spinors.
InvariantSpinor tau(const DualityPackage& pkg, const InvariantSpinor& s);

/// The companion map on invariant sections: solves for the invariant lift
/// whose image under F has a basic T*-part, then projects. Throws
/// SingularSystem when the bi-fiber pairing degenerates.
Section rho(const DualityPackage& pkg, const Section& u);

}  // namespace ctd

#pragma once

#include "ctd/courant.hpp"

namespace ctd::examples {

/// All-zero data on T^3 over T^2 with a flat circle fiber.
CourantData trivial();

/// Exact case: T^3 over T^2, F_1 = 0, H = n dx1^dx2^th1 (the n-flux
/// 3-torus). Its dual is the Heisenberg nilmanifold.
CourantData exactFlux(int n);

/// Heisenberg side: F_1 = n dx1^dx2, H = 0.
CourantData heisenberg(int n);

/// Heterotic-flavoured instance: fiber algebra so(3) |x so(3)*, flat base
/// connection, constant r_1, curvature F_1 = dx1^dx2 and H2 = 3 dx1^dx2.
CourantData affineSo3();

/// The base input behind affineSo3(), exposed for tests that rebuild
/// variants of it.
BaseInput affineSo3Input();

/// A T^4-fiber instance over T^4 with the affine so(3) fiber algebra and
/// four generic constant sections; every slot of the decomposition lemma
/// carries content while all curvatures vanish. Used by the corrupted-input
/// sweep of the decomposition equations.
CourantData decompProbe();

CourantData byName(const std::string& name);

}  // namespace ctd::examples

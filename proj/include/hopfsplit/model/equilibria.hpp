#pragma once

// The saddle-foci E+-(eps) near (+-eps, 0, 0): Newton refinement of the
// full-chart equilibria, exact characteristic-cubic eigenvalues, and the
// stability signature check (1D unstable + 2D stable for E+, mirrored
// for E-).

#include "hopfsplit/model/model_spec.hpp"
#include "hopfsplit/mp/vec.hpp"

namespace hopfsplit {

struct Equilibrium {
    Vec3 location;
    std::array<Complex, 3> eigenvalues; // real one first, then the conjugate pair
    int unstable_dimension = 0;
    int branch = +1; // +1 or -1
    Real residual = Real::zero(64);
    Complex epsilon = Complex::zero(64); // the eps this equilibrium was solved at
};

struct EquilibriaOptions {
    double eps0 = 0.3; // validity threshold for eps
    int max_newton = 64;
};

std::pair<Equilibrium, Equilibrium> find_equilibria(const ModelSpec& spec, const Complex& eps,
                                                    const PrecisionContext& ctx,
                                                    const EquilibriaOptions& opts = {});

// 3x3 Jacobian of the full-chart field at a point (also used by the local
// manifold parametrization).
std::array<std::array<Complex, 3>, 3> full_field_jacobian(const ModelSpec& spec,
                                                          const Complex& eps, const Vec3& at);

} // namespace hopfsplit

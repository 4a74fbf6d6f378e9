#pragma once

// Formal graph solutions zeta1 = zeta1(r1, eps1) of the r1-chart system,
// expanded two ways over the same bivariate coefficient array:
//   rows   psi_g(r1)   (series in r1, one row per eps1-power g), and
//   columns m1_a(eps1) (polynomials, reachable from the scaling chart).
// The rows are the Gevrey-divergent objects; the columns are analytic. Both
// are slices of the unique formal solution of the invariance PDE
//
//   fz(r1, zeta, eps1) = dzeta/dr1 * fr(r1, zeta, eps1)
//                      + dzeta/deps1 * fe(r1, zeta, eps1),
//
// with (fr, fz, fe) the r1-chart field. Coefficients are solved by
// zero-filling one bidegree at a time; Omega is invertible at every slot.

#include "hopfsplit/model/model_spec.hpp"
#include "hopfsplit/series/gevrey.hpp"

namespace hopfsplit {

struct DoubleSeries {
    int r_order = 0;   // M: highest r1 power per row
    int eps_order = 0; // Gamma: highest eps1 power
    prec_t prec = 64;
    // c[g][b] = coefficient of r1^b eps1^g, b = 0..M, g = 0..Gamma.
    // The formal data carries no +- branch tag; branches only appear when the
    // rows are resummed in a sector.
    std::vector<std::vector<Vec2>> c;

    Vec2 at(int b, int g) const { return c[static_cast<size_t>(g)][static_cast<size_t>(b)]; }
    // row g as the pair of y/z polynomial coefficient arrays
    std::vector<Vec2> row(int g) const { return c[static_cast<size_t>(g)]; }
};

DoubleSeries double_series(const ModelSpec& spec, int Gamma, int M);

// PDE residual of a candidate bivariate polynomial graph (4-var Poly in
// slots VX=r1, VEPS=eps1); largest coefficient magnitude over the bidegree
// window (b <= bmax, g <= gmax).
Real r1_pde_residual(const ModelSpec& spec, const Poly& Y, const Poly& Z, int bmax, int gmax);

// The finite blowup-type correction
//   W1N(r1,eps1) = sum_{g<2N} psi_g(r1)|_M eps1^g
//                + sum_{a<2N} (m1_a - J^{2N-1} m1_a)(eps1) r1^a,
// which kills the invariance residual below bidegree (2N, 2N).
struct NormalFormCorrection {
    int N;
    int r_order;
    Poly Y, Z;            // the correction as bivariate polynomials
    Real residual_low;    // largest residual coefficient with b < 2N or g < 2N
    Real check_scale;     // magnitude scale used for the property checks
};
NormalFormCorrection normal_form_correction(const ModelSpec& spec, int N, int M);

} // namespace hopfsplit

#pragma once

// Divergence diagnostics and resummation for the unperturbed-manifold series:
//  - ratio analysis with Richardson extrapolation for the Borel radius,
//  - Borel transform + diagonal Pade + truncated Laplace integral along a
//    chosen direction (the 1-sum on the corresponding sector),
//  - Stokes-amplitude extraction from the tail coefficients.

#include <optional>

#include "hopfsplit/series/gevrey.hpp"

namespace hopfsplit {

struct GevreyDiagnostics {
    Real borel_radius;       // estimated radius of convergence of the Borel transform
    Real uncertainty;        // half-width of the last Richardson column
    Real growth_ratio_last;  // last raw ratio |psi_a|/(a |psi_{a-1}|)
    bool divergent = false;  // "divergent/Gevrey-1" verdict
    int orders_used = 0;
};

GevreyDiagnostics gevrey_diagnostics(const GevreySeries& s);

struct BorelOptions {
    int pade_degree = 0;        // 0 = diagonal floor((N-1)/2)
    double pole_clearance = 1e-3;
    double weak_pole_threshold = 1e-8; // artifact-pole contribution floor
    Real quad_tol = Real::of(1e-25, 64);
};

// 1-sum of the series at x along the Laplace ray arg(zeta) = theta.
// Branch labels: theta near 0 resums on S+, theta near pi on S-.
Vec2 borel_pade_laplace(const GevreySeries& s, const Real& theta, const Complex& x,
                        const BorelOptions& opts, const PrecisionContext& ctx);

struct StokesEstimate {
    Real borel_radius;
    Real singularity_phase;   // arg of the dominant Borel singularity
    Complex amplitude;        // S in psi_a ~ 2 Re[S Gamma(a+q) (-i)^(a+p)]
    Real uncertainty;         // relative dispersion of the amplitude fit
    Real growth_offset;       // fitted q (0 for a plain simple pole)
    int p_offset;             // integer phase offset selected by the scan
    int orders_lo, orders_hi; // fit window
};

StokesEstimate stokes_estimate(const GevreySeries& s);

} // namespace hopfsplit

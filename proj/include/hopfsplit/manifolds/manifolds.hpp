#pragma once

// Numerical invariant-manifold machinery around the saddle-foci:
//  - high-order parametrization of the 1D stable/unstable branches,
//  - real shooting of the inner branches to the section {x = 0},
//  - complex continuation of the manifold graphs along paths into the
//    sectors (in particular to the imaginary axis),
//  - the unperturbed (eps = 0) graphs seeded from the optimally truncated
//    divergent series,
//  - elliptic-path generation and transfer-operator norms in the r1 chart.
//
// Graph transport in x replaces time flows plus section events throughout:
// the section is simply the endpoint of the path, which stays conditioned at
// splitting scales of exp(-pi/(2 eps)).

#include <optional>

#include "hopfsplit/model/equilibria.hpp"
#include "hopfsplit/model/graph_rhs.hpp"
#include "hopfsplit/series/gevrey.hpp"

namespace hopfsplit {

struct ManifoldOptions {
    double delta = 0.4;      // sector radius
    double chi = -1.0;       // sector opening pi + chi; < 0 means pi/2
    double xi = 0.2;         // inner radius factor: |r1| >= eps/xi
    double eta = -1.0;       // seed offset; < 0 means eps/8
    int K = 40;              // local parametrization order
    int series_order = 40;   // unperturbed-series order for eps = 0 seeds
    double x_seed = 0.1;     // |x| of the eps = 0 seed point
    double eps0 = 0.3;       // validity threshold for eps
    Real tol = Real::of(1e-12, 64); // relative tolerance (to the target scale)

    double eta_for(double eps) const { return eta > 0 ? eta : eps / 8.0; }
    double chi_val() const { return chi > 0 ? chi : 1.5707963267948966; }
};

struct LocalManifold {
    Equilibrium base;
    Complex lambda;                 // the real simple eigenvalue of the branch
    std::vector<Vec3> gamma;        // gamma_k, k = 0..K; |gamma_1| = 1
    Real conjugacy_residual = Real::zero(64);

    Vec3 at(const Complex& s) const;
    Complex x_component(const Complex& s) const;
    // solves gamma_x(s) = x near s0 by Newton on the truncated polynomial
    Complex solve_x(const Complex& x, const Complex& s0) const;
};

enum class Direction { Unstable, Stable };

LocalManifold local_parametrize(const ModelSpec& spec, const Equilibrium& eq, Direction dir,
                                int K, const PrecisionContext& ctx);

struct GraphSolution {
    int branch = +1;
    Real epsilon = Real::zero(64);
    ComplexPath path;
    std::vector<std::pair<Complex, Vec2>> values; // (x, (y,z)) per accepted step
    Real tol_used = Real::zero(64);
    prec_t precision_used = 64;
    StepStats stats;
    Real seed_error = Real::zero(64); // estimated accuracy of the seed

    const Vec2& final_value() const { return values.back().second; }
};

// (y,z) of the inner branch at the section x = 0.
struct SectionValue {
    Vec2 value;
    StepStats stats;
    Real seed_error;
};
SectionValue shoot_to_section(const ModelSpec& spec, const Real& epsilon, int branch,
                              const ManifoldOptions& opts, const PrecisionContext& ctx);

// Transports the outer-branch graph along `route` (which must start at the
// branch seed x = branch*(eps+eta)) to route.end().
GraphSolution continue_graph(const ModelSpec& spec, const Real& epsilon, int branch,
                             const ComplexPath& route, const ManifoldOptions& opts,
                             const PrecisionContext& ctx);

// Default admissible route: real segment to branch*delta, then the circular
// arc |x| = delta to the target i*v (v > 0 upper, v < 0 lower half-plane).
ComplexPath standard_route(const Real& epsilon, int branch, const Real& target_v,
                           const ManifoldOptions& opts, prec_t bits);

// eps = 0 manifold graph psi0^branch at target, seeded from the optimal
// truncation of the unperturbed series at x = branch*x_seed.
struct UnperturbedValue {
    Vec2 value;
    Real error_band; // seed least-term transported by the hyperbolic growth
    StepStats stats;
};
UnperturbedValue unperturbed_graph(const ModelSpec& spec, const GevreySeries& series, int branch,
                                   const Complex& target, const ComplexPath& route,
                                   const ManifoldOptions& opts, const PrecisionContext& ctx);
// Route for the eps = 0 graph: from branch*x_seed along the real axis to
// branch*delta, then the arc to the target.
ComplexPath unperturbed_route(int branch, const Complex& target, const ManifoldOptions& opts,
                              prec_t bits);

struct EllipticPathRecord {
    Real epsilon;
    Complex start;
    std::vector<std::pair<Real, Complex>> samples; // (t, r1(t))
    Real exit_time;
    std::string exit_boundary; // "outer", "inner" or "sector"
};
EllipticPathRecord elliptic_path(const ModelSpec& spec, const Real& epsilon, const Complex& start,
                                 const ManifoldOptions& opts, const PrecisionContext& ctx);

struct TransferNorm {
    Real max_norm;           // max over 0 <= s <= t <= T of ||M(t) M(s)^{-1}||
    Real prefactor_max;      // max of ((r1(0)^2-eps^2)/(r1(t)^2-eps^2))^((2+b)/2)
    std::vector<std::pair<Real, Mat2>> fundamental; // (t, M(t)) samples
};
TransferNorm transfer_norm(const ModelSpec& spec, const Real& epsilon,
                           const EllipticPathRecord& rec, int nf_degree,
                           const ManifoldOptions& opts, const PrecisionContext& ctx);

} // namespace hopfsplit

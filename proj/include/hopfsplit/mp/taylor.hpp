#pragma once

// Adaptive Taylor-method integrator for polynomial vector fields over
// multiprecision complex states. The fields here are polynomial by
// construction (rational right-hand sides are closed off with an inverse
// denominator variable before they get here), so jet recursion to order
// 40-120 is cheap and the only method that reaches tolerances below
// exp(-pi/(2 eps)).
//
// Per step: Taylor coefficients to order K via cached monomial jets, step
// size from the last-two-terms heuristic at a configurable fraction of the
// estimated convergence radius, dense output by Horner evaluation of the jet.

#include <functional>
#include <vector>

#include "hopfsplit/mp/path.hpp"
#include "hopfsplit/mp/poly.hpp"
#include "hopfsplit/mp/precision.hpp"

namespace hopfsplit {

struct PolyField {
    int dim = 0;                // state variables are poly vars 0..dim-1
    std::vector<Poly> rhs;      // one polynomial per state variable
    prec_t prec = 64;
};

struct StepStats {
    long steps = 0;
    long rejected = 0;
    int max_order_used = 0;
};

struct Trajectory {
    // (path/time parameter, state) per accepted step, including start and end
    std::vector<std::pair<Complex, std::vector<Complex>>> samples;
    StepStats stats;

    const std::vector<Complex>& final_state() const { return samples.back().second; }
};

struct IntegratorOptions {
    Real tol = Real::of(1e-30, 64);
    double radius_fraction = 0.8; // step = fraction * estimated convergence radius
    int order_cap = 160;
    long max_steps = 100000;
    // called after each accepted step with (s, state); may throw to abort
    std::function<void(const Real&, const std::vector<Complex>&)> on_step;
};

// Drives one field; reusable across steps. States are complex; the
// independent variable is real (a time or a path parameter).
class TaylorStepper {
  public:
    TaylorStepper(const PolyField& field, IntegratorOptions opts, prec_t bits);

    // Computes the jet at `y`, picks h in (0, h_max], advances y in place.
    // Returns the h actually taken. h_max must be > 0.
    Real step(std::vector<Complex>& y, const Real& h_max);

    // Dense output on the last step: state at offset h from the step start.
    std::vector<Complex> eval_last_jet(const Real& h) const;
    // Taylor coefficients of state variable i from the last step.
    const std::vector<Complex>& last_jet(int i) const { return jets_[static_cast<size_t>(i)]; }
    int last_order() const { return order_; }

    StepStats& stats() { return stats_; }
    const StepStats& stats() const { return stats_; }

  private:
    struct Node {       // partial-product trie for monomial jets
        int parent;     // -1 = leaf (jet of a bare variable)
        int var;        // variable multiplied in at this node
        std::vector<Complex> jet;
    };
    struct TermRef {
        Complex coeff;
        int node; // -1 for constant terms
    };

    void build_plan(const PolyField& field);
    void compute_jet(const std::vector<Complex>& y);

    int dim_;
    prec_t bits_;
    IntegratorOptions opts_;
    int order_;
    std::vector<Node> nodes_;
    std::vector<std::vector<TermRef>> comp_terms_; // per state variable
    std::vector<std::vector<Complex>> jets_;       // per state variable, order_+1 coeffs
    StepStats stats_;
};

// Integrates an autonomous field over the real interval [t0, t1] (either
// direction). Samples are (t, state).
Trajectory integrate_real(const PolyField& field, const std::vector<Complex>& y0, const Real& t0,
                          const Real& t1, const IntegratorOptions& opts, prec_t bits);

// Integrates d(state)/dx = g(x, state) along a path in the complex x-plane.
// Variable 0 of `field` is x itself; variables 1..dim are the states. The
// x'(s) component is synthesized per segment. Samples are (x, state).
Trajectory integrate_path(const PolyField& field_in_x, const std::vector<Complex>& y0,
                          const ComplexPath& path, const IntegratorOptions& opts, prec_t bits);

} // namespace hopfsplit

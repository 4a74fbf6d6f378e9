#include "hopfsplit/manifolds/manifolds.hpp"

#include "hopfsplit/model/charts.hpp"

namespace hopfsplit {

namespace {

// target scale e^{-pi/(2 eps)} that tolerances are measured against
Real splitting_scale(const Real& epsilon, prec_t p) {
    return exp(-(Real::pi(p) / (2 * epsilon)));
}

// Route guards: sector membership, radius, clearance from the opposite
// equilibrium. The same-side disc is deliberately not enforced: every branch
// seed sits at distance eta < 2 eps from its own equilibrium, where the graph
// ODE is regular (the denominator guard below catches actual trouble).
struct RouteGuard {
    prec_t p;
    int branch;
    Real delta, half_open, eps;
    bool inner; // inner-branch shooting crosses between the equilibria

    void check(const Complex& x) const {
        Real ax = abs(x);
        if (ax > delta * Real::of(1.0 + 1e-9, p))
            throw RouteError("route leaves |x| <= delta at x = " + x.str(6));
        if (!ax.is_zero() && !inner) {
            Complex bx = branch > 0 ? x : -x;
            Real a = abs(atan2(bx.im, bx.re));
            if (a > half_open)
                throw RouteError("route leaves the sector at x = " + x.str(6));
        }
        if (!inner) {
            Complex opp{branch > 0 ? -eps : eps, Real::zero(p)};
            if (abs(x - opp) < 2 * eps * Real::of(0.9, p))
                throw RouteError("route enters the opposite equilibrium disc at x = " + x.str(6));
        }
    }
};

GraphSolution transport(const ModelSpec& spec, const Real& epsilon, int branch,
                        const ComplexPath& route, const Vec2& seed, const Real& seed_err,
                        const Real& tol_abs, const ManifoldOptions& opts,
                        const PrecisionContext& ctx, bool guard_equilibria) {
    prec_t p = ctx.bits;
    GraphRhs rhs(spec, Complex{epsilon, Real::zero(p)});

    GraphSolution sol;
    sol.branch = branch;
    sol.epsilon = epsilon;
    sol.path = route;
    sol.tol_used = tol_abs;
    sol.precision_used = p;
    sol.seed_error = seed_err;

    if (route.empty()) {
        sol.values.emplace_back(Complex::zero(p), seed);
        return sol;
    }

    Complex x0 = route.start();
    Complex D0 = rhs.denominator(x0, seed);
    if (D0.is_zero()) throw SingularityError("graph seed sits on the singular set");
    std::vector<Complex> st{seed.y, seed.z, Complex::one(p) / D0};

    RouteGuard guard{p, branch, Real::of(opts.delta, p),
                     Real::of((Real::pi(p).to_double() + opts.chi_val()) / 2.0, p), epsilon,
                     !guard_equilibria};
    // singularity guard thresholds from the tolerance
    Real tol_half = sqrt(tol_abs);
    Real tol_quarter = sqrt(tol_half);

    IntegratorOptions iopts;
    iopts.tol = tol_abs;
    iopts.on_step = [&](const Real&, const std::vector<Complex>& full) {
        const Complex& x = full[0];
        guard.check(x);
        // denominator distance estimate |D| / max(1, |dD/dx|)
        Vec2 yz{full[1], full[2]};
        Complex D = rhs.denominator(x, yz);
        std::vector<Complex> pt{x, yz.y, yz.z};
        Real dDdx = abs(rhs.D().derivative(VX).evaluate(pt));
        Real dist = abs(D) / max(Real::one(p), dDdx);
        if (dist < tol_half)
            throw SingularityError("denominator zero near path at x = " + x.str(6));
        if (dist < tol_quarter)
            throw RouteError("path too close to a denominator zero at x = " + x.str(6));
    };

    Trajectory traj = integrate_path(rhs.augmented_field(), st, route, iopts, p);
    for (const auto& [x, state] : traj.samples)
        sol.values.emplace_back(x, Vec2{state[0], state[1]});
    sol.stats = traj.stats;
    return sol;
}

} // namespace

ComplexPath standard_route(const Real& epsilon, int branch, const Real& target_v,
                           const ManifoldOptions& opts, prec_t bits) {
    prec_t p = bits;
    Real eta = Real::of(opts.eta_for(epsilon.to_double()), p);
    Real delta = Real::of(opts.delta, p);
    Complex seed{branch > 0 ? epsilon + eta : -(epsilon + eta), Real::zero(p)};
    Complex outer{branch > 0 ? delta : -delta, Real::zero(p)};
    Complex target{Real::zero(p), target_v};
    if (abs(abs(target) - delta) > Real::of(1e-30, p) * delta)
        throw RouteError("standard_route: target must sit on |x| = delta");
    ComplexPath route;
    route.append_line(seed, outer);
    // upper half-plane for v > 0: counterclockwise from +delta, clockwise from -delta
    bool ccw = (branch > 0) == (target_v.sign() > 0);
    route.append_arc(Complex::zero(p), outer, target, ccw);
    return route;
}

SectionValue shoot_to_section(const ModelSpec& spec, const Real& epsilon, int branch,
                              const ManifoldOptions& opts, const PrecisionContext& ctx) {
    prec_t p = ctx.bits;
    if (!(epsilon > 0) || epsilon.to_double() >= opts.eps0)
        throw DomainError("shoot_to_section: eps outside (0, eps0)");
    Complex eps{epsilon, Real::zero(p)};
    EquilibriaOptions eqo;
    eqo.eps0 = opts.eps0;
    auto [plus, minus] = find_equilibria(spec, eps, ctx, eqo);
    const Equilibrium& eq = branch > 0 ? plus : minus;
    Direction dir = branch > 0 ? Direction::Unstable : Direction::Stable;
    LocalManifold lm = local_parametrize(spec, eq, dir, opts.K, ctx);

    Real eta = Real::of(opts.eta_for(epsilon.to_double()), p);
    Real target_scale = splitting_scale(epsilon, p);
    Real tol_abs = opts.tol * target_scale;

    // seed accuracy: |gamma_K| |s|^K must undercut the splitting scale
    Complex s0{branch > 0 ? -eta : eta, Real::zero(p)};
    Complex xs{branch > 0 ? epsilon - eta : -(epsilon - eta), Real::zero(p)};
    Complex s = lm.solve_x(xs, s0);
    Real trunc = abs(lm.gamma.back()) * pow(abs(s), static_cast<long>(lm.gamma.size()) - 1);
    if (trunc > tol_abs)
        throw SeedError("shoot_to_section: parametrization truncation " + trunc.str(4) +
                        " above tolerance; increase K or decrease eta");

    Vec3 pt = lm.at(s);
    Vec2 seed{pt[1], pt[2]};
    ComplexPath route = ComplexPath::line(xs, Complex::zero(p));
    GraphSolution sol =
        transport(spec, epsilon, branch, route, seed, trunc, tol_abs, opts, ctx, false);
    return {sol.final_value(), sol.stats, trunc};
}

GraphSolution continue_graph(const ModelSpec& spec, const Real& epsilon, int branch,
                             const ComplexPath& route, const ManifoldOptions& opts,
                             const PrecisionContext& ctx) {
    prec_t p = ctx.bits;
    if (!(epsilon > 0) || epsilon.to_double() >= opts.eps0)
        throw DomainError("continue_graph: eps outside (0, eps0)");
    Complex eps{epsilon, Real::zero(p)};
    EquilibriaOptions eqo;
    eqo.eps0 = opts.eps0;
    auto [plus, minus] = find_equilibria(spec, eps, ctx, eqo);
    const Equilibrium& eq = branch > 0 ? plus : minus;
    Direction dir = branch > 0 ? Direction::Unstable : Direction::Stable;
    LocalManifold lm = local_parametrize(spec, eq, dir, opts.K, ctx);

    Real eta = Real::of(opts.eta_for(epsilon.to_double()), p);
    Real target_scale = splitting_scale(epsilon, p);
    Real tol_abs = opts.tol * target_scale;

    Complex xs{branch > 0 ? epsilon + eta : -(epsilon + eta), Real::zero(p)};
    if (route.empty()) {
        // empty route: the graph value at the seed itself
        Complex s = lm.solve_x(xs, Complex{branch > 0 ? eta : -eta, Real::zero(p)});
        Vec3 pt = lm.at(s);
        GraphSolution sol;
        sol.branch = branch;
        sol.epsilon = epsilon;
        sol.tol_used = tol_abs;
        sol.precision_used = p;
        sol.values.emplace_back(xs, Vec2{pt[1], pt[2]});
        return sol;
    }
    if (abs(route.start() - xs) > Real::of(1e-25, p))
        throw RouteError("continue_graph: route must start at the outer seed x = " + xs.str(8));

    Complex s = lm.solve_x(xs, Complex{branch > 0 ? eta : -eta, Real::zero(p)});
    Real trunc = abs(lm.gamma.back()) * pow(abs(s), static_cast<long>(lm.gamma.size()) - 1);
    if (trunc > tol_abs)
        throw SeedError("continue_graph: parametrization truncation above tolerance");
    Vec3 pt = lm.at(s);
    Vec2 seed{pt[1], pt[2]};
    return transport(spec, epsilon, branch, route, seed, trunc, tol_abs, opts, ctx, true);
}

ComplexPath unperturbed_route(int branch, const Complex& target, const ManifoldOptions& opts,
                              prec_t bits) {
    prec_t p = bits;
    Real delta = Real::of(opts.delta, p);
    Complex seed{branch > 0 ? Real::of(opts.x_seed, p) : -Real::of(opts.x_seed, p), Real::zero(p)};
    ComplexPath route;
    Real at = abs(target);
    if (at > delta * Real::of(1.0 + 1e-12, p))
        throw RouteError("unperturbed_route: target outside the sector radius");
    Complex outer{branch > 0 ? at : -at, Real::zero(p)};
    route.append_line(seed, outer);
    if (!(abs(outer - target) < Real::of(1e-30, p))) {
        bool ccw = (branch > 0) == (target.im.sign() >= 0);
        route.append_arc(Complex::zero(p), outer, target, ccw);
    }
    return route;
}

UnperturbedValue unperturbed_graph(const ModelSpec& spec, const GevreySeries& series, int branch,
                                   const Complex& target, const ComplexPath& route,
                                   const ManifoldOptions& opts, const PrecisionContext& ctx) {
    prec_t p = ctx.bits;
    if (route.empty()) throw RouteError("unperturbed_graph: empty route");
    Complex xs = route.start();
    if (!(abs(route.end() - target) < Real::of(1e-25, p)))
        throw RouteError("unperturbed_graph: route does not end at the target");

    auto opt = series.optimal_truncation(xs);
    Vec2 seed = opt.value;
    Real seed_err = opt.least_term;

    Real tol_abs = opts.tol * max(seed_err, Real::pow2(-static_cast<long>(p) + 64, p));
    GraphSolution sol = transport(spec, Real::zero(p), branch, route, seed, seed_err, tol_abs,
                                  opts, ctx, false);

    // the hyperbolic direction amplifies seed errors by about e^{1/|Im x|}
    // between the real axis and the endpoint
    Real amp = Real::one(p);
    if (!target.im.is_zero()) amp = exp(Real::one(p) / abs(target.im));
    UnperturbedValue out{sol.final_value(), 4 * seed_err * amp, sol.stats};
    return out;
}

} // namespace hopfsplit

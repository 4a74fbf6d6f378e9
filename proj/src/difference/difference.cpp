#include "hopfsplit/difference/difference.hpp"

#include <algorithm>

#include "hopfsplit/model/charts.hpp"

namespace hopfsplit {

namespace {

// joint-state variable order for the descent system
enum JV : int { JX = 0, JYP = 1, JZP = 2, JWP = 3, JYM = 4, JZM = 5, JWM = 6, JWS = 7, JY = 8 };

Poly remap(const Poly& q, const std::array<int, 3>& where, int dim, prec_t p) {
    // q lives in (x,y,z,w)-slots (VX,VY,VZ,VEPS); move to joint slots
    Poly out(dim, p);
    for (const auto& [e, c] : q.terms()) {
        Expo ne{};
        ne[JX] = e[VX];
        ne[static_cast<size_t>(where[0])] = e[VY];
        ne[static_cast<size_t>(where[1])] = e[VZ];
        ne[static_cast<size_t>(where[2])] = e[VEPS];
        out.add_term(ne, c);
    }
    return out;
}

// substitute y -> (y+ + y-)/2, z -> (z+ + z-)/2 into a (x,y,z)-polynomial
Poly to_midpoint(const Poly& q, int dim, prec_t p) {
    Real half = Real::of(0.5, p);
    Poly yp = Poly::variable(JYP, dim, p), ym = Poly::variable(JYM, dim, p);
    Poly zp = Poly::variable(JZP, dim, p), zm = Poly::variable(JZM, dim, p);
    Poly ymid = Complex{half, Real::zero(p)} * (yp + ym);
    Poly zmid = Complex{half, Real::zero(p)} * (zp + zm);
    Poly lifted = remap(q, {JYP, JZP, JWP}, dim, p); // placeholder slots for y,z
    // remap put y,z into JYP/JZP; substitute those slots by the midpoints
    lifted = lifted.substituted(JYP, ymid);
    lifted = lifted.substituted(JZP, zmid);
    return lifted;
}

struct DescentSystem {
    prec_t p;
    GraphRhs rhs;
    PolyField field; // 9 joint states, x as path variable 0

    explicit DescentSystem(const ModelSpec& spec, const Complex& eps)
        : p(spec.prec), rhs(spec, eps) {
        const int dim = 9;
        field.dim = dim;
        field.prec = p;
        field.rhs.assign(dim, Poly(dim, p));

        const PolyField& one = rhs.augmented_field(); // (x,y,z,w) transport
        field.rhs[JYP] = remap(one.rhs[1], {JYP, JZP, JWP}, dim, p);
        field.rhs[JZP] = remap(one.rhs[2], {JYP, JZP, JWP}, dim, p);
        field.rhs[JWP] = remap(one.rhs[3], {JYP, JZP, JWP}, dim, p);
        field.rhs[JYM] = remap(one.rhs[1], {JYM, JZM, JWM}, dim, p);
        field.rhs[JZM] = remap(one.rhs[2], {JYM, JZM, JWM}, dim, p);
        field.rhs[JWM] = remap(one.rhs[3], {JYM, JZM, JWM}, dim, p);

        // midpoint inverse-denominator: ws' = -ws^2 (D_x + D_y y*' + D_z z*')
        Poly Dx = to_midpoint(rhs.D().derivative(VX), dim, p);
        Poly Dy = to_midpoint(rhs.D().derivative(VY), dim, p);
        Poly Dz = to_midpoint(rhs.D().derivative(VZ), dim, p);
        Poly ws = Poly::variable(JWS, dim, p);
        Real half = Real::of(0.5, p);
        Poly dystar = Complex{half, Real::zero(p)} *
                      (field.rhs[JYP] + field.rhs[JYM]);
        Poly dzstar = Complex{half, Real::zero(p)} *
                      (field.rhs[JZP] + field.rhs[JZM]);
        field.rhs[JWS] = -(ws * ws) * (Dx + Dy * dystar + Dz * dzstar);

        // midpoint-Jacobian entries A_ij as polynomials in the joint states:
        // A = Nz_y/D ... with 1/D = ws, 1/D^2 = ws^2
        Poly Ny = to_midpoint(rhs.Ny(), dim, p), Nz = to_midpoint(rhs.Nz(), dim, p);
        Poly Nyy = to_midpoint(rhs.Ny().derivative(VY), dim, p);
        Poly Nyz = to_midpoint(rhs.Ny().derivative(VZ), dim, p);
        Poly Nzy = to_midpoint(rhs.Nz().derivative(VY), dim, p);
        Poly Nzz = to_midpoint(rhs.Nz().derivative(VZ), dim, p);
        Poly ws2 = ws * ws;
        Poly A11 = Nyy * ws - Ny * Dy * ws2;
        Poly A12 = Nyz * ws - Ny * Dz * ws2;
        Poly A21 = Nzy * ws - Nz * Dy * ws2;
        Poly A22 = Nzz * ws - Nz * Dz * ws2;

        // projective coordinate along x: dY/dx = A12 + (A11-A22) Y - A21 Y^2
        // (the factor i of the v-parametrization is absorbed by x = iv)
        Poly Yv = Poly::variable(JY, dim, p);
        field.rhs[JY] = A12 + (A11 - A22) * Yv - A21 * (Yv * Yv);
    }
};

} // namespace

const DifferenceSample& DifferenceRun::at_v(const Real& v) const {
    const DifferenceSample* best = &samples.front();
    Real bd = abs(samples.front().v - v);
    for (const auto& s : samples) {
        Real d = abs(s.v - v);
        if (d < bd) {
            bd = d;
            best = &s;
        }
    }
    return *best;
}

DifferenceRun propagate_difference_exact(const ModelSpec& spec, const Real& epsilon,
                                         const DifferenceOptions& opts,
                                         const PrecisionContext& ctx) {
    prec_t p = ctx.bits;
    if (ctx.derived_for_epsilon && *ctx.derived_for_epsilon > epsilon.to_double() * (1 + 1e-12))
        throw PrecisionError("propagate_difference_exact: context sized for a larger eps than "
                             "requested",
                             ctx.bits);
    Real delta = Real::of(opts.delta, p);
    if (!(epsilon < delta)) throw DomainError("propagate_difference_exact: need eps < delta");

    // Manifold graphs at x = -i delta via the outer routes. The run ascends
    // the imaginary axis: the stable bundle Y^s (-> -i) attracts along
    // increasing v (the backward flow of the slow-fast reading), so seeding
    // Y = -i at v = -delta puts the projective coordinate on Y^s with an
    // exponentially shrinking transient.
    ManifoldOptions mo = opts.manifold;
    mo.delta = opts.delta;
    ComplexPath route_p = standard_route(epsilon, +1, -delta, mo, p);
    ComplexPath route_m = standard_route(epsilon, -1, -delta, mo, p);
    GraphSolution gp = continue_graph(spec, epsilon, +1, route_p, mo, ctx);
    GraphSolution gm = continue_graph(spec, epsilon, -1, route_m, mo, ctx);

    Complex eps{epsilon, Real::zero(p)};
    DescentSystem sys(spec, eps);

    // ascent path: chained segments through the sample grid so every node
    // is hit exactly
    std::vector<Real> grid;
    for (int k = 0; k <= 2 * opts.grid_per_side; ++k)
        grid.push_back(-delta + (delta / opts.grid_per_side) * static_cast<long>(k));
    // extra nodes at scaled v = eps*v2 for the chart-limit diagnostics
    for (int k = -8; k <= 8; ++k) {
        Real v = (epsilon / 4) * static_cast<long>(k);
        if (abs(v) < delta) grid.push_back(v);
    }
    std::sort(grid.begin(), grid.end(), [](const Real& a, const Real& b) { return a < b; });
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [&](const Real& a, const Real& b) {
                               return abs(a - b) < Real::pow2(-40, p);
                           }),
               grid.end());

    ComplexPath path;
    for (size_t k = 0; k + 1 < grid.size(); ++k)
        path.append_line(Complex{Real::zero(p), grid[k]}, Complex{Real::zero(p), grid[k + 1]});

    Vec2 mp = gp.final_value(), mm = gm.final_value();
    Complex xlow{Real::zero(p), -delta};
    Complex D0p = sys.rhs.denominator(xlow, mp);
    Complex D0m = sys.rhs.denominator(xlow, mm);
    Vec2 mid0 = Real::of(0.5, p) * (mp + mm);
    Complex D0s = sys.rhs.denominator(xlow, mid0);
    std::vector<Complex> st{mp.y,
                            mp.z,
                            Complex::one(p) / D0p,
                            mm.y,
                            mm.z,
                            Complex::one(p) / D0m,
                            Complex::one(p) / D0s,
                            -Complex::i_unit(p)}; // Y seeded at -i

    Real target_scale = exp(-(Real::pi(p) / (2 * epsilon)));
    IntegratorOptions iopts;
    iopts.tol = mo.tol * target_scale;

    Trajectory traj = integrate_path(sys.field, st, path, iopts, p);

    DifferenceRun run;
    run.epsilon = epsilon;
    run.stats = traj.stats;
    run.stats.steps += gp.stats.steps + gm.stats.steps;
    for (const auto& [x, s] : traj.samples) {
        DifferenceSample smp{x.im,
                             Vec2{s[0], s[1]},
                             Vec2{s[3], s[4]},
                             Vec2{s[0] - s[3], s[1] - s[4]},
                             s[7]};
        run.samples.push_back(std::move(smp));
    }
    // cancellation guard: the formed difference must clear the roundoff floor
    // of the twin values it was formed from
    Real dm0 = abs(run.at_v(Real::zero(p)).dm);
    Real value_scale = max(abs(mp), abs(mm));
    if (!dm0.is_zero() && dm0 < value_scale * Real::pow2(-static_cast<long>(p) + 96, p)) {
        long need = (log2(value_scale / dm0)).to_long() + 160;
        throw PrecisionError("propagate_difference_exact: splitting cancels below the guard "
                             "bits; approximately " + std::to_string(need) + " bits required",
                             need);
    }

    const DifferenceSample& z = run.at_v(Real::zero(p));
    run.dm_zero = z.dm;
    run.Ys_zero = z.Y;
    run.Ys_delta = run.samples.back().Y;  // converged end of the ascent
    run.Ys_minus_delta = -Complex::i_unit(p); // the seed value

    // boundary diagonalization at v = delta with Yu(delta) = conj(Ys(-delta))
    Complex Yu_delta = conj(run.Ys_minus_delta);
    auto [ts, tu] = diagonalize(run.samples.back().dm, run.Ys_delta, Yu_delta);
    run.theta_s = ts;
    run.theta_u = tu;
    return run;
}

Mat2 midpoint_system(const ModelSpec& spec, const Real& epsilon, const Real& v,
                     const Vec2& m_plus, const Vec2& m_minus) {
    prec_t p = spec.prec;
    GraphRhs rhs(spec, Complex{epsilon, Real::zero(p)});
    Vec2 mid = Real::of(0.5, p) * (m_plus + m_minus);
    return rhs.jacobian_yz(Complex{Real::zero(p), v}, mid);
}

RiccatiSolution riccati_slow_manifold(const ModelSpec& spec, const Real& epsilon,
                                      const Real& v_max, int v_grid,
                                      const DifferenceOptions& opts,
                                      const PrecisionContext& ctx) {
    prec_t p = ctx.bits;
    if (v_max.to_double() > opts.delta)
        throw ParameterError("riccati_slow_manifold: v_max must not exceed delta");
    RiccatiSolution out{epsilon, {}, Real::zero(p)};
    if (epsilon.is_zero()) {
        // scaling-chart limit: Y = -i is exactly invariant
        for (int k = 0; k <= v_grid; ++k) {
            Real v = v_max * static_cast<long>(k) / static_cast<long>(v_grid);
            out.samples.emplace_back(v, -Complex::i_unit(p));
        }
        return out;
    }
    DifferenceRun run = propagate_difference_exact(spec, epsilon, opts, ctx);
    for (int k = 0; k <= v_grid; ++k) {
        Real v = v_max * static_cast<long>(k) / static_cast<long>(v_grid);
        const auto& s = run.at_v(v);
        out.samples.emplace_back(s.v, s.Y);
        out.max_dev_from_minus_i = max(out.max_dev_from_minus_i,
                                       abs(s.Y + Complex::i_unit(p)));
    }
    return out;
}

std::pair<Complex, Complex> diagonalize(const Vec2& dm, const Complex& Ys, const Complex& Yu) {
    Complex den = Ys - Yu;
    if (den.is_zero()) throw DegenerateFrameError("diagonalize: Ys = Yu");
    Complex ds = (dm.y - Yu * dm.z) / den;
    Complex du = (Ys * dm.z - dm.y) / den;
    return {ds, du};
}

PredictorResult asymptotic_predictor(const ModelSpec& spec, const Real& epsilon,
                                     const Real& delta, const Complex& theta_s,
                                     const PrecisionContext& ctx) {
    prec_t p = ctx.bits;
    auto I = closed_form_integrals(Real(epsilon), Real(delta), spec.b, spec.sigma, spec.F0());
    Complex expo = I.total();
    PredictorResult out{exp(expo) * theta_s, I, theta_s};
    (void)p;
    return out;
}

DirectionCheck splitting_direction_check(const Vec2& dm_zero, const Complex& Ys_zero) {
    prec_t p = dm_zero.prec();
    Real realness = max(abs(dm_zero.y.im), abs(dm_zero.z.im));
    Real floor = Real::pow2(-static_cast<long>(p) / 4, p);
    if (realness > floor)
        throw PrecisionError("splitting_direction_check: Delta m(0) is not real within the "
                             "tolerance; upstream precision insufficient",
                             p);
    auto [w, wu] = diagonalize(dm_zero, Ys_zero, conj(Ys_zero));
    (void)wu;
    DirectionCheck out{w, Real::zero(p), Real::zero(p), realness};
    Real dn = abs(dm_zero);
    Real wn = abs(w);
    out.ratio = wn.is_zero() ? Real::zero(p) : dn / (2 * wn);
    out.phase = arg(w);
    return out;
}

} // namespace hopfsplit

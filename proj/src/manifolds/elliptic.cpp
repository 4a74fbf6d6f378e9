#include "hopfsplit/manifolds/manifolds.hpp"

#include "hopfsplit/model/charts.hpp"
#include "hopfsplit/series/double_series.hpp"

namespace hopfsplit {

namespace {

struct Region {
    Real inner, outer, half_open;

    // signed exit indicator: which boundary does r sit on/behind?
    std::string where(const Complex& r) const {
        Real ar = abs(r);
        if (ar >= outer) return "outer";
        if (ar <= inner) return "inner";
        if (abs(atan2(r.im, r.re)) >= half_open) return "sector";
        return "";
    }
};

} // namespace

EllipticPathRecord elliptic_path(const ModelSpec& spec, const Real& epsilon, const Complex& start,
                                 const ManifoldOptions& opts, const PrecisionContext& ctx) {
    prec_t p = ctx.bits;
    Region reg{epsilon / Real::of(opts.xi, p), Real::of(opts.delta, p),
               Real::of((Real::pi(p).to_double() + opts.chi_val()) / 2.0, p)};
    if (!reg.where(start).empty())
        throw DomainError("elliptic_path: start is not interior to the region A+(eps)");

    // r1' = r1^2 - eps^2 + F0 r1^3 in real time
    PolyField f;
    f.dim = 1;
    f.prec = p;
    Poly r = Poly::variable(0, 1, p);
    Complex F0{spec.F0(), Real::zero(p)};
    Complex e2{epsilon * epsilon, Real::zero(p)};
    f.rhs = {r * r - Poly::constant(e2, 1) + F0 * (r * r * r)};

    IntegratorOptions iopts;
    iopts.tol = Real::of(1e-30, p);
    TaylorStepper stepper(f, iopts, p);

    EllipticPathRecord rec{epsilon, start, {}, Real::zero(p), ""};
    std::vector<Complex> state{start};
    Real t = Real::zero(p);
    Real budget = Real::of(1000.0, p) / epsilon;
    Real hmax = Real::one(p) / epsilon;
    rec.samples.emplace_back(t, start);

    while (true) {
        std::vector<Complex> prev = state;
        Real h = stepper.step(state, hmax);
        std::string hit = reg.where(state[0]);
        if (hit.empty()) {
            t = t + h;
            rec.samples.emplace_back(t, state[0]);
            if (t > budget)
                throw BoundViolationError(
                    "elliptic_path: no exit within 1e3/eps time units (contradicts the "
                    "elliptic exit bound at these constants)");
            continue;
        }
        // bisect the crossing time inside the step's dense output
        Real lo = Real::zero(p), hi = h;
        for (int it = 0; it < 200; ++it) {
            Real mid = (lo + hi) / 2;
            Complex rm = stepper.eval_last_jet(mid)[0];
            if (reg.where(rm).empty()) lo = mid;
            else hi = mid;
            if (hi - lo < Real::pow2(-static_cast<long>(p) / 2, p) * h) break;
        }
        Complex rexit = stepper.eval_last_jet(hi)[0];
        t = t + hi;
        rec.samples.emplace_back(t, rexit);
        rec.exit_time = t;
        rec.exit_boundary = reg.where(rexit);
        break;
    }
    return rec;
}

TransferNorm transfer_norm(const ModelSpec& spec, const Real& epsilon,
                           const EllipticPathRecord& rec, int nf_degree,
                           const ManifoldOptions& opts, const PrecisionContext& ctx) {
    (void)opts;
    prec_t p = ctx.bits;
    int D = nf_degree;

    // linearization of the rescaled r1-chart fiber equation about the
    // truncated invariant graph: A(r1,eps1) = Omega + r1 W11~(r1,eps1)
    RescaledR1Field rf = r1_field_rescaled(spec, D);
    DoubleSeries ds = double_series(spec, std::min(3, D), std::max(1, D - 2));
    Poly Psi_y(4, p), Psi_z(4, p);
    for (int g = 0; g <= ds.eps_order; ++g)
        for (int b = 1; b <= ds.r_order; ++b) {
            Expo e{};
            e[VX] = static_cast<uint8_t>(b);
            e[VEPS] = static_cast<uint8_t>(g);
            Psi_y.add_term(e, ds.at(b, g).y);
            Psi_z.add_term(e, ds.at(b, g).z);
        }

    std::array<Poly, 4> A{Poly(4, p), Poly(4, p), Poly(4, p), Poly(4, p)};
    int k = 0;
    for (int i = 1; i <= 2; ++i)
        for (int v : {VY, VZ}) {
            Poly d = rf.rhs[static_cast<size_t>(i)].derivative(v);
            d = d.substituted(VY, Psi_y, D + 2).substituted(VZ, Psi_z, D + 2);
            A[static_cast<size_t>(k++)] = d.truncated(D + 2);
        }

    // joint polynomial system in (r1, u = 1/r1, M11, M21, M12, M22)
    const int dim = 6;
    Complex F0{spec.F0(), Real::zero(p)};
    Complex e2{epsilon * epsilon, Real::zero(p)};
    Poly r = Poly::variable(0, dim, p);
    Poly u = Poly::variable(1, dim, p);
    PolyField f;
    f.dim = dim;
    f.prec = p;
    f.rhs.assign(static_cast<size_t>(dim), Poly(dim, p));
    f.rhs[0] = r * r - Poly::constant(e2, dim) + F0 * (r * r * r);
    f.rhs[1] = -Poly::constant(Complex::one(p), dim) + e2 * (u * u) - F0 * r;

    // remap A entries into the joint variables with eps1 = eps * u
    auto lift = [&](const Poly& q) {
        Poly out(dim, p);
        for (const auto& [e, c] : q.terms()) {
            if (e[VY] != 0 || e[VZ] != 0)
                throw InternalConsistencyError("transfer_norm: unsubstituted fiber variable");
            Expo ne{};
            ne[0] = e[VX];
            ne[1] = e[VEPS];
            Complex cc = c;
            for (int j = 0; j < e[VEPS]; ++j) cc = cc * Complex{epsilon, Real::zero(p)};
            out.add_term(ne, cc);
        }
        return out;
    };
    std::array<Poly, 4> Aj{lift(A[0]), lift(A[1]), lift(A[2]), lift(A[3])};
    // columns of M' = A M
    Poly M11 = Poly::variable(2, dim, p), M21 = Poly::variable(3, dim, p);
    Poly M12 = Poly::variable(4, dim, p), M22 = Poly::variable(5, dim, p);
    f.rhs[2] = Aj[0] * M11 + Aj[1] * M21;
    f.rhs[3] = Aj[2] * M11 + Aj[3] * M21;
    f.rhs[4] = Aj[0] * M12 + Aj[1] * M22;
    f.rhs[5] = Aj[2] * M12 + Aj[3] * M22;

    std::vector<Complex> y0{rec.start, Complex::one(p) / rec.start, Complex::one(p),
                            Complex::zero(p), Complex::zero(p), Complex::one(p)};
    IntegratorOptions iopts;
    iopts.tol = Real::of(1e-30, p);
    Trajectory traj = integrate_real(f, y0, Real::zero(p), rec.exit_time, iopts, p);

    TransferNorm out{Real::zero(p), Real::zero(p), {}};
    for (const auto& [tt, st] : traj.samples)
        out.fundamental.emplace_back(tt.re, Mat2{st[2], st[4], st[3], st[5]});

    // max over s <= t of || M(t) M(s)^{-1} ||
    for (size_t i = 0; i < out.fundamental.size(); ++i) {
        Mat2 Minv = inverse(out.fundamental[i].second);
        for (size_t j = i; j < out.fundamental.size(); ++j)
            out.max_norm = max(out.max_norm, op_norm(out.fundamental[j].second * Minv));
    }
    // the predicted algebraic prefactor along the path
    Complex r0 = rec.start;
    Complex den0 = r0 * r0 - e2;
    Real expo = (2 + spec.b) / 2;
    for (const auto& [tt, st] : traj.samples) {
        Complex rt = st[0];
        Complex ratio = den0 / (rt * rt - e2);
        out.prefactor_max = max(out.prefactor_max, exp(expo * log(abs(ratio))));
    }
    return out;
}

} // namespace hopfsplit

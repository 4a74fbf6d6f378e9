#include "hopfsplit/series/eps_series.hpp"

#include "hopfsplit/model/charts.hpp"

namespace hopfsplit {

namespace {

// All series algebra here lives in 4-variable polynomials with slots
// (VX = x2, VY, VZ, VEPS = eps); the graph substitution eliminates VY, VZ.

struct EpsWork {
    prec_t p;
    int N;
    Poly F2, G2, H2; // rescaled perturbations
    Complex A, B, S;

    // residual of the invariance equation for a candidate graph (Y,Z)
    std::pair<Poly, Poly> residual(const Poly& Y, const Poly& Z) const {
        Poly x = Poly::variable(VX, 4, p);
        Poly e = Poly::variable(VEPS, 4, p);
        Poly one = Poly::constant(Complex::one(p), 4);
        int ecap = N + 1;

        auto comp = [&](const Poly& W) {
            Poly r = W.substituted(VY, Y).truncated_in(VEPS, ecap);
            r = r.substituted(VZ, Z).truncated_in(VEPS, ecap);
            return r;
        };
        Poly G2c = comp(G2), H2c = comp(H2), F2c = comp(F2);

        Poly lin = (B * e) * (S * one - x); // eps b (sigma - x2)
        Poly drive = e * (x * x - one) + (A * (e * e * e)) * (Y * Y + Z * Z) + (e * e) * F2c;
        drive = drive.truncated_in(VEPS, ecap);
        Poly ry = (Z + lin * Y + e * G2c - drive * Y.derivative(VX)).truncated_in(VEPS, ecap);
        Poly rz = (-Y + lin * Z + e * H2c - drive * Z.derivative(VX)).truncated_in(VEPS, ecap);
        // Omega(y,z) = (z,-y) is split across the two lines above
        return {ry, rz};
    }
};

Poly1 slice_eps(const Poly& q, int a, prec_t p) {
    Poly1 out(p);
    for (const auto& [e, c] : q.terms())
        if (e[VEPS] == a && e[VY] == 0 && e[VZ] == 0) out.set_coeff(e[VX], c + out.coeff(e[VX]));
    return out;
}

Poly lift(const Poly1& q, int a, prec_t p) { // q(x2) * eps^a as 4-var poly
    Poly out(4, p);
    for (int k = 0; k <= q.degree(); ++k) {
        Complex c = q.coeff(k);
        if (c.is_zero()) continue;
        Expo e{};
        e[VX] = static_cast<uint8_t>(k);
        e[VEPS] = static_cast<uint8_t>(a);
        out.add_term(e, c);
    }
    return out;
}

} // namespace

EpsSeries eps_series(const ModelSpec& spec, int N) {
    if (N < 1) throw ParameterError("eps_series: need N >= 1");
    prec_t p = spec.prec;
    EpsWork w{p,
              N,
              scaling_w2(spec.F),
              scaling_w2(spec.G),
              scaling_w2(spec.H),
              Complex{spec.a, Real::zero(p)},
              Complex{spec.b, Real::zero(p)},
              Complex{spec.sigma, Real::zero(p)}};

    EpsSeries s;
    s.order = N;
    s.prec = p;
    Poly Y(4, p), Z(4, p);
    for (int a = 1; a <= N; ++a) {
        auto [ry, rz] = w.residual(Y, Z);
        // the zero-filled residual at eps^a equals -Omega m_a
        Poly1 uy = slice_eps(ry, a, p);
        Poly1 uz = slice_eps(rz, a, p);
        // m_a = -Omega^{-1}(u) = (u_z, -u_y)
        Poly1 my = uz;
        Poly1 mz = -uy;
        s.m.emplace_back(my, mz);
        Y += lift(my, a, p);
        Z += lift(mz, a, p);
    }
    return s;
}

Real eps_series_residual(const ModelSpec& spec, const EpsSeries& s) {
    prec_t p = s.prec;
    EpsWork w{p,
              s.order,
              scaling_w2(spec.F),
              scaling_w2(spec.G),
              scaling_w2(spec.H),
              Complex{spec.a, Real::zero(p)},
              Complex{spec.b, Real::zero(p)},
              Complex{spec.sigma, Real::zero(p)}};
    Poly Y(4, p), Z(4, p);
    Real scale = Real::one(p);
    for (int a = 1; a <= s.order; ++a) {
        Y += lift(s.m[static_cast<size_t>(a - 1)].first, a, p);
        Z += lift(s.m[static_cast<size_t>(a - 1)].second, a, p);
        scale = max(scale, s.m[static_cast<size_t>(a - 1)].first.max_coeff_abs());
        scale = max(scale, s.m[static_cast<size_t>(a - 1)].second.max_coeff_abs());
    }
    auto [ry, rz] = w.residual(Y, Z);
    Real worst = Real::zero(p);
    for (const auto& q : {ry, rz})
        for (const auto& [e, c] : q.terms())
            if (e[VEPS] <= s.order) worst = max(worst, abs(c));
    return worst / scale;
}

Vec2 EpsSeries::partial_sum(const Complex& x2, const Complex& eps, int upto) const {
    Vec2 acc = Vec2::zero(prec);
    Complex ep = Complex::one(prec);
    for (int a = 1; a <= upto && a <= order; ++a) {
        ep = ep * eps;
        acc += ep * Vec2{m[static_cast<size_t>(a - 1)].first.evaluate(x2),
                         m[static_cast<size_t>(a - 1)].second.evaluate(x2)};
    }
    return acc;
}

std::vector<std::pair<Poly1, Poly1>> m1_series_from_m2(const EpsSeries& s) {
    std::vector<std::pair<Poly1, Poly1>> out;
    for (int a = 1; a <= s.order; ++a) {
        const auto& [my, mz] = s.m[static_cast<size_t>(a - 1)];
        int cap = a + 2;
        if (my.degree() > cap || mz.degree() > cap)
            throw RepresentationError(
                "m1_series_from_m2: deg m2_" + std::to_string(a) + " = " +
                std::to_string(std::max(my.degree(), mz.degree())) + " exceeds " +
                std::to_string(cap) + "; m1_" + std::to_string(a) + " is not polynomial");
        out.emplace_back(my.reversed(cap), mz.reversed(cap));
    }
    return out;
}

} // namespace hopfsplit

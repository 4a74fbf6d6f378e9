#include "hopfsplit/series/double_series.hpp"

#include "hopfsplit/model/charts.hpp"
#include "hopfsplit/series/eps_series.hpp"

namespace hopfsplit {

namespace {

// bidegree truncation: b-cap in r1 (VX) and g-cap in eps1 (VEPS)
Poly bicap(const Poly& q, int bmax, int gmax) {
    return q.truncated_in(VX, bmax).truncated_in(VEPS, gmax);
}

struct PdeWork {
    prec_t p;
    std::vector<Poly> field; // (fr, fy, fz, fe) of the r1 chart
    int bmax, gmax;

    std::pair<Poly, Poly> residual(const Poly& Y, const Poly& Z) const {
        auto comp = [&](const Poly& W) {
            Poly r = bicap(W.substituted(VY, Y), bmax + 2, gmax + 2);
            return bicap(r.substituted(VZ, Z), bmax + 2, gmax + 2);
        };
        Poly fr = comp(field[0]);
        Poly fy = comp(field[1]);
        Poly fz = comp(field[2]);
        Poly fe = comp(field[3]);
        Poly ry = fy - Y.derivative(VX) * fr - Y.derivative(VEPS) * fe;
        Poly rz = fz - Z.derivative(VX) * fr - Z.derivative(VEPS) * fe;
        return {bicap(ry, bmax + 1, gmax + 1), bicap(rz, bmax + 1, gmax + 1)};
    }
};

Complex bicoeff(const Poly& q, int b, int g) {
    Expo e{};
    e[VX] = static_cast<uint8_t>(b);
    e[VEPS] = static_cast<uint8_t>(g);
    return q.coeff(e);
}

void add_bicoeff(Poly& q, int b, int g, const Complex& c) {
    Expo e{};
    e[VX] = static_cast<uint8_t>(b);
    e[VEPS] = static_cast<uint8_t>(g);
    q.add_term(e, c);
}

} // namespace

DoubleSeries double_series(const ModelSpec& spec, int Gamma, int M) {
    if (Gamma < 0 || M < 1) throw ParameterError("double_series: need Gamma >= 0, M >= 1");
    prec_t p = spec.prec;
    PdeWork w{p, vector_field(spec, ChartId::R1, std::nullopt), M, Gamma};

    DoubleSeries s;
    s.r_order = M;
    s.eps_order = Gamma;
    s.prec = p;
    s.c.assign(static_cast<size_t>(Gamma) + 1,
               std::vector<Vec2>(static_cast<size_t>(M) + 1, Vec2::zero(p)));

    Poly Y(4, p), Z(4, p);
    // solve column-by-column in eps1, row-by-row in r1; the zero-filled
    // residual at bidegree (b,g) is exactly -Omega c_{b,g}
    for (int g = 0; g <= Gamma; ++g) {
        for (int b = 1; b <= M; ++b) {
            PdeWork wl = w;
            wl.bmax = b;
            wl.gmax = g;
            auto [ry, rz] = wl.residual(Y, Z);
            Complex uy = bicoeff(ry, b, g);
            Complex uz = bicoeff(rz, b, g);
            Vec2 cbg{uz, -uy}; // -Omega^{-1}(u)
            s.c[static_cast<size_t>(g)][static_cast<size_t>(b)] = cbg;
            add_bicoeff(Y, b, g, cbg.y);
            add_bicoeff(Z, b, g, cbg.z);
        }
    }
    return s;
}

Real r1_pde_residual(const ModelSpec& spec, const Poly& Y, const Poly& Z, int bmax, int gmax) {
    PdeWork w{spec.prec, vector_field(spec, ChartId::R1, std::nullopt), bmax, gmax};
    auto [ry, rz] = w.residual(Y, Z);
    Real worst = Real::zero(spec.prec);
    for (const auto& q : {ry, rz})
        for (const auto& [e, c] : q.terms())
            if (e[VX] <= bmax && e[VEPS] <= gmax) worst = max(worst, abs(c));
    return worst;
}

NormalFormCorrection normal_form_correction(const ModelSpec& spec, int N, int M) {
    if (N < 1) throw ParameterError("normal_form_correction: need N >= 1");
    prec_t p = spec.prec;
    const int Gamma = 2 * N - 1;

    DoubleSeries rows = double_series(spec, Gamma, M);
    // columns: m1_a from the scaling-chart expansion, exact polynomials
    EpsSeries m2 = eps_series(spec, Gamma);
    auto m1 = m1_series_from_m2(m2);

    NormalFormCorrection out{N, M, Poly(4, p), Poly(4, p), Real::zero(p), Real::one(p)};
    for (int g = 0; g <= Gamma; ++g)
        for (int b = 1; b <= M; ++b) {
            Vec2 c = rows.at(b, g);
            add_bicoeff(out.Y, b, g, c.y);
            add_bicoeff(out.Z, b, g, c.z);
            out.check_scale = max(out.check_scale, abs(c));
        }
    // (m1_a - J^{2N-1} m1_a): only eps1-degrees above Gamma survive
    for (int a = 1; a <= Gamma && a <= M; ++a) {
        const auto& [qy, qz] = m1[static_cast<size_t>(a - 1)];
        for (int g = Gamma + 1; g <= a + 2; ++g) {
            add_bicoeff(out.Y, a, g, qy.coeff(g));
            add_bicoeff(out.Z, a, g, qz.coeff(g));
        }
    }

    // property checks forced by the construction
    for (int b = 1; b <= M; ++b) { // W(r1,0) row equals the g=0 row
        Vec2 c = rows.at(b, 0);
        if (!(bicoeff(out.Y, b, 0) == c.y) || !(bicoeff(out.Z, b, 0) == c.z))
            throw InternalConsistencyError("normal_form_correction: W(r1,0) row mismatch");
    }
    for (const auto& [e, c] : out.Y.terms())
        if (e[VX] == 0 && !c.is_zero())
            throw InternalConsistencyError("normal_form_correction: W(0,eps1) != 0");
    for (const auto& [e, c] : out.Z.terms())
        if (e[VX] == 0 && !c.is_zero())
            throw InternalConsistencyError("normal_form_correction: W(0,eps1) != 0");

    // residual must vanish on every determined bidegree with b < 2N or g < 2N
    {
        PdeWork w{p, vector_field(spec, ChartId::R1, std::nullopt), M, Gamma + 3};
        auto [ry, rz] = w.residual(out.Y, out.Z);
        Real worst = Real::zero(p);
        for (const auto& q : {ry, rz})
            for (const auto& [e, c] : q.terms()) {
                int b = e[VX], g = e[VEPS];
                bool below = b < 2 * N || g < 2 * N;
                bool determined = (g <= Gamma && b <= M) || (b <= Gamma && g <= Gamma + 3);
                if (below && determined) worst = max(worst, abs(c));
            }
        out.residual_low = worst / out.check_scale;
    }
    return out;
}

} // namespace hopfsplit

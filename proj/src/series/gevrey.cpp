#include "hopfsplit/series/gevrey.hpp"

#include <map>

#include "hopfsplit/mp/linalg.hpp"
#include "hopfsplit/mp/series.hpp"

namespace hopfsplit {

namespace {

struct Term {
    int i, j, k;
    Complex c;
};

// eps-degree-zero terms of a perturbation polynomial
std::vector<Term> eps0_terms(const Poly& W) {
    std::vector<Term> out;
    for (const auto& [e, c] : W.terms())
        if (e[VEPS] == 0) out.push_back({e[VX], e[VY], e[VZ], c});
    return out;
}

} // namespace

int GevreySeries::first_nonzero() const {
    for (int k = 0; k <= order; ++k) {
        const Vec2& v = coeff[static_cast<size_t>(k)];
        if (!v.y.is_zero() || !v.z.is_zero()) return k;
    }
    return -1;
}

Vec2 GevreySeries::partial_sum(const Complex& x, int M) const {
    Vec2 acc = Vec2::zero(prec);
    Complex xp = Complex::one(prec);
    for (int k = 0; k <= M && k <= order; ++k) {
        acc += xp * coeff[static_cast<size_t>(k)];
        xp = xp * x;
    }
    return acc;
}

GevreySeries::Optimal GevreySeries::optimal_truncation(const Complex& x) const {
    int nz = first_nonzero();
    if (nz < 0) return {0, Vec2::zero(prec), Real::zero(prec)};
    Real ax = abs(x);
    // least-term index: |psi_k| |x|^k minimized
    int best = nz;
    Real bestmag = abs(coeff[static_cast<size_t>(nz)]) * pow(ax, static_cast<long>(nz));
    for (int k = nz + 1; k <= order; ++k) {
        Real m = abs(coeff[static_cast<size_t>(k)]);
        if (m.is_zero()) continue;
        m = m * pow(ax, static_cast<long>(k));
        if (m < bestmag) {
            bestmag = m;
            best = k;
        }
    }
    return {best, partial_sum(x, best), bestmag};
}

GevreySeries unperturbed_series(const ModelSpec& spec, int N) {
    if (N < 3) throw ParameterError("unperturbed_series: need N >= 3");
    prec_t p = spec.prec;
    const Complex czero = Complex::zero(p);
    Complex A{spec.a, Real::zero(p)};
    Real b = spec.b;

    auto fterms = eps0_terms(spec.F);
    auto gterms = eps0_terms(spec.G);
    auto hterms = eps0_terms(spec.H);

    std::vector<Complex> y(static_cast<size_t>(N) + 1, czero);
    std::vector<Complex> z(static_cast<size_t>(N) + 1, czero);

    // product caches y^j z^k for every exponent pair with j+k >= 2, closed
    // downward so each extends from its predecessor by one convolution
    std::map<std::pair<int, int>, std::vector<Complex>> prods;
    auto need = [&](int j, int k) {
        if (j + k < 2) return;
        for (int jj = 0; jj <= j; ++jj)
            for (int kk = 0; kk <= k; ++kk)
                if (jj + kk >= 2) prods.emplace(std::make_pair(jj, kk),
                                                std::vector<Complex>(static_cast<size_t>(N) + 1, czero));
    };
    need(2, 0);
    need(0, 2);
    for (const auto& t : fterms) need(t.j, t.k);
    for (const auto& t : gterms) need(t.j, t.k);
    for (const auto& t : hterms) need(t.j, t.k);

    auto series_of = [&](int j, int k) -> const std::vector<Complex>* {
        if (j == 1 && k == 0) return &y;
        if (j == 0 && k == 1) return &z;
        return &prods.at({j, k});
    };

    auto extend_prods = [&](int m) {
        // map iteration is ordered by (j,k), so predecessors come first
        for (auto& [jk, vec] : prods) {
            auto [j, k] = jk;
            const std::vector<Complex>* left;
            const std::vector<Complex>* right;
            if (j > 0) {
                left = series_of(j - 1, k);
                right = &y;
            } else {
                left = series_of(0, k - 1);
                right = &z;
            }
            // both factors vanish below order 3 per factor count
            Complex acc = czero;
            int lo = 3 * (j + k - 1);
            for (int q = lo; q <= m - 3; ++q) acc += (*left)[static_cast<size_t>(q)] * (*right)[static_cast<size_t>(m - q)];
            vec[static_cast<size_t>(m)] = acc;
        }
    };

    // [W(x, y(x), z(x))]_m for a term list
    auto compose_at = [&](const std::vector<Term>& terms, int m) {
        Complex acc = czero;
        for (const auto& t : terms) {
            if (t.j == 0 && t.k == 0) {
                if (t.i == m) acc += t.c;
                continue;
            }
            int q = m - t.i;
            if (q < 0) continue;
            acc += t.c * (*series_of(t.j, t.k))[static_cast<size_t>(q)];
        }
        return acc;
    };

    GevreySeries s;
    s.order = N;
    s.prec = p;
    s.coeff.assign(static_cast<size_t>(N) + 1, Vec2::zero(p));

    for (int m = 3; m <= N; ++m) {
        extend_prods(m);
        // Omega psi_m = (m-1+b) psi_{m-1} + [Pnl psi']_m - [(G,H)]_m
        Vec2 rhs = (Real::of(static_cast<long>(m - 1), p) + b) * s.coeff[static_cast<size_t>(m - 1)];
        // Pnl = a(y^2+z^2) + F(x,y,z,0); starts at order >= 3
        for (int q = 3; q <= m - 2; ++q) {
            Complex pq = A * (prods.at({2, 0})[static_cast<size_t>(q)] + prods.at({0, 2})[static_cast<size_t>(q)]) +
                         compose_at(fterms, q);
            if (pq.is_zero()) continue;
            int idx = m - q + 1;
            rhs += (pq * Real::of(static_cast<long>(idx), p)) * s.coeff[static_cast<size_t>(idx)];
        }
        rhs = rhs - Vec2{compose_at(gterms, m), compose_at(hterms, m)};
        // psi_m = Omega^{-1} rhs, Omega^{-1}(u,v) = (-v, u)
        Vec2 psi{-rhs.z, rhs.y};
        s.coeff[static_cast<size_t>(m)] = psi;
        y[static_cast<size_t>(m)] = psi.y;
        z[static_cast<size_t>(m)] = psi.z;
    }

    // fit the Gevrey-1 bound |psi_a| <= c1 c2^a a!: least-squares slope for
    // c2, then c1 inflated so the bound holds at every computed order
    std::vector<std::pair<int, Real>> pts;
    Real lfact = Real::zero(p);
    for (int m = 2; m <= N; ++m) {
        lfact = lfact + log(Real::of(static_cast<long>(m), p));
        if (m < 3) continue;
        Real mag = abs(s.coeff[static_cast<size_t>(m)]);
        if (!mag.is_zero()) pts.emplace_back(m, log(mag) - lfact);
    }
    if (pts.size() >= 2) {
        DenseMatrix Amat(static_cast<int>(pts.size()), 2, p);
        std::vector<Complex> rhsv;
        for (size_t i = 0; i < pts.size(); ++i) {
            Amat.at(static_cast<int>(i), 0) = Complex::one(p);
            Amat.at(static_cast<int>(i), 1) = Complex{Real::of(static_cast<long>(pts[i].first), p), Real::zero(p)};
            rhsv.push_back(Complex{pts[i].second, Real::zero(p)});
        }
        auto ab = least_squares(Amat, rhsv);
        s.c2 = exp(ab[1].re);
        // c1 = max |psi_a| / (c2^a a!)
        Real c1 = Real::zero(p);
        Real lc2 = ab[1].re;
        lfact = Real::zero(p);
        for (int m = 2; m <= N; ++m) {
            lfact = lfact + log(Real::of(static_cast<long>(m), p));
            if (m < 3) continue;
            Real mag = abs(s.coeff[static_cast<size_t>(m)]);
            if (mag.is_zero()) continue;
            c1 = max(c1, exp(log(mag) - lfact - Real::of(static_cast<long>(m), p) * lc2));
        }
        s.c1 = c1;
    }
    return s;
}

Real unperturbed_residual(const ModelSpec& spec, const GevreySeries& s) {
    int N = s.order;
    prec_t p = s.prec;
    Complex czero = Complex::zero(p);
    CSeries Y(N, czero), Z(N, czero), X(N, czero);
    for (int k = 0; k <= N; ++k) {
        Y.set(k, s.coeff[static_cast<size_t>(k)].y);
        Z.set(k, s.coeff[static_cast<size_t>(k)].z);
    }
    Y.set_offset(3);
    Z.set_offset(3);
    if (N >= 1) X.set(1, Complex::one(p));
    X.set_offset(1);

    auto compose = [&](const Poly& W) {
        CSeries acc(N, czero);
        for (const auto& [e, c] : W.terms()) {
            if (e[VEPS] != 0) continue;
            CSeries t(N, czero);
            t.set(0, c);
            for (int q = 0; q < e[VX]; ++q) t = t * X;
            for (int q = 0; q < e[VY]; ++q) t = t * Y;
            for (int q = 0; q < e[VZ]; ++q) t = t * Z;
            acc = acc + t;
        }
        return acc;
    };

    Complex A{spec.a, Real::zero(p)};
    CSeries P = X * X;
    {
        CSeries nl = Y * Y + Z * Z;
        CSeries sc(N, czero);
        sc.set(0, A);
        P = P + sc * nl + compose(spec.F);
    }
    CSeries Yp = Y.derivative(), Zp = Z.derivative();
    Complex B{spec.b, Real::zero(p)};
    CSeries bx(N, czero);
    bx.set(1, B);
    // residual components: P y' - (z - b x y) - G and P z' - (-y - b x z) - H
    CSeries r1 = P * Yp - Z + bx * Y - compose(spec.G);
    CSeries r2 = P * Zp + Y + bx * Z - compose(spec.H);

    Real worst = Real::zero(p);
    for (int m = 0; m <= N; ++m) {
        Real scale = Real::one(p) + Real::of(static_cast<long>(m), p) * abs(s.coeff[static_cast<size_t>(m > 0 ? m - 1 : 0)]) +
                     abs(s.coeff[static_cast<size_t>(m)]);
        Real rm = max(abs(r1[m]), abs(r2[m]));
        worst = max(worst, rm / scale);
    }
    return worst;
}

} // namespace hopfsplit

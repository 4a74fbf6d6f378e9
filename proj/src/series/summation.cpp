#include "hopfsplit/series/summation.hpp"

#include "hopfsplit/mp/linalg.hpp"
#include "hopfsplit/mp/quad.hpp"

namespace hopfsplit {

GevreyDiagnostics gevrey_diagnostics(const GevreySeries& s) {
    if (s.order < 12) throw ParameterError("gevrey_diagnostics: need order >= 12");
    prec_t p = s.prec;
    int nonzero = 0;
    for (int a = 3; a <= s.order; ++a)
        if (!abs(s.coeff[static_cast<size_t>(a)]).is_zero()) ++nonzero;
    if (nonzero < 6)
        throw InsufficientDataError("gevrey_diagnostics: fewer than 6 nonzero coefficients");

    // Two-step ratios sqrt(|psi_a| / (a (a-1) |psi_{a-2}|)) -> 1/rho along one
    // parity chain. Both the component alternation of the real 2-vector data
    // and the parity-dependent subleading corrections make the mixed sequence
    // oscillate, which Richardson cannot digest; each single-parity chain is
    // a smooth function of 1/a.
    auto chain = [&](int parity) {
        std::vector<std::pair<int, Real>> out;
        for (int a = 5; a <= s.order; ++a) {
            if (a % 2 != parity) continue;
            Real num = abs(s.coeff[static_cast<size_t>(a)]);
            Real den = abs(s.coeff[static_cast<size_t>(a - 2)]);
            if (num.is_zero() || den.is_zero()) continue;
            Real r2 = num / (den * Real::of(static_cast<long>(a), p) *
                             Real::of(static_cast<long>(a - 1), p));
            out.emplace_back(a, sqrt(r2));
        }
        return out;
    };

    // Neville extrapolation of a ratio chain to 1/a -> 0
    auto extrapolate = [&](const std::vector<std::pair<int, Real>>& ratios,
                           Real& L, Real& step) -> bool {
        size_t n = ratios.size();
        if (n < 4) return false;
        size_t take = n < 8 ? n : 8;
        std::vector<Real> x, f;
        for (size_t i = n - take; i < n; ++i) {
            x.push_back(Real::one(p) / static_cast<long>(ratios[i].first));
            f.push_back(ratios[i].second);
        }
        std::vector<Real> col = f, prevcol = f;
        for (size_t lvl = 1; lvl < take; ++lvl) {
            std::vector<Real> nxt;
            for (size_t i = 0; i + lvl < take; ++i) {
                Real xi = x[i], xj = x[i + lvl];
                nxt.push_back((xi * col[i + 1] - xj * col[i]) / (xi - xj));
            }
            prevcol = col;
            col = nxt;
            if (col.size() == 1) break;
        }
        L = col.back();
        step = abs(L - prevcol.back());
        return true;
    };

    auto even = chain(0), odd = chain(1);
    Real L(p), step(p);
    Real L2(p), step2(p);
    bool has1 = extrapolate(even, L, step);
    bool has2 = extrapolate(odd, L2, step2);
    Real last_ratio = Real::zero(p);
    if (!even.empty()) last_ratio = even.back().second;
    if (!odd.empty()) last_ratio = max(last_ratio, odd.back().second);
    if (has1 && has2) {
        Real spread = abs(L - L2) / 2;
        L = (L + L2) / 2;
        step = max(max(step, step2), spread);
    } else if (!has1 && has2) {
        L = L2;
        step = step2;
    } else if (!has1 && !has2) {
        throw InsufficientDataError("gevrey_diagnostics: no usable ratio chain");
    }
    Real last_step = step;

    GevreyDiagnostics out{Real::zero(p), Real::zero(p), last_ratio, false,
                          static_cast<int>(even.size() + odd.size())};
    if (L > Real::pow2(-8, p)) { // finite positive limit: divergent, Gevrey-1
        out.borel_radius = Real::one(p) / L;
        out.uncertainty = last_step / (L * L); // propagated through 1/L
        out.divergent = true;
    } else {
        // ratios heading to zero: Borel transform entire (apparently convergent)
        out.borel_radius = Real::zero(p);
        out.uncertainty = last_step;
        out.divergent = false;
    }
    return out;
}

namespace {

// diagonal-ish Pade of a power series sum_k c_k zeta^k: returns (P, Q) with
// deg P <= L, deg Q <= M, Q(0) = 1 and P/Q = series + O(zeta^(L+M+1))
std::pair<std::vector<Complex>, std::vector<Complex>> pade(const std::vector<Complex>& c, int L,
                                                           int M, prec_t p) {
    // denominator from the Toeplitz system sum_j c_{L+k-j} q_j = -c_{L+k};
    // a singular system means the series is (numerically) rational of lower
    // degree, so back off M until it solves
    std::vector<Complex> q(1, Complex::one(p));
    auto cc = [&](int idx) {
        return idx >= 0 && idx < static_cast<int>(c.size()) ? c[static_cast<size_t>(idx)]
                                                            : Complex::zero(p);
    };
    for (int MM = M; MM >= 1; --MM) {
        DenseMatrix A(MM, MM, p);
        std::vector<Complex> rhs(static_cast<size_t>(MM), Complex::zero(p));
        for (int k = 1; k <= MM; ++k) {
            for (int j = 1; j <= MM; ++j) A.at(k - 1, j - 1) = cc(L + k - j);
            rhs[static_cast<size_t>(k - 1)] = -cc(L + k);
        }
        try {
            auto sol = lu_solve(std::move(A), std::move(rhs));
            q.assign(static_cast<size_t>(MM) + 1, Complex::zero(p));
            q[0] = Complex::one(p);
            for (int j = 1; j <= MM; ++j) q[static_cast<size_t>(j)] = sol[static_cast<size_t>(j - 1)];
            M = MM;
            break;
        } catch (const ConditioningError&) {
            if (MM == 1) M = 0;
        }
    }
    std::vector<Complex> pnum(static_cast<size_t>(L) + 1, Complex::zero(p));
    for (int k = 0; k <= L; ++k) {
        Complex acc = Complex::zero(p);
        for (int j = 0; j <= std::min(k, M); ++j)
            if (k - j < static_cast<int>(c.size()))
                acc += c[static_cast<size_t>(k - j)] * q[static_cast<size_t>(j)];
        pnum[static_cast<size_t>(k)] = acc;
    }
    return {pnum, q};
}

Complex eval_poly(const std::vector<Complex>& c, const Complex& x, prec_t p) {
    Complex acc = Complex::zero(p);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

} // namespace

Vec2 borel_pade_laplace(const GevreySeries& s, const Real& theta, const Complex& x,
                        const BorelOptions& opts, const PrecisionContext& ctx) {
    prec_t p = ctx.bits;
    if (x.is_zero()) throw ParameterError("borel_pade_laplace: x must be nonzero");
    int nz = s.first_nonzero();
    if (nz < 0) return Vec2::zero(p); // zero series sums to zero

    Complex eith{cos(theta), sin(theta)};
    Complex decay = eith / x;
    if (!(decay.re > 0))
        throw ParameterError("borel_pade_laplace: Re(e^{i theta}/x) must be positive");

    // Borel coefficients b_{a-1} = psi_a/(a-1)!; lowest power is zeta^(nz-1)
    int n = s.order;
    std::vector<Complex> by, bz;
    Real fact = Real::one(p);
    for (int a = 1; a <= n; ++a) {
        fact = fact * static_cast<long>(a - 1 > 0 ? a - 1 : 1);
        if (a >= nz) {
            by.push_back(s.coeff[static_cast<size_t>(a)].y / fact);
            bz.push_back(s.coeff[static_cast<size_t>(a)].z / fact);
        }
    }
    int lead = nz - 1; // zeta^lead factored out
    int avail = static_cast<int>(by.size()) - 1;
    int M = opts.pade_degree > 0 ? opts.pade_degree : (n - 1) / 2;
    if (M > avail / 2) M = avail / 2;
    int L = avail - M;

    auto py = pade(by, L, M, p);
    auto pz = pade(bz, L, M, p);

    // Pole clearance from the ray e^{i theta} R+. Diagonal Pade of a
    // branch-cut function sprinkles small-residue artifact poles away from
    // the true singularities; a pole near the ray whose Laplace contribution
    // (~ pi |res| e^{-Re(rho/x)} |rho|^lead) is below the artifact floor is
    // subtracted from the rational part and its own contribution dropped,
    // which changes the result by less than that floor. Poles with a
    // contribution above the floor genuinely obstruct the direction.
    Real clear = Real::of(opts.pole_clearance, p);
    Real scaleB = Real::zero(p);
    for (const auto& v : {by, bz})
        for (const auto& cb : v) scaleB = max(scaleB, abs(cb));
    Real weak_floor = Real::of(opts.weak_pole_threshold, p) * scaleB;
    std::vector<std::pair<Complex, Complex>> weak_y, weak_z; // (pole, residue)
    for (int comp = 0; comp < 2; ++comp) {
        const auto& pq = comp == 0 ? py : pz;
        const auto& den = pq.second;
        if (den.size() <= 1) continue;
        std::vector<Complex> dq; // Q'
        for (size_t k = 1; k < den.size(); ++k)
            dq.push_back(Real::of(static_cast<long>(k), p) * den[k]);
        for (const auto& pole : poly_roots(den)) {
            Complex rot = pole * conj(eith); // pole in ray-aligned frame
            Real dist = rot.re > 0 ? abs(rot.im) : abs(pole);
            if (dist >= clear) continue;
            Complex res = eval_poly(pq.first, pole, p) / eval_poly(dq, pole, p);
            Real contrib = Real::pi(p) * abs(res) * exp(-(pole * decay).re) *
                           pow(max(abs(pole), Real::of(0.5, p)), static_cast<long>(lead));
            if (contrib < weak_floor) {
                (comp == 0 ? weak_y : weak_z).emplace_back(pole, res);
                continue;
            }
            throw DirectionError("borel_pade_laplace: Pade pole at " + pole.str(6) +
                                 " (residue " + abs(res).str(4) +
                                 ") obstructs the Laplace ray");
        }
    }

    // Laplace integral along zeta = e^{i theta} t, truncated where the
    // exponential factor underflows the working precision
    Real c = decay.re;
    Real T = (Real::of(static_cast<long>(p), p) * log(Real::of(2.0, p)) + 60) / c;
    auto make_integrand = [&](const std::pair<std::vector<Complex>, std::vector<Complex>>& pq,
                              const std::vector<std::pair<Complex, Complex>>& weak) {
        return [&, pq, weak](const Real& t) -> Complex {
            Complex zeta = eith * Complex{t, Real::zero(p)};
            Complex zl = pow(zeta, static_cast<long>(lead));
            Complex g = exp(-(decay * Complex{t, Real::zero(p)}));
            Complex f = eval_poly(pq.first, zeta, p) / eval_poly(pq.second, zeta, p);
            for (const auto& [pole, res] : weak) f -= res / (zeta - pole);
            return eith * zl * f * g;
        };
    };
    Vec2 out{tanh_sinh(make_integrand(py, weak_y), Real::zero(p), T, opts.quad_tol),
             tanh_sinh(make_integrand(pz, weak_z), Real::zero(p), T, opts.quad_tol)};
    if (!out.is_finite()) throw AccuracyError("borel_pade_laplace: non-finite Laplace integral");
    return out;
}

StokesEstimate stokes_estimate(const GevreySeries& s) {
    if (s.order < 20) throw ParameterError("stokes_estimate: need order >= 20");
    auto diag = gevrey_diagnostics(s); // throws on insufficient data
    if (!diag.divergent)
        throw ParameterError("stokes_estimate: series not flagged divergent");
    prec_t p = s.prec;

    // dominant-singularity combination w_a = y_a + i z_a isolates one of the
    // conjugate Borel poles; model w_a ~ K Gamma(a+q) omega^a
    int lo = s.order / 2, hi = s.order;
    std::vector<int> idx;
    std::vector<Complex> w;
    for (int a = lo; a <= hi; ++a) {
        Complex wa = s.coeff[static_cast<size_t>(a)].y +
                     Complex::i_unit(p) * s.coeff[static_cast<size_t>(a)].z;
        if (!abs(wa).is_zero()) {
            idx.push_back(a);
            w.push_back(wa);
        }
    }
    if (w.size() < 8) throw InsufficientDataError("stokes_estimate: too few tail coefficients");

    // consecutive-step factors u_a = w_a/w_{a-1} = omega (a-1+q) (1 + O(1/a^2)):
    // |u_a| is linear in a, so a plain linear fit yields |omega| and q
    std::vector<int> uidx;
    std::vector<Complex> u;
    for (size_t i = 1; i < w.size(); ++i) {
        if (idx[i] != idx[i - 1] + 1) continue;
        uidx.push_back(idx[i]);
        u.push_back(w[i] / w[i - 1]);
    }
    if (u.size() < 6) throw InsufficientDataError("stokes_estimate: too few consecutive tail pairs");
    Real q(p), abs_omega(p);
    {
        DenseMatrix A(static_cast<int>(u.size()), 2, p);
        std::vector<Complex> rhs;
        for (size_t i = 0; i < u.size(); ++i) {
            A.at(static_cast<int>(i), 0) = Complex::one(p);
            A.at(static_cast<int>(i), 1) = Complex{Real::of(static_cast<long>(uidx[i]), p), Real::zero(p)};
            rhs.push_back(Complex{abs(u[i]), Real::zero(p)});
        }
        auto ab = least_squares(A, rhs);
        abs_omega = ab[1].re;
        q = ab[0].re / abs_omega + 1; // intercept = |omega|(q-1)
    }
    // refine omega as a complex mean with the fitted growth divided out
    Complex omega = Complex::zero(p);
    for (size_t i = 0; i < u.size(); ++i)
        omega += u[i] / (Real::of(static_cast<long>(uidx[i]), p) - 1 + q);
    omega = omega / static_cast<long>(u.size());

    // amplitude K: w_a / (Gamma(a+q) omega^a), averaged over the window
    Complex lw = log(omega);
    Complex K = Complex::zero(p);
    std::vector<Complex> ks;
    for (size_t i = 0; i < w.size(); ++i) {
        Real a = Real::of(static_cast<long>(idx[i]), p);
        Complex ka = w[i] * exp(-(Complex{lngamma(a + q), Real::zero(p)} + a * lw));
        ks.push_back(ka);
        K += ka;
    }
    K = K / static_cast<long>(ks.size());
    Real disp = Real::zero(p);
    for (const auto& ka : ks) disp = max(disp, abs(ka - K));
    Real rel = disp / abs(K);

    // integer phase offset of the spec model 2 Re[S (a-1)! (-i)^(a+p)]: pick
    // p in {0,1,2,3} putting the amplitude phase in (-pi/4, pi/4]
    Complex Sfull = conj(K) / 2;
    int poff = 0;
    Complex Srot = Sfull;
    Real quarter = Real::pi(p) / 4;
    for (int cand = 0; cand < 4; ++cand) {
        Complex rot = pow(Complex{Real::zero(p), -Real::one(p)}, static_cast<long>(cand));
        Complex sc = Sfull * rot;
        Real ph = arg(sc);
        if (abs(ph) <= quarter + Real::pow2(-20, p)) {
            poff = cand;
            Srot = sc;
            break;
        }
    }

    StokesEstimate out{diag.borel_radius, -arg(omega), Srot, rel, q, poff,
                       idx.front(), idx.back()};
    if (rel > Real::of(0.1, p))
        throw UnreliableEstimateError("stokes_estimate: amplitude dispersion " + rel.str(4) +
                                      " exceeds 10%");
    return out;
}

} // namespace hopfsplit

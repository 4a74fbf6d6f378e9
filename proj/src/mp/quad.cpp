#include "hopfsplit/mp/quad.hpp"

namespace hopfsplit {

// x(t) = mid + half*tanh(pi/2 sinh t), w(t) = half * (pi/2) cosh t / cosh^2(pi/2 sinh t)
Complex tanh_sinh(const std::function<Complex(const Real&)>& f, const Real& a, const Real& b,
                  const Real& tol, int max_level) {
    prec_t p = join_prec(a, b);
    Real half = (b - a) / 2;
    Real mid = (a + b) / 2;
    Real pi_half = Real::pi(p) / 2;

    // beyond this |t| the weights underflow the working precision
    Real tmax = log(Real::of(2.0, p) * Real::of(static_cast<long>(p), p)) + 1;

    auto node = [&](const Real& t, Real& x_off, Real& w) {
        Real s = pi_half * (exp(t) - exp(-t)) / 2; // pi/2 sinh t
        Real ch = (exp(t) + exp(-t)) / 2;          // cosh t
        Real th = tanh(s);
        Real sech2 = 1 - th * th;
        x_off = half * th;
        w = half * pi_half * ch * sech2;
    };

    Real h = Real::one(p);
    Real xo(p), w(p);
    node(Real::zero(p), xo, w);
    Complex sum = w * f(mid);
    for (long k = 1; k <= tmax.to_long() + 1; ++k) { // integer nodes of level 0
        node(Real::of(k, p), xo, w);
        if (w.is_zero()) continue;
        sum += w * f(mid + xo);
        sum += w * f(mid - xo);
    }
    Complex prev = sum;

    for (int level = 1; level <= max_level; ++level) {
        h = h / 2;
        Complex add = Complex::zero(p);
        long kmax = (tmax / h).to_long() + 1;
        for (long k = 1; k <= kmax; k += 2) {
            Real t = h * Real::of(k, p);
            node(t, xo, w);
            if (w.is_zero()) continue;
            add += w * f(mid + xo);
            add += w * f(mid - xo);
        }
        sum = sum + add;
        Complex est = h * sum;
        if (level >= 3) {
            Real err = abs(est - prev);
            Real scale = max(abs(est), Real::pow2(-static_cast<long>(p), p));
            if (err < tol * scale) return est;
        }
        prev = est;
    }
    Complex est = h * sum;
    Real err = abs(est - prev);
    Real scale = max(abs(est), Real::pow2(-static_cast<long>(p), p));
    if (err > 16 * tol * scale)
        throw AccuracyError("tanh_sinh: quadrature did not converge to tolerance");
    return est;
}

} // namespace hopfsplit

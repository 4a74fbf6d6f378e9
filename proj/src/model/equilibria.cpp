#include "hopfsplit/model/equilibria.hpp"

#include "hopfsplit/model/charts.hpp"
#include "hopfsplit/mp/linalg.hpp"

namespace hopfsplit {

std::array<std::array<Complex, 3>, 3> full_field_jacobian(const ModelSpec& spec,
                                                          const Complex& eps, const Vec3& at) {
    auto comps = vector_field(spec, ChartId::Full, eps);
    std::vector<Complex> pt{at[0], at[1], at[2]};
    std::array<std::array<Complex, 3>, 3> J;
    for (int i = 0; i < 3; ++i)
        for (int v = 0; v < 3; ++v)
            J[static_cast<size_t>(i)][static_cast<size_t>(v)] =
                comps[static_cast<size_t>(i)].derivative(v).evaluate(pt);
    return J;
}

namespace {

Equilibrium locate(const ModelSpec& spec, const Complex& eps, const PrecisionContext& ctx,
                   int branch, const EquilibriaOptions& opts) {
    prec_t p = ctx.bits;
    auto comps = vector_field(spec, ChartId::Full, eps);
    Vec3 x = Vec3::zero(p);
    x[0] = branch > 0 ? eps : -eps;

    Real tol = Real::pow2(-static_cast<long>(p) + 24, p);
    bool converged = false;
    Real res = Real::zero(p);
    for (int it = 0; it < opts.max_newton; ++it) {
        std::vector<Complex> pt{x[0], x[1], x[2]};
        std::vector<Complex> f(3, Complex::zero(p));
        for (int i = 0; i < 3; ++i) f[static_cast<size_t>(i)] = comps[static_cast<size_t>(i)].evaluate(pt);
        res = sqrt(norm2(f[0]) + norm2(f[1]) + norm2(f[2]));
        if (res < tol) {
            converged = true;
            break;
        }
        auto J = full_field_jacobian(spec, eps, x);
        DenseMatrix A(3, 3, p);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) A.at(i, j) = J[static_cast<size_t>(i)][static_cast<size_t>(j)];
        std::vector<Complex> delta = lu_solve(std::move(A), f);
        for (int i = 0; i < 3; ++i) x[i] -= delta[static_cast<size_t>(i)];
    }
    if (!converged)
        throw ConvergenceError("find_equilibria: Newton did not converge in 64 iterations");

    // eigenvalues from the characteristic cubic of the 3x3 Jacobian
    auto J = full_field_jacobian(spec, eps, x);
    auto& a = J;
    Complex tr = a[0][0] + a[1][1] + a[2][2];
    Complex m01 = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    Complex m02 = a[0][0] * a[2][2] - a[0][2] * a[2][0];
    Complex m12 = a[1][1] * a[2][2] - a[1][2] * a[2][1];
    Complex sum2 = m01 + m02 + m12;
    Complex det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                  a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                  a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    // lambda^3 - tr lambda^2 + sum2 lambda - det = 0
    std::vector<Complex> coeffs{-det, sum2, -tr, Complex::one(p)};
    auto roots = poly_roots(coeffs);
    if (roots.size() != 3) throw ConvergenceError("find_equilibria: eigenvalue solve failed");

    // order: the (nearly) real eigenvalue first
    std::sort(roots.begin(), roots.end(),
              [](const Complex& u, const Complex& v) { return abs(u.im) < abs(v.im); });
    Equilibrium eq;
    eq.epsilon = eps;
    eq.location = x;
    eq.eigenvalues = {roots[0], roots[1], roots[2]};
    eq.branch = branch;
    eq.residual = res;
    for (const auto& lam : eq.eigenvalues)
        if (lam.re.sign() > 0) eq.unstable_dimension += 1;
    return eq;
}

} // namespace

std::pair<Equilibrium, Equilibrium> find_equilibria(const ModelSpec& spec, const Complex& eps,
                                                    const PrecisionContext& ctx,
                                                    const EquilibriaOptions& opts) {
    if (!(eps.re > 0) || !eps.im.is_zero() || eps.re.to_double() >= opts.eps0)
        throw DomainError("find_equilibria: eps must satisfy 0 < eps < eps0");
    Equilibrium plus = locate(spec, eps, ctx, +1, opts);
    Equilibrium minus = locate(spec, eps, ctx, -1, opts);
    if (plus.unstable_dimension != 1)
        throw ModelAssumptionError("find_equilibria: E+ does not have a 1D unstable manifold");
    if (minus.unstable_dimension != 2)
        throw ModelAssumptionError("find_equilibria: E- does not have a 1D stable manifold");
    Real floor = ctx.residual_floor();
    if (plus.residual > floor || minus.residual > floor)
        throw ConvergenceError("find_equilibria: residual above the context floor");
    return {plus, minus};
}

} // namespace hopfsplit

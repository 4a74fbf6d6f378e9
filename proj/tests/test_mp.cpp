#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hopfsplit/mp/linalg.hpp"
#include "hopfsplit/mp/poly.hpp"
#include "hopfsplit/mp/precision.hpp"
#include "hopfsplit/mp/quad.hpp"
#include "hopfsplit/mp/series.hpp"
#include "hopfsplit/mp/taylor.hpp"

using namespace hopfsplit;

namespace {
double dabs(const Real& r) { return abs(r).to_double(); }
} // namespace

TEST_CASE("make_context floor and derived bit counts") {
    // floor case
    CHECK(make_context(std::nullopt, 1.0, 128).bits == 128);
    CHECK(make_context(std::nullopt, 1.0, 16).bits == 64);
    // ceil(pi/(2 eps) * log2 e): 23 at eps=0.1, 46 at eps=0.05 (verified with
    // the mpfr constants directly below)
    Real v1 = Real::pi(256) / Real::of(0.2, 256) * Real::log2e(256);
    CHECK(ceil(v1).to_long() == 23);
    Real v2 = Real::pi(256) / Real::of(0.1, 256) * Real::log2e(256);
    CHECK(ceil(v2).to_long() == 46);
    CHECK(make_context(0.1, 2.0, 64).bits == 174);
    CHECK(make_context(0.05, 2.0, 64).bits == 220);
    CHECK_THROWS_AS(make_context(0.0, 1.0, 64), ParameterError);
    CHECK_THROWS_AS(make_context(1.5, 1.0, 64), ParameterError);
}

TEST_CASE("series product matches naive convolution on random series") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        int n = 8 + static_cast<int>(rng() % 25); // order <= 32
        CSeries s(n, Complex::zero(128)), t(n, Complex::zero(128));
        for (int k = 0; k <= n; ++k) {
            s.set(k, Complex::of(u(rng), u(rng), 128));
            t.set(k, Complex::of(u(rng), u(rng), 128));
        }
        CSeries p = s * t;
        for (int k = 0; k <= n; ++k) {
            Complex ref = Complex::zero(128);
            for (int j = 0; j <= k; ++j) ref += s[j] * t[k - j];
            CHECK(dabs(abs(p[k] - ref)) == 0.0); // identical op order -> bitwise
        }
    }
}

TEST_CASE("series reciprocal and compose are exact inverses through order N") {
    int n = 16;
    CSeries s(n, Complex::zero(192));
    s.set(0, Complex::of(2.0, 0.5, 192));
    for (int k = 1; k <= n; ++k) s.set(k, Complex::of(1.0 / (k + 1), -0.25 * k, 192));
    CSeries r = s.reciprocal();
    CSeries prod = s * r;
    CHECK(dabs(abs(prod[0] - Complex::one(192))) < 1e-50);
    for (int k = 1; k <= n; ++k) CHECK(dabs(abs(prod[k])) < 1e-50);

    // compose exp-series with t(x) = x + x^2 and check against direct expansion
    CSeries ex(n, Complex::zero(192));
    Real fact = Real::one(192);
    for (int k = 0; k <= n; ++k) {
        if (k > 0) fact = fact * static_cast<long>(k);
        ex.set(k, Complex{Real::one(192) / fact, Real::zero(192)});
    }
    CSeries t(n, Complex::zero(192));
    t.set(1, Complex::one(192));
    t.set(2, Complex::one(192));
    CSeries c = ex.compose(t);
    // evaluate both at x = 0.01 and compare with exp(x + x^2)
    Complex x = Complex::of(0.01, 0.0, 192);
    Complex lhs = c.evaluate(x);
    Real rhs = exp(x.re + x.re * x.re);
    CHECK(dabs(lhs.re - rhs) < 1e-30);
}

TEST_CASE("taylor: reduced problem x' = x^2 - 1 from 0 reaches -tanh(1)") {
    prec_t bits = 256;
    PolyField f;
    f.dim = 1;
    f.prec = bits;
    Poly x = Poly::variable(0, 1, bits);
    f.rhs = {x * x - Poly::constant(Complex::one(bits), 1)};
    IntegratorOptions opts;
    opts.tol = Real::of(1e-30, bits);
    auto traj = integrate_real(f, {Complex::zero(bits)}, Real::zero(bits), Real::one(bits), opts, bits);
    Real expect = -tanh(Real::one(bits));
    CHECK(dabs(traj.final_state()[0].re - expect) < 1e-30);
    CHECK(dabs(traj.final_state()[0].im) == 0.0);
}

TEST_CASE("taylor: constant field takes one step and rejects nothing") {
    prec_t bits = 128;
    PolyField f;
    f.dim = 1;
    f.prec = bits;
    f.rhs = {Poly(1, bits)}; // x' = 0
    IntegratorOptions opts;
    opts.tol = Real::of(1e-20, bits);
    auto traj = integrate_real(f, {Complex::one(bits)}, Real::zero(bits), Real::of(5.0, bits), opts, bits);
    CHECK(traj.final_state()[0] == Complex::one(bits));
    CHECK(traj.stats.rejected == 0);
    CHECK(traj.stats.steps == 1);
}

TEST_CASE("taylor: y' = i y over [0, pi] flips the sign") {
    prec_t bits = 256;
    PolyField f;
    f.dim = 1;
    f.prec = bits;
    f.rhs = {Complex::i_unit(bits) * Poly::variable(0, 1, bits)};
    IntegratorOptions opts;
    opts.tol = Real::of(1e-35, bits);
    Complex y0 = Complex::of(0.7, -0.2, bits);
    auto traj = integrate_real(f, {y0}, Real::zero(bits), Real::pi(bits), opts, bits);
    CHECK(dabs(abs(traj.final_state()[0] + y0)) < 1e-33);
}

TEST_CASE("taylor path: conjugate path + conjugate seed gives bitwise conjugate") {
    prec_t bits = 192;
    // d(y)/dx = (x^2 + 0.3) y, transported over a quarter arc
    PolyField f;
    f.dim = 2; // x, y
    f.prec = bits;
    Poly x = Poly::variable(0, 2, bits);
    Poly y = Poly::variable(1, 2, bits);
    f.rhs = {Poly(2, bits), (x * x + Poly::constant(Complex::of(0.3, 0, bits), 2)) * y};

    ComplexPath path;
    Complex a = Complex::of(0.4, 0.0, bits);
    Complex b = Complex::of(0.0, 0.4, bits);
    path.append_arc(Complex::zero(bits), a, b, true);

    IntegratorOptions opts;
    opts.tol = Real::of(1e-30, bits);
    Complex y0 = Complex::of(0.9, 0.1, bits);
    auto t1 = integrate_path(f, {y0}, path, opts, bits);
    auto t2 = integrate_path(f, {conj(y0)}, path.conjugated(), opts, bits);
    Complex v1 = t1.final_state()[0];
    Complex v2 = t2.final_state()[0];
    CHECK(v2.re == v1.re);
    CHECK(v2.im == -v1.im);
}

TEST_CASE("taylor path: independence under homotopic deformation") {
    prec_t bits = 192;
    PolyField f;
    f.dim = 2;
    f.prec = bits;
    Poly x = Poly::variable(0, 2, bits);
    Poly y = Poly::variable(1, 2, bits);
    f.rhs = {Poly(2, bits), (x * x) * y + Poly::constant(Complex::of(0.1, 0, bits), 2)};

    Complex a = Complex::of(0.5, 0.0, bits);
    Complex b = Complex::of(0.0, 0.5, bits);
    ComplexPath p1;
    p1.append_arc(Complex::zero(bits), a, b, true);
    ComplexPath p2;
    Complex mid = Complex::of(0.45, 0.45, bits);
    p2.append_line(a, mid);
    p2.append_line(mid, b);

    IntegratorOptions opts;
    opts.tol = Real::of(1e-32, bits);
    Complex y0 = Complex::of(0.2, 0.0, bits);
    auto t1 = integrate_path(f, {y0}, p1, opts, bits);
    auto t2 = integrate_path(f, {y0}, p2, opts, bits);
    Real diff = abs(t1.final_state()[0] - t2.final_state()[0]);
    Real scale = abs(t1.final_state()[0]);
    CHECK((diff / scale).to_double() < 1e-28); // within 10*tol
}

TEST_CASE("precision monotonicity: doubling bits moves the result below 2^-bits/2") {
    auto run = [](prec_t bits) {
        PolyField f;
        f.dim = 1;
        f.prec = bits;
        Poly x = Poly::variable(0, 1, bits);
        f.rhs = {x * x - Poly::constant(Complex::one(bits), 1)};
        IntegratorOptions opts;
        opts.tol = Real::pow2(-static_cast<long>(bits) + 16, bits);
        auto traj =
            integrate_real(f, {Complex::zero(bits)}, Real::zero(bits), Real::one(bits), opts, bits);
        return traj.final_state()[0].re;
    };
    Real lo = run(128), hi = run(256);
    CHECK(dabs(lo - hi) < std::pow(2.0, -64));
}

TEST_CASE("poly: reciprocal, substitution, remap") {
    prec_t bits = 128;
    Poly x = Poly::variable(0, 2, bits);
    Poly y = Poly::variable(1, 2, bits);
    Poly p = Poly::constant(Complex::of(2, 0, bits), 2) + x + (y * y);
    Poly r = poly_reciprocal(p, 8);
    Poly check = (p * r).truncated(8);
    Expo e0{};
    CHECK(dabs(abs(check.coeff(e0) - Complex::one(bits))) < 1e-30);
    for (const auto& [e, c] : check.terms())
        if (total_degree(e) > 0) CHECK(dabs(abs(c)) < 1e-30);

    Poly q = x * x + y;
    Poly s = q.substituted(0, y + Poly::constant(Complex::one(bits), 2));
    // (y+1)^2 + y = y^2 + 3y + 1
    Expo ey{};
    ey[1] = 1;
    CHECK(dabs(abs(s.coeff(ey) - Complex::of(3, 0, bits))) == 0.0);
}

TEST_CASE("lu_solve and least_squares recover exact data") {
    prec_t bits = 192;
    DenseMatrix A(3, 3, bits);
    int v = 1;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) A.at(i, j) = Complex::of((i == j ? 5.0 : 1.0) + v++, 0.5 * j, bits);
    std::vector<Complex> xs{Complex::of(1, 2, bits), Complex::of(-3, 0.25, bits),
                            Complex::of(0, -1, bits)};
    std::vector<Complex> b(3, Complex::zero(bits));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b[static_cast<size_t>(i)] += A.at(i, j) * xs[static_cast<size_t>(j)];
    auto sol = lu_solve(A, b);
    for (int i = 0; i < 3; ++i) CHECK(dabs(abs(sol[static_cast<size_t>(i)] - xs[static_cast<size_t>(i)])) < 1e-45);

    // overdetermined consistent system
    DenseMatrix M(6, 2, bits);
    std::vector<Complex> rhs(6, Complex::zero(bits));
    for (int i = 0; i < 6; ++i) {
        M.at(i, 0) = Complex::of(1, 0, bits);
        M.at(i, 1) = Complex::of(i, 0, bits);
        rhs[static_cast<size_t>(i)] = Complex::of(2.5 - 0.75 * i, 0, bits);
    }
    auto ab = least_squares(M, rhs);
    CHECK(dabs(abs(ab[0] - Complex::of(2.5, 0, bits))) < 1e-40);
    CHECK(dabs(abs(ab[1] - Complex::of(-0.75, 0, bits))) < 1e-40);
}

TEST_CASE("poly_roots finds the roots of (z-1)(z-2i)(z+3)") {
    prec_t bits = 192;
    // z^3 + (2 - 2i) z^2 + (-3 - 4i) z + ... build by multiplication
    std::vector<Complex> r{Complex::of(1, 0, bits), Complex::of(0, 2, bits), Complex::of(-3, 0, bits)};
    std::vector<Complex> c{Complex::one(bits)};
    for (const auto& root : r) {
        std::vector<Complex> nc(c.size() + 1, Complex::zero(bits));
        for (size_t i = 0; i < c.size(); ++i) {
            nc[i + 1] += c[i];
            nc[i] -= root * c[i];
        }
        c = nc;
    }
    auto roots = poly_roots(c); // c is already ascending

    REQUIRE(roots.size() == 3);
    for (const auto& want : r) {
        double best = 1e99;
        for (const auto& got : roots) best = std::min(best, dabs(abs(got - want)));
        CHECK(best < 1e-40);
    }
}

TEST_CASE("tanh_sinh quadrature: arctan integrand at 1e-30") {
    prec_t bits = 256;
    Real eps = Real::of(0.1, bits), delta = Real::of(0.5, bits);
    auto f = [&](const Real& v) {
        return Complex{Real::one(bits) / (v * v + eps * eps), Real::zero(bits)};
    };
    Complex got = tanh_sinh(f, Real::zero(bits), delta, Real::of(1e-30, bits));
    Real want = atan(delta / eps) / eps;
    CHECK(dabs(got.re - want) < 1e-28);
}

TEST_CASE("path validation") {
    prec_t bits = 128;
    ComplexPath p;
    p.append_line(Complex::of(0, 0, bits), Complex::of(1, 0, bits));
    CHECK_THROWS_AS(p.append_line(Complex::of(2, 0, bits), Complex::of(3, 0, bits)), ParameterError);
    CHECK_THROWS_AS(
        p.append_arc(Complex::zero(bits), Complex::of(1, 0, bits), Complex::of(0, 2, bits), true),
        ParameterError);
    p.append_arc(Complex::zero(bits), Complex::of(1, 0, bits), Complex::of(0, 1, bits), true);
    CHECK(p.size() == 2);
    CHECK(std::abs(p.length().to_double() - (1.0 + 3.14159265358979 / 2)) < 1e-9);
}

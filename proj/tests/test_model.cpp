#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "hopfsplit/model/charts.hpp"
#include "hopfsplit/model/equilibria.hpp"
#include "hopfsplit/model/graph_rhs.hpp"
#include "hopfsplit/model/integrals.hpp"
#include "hopfsplit/model/model_io.hpp"
#include "hopfsplit/model/normalize.hpp"
#include "hopfsplit/mp/quad.hpp"

using namespace hopfsplit;

namespace {
const PrecisionContext kCtx = make_context(std::nullopt, 1.0, 192);
double d(const Real& r) { return r.to_double(); }
double mag(const Complex& c) { return abs(c).to_double(); }

Complex rc(std::mt19937& rng, prec_t p) {
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    return Complex::of(u(rng), u(rng), p);
}
} // namespace

TEST_CASE("validate_spec: TM0 and TM1 pass, degree-2 term fails") {
    ModelSpec tm0 = materialize(RawModel::tm0(), kCtx);
    auto r0 = validate_spec(tm0);
    CHECK(r0.valid);
    CHECK(d(r0.f0) == 0.0);

    ModelSpec tm1 = materialize(RawModel::tm1(), kCtx);
    auto r1 = validate_spec(tm1);
    CHECK(r1.valid);
    CHECK(d(r1.f0) == 0.0);

    RawModel bad = RawModel::tm0();
    bad.terms.push_back({'G', 2, 0, 0, 0, "1", 0});
    auto rb = validate_spec(materialize(bad, kCtx));
    CHECK_FALSE(rb.valid);
    REQUIRE(rb.issues.size() == 1);
    CHECK(rb.issues[0].where == "G");
    CHECK(rb.issues[0].message.find("degree 2 < 3") != std::string::npos);
}

TEST_CASE("vector_field: TM0 full chart matches the closed form") {
    ModelSpec tm0 = make_valid_spec(RawModel::tm0(), kCtx);
    Complex eps = Complex::of(0.1, 0, kCtx.bits);
    auto f = vector_field(tm0, ChartId::Full, eps);
    std::mt19937 rng(7);
    for (int t = 0; t < 20; ++t) {
        Complex x = rc(rng, kCtx.bits), y = rc(rng, kCtx.bits), z = rc(rng, kCtx.bits);
        std::vector<Complex> pt{x, y, z};
        Complex fx = x * x - eps * eps + (y * y + z * z);
        Complex lin = tm0.b * (tm0.sigma * eps - x);
        CHECK(mag(f[0].evaluate(pt) - fx) < 1e-50);
        CHECK(mag(f[1].evaluate(pt) - (lin * y + z)) < 1e-50);
        CHECK(mag(f[2].evaluate(pt) - (lin * z - y)) < 1e-50);
    }
}

TEST_CASE("vector_field: TM1 scaling chart G2 is the exponent-shifted monomial") {
    ModelSpec tm1 = make_valid_spec(RawModel::tm1(), kCtx);
    // G2(x2,0,0,eps) = eps^-3 (eps x2)^3 = x2^3, checked at x2=2, eps=0.25:
    // the eps*G2 contribution to y2' is eps * 8
    auto f = vector_field(tm1, ChartId::Scaling, std::nullopt);
    // subtract the TM0 part to isolate the G2 term
    ModelSpec tm0 = make_valid_spec(RawModel::tm0(), kCtx);
    auto f0 = vector_field(tm0, ChartId::Scaling, std::nullopt);
    Poly g2term = f[1] - f0[1];
    Complex x2 = Complex::of(2, 0, kCtx.bits), eps = Complex::of(0.25, 0, kCtx.bits);
    Complex got = g2term.evaluate({x2, Complex::zero(kCtx.bits), Complex::zero(kCtx.bits), eps});
    Complex want = eps * x2 * x2 * x2; // eps * G2
    CHECK(mag(got - want) < 1e-50);
}

TEST_CASE("vector_field: TM0 reduced problem is x2^2 - 1 on the slow axis") {
    ModelSpec tm0 = make_valid_spec(RawModel::tm0(), kCtx);
    auto f = vector_field(tm0, ChartId::Scaling, std::nullopt);
    // fast form: x2' = eps (x2^2 - 1) exactly on y2 = z2 = 0
    std::mt19937 rng(11);
    for (int t = 0; t < 10; ++t) {
        Complex x2 = rc(rng, kCtx.bits), eps = rc(rng, kCtx.bits);
        Complex got = f[0].evaluate({x2, Complex::zero(kCtx.bits), Complex::zero(kCtx.bits), eps});
        CHECK(mag(got - eps * (x2 * x2 - Complex::one(kCtx.bits))) < 1e-50);
    }
}

TEST_CASE("chart_transition: scaling -> r1 example and round trips") {
    prec_t p = kCtx.bits;
    ChartPoint s{ChartId::Scaling,
                 {Complex::of(2, 0, p), Complex::of(8, 0, p), Complex::zero(p), Complex::of(0.1, 0, p)}};
    ChartPoint r = chart_transition(s, ChartId::R1, p);
    CHECK(mag(r.coords[0] - Complex::of(0.2, 0, p)) < 1e-50);  // r1 = r2 x2
    CHECK(mag(r.coords[3] - Complex::of(0.5, 0, p)) < 1e-50);  // eps1 = 1/x2
    CHECK(mag(r.coords[1] - Complex::of(2, 0, p)) < 1e-50);    // y1 = y2/x2^2
    CHECK(mag(r.coords[2]) == 0.0);

    ChartPoint back = chart_transition(r, ChartId::Scaling, p);
    for (int i = 0; i < 4; ++i) CHECK(mag(back.coords[static_cast<size_t>(i)] - s.coords[static_cast<size_t>(i)]) < 1e-50);

    ChartPoint deg{ChartId::Scaling,
                   {Complex::zero(p), Complex::of(8, 0, p), Complex::zero(p), Complex::of(0.1, 0, p)}};
    CHECK_THROWS_AS(chart_transition(deg, ChartId::R1, p), DomainError);

    // difference charts: (rho2, v2) = (0.1, 3) -> (rho1, eps1) = (0.3, 1/3)
    ChartPoint e2{ChartId::DiffEps, {Complex::of(0.1, 0, p), Complex::of(3, 0, p)}};
    ChartPoint v1 = chart_transition(e2, ChartId::DiffV1, p);
    CHECK(mag(v1.coords[0] - e2.coords[0] * e2.coords[1]) < 1e-50); // rho1 = rho2 v2 = 0.3
    CHECK(mag(v1.coords[1] * Complex::of(3, 0, p) - Complex::one(p)) < 1e-50);
    ChartPoint e2b = chart_transition(v1, ChartId::DiffEps, p);
    CHECK(mag(e2b.coords[0] - e2.coords[0]) < 1e-50);
    CHECK(mag(e2b.coords[1] - e2.coords[1]) < 1e-50);
    CHECK_THROWS_AS(chart_transition(e2, ChartId::R1, p), ParameterError);
}

TEST_CASE("chart consistency: full-chart field pushes forward to the r1 and scaling fields") {
    prec_t p = kCtx.bits;
    RawModel raw = RawModel::tm1();
    raw.terms.push_back({'F', 1, 1, 1, 0, "0.5", 0});
    raw.terms.push_back({'H', 0, 0, 1, 2, "-0.25", 0});
    ModelSpec spec = make_valid_spec(raw, kCtx);
    auto ffull = vector_field(spec, ChartId::Full, std::nullopt);
    auto fr1 = vector_field(spec, ChartId::R1, std::nullopt);
    auto fsc = vector_field(spec, ChartId::Scaling, std::nullopt);

    std::mt19937 rng(23);
    for (int t = 0; t < 40; ++t) {
        Complex x = rc(rng, p), y = rc(rng, p), z = rc(rng, p), e = rc(rng, p);
        if (mag(x) < 0.05 || mag(e) < 0.05) continue;
        std::vector<Complex> pt{x, y, z, e};
        Complex fx = ffull[0].evaluate(pt), fy = ffull[1].evaluate(pt), fz = ffull[2].evaluate(pt);

        // r1 chart: r1 = x, y1 = y/x^2, z1 = z/x^2, eps1 = eps/x
        Complex ix = Complex::one(p) / x;
        std::vector<Complex> q{x, y * ix * ix, z * ix * ix, e * ix};
        Complex dr = fr1[0].evaluate(q);
        Complex dy1 = fr1[1].evaluate(q);
        Complex dz1 = fr1[2].evaluate(q);
        Complex de1 = fr1[3].evaluate(q);
        CHECK(mag(dr - fx) < 1e-40);
        CHECK(mag(dy1 - (fy * ix * ix - 2 * (y * ix * ix * ix) * fx)) < 1e-40);
        CHECK(mag(dz1 - (fz * ix * ix - 2 * (z * ix * ix * ix) * fx)) < 1e-40);
        CHECK(mag(de1 - (-(e * ix * ix) * fx)) < 1e-40);

        // scaling chart: x2 = x/e, y2 = y/e^2, z2 = z/e^2 (same time variable)
        Complex ie = Complex::one(p) / e;
        std::vector<Complex> s{x * ie, y * ie * ie, z * ie * ie, e};
        CHECK(mag(fsc[0].evaluate(s) - fx * ie) < 1e-40);
        CHECK(mag(fsc[1].evaluate(s) - fy * ie * ie) < 1e-40);
        CHECK(mag(fsc[2].evaluate(s) - fz * ie * ie) < 1e-40);
    }
}

TEST_CASE("realness: conjugate points give conjugate field values") {
    prec_t p = kCtx.bits;
    RawModel raw = RawModel::tm1();
    raw.terms.push_back({'F', 0, 2, 1, 0, "0.125", 0});
    ModelSpec spec = make_valid_spec(raw, kCtx);
    for (ChartId chart : {ChartId::Full, ChartId::Scaling, ChartId::R1}) {
        auto f = vector_field(spec, chart, std::nullopt);
        std::mt19937 rng(31);
        for (int t = 0; t < 10; ++t) {
            std::vector<Complex> pt{rc(rng, p), rc(rng, p), rc(rng, p), rc(rng, p)};
            std::vector<Complex> pc{conj(pt[0]), conj(pt[1]), conj(pt[2]), conj(pt[3])};
            for (const auto& comp : f) {
                Complex a = comp.evaluate(pt), b = comp.evaluate(pc);
                CHECK(b.re == conj(a).re);
                CHECK(b.im == conj(a).im);
            }
        }
    }
}

TEST_CASE("graph_rhs_J examples") {
    prec_t p = kCtx.bits;
    ModelSpec tm0 = make_valid_spec(RawModel::tm0(), kCtx);
    ModelSpec tm1 = make_valid_spec(RawModel::tm1(), kCtx);

    GraphRhs j0(tm0, Complex::of(0.1, 0, p));
    Vec2 v = j0.eval(Complex::of(0.3, 0, p), Vec2::zero(p));
    CHECK(mag(v.y) == 0.0);
    CHECK(mag(v.z) == 0.0);

    GraphRhs j1(tm1, Complex::zero(p));
    Vec2 w = j1.eval(Complex::of(0.2, 0, p), Vec2::zero(p));
    // (G,H)/x^2 = (0.2^3, 0)/0.04 = (0.2, 0); cross-check numerator and
    // denominator separately at 100-bit precision
    CHECK(mag(w.y - Complex::of(0.2, 0, p)) < 1e-50);
    CHECK(mag(w.z) == 0.0);
    {
        PrecisionContext c100 = make_context(std::nullopt, 1.0, 100);
        ModelSpec t1 = make_valid_spec(RawModel::tm1(), c100);
        GraphRhs jj(t1, Complex::zero(c100.bits));
        Complex x = Complex::of(0.2, 0, c100.bits);
        Complex num = jj.Ny().evaluate({x, Complex::zero(c100.bits), Complex::zero(c100.bits)});
        Complex den = jj.D().evaluate({x, Complex::zero(c100.bits), Complex::zero(c100.bits)});
        CHECK(mag(num - x * x * x) < 1e-25); // 0.008
        CHECK(mag(den - x * x) < 1e-25);     // 0.04
    }

    CHECK_THROWS_AS(j0.eval(Complex::of(0.1, 0, p), Vec2::zero(p)), SingularityError);
}

TEST_CASE("find_equilibria: TM0 exact axis equilibria and eigenvalues") {
    ModelSpec tm0 = make_valid_spec(RawModel::tm0(), kCtx);
    Complex eps = Complex::of(0.1, 0, kCtx.bits);
    auto [plus, minus] = find_equilibria(tm0, eps, kCtx);
    CHECK(mag(plus.location[0] - eps) < 1e-50);
    CHECK(mag(plus.location[1]) < 1e-50);
    CHECK(mag(plus.location[2]) < 1e-50);
    CHECK(mag(minus.location[0] + eps) < 1e-50);
    CHECK(plus.unstable_dimension == 1);
    CHECK(minus.unstable_dimension == 2);
    // eigenvalues at E+: 2 eps = 0.2 and -b eps +- i
    CHECK(std::abs(d(plus.eigenvalues[0].re) - 0.2) < 1e-40);
    CHECK(std::abs(d(plus.eigenvalues[1].re) + 0.05) < 1e-40);
    CHECK(std::abs(std::abs(d(plus.eigenvalues[1].im)) - 1.0) < 1e-40);

    CHECK_THROWS_AS(find_equilibria(tm0, Complex::zero(kCtx.bits), kCtx), DomainError);
}

TEST_CASE("find_equilibria: TM1 matches the exact fiber relations") {
    PrecisionContext ctx = make_context(std::nullopt, 1.0, 200);
    ModelSpec tm1 = make_valid_spec(RawModel::tm1(), ctx);
    Complex eps = Complex::of(0.1, 0, ctx.bits);
    auto [plus, minus] = find_equilibria(tm1, eps, ctx);
    // at the equilibrium (sigma=0): z = -x^3/(1+b^2x^2), y = b x^4/(1+b^2x^2)
    Complex x = plus.location[0];
    Complex den = Complex::one(ctx.bits) + Complex{tm1.b * tm1.b, Real::zero(ctx.bits)} * x * x;
    Complex zw = -(x * x * x) / den;
    Complex yw = Complex{tm1.b, Real::zero(ctx.bits)} * x * x * x * x / den;
    CHECK(mag(plus.location[1] - yw) < 1e-55);
    CHECK(mag(plus.location[2] - zw) < 1e-55);
    CHECK(std::abs(d(plus.location[0].re) - 0.1) < 1e-4); // x = eps(1+O(eps^4))
    CHECK(std::abs(d(plus.location[1].re) - 5.0e-5) / 5.0e-5 < 0.01);
    CHECK(std::abs(d(plus.location[2].re) + 9.975e-4) / 9.975e-4 < 0.01);
    CHECK(d(plus.residual) < std::pow(2.0, -100));
    CHECK(d(minus.residual) < std::pow(2.0, -100));
}

TEST_CASE("closed_form_integrals: values and quadrature cross-check") {
    prec_t p = 256;
    Real eps = Real::of(0.1, p), delta = Real::of(0.5, p);
    Real b = Real::of(0.5, p), sigma = Real::zero(p), f0 = Real::zero(p);
    auto I = closed_form_integrals(eps, delta, b, sigma, f0);
    // I_arctan = -(1/eps) arctan(delta/eps) = -10 arctan(5) = -13.7340076694...
    Real want = -(atan(delta / eps) / eps);
    CHECK(d(abs(I.i_arctan - want)) == 0.0);
    CHECK(std::abs(d(I.i_arctan) + 13.73400766945016) < 1e-12);
    CHECK(mag(I.i_f0log) == 0.0); // F0 = 0
    CHECK(mag(I.i_sigma) == 0.0); // sigma = 0

    // quadrature oracle for the nonzero pieces with generic parameters
    Real f02 = Real::of(0.75, p), sig2 = Real::of(0.3, p);
    auto J = closed_form_integrals(eps, delta, b, sig2, f02);
    Real qtol = Real::of(1e-25, p);
    auto arctan_term = [&](const Real& v) {
        return Complex{Real::one(p) / (v * v + eps * eps), Real::zero(p)};
    };
    Complex q1 = -tanh_sinh(arctan_term, Real::zero(p), delta, qtol);
    CHECK(d(abs(q1.re - J.i_arctan)) < 1e-20);
    // int_delta^0 -F0 i v^3/(v^2+eps^2)^2 dv = + int_0^delta F0 i v^3/(...)^2 dv
    auto f0_term = [&](const Real& v) {
        Real num = v * v * v;
        Real dd = (v * v + eps * eps) * (v * v + eps * eps);
        return Complex{Real::zero(p), f02 * num / dd};
    };
    Complex q2 = tanh_sinh(f0_term, Real::zero(p), delta, qtol);
    CHECK(d(abs(q2 - J.i_f0log)) < 1e-20);

    CHECK_THROWS_AS(closed_form_integrals(delta, eps, b, sigma, f0), DomainError);
}

TEST_CASE("normalize_general_unfolding: identity, alpha0 division, removable cubic") {
    PrecisionContext ctx = make_context(std::nullopt, 1.0, 192);
    Real sigma = Real::zero(ctx.bits);

    // already in normal form -> fixed point
    GeneralUnfolding id;
    id.exps.push_back({3, 0, 0, 0, 0});
    id.coeffs.push_back("0.5");
    id.targets.push_back('G');
    auto n1 = normalize_general_unfolding(id, sigma, 6, ctx);
    CHECK(d(abs(n1.b - Real::of(0.5, ctx.bits))) < 1e-50);
    CHECK(d(abs(n1.a - Real::one(ctx.bits))) < 1e-50);
    Expo g3{};
    g3[UX] = 3;
    CHECK(mag(n1.G5.coeff(g3) - Complex::of(0.5, 0, ctx.bits)) < 1e-50);
    CHECK(n1.F5.is_zero());
    CHECK(n1.H5.is_zero());

    // alpha0 = 2: unit rotation restored; linearization eigenvalues +-i at origin
    GeneralUnfolding a02;
    a02.alpha0 = "2";
    auto n2 = normalize_general_unfolding(a02, sigma, 6, ctx);
    // y' = ... + z with coefficient exactly 1, z' = ... - y
    auto f = vector_field(n2.spec, ChartId::Full, Complex::zero(ctx.bits));
    std::vector<Complex> origin{Complex::zero(ctx.bits), Complex::zero(ctx.bits),
                                Complex::zero(ctx.bits)};
    // d(y')/dz = 1, d(z')/dy = -1, all other linear entries 0 at the origin
    CHECK(mag(f[1].derivative(VZ).evaluate(origin) - Complex::one(ctx.bits)) < 1e-50);
    CHECK(mag(f[2].derivative(VY).evaluate(origin) + Complex::one(ctx.bits)) < 1e-50);
    CHECK(mag(f[1].derivative(VY).evaluate(origin)) < 1e-50);
    CHECK(mag(f[0].derivative(VX).evaluate(origin)) < 1e-50);

    // F_{1,2,0} = 1: the x mu^2 term must be gone through degree D
    GeneralUnfolding sh;
    sh.exps.push_back({1, 0, 0, 2, 0});
    sh.coeffs.push_back("1");
    sh.targets.push_back('F');
    auto n3 = normalize_general_unfolding(sh, sigma, 6, ctx);
    Expo xmu2{};
    xmu2[UX] = 1;
    xmu2[UMU] = 2;
    CHECK(mag(n3.F5.coeff(xmu2)) < 1e-40);
    // and the other removable cubics stay absent
    for (auto [i, m, n] : {std::tuple{1, 0, 2}, {1, 1, 1}, {2, 1, 0}, {2, 0, 1}}) {
        Expo e{};
        e[UX] = static_cast<uint8_t>(i);
        e[UMU] = static_cast<uint8_t>(m);
        e[UNU] = static_cast<uint8_t>(n);
        CHECK(mag(n3.F5.coeff(e)) < 1e-40);
    }
    // pure-parameter terms absorbed into mu
    for (auto [m, n] : {std::pair{2, 0}, {0, 2}, {1, 1}, {3, 0}}) {
        Expo e{};
        e[UMU] = static_cast<uint8_t>(m);
        e[UNU] = static_cast<uint8_t>(n);
        CHECK(mag(n3.F5.coeff(e)) < 1e-40);
    }

    GeneralUnfolding bad;
    bad.alpha0 = "0";
    CHECK_THROWS_AS(normalize_general_unfolding(bad, sigma, 6, ctx), ModelAssumptionError);
}

TEST_CASE("model config parser") {
    std::istringstream ok(R"(# test model
a 1
b 0.5
sigma 0
degree 6
G: 1 x^3
F: -0.25 x y^2
)");
    RawModel m = parse_model(ok);
    CHECK(m.terms.size() == 2);
    CHECK(m.terms[0].target == 'G');
    CHECK(m.terms[1].i == 1);
    CHECK(m.terms[1].j == 2);
    ModelSpec spec = make_valid_spec(m, kCtx);
    CHECK(validate_spec(spec).valid);

    std::istringstream bad("G: 1 x^2\n");
    try {
        parse_model(bad);
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
        CHECK(std::string(e.what()).find("degree 2 < 3") != std::string::npos);
    }

    std::istringstream r2(format_model(m));
    RawModel m2 = parse_model(r2);
    CHECK(m2.terms.size() == m.terms.size());
    CHECK(m2.b == m.b);
}

TEST_CASE("r1_field_rescaled: exact drivers and small remainder") {
    ModelSpec tm1 = make_valid_spec(RawModel::tm1(), kCtx);
    auto rf = r1_field_rescaled(tm1, 10);
    prec_t p = kCtx.bits;
    // driver r1' = r1^2 (1 - eps1^2) for F0 = 0
    std::mt19937 rng(5);
    for (int t = 0; t < 10; ++t) {
        Complex r1 = rc(rng, p), e1 = rc(rng, p);
        Complex want = r1 * r1 * (Complex::one(p) - e1 * e1);
        CHECK(mag(rf.rhs[0].evaluate({r1, Complex::zero(p), Complex::zero(p), e1}) - want) < 1e-45);
    }
    // the remainder norm is a raw coefficient magnitude of the dropped tail;
    // the evaluated agreement below is the operative accuracy statement
    CHECK(rf.remainder_norm.is_finite());

    // rescaled field equals (1 - eps1^2 + r1 F0)/E times the raw field, to
    // truncation order, at a small sample point
    auto raw = vector_field(tm1, ChartId::R1, std::nullopt);
    Complex r1 = Complex::of(0.05, 0.01, p), y1 = Complex::of(0.02, -0.01, p),
            z1 = Complex::of(-0.015, 0.03, p), e1 = Complex::of(0.04, 0, p);
    std::vector<Complex> q{r1, y1, z1, e1};
    Complex E = Complex::one(p) - e1 * e1 + r1 * r1 * (y1 * y1 + z1 * z1) + r1 * Complex::one(p);
    // E for TM1: G contributes to the y-equation, not to E; F = 0 so
    // E = 1 - eps1^2 + a r1^2 (y1^2+z1^2)
    E = Complex::one(p) - e1 * e1 + r1 * r1 * (y1 * y1 + z1 * z1);
    Complex lead = Complex::one(p) - e1 * e1;
    Complex factor = lead / E;
    for (int i = 1; i < 3; ++i) {
        Complex want = raw[static_cast<size_t>(i)].evaluate(q) * factor;
        Complex got = rf.rhs[static_cast<size_t>(i)].evaluate(q);
        CHECK(mag(got - want) < 1e-14); // truncated at degree 10
    }
}

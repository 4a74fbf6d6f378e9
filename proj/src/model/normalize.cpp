#include "hopfsplit/model/normalize.hpp"

namespace hopfsplit {

namespace {

Poly var5(int v, prec_t p) { return Poly::variable(v, 5, p); }

Complex coeff_of(const Poly& q, int i, int j, int k, int m, int n) {
    Expo e{};
    e[UX] = static_cast<uint8_t>(i);
    e[UY] = static_cast<uint8_t>(j);
    e[UZ] = static_cast<uint8_t>(k);
    e[UMU] = static_cast<uint8_t>(m);
    e[UNU] = static_cast<uint8_t>(n);
    return q.coeff(e);
}

// drop coefficients at or below the numerical floor, reporting the largest
Poly floor_drop(const Poly& q, const Real& floor, Real& dropped) {
    Poly r(q.nvars(), q.prec());
    for (const auto& [e, c] : q.terms()) {
        if (abs(c) <= floor) {
            dropped = max(dropped, abs(c));
            continue;
        }
        r.add_term(e, c);
    }
    return r;
}

} // namespace

NormalizedUnfolding normalize_general_unfolding(const GeneralUnfolding& raw, const Real& sigma,
                                                int degree, const PrecisionContext& ctx) {
    prec_t p = ctx.bits;
    const int D = degree;
    const int DW = D + 2; // working degree; final truncation to D
    auto C = [&](const std::string& s) { return Complex{Real::from_string(s, p), Real::zero(p)}; };
    Complex a0 = C(raw.alpha0), a1 = C(raw.alpha1), a2 = C(raw.alpha2), a3 = C(raw.alpha3);
    Complex b1 = C(raw.beta1), g2 = C(raw.gamma2), g3 = C(raw.gamma3), g4 = C(raw.gamma4),
            g5 = C(raw.gamma5);
    if (a0.is_zero())
        throw ModelAssumptionError("normalize_general_unfolding: alpha0 = 0 violates the "
                                   "normal-form hypothesis");

    Poly x = var5(UX, p), y = var5(UY, p), z = var5(UZ, p), mu = var5(UMU, p), nu = var5(UNU, p);
    Poly one5 = Poly::constant(Complex::one(p), 5);

    Poly F(5, p), G(5, p), H(5, p);
    for (size_t t = 0; t < raw.exps.size(); ++t) {
        Expo e{};
        for (int v = 0; v < 5; ++v)
            e[static_cast<size_t>(v)] = static_cast<uint8_t>(raw.exps[t][static_cast<size_t>(v)]);
        if (total_degree(e) < 3)
            throw ParameterError("normalize_general_unfolding: perturbation term below third order");
        char target = t < raw.targets.size() ? raw.targets[t] : raw.targets_default;
        Complex c = C(raw.coeffs.at(t));
        if (target == 'F') F.add_term(e, c);
        else if (target == 'G') G.add_term(e, c);
        else if (target == 'H') H.add_term(e, c);
        else throw ParameterError("normalize_general_unfolding: unknown target");
    }

    Poly A = Poly::constant(a0, 5) + a1 * nu + a2 * mu + a3 * x;
    Poly fx = x * x - mu + g3 * (mu * mu) + g4 * (nu * nu) + g5 * (mu * nu) +
              g2 * (y * y + z * z) + F;
    Poly fy = (nu - b1 * x) * y + z * A + G;
    Poly fz = (nu - b1 * x) * z - y * A + H;

    NormalizedUnfolding out{Real::zero(p), Real::zero(p), Poly(5, p), Poly(5, p), Poly(5, p),
                            Real::zero(p), Real::zero(p), Real::zero(p), D,
                            ModelSpec{Real::zero(p), Real::zero(p), sigma, Poly(4, p), Poly(4, p),
                                      Poly(4, p), Real::of(0.1, p), D, p}};

    // (i) time division
    Poly recip = poly_reciprocal(A, DW);
    out.time_division_remainder = (A * recip - one5).tail(DW).max_coeff_abs();
    fx = (fx * recip).truncated(DW);
    fy = (fy * recip).truncated(DW);
    fz = (fz * recip).truncated(DW);

    // scale (x,y,z,nu) by a0 and mu by a0^2, divide components by a0; this
    // restores unit coefficients on x^2, -mu and the rotation
    Complex ia0 = Complex::one(p) / a0;
    auto rescale = [&](const Poly& q) {
        Poly s = q.substituted(UX, a0 * x, DW);
        s = s.substituted(UY, a0 * y, DW);
        s = s.substituted(UZ, a0 * z, DW);
        s = s.substituted(UMU, (a0 * a0) * mu, DW);
        s = s.substituted(UNU, a0 * nu, DW);
        return (ia0 * s).truncated(DW);
    };
    fx = rescale(fx);
    fy = rescale(fy);
    fz = rescale(fz);

    // (ii-a) kill the x mu and x nu quadratics of the x-equation by an
    // x-shift linear in the parameters (completing the square; the jacobian
    // of this shift is 1, so no time factor appears)
    {
        Complex c1 = coeff_of(fx, 1, 0, 0, 1, 0);
        Complex c2 = coeff_of(fx, 1, 0, 0, 0, 1);
        Real half = Real::of(0.5, p);
        Poly shift = x - (half * c1) * mu - (half * c2) * nu;
        fx = fx.substituted(UX, shift, DW);
        fy = fy.substituted(UX, shift, DW);
        fz = fz.substituted(UX, shift, DW);
    }

    // (ii-b) kill the five removable cubic axis terms of F by the quadratic
    // parameter-dependent shift; its x-jacobian enters the x-equation
    {
        Complex f120 = coeff_of(fx, 1, 0, 0, 2, 0);
        Complex f102 = coeff_of(fx, 1, 0, 0, 0, 2);
        Complex f111 = coeff_of(fx, 1, 0, 0, 1, 1);
        Complex f210 = coeff_of(fx, 2, 0, 0, 1, 0);
        Complex f201 = coeff_of(fx, 2, 0, 0, 0, 1);
        Real half = Real::of(0.5, p);
        Poly shift = x - (half * f120) * (mu * mu) - (half * f102) * (nu * nu) -
                     (half * f111) * (mu * nu) - f210 * (x * mu) - f201 * (x * nu);
        Poly dxdxt = one5 - f210 * mu - f201 * nu;
        Poly dxdxt_recip = poly_reciprocal(dxdxt, DW);
        out.shift_remainder = (dxdxt * dxdxt_recip - one5).tail(DW).max_coeff_abs();
        fx = (fx.substituted(UX, shift, DW) * dxdxt_recip).truncated(DW);
        fy = fy.substituted(UX, shift, DW);
        fz = fz.substituted(UX, shift, DW);
    }

    // (iii-a) nu-redefinition: the pure-parameter y-coefficient of the
    // y-equation must be exactly nu
    {
        Poly lambda(5, p); // y-coefficient at x=0 beyond nu itself
        for (const auto& [e, c] : fy.terms())
            if (e[UX] == 0 && e[UY] == 1 && e[UZ] == 0 && !(e[UMU] == 0 && e[UNU] == 1)) {
                Expo pe{};
                pe[UMU] = e[UMU];
                pe[UNU] = e[UNU];
                lambda.add_term(pe, c);
            }
        if (!lambda.is_zero()) {
            // nu_hat = nu + lambda(mu,nu); invert by fixed point
            Poly nu_of = nu;
            for (int it = 0; it <= D; ++it)
                nu_of = (nu - lambda.substituted(UNU, nu_of, DW)).truncated(DW);
            fx = fx.substituted(UNU, nu_of, DW);
            fy = fy.substituted(UNU, nu_of, DW);
            fz = fz.substituted(UNU, nu_of, DW);
        }
    }

    // (iii-b) absorb every pure-parameter term of the x-equation into mu:
    // x'|_(x,y,z)=0 = -mu + q(mu,nu); mu_tilde = mu - q, inverted by fixed point
    {
        Poly qq(5, p); // fx restricted to x=y=z=0, plus mu: the absorbable part
        for (const auto& [e, c] : fx.terms())
            if (e[UX] == 0 && e[UY] == 0 && e[UZ] == 0) qq.add_term(e, c);
        qq += mu;
        Poly mu_of = mu;
        for (int it = 0; it <= D; ++it)
            mu_of = (mu + qq.substituted(UMU, mu_of, DW)).truncated(DW);
        Poly inv_check = mu_of - qq.substituted(UMU, mu_of, DW);
        out.parameter_change_remainder = (inv_check - mu).max_coeff_abs();
        fx = fx.substituted(UMU, mu_of, DW);
        fy = fy.substituted(UMU, mu_of, DW);
        fz = fz.substituted(UMU, mu_of, DW);
    }

    fx = fx.truncated(D);
    fy = fy.truncated(D);
    fz = fz.truncated(D);

    // extract normal-form data
    Complex bcoef = -coeff_of(fy, 1, 1, 0, 0, 0);
    Complex acoef = coeff_of(fx, 0, 2, 0, 0, 0);
    out.a = acoef.re;
    out.b = bcoef.re;

    Real floor = ctx.residual_floor();
    Real dropped = Real::zero(p);
    out.F5 = floor_drop(fx - (x * x) + mu - acoef * (y * y + z * z), floor, dropped);
    out.G5 = floor_drop(fy - ((nu - bcoef * x) * y + z), floor, dropped);
    out.H5 = floor_drop(fz - ((nu - bcoef * x) * z - y), floor, dropped);
    out.parameter_change_remainder = max(out.parameter_change_remainder, dropped);

    // wedge substitution mu = eps^2, nu = eps b sigma
    auto to4 = [&](const Poly& q) {
        Poly r(4, p);
        Complex bs = bcoef * Complex{sigma, Real::zero(p)};
        for (const auto& [e, c] : q.terms()) {
            Expo ne{};
            ne[VX] = e[UX];
            ne[VY] = e[UY];
            ne[VZ] = e[UZ];
            int le = 2 * e[UMU] + e[UNU];
            if (le > 255) throw OverflowError("normalize: eps exponent overflow");
            ne[VEPS] = static_cast<uint8_t>(le);
            Complex cc = c;
            for (int j = 0; j < e[UNU]; ++j) cc = cc * bs;
            r.add_term(ne, cc);
        }
        return r;
    };
    out.spec.a = out.a;
    out.spec.b = out.b;
    out.spec.sigma = sigma;
    out.spec.F = to4(out.F5);
    out.spec.G = to4(out.G5);
    out.spec.H = to4(out.H5);
    out.spec.degree = D;
    out.spec.prec = p;
    out.degree = D;
    return out;
}

} // namespace hopfsplit

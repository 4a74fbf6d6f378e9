#include "hopfsplit/model/charts.hpp"

namespace hopfsplit {

namespace {

// W(x,y,z,eps) -> eps^d * W_2 with W_2 = eps^-3 W(eps x2, eps^2 y2, eps^2 z2, eps):
// pure exponent shift (i,j,k,l) -> x2^i y2^j z2^k eps^(i+2j+2k+l-3+d)
Poly scaling_shift(const Poly& W, int d) {
    return W.exponent_shifted([d](const Expo& e) {
        std::array<int, kMaxVars> ne{};
        ne[VX] = e[VX];
        ne[VY] = e[VY];
        ne[VZ] = e[VZ];
        ne[VEPS] = e[VX] + 2 * e[VY] + 2 * e[VZ] + e[VEPS] - 3 + d;
        return ne;
    });
}

// W -> r1^d * W_1 with W_1 = r1^-3 W(r1, r1^2 y1, r1^2 z1, r1 eps1):
// (i,j,k,l) -> r1^(i+2j+2k+l-3+d) y1^j z1^k eps1^l
Poly r1_shift(const Poly& W, int d) {
    return W.exponent_shifted([d](const Expo& e) {
        std::array<int, kMaxVars> ne{};
        ne[VX] = e[VX] + 2 * e[VY] + 2 * e[VZ] + e[VEPS] - 3 + d;
        ne[VY] = e[VY];
        ne[VZ] = e[VZ];
        ne[VEPS] = e[VEPS];
        return ne;
    });
}

std::vector<Poly> substitute_eps(std::vector<Poly> comps, const Complex& eps) {
    Poly val = Poly::constant(eps, 4);
    for (auto& c : comps) c = c.substituted(VEPS, val);
    return comps;
}

} // namespace

Poly scaling_w2(const Poly& W) { return scaling_shift(W, 0); }
Poly r1_w1(const Poly& W) { return r1_shift(W, 0); }

std::vector<Poly> vector_field(const ModelSpec& spec, ChartId chart, std::optional<Complex> eps) {
    prec_t p = spec.prec;
    Complex one = Complex::one(p);
    Poly x = Poly::variable(VX, 4, p);
    Poly y = Poly::variable(VY, 4, p);
    Poly z = Poly::variable(VZ, 4, p);
    Poly e = Poly::variable(VEPS, 4, p);
    Complex A{spec.a, Real::zero(p)};
    Complex B{spec.b, Real::zero(p)};
    Complex S{spec.sigma, Real::zero(p)};

    switch (chart) {
        case ChartId::Full: {
            Poly fx = x * x - e * e + A * (y * y + z * z) + spec.F;
            Poly lin = B * (S * e - x); // b(sigma eps - x)
            Poly fy = lin * y + z + spec.G;
            Poly fz = lin * z - y + spec.H;
            std::vector<Poly> f{fx, fy, fz};
            return eps ? substitute_eps(std::move(f), *eps) : f;
        }
        case ChartId::Scaling: {
            // fast form: x2' = eps(x2^2 - 1) + a eps^3 (y2^2+z2^2) + eps^2 F2
            Poly fx = e * (x * x - Poly::constant(one, 4)) + A * (e * e * e) * (y * y + z * z) +
                      scaling_shift(spec.F, 2);
            Poly lin = (B * e) * (S * Poly::constant(one, 4) - x); // eps b (sigma - x2)
            Poly fy = lin * y + z + scaling_shift(spec.G, 1);
            Poly fz = lin * z - y + scaling_shift(spec.H, 1);
            std::vector<Poly> f{fx, fy, fz};
            return eps ? substitute_eps(std::move(f), *eps) : f;
        }
        case ChartId::R1: {
            if (eps)
                throw ParameterError(
                    "vector_field: the r1 chart has eps = r1*eps1 built in; a numeric eps is undefined");
            // vars: (r1, y1, z1, eps1) reusing slots (VX,VY,VZ,VEPS)
            Poly E = Poly::constant(one, 4) - e * e + A * (x * x) * (y * y + z * z) +
                     x * r1_shift(spec.F, 0);
            Poly lin = (B * x) * (S * e - Poly::constant(one, 4)); // r1 b (sigma eps1 - 1)
            Poly fr = x * x * E;
            Poly fy = lin * y + z + x * r1_shift(spec.G, 0) - Complex::of(2, 0, p) * (x * E * y);
            Poly fz = lin * z - y + x * r1_shift(spec.H, 0) - Complex::of(2, 0, p) * (x * E * z);
            Poly fe = -(x * e * E);
            return {fr, fy, fz, fe};
        }
        case ChartId::DiffV1:
        case ChartId::DiffEps:
        case ChartId::DiffV3:
            throw ParameterError("vector_field: difference charts carry no flow field");
    }
    throw ParameterError("vector_field: unknown chart");
}

PolyField flow_field(const ModelSpec& spec, ChartId chart, const Complex& eps) {
    PolyField f;
    f.dim = 3;
    f.prec = spec.prec;
    f.rhs = vector_field(spec, chart, eps);
    return f;
}

PolyField r1_field(const ModelSpec& spec) {
    PolyField f;
    f.dim = 4;
    f.prec = spec.prec;
    f.rhs = vector_field(spec, ChartId::R1, std::nullopt);
    return f;
}

RescaledR1Field r1_field_rescaled(const ModelSpec& spec, int deg) {
    prec_t p = spec.prec;
    Complex one = Complex::one(p);
    Poly x = Poly::variable(VX, 4, p);
    Poly y = Poly::variable(VY, 4, p);
    Poly z = Poly::variable(VZ, 4, p);
    Poly e = Poly::variable(VEPS, 4, p);
    Complex A{spec.a, Real::zero(p)};
    Complex F0{spec.F0(), Real::zero(p)};

    Poly E = Poly::constant(one, 4) - e * e + A * (x * x) * (y * y + z * z) +
             x * r1_shift(spec.F, 0);
    Poly lead = Poly::constant(one, 4) - e * e + F0 * x; // 1 - eps1^2 + r1 F0
    Poly recip = poly_reciprocal(E, deg);
    Poly factor = (lead * recip).truncated(deg);

    auto field = vector_field(spec, ChartId::R1, std::nullopt);
    RescaledR1Field out{{}, Real::zero(p), deg};
    // the scalar drivers are exact by construction
    out.rhs.push_back(x * x * lead);
    out.rhs.push_back((field[1] * factor).truncated(deg));
    out.rhs.push_back((field[2] * factor).truncated(deg));
    out.rhs.push_back(-(x * e * lead));
    // honest truncation indicator: || E * recip - 1 || beyond the cutoff
    Poly resid = E * recip - Poly::constant(one, 4);
    out.remainder_norm = resid.max_coeff_abs();
    return out;
}

namespace {

Complex get(const ChartPoint& p, size_t i) { return p.coords.at(i); }

void require_nonzero(const Complex& c, const char* what) {
    if (c.is_zero()) throw DomainError(std::string("chart_transition: ") + what +
                                       " vanishes; point outside the overlap domain");
}

bool atlas3(ChartId c) {
    return c == ChartId::Full || c == ChartId::Scaling || c == ChartId::R1;
}

} // namespace

ChartPoint chart_transition(const ChartPoint& p, ChartId to, prec_t bits) {
    if (p.chart == to) return p;
    if (atlas3(p.chart) != atlas3(to))
        throw ParameterError("chart_transition: charts belong to different blowups");

    if (atlas3(p.chart)) {
        if (p.coords.size() != 4) throw ParameterError("chart_transition: need 4 coordinates");
        // route everything through the Full chart
        Complex x = Complex::zero(bits), y = x, z = x, e = x;
        switch (p.chart) {
            case ChartId::Full:
                x = get(p, 0); y = get(p, 1); z = get(p, 2); e = get(p, 3);
                break;
            case ChartId::Scaling: {
                Complex x2 = get(p, 0), y2 = get(p, 1), z2 = get(p, 2), r2 = get(p, 3);
                x = r2 * x2;
                y = r2 * r2 * y2;
                z = r2 * r2 * z2;
                e = r2;
                break;
            }
            case ChartId::R1: {
                Complex r1 = get(p, 0), y1 = get(p, 1), z1 = get(p, 2), e1 = get(p, 3);
                x = r1;
                y = r1 * r1 * y1;
                z = r1 * r1 * z1;
                e = r1 * e1;
                break;
            }
            default: break;
        }
        switch (to) {
            case ChartId::Full:
                return {to, {x, y, z, e}};
            case ChartId::Scaling: {
                require_nonzero(e, "eps (= r2)");
                Complex inv = Complex::one(e.prec()) / e;
                return {to, {x * inv, y * inv * inv, z * inv * inv, e}};
            }
            case ChartId::R1: {
                require_nonzero(x, "x (= r1, and x2 in the source chart)");
                Complex inv = Complex::one(x.prec()) / x;
                return {to, {x, y * inv * inv, z * inv * inv, e * inv}};
            }
            default: break;
        }
    } else {
        if (p.coords.size() != 2) throw ParameterError("chart_transition: need 2 coordinates");
        // through (v, eps)
        Complex v(Real::zero(bits)), e(Real::zero(bits));
        switch (p.chart) {
            case ChartId::DiffV1: v = get(p, 0); e = get(p, 0) * get(p, 1); break;
            case ChartId::DiffEps: v = get(p, 0) * get(p, 1); e = get(p, 0); break;
            case ChartId::DiffV3: v = -get(p, 0); e = get(p, 0) * get(p, 1); break;
            default: break;
        }
        switch (to) {
            case ChartId::DiffV1: {
                require_nonzero(v, "v (rho1)");
                return {to, {v, e / v}};
            }
            case ChartId::DiffEps: {
                require_nonzero(e, "eps (rho2)");
                return {to, {e, v / e}};
            }
            case ChartId::DiffV3: {
                require_nonzero(v, "v (rho3)");
                return {to, {-v, e / (-v)}};
            }
            default: break;
        }
    }
    throw ParameterError("chart_transition: unsupported chart pair");
}

} // namespace hopfsplit

#include "hopfsplit/model/model_spec.hpp"

#include <sstream>

namespace hopfsplit {

ModelSpec materialize(const RawModel& raw, const PrecisionContext& ctx) {
    ModelSpec s{Real::from_string(raw.a, ctx.bits),
                Real::from_string(raw.b, ctx.bits),
                Real::from_string(raw.sigma, ctx.bits),
                Poly(4, ctx.bits),
                Poly(4, ctx.bits),
                Poly(4, ctx.bits),
                Real::of(raw.delta_margin, ctx.bits),
                raw.degree,
                ctx.bits};
    for (const auto& t : raw.terms) {
        Expo e{};
        e[VX] = static_cast<uint8_t>(t.i);
        e[VY] = static_cast<uint8_t>(t.j);
        e[VZ] = static_cast<uint8_t>(t.k);
        e[VEPS] = static_cast<uint8_t>(t.l);
        Complex c{Real::from_string(t.coeff, ctx.bits), Real::zero(ctx.bits)};
        switch (t.target) {
            case 'F': s.F.add_term(e, c); break;
            case 'G': s.G.add_term(e, c); break;
            case 'H': s.H.add_term(e, c); break;
            default: throw ParameterError("materialize: unknown perturbation target");
        }
    }
    return s;
}

namespace {

void check_third_order(const Poly& W, const char* name, ValidationReport& rep) {
    for (const auto& [e, c] : W.terms()) {
        if (total_degree(e) < 3) {
            std::ostringstream os;
            os << "term (" << int(e[VX]) << "," << int(e[VY]) << "," << int(e[VZ]) << ","
               << int(e[VEPS]) << ") has degree " << total_degree(e) << " < 3";
            rep.issues.push_back({name, os.str()});
            rep.valid = false;
        }
        if (!c.im.is_zero()) {
            rep.issues.push_back({name, "coefficient has nonzero imaginary part"});
            rep.valid = false;
        }
    }
}

} // namespace

ValidationReport validate_spec(const ModelSpec& spec) {
    ValidationReport rep;
    if (!(spec.b > 0)) {
        rep.issues.push_back({"b", "b must be positive"});
        rep.valid = false;
    }
    Real lim = 1 - spec.delta_margin;
    if (!(abs(spec.sigma) < lim)) {
        rep.issues.push_back({"sigma", "sigma must lie in (-1+delta, 1-delta)"});
        rep.valid = false;
    }
    check_third_order(spec.F, "F", rep);
    check_third_order(spec.G, "G", rep);
    check_third_order(spec.H, "H", rep);

    // F restricted to the axis must start F0 x^3: no x^2 eps, x eps^2, eps^3
    for (auto [i, l] : {std::pair{2, 1}, std::pair{1, 2}, std::pair{0, 3}}) {
        Expo e{};
        e[VX] = static_cast<uint8_t>(i);
        e[VEPS] = static_cast<uint8_t>(l);
        if (!spec.F.coeff(e).is_zero()) {
            std::ostringstream os;
            os << "axis cubic term x^" << i << " eps^" << l
               << " violates the normal-form expansion of F";
            rep.issues.push_back({"F", os.str()});
            rep.valid = false;
        }
    }
    rep.f0 = spec.F0();
    return rep;
}

ModelSpec make_valid_spec(const RawModel& raw, const PrecisionContext& ctx) {
    ModelSpec s = materialize(raw, ctx);
    ValidationReport rep = validate_spec(s);
    if (!rep.valid) {
        std::string msg = "invalid model:";
        for (const auto& iss : rep.issues) msg += " [" + iss.where + "] " + iss.message + ";";
        throw ParameterError(msg);
    }
    return s;
}

} // namespace hopfsplit

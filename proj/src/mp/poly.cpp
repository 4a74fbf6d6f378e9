#include "hopfsplit/mp/poly.hpp"

#include <sstream>

namespace hopfsplit {

Poly poly_reciprocal(const Poly& p, int max_deg) {
    Complex c0 = p.coeff(Expo{});
    if (c0.is_zero())
        throw ParameterError("poly_reciprocal: constant term is zero");
    Complex inv0 = Complex::one(c0.prec()) / c0;
    // q = 1 - p/c0 has zero constant term; 1/p = inv0 * sum q^k
    Poly q = Poly::constant(Complex::one(p.prec()), p.nvars()) - (inv0 * p);
    q = q.truncated(max_deg);
    Poly acc = Poly::constant(inv0, p.nvars());
    Poly pw = Poly::constant(inv0, p.nvars());
    for (int k = 1; k <= max_deg; ++k) {
        pw = (pw * q).truncated(max_deg);
        if (pw.is_zero()) break;
        acc += pw;
    }
    return acc;
}

std::string Poly::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.str(8);
        for (size_t i = 0; i < names.size(); ++i)
            if (e[i] > 0) {
                os << "*" << names[i];
                if (e[i] > 1) os << "^" << static_cast<int>(e[i]);
            }
    }
    return os.str();
}

} // namespace hopfsplit

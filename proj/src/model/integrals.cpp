#include "hopfsplit/model/integrals.hpp"

namespace hopfsplit {

ClosedFormIntegrals closed_form_integrals(const Real& epsilon, const Real& delta, const Real& b,
                                          const Real& sigma, const Real& f0) {
    if (!(epsilon > 0) || !(epsilon < delta))
        throw DomainError("closed_form_integrals: need 0 < eps < delta");
    prec_t p = join_prec(epsilon, delta);
    Real at = atan(delta / epsilon);
    Real e2 = epsilon * epsilon;
    Real d2e2 = delta * delta + e2;
    Real lg = log(e2 / d2e2);

    ClosedFormIntegrals out{Real(p), Complex::zero(p), Real(p), Complex::zero(p)};
    out.i_arctan = -(at / epsilon);
    Real half_f0 = f0 / 2;
    out.i_f0log = Complex{Real::zero(p), -(half_f0 * (lg + 1 - e2 / d2e2))};
    out.i_blog = -(b / 2) * lg;
    out.i_sigma = Complex{Real::zero(p), b * sigma * at};
    return out;
}

} // namespace hopfsplit

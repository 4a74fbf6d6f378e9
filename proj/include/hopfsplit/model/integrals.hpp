#pragma once

// Closed forms of the four integrable terms of the difference exponent
//
//   int_delta^0 (-1 + F0 i v^3/(v^2+eps^2) + b v + i eps b sigma) / (-v^2-eps^2) dv
//
// split term by term:
//   I_arctan = -arctan(delta/eps)/eps
//   I_F0log  = -(F0 i/2) (log(eps^2/(delta^2+eps^2)) + 1 - eps^2/(eps^2+delta^2))
//   I_blog   = -(b/2)  log(eps^2/(delta^2+eps^2))
//   I_sigma  = i b sigma arctan(delta/eps)

#include "hopfsplit/model/model_spec.hpp"

namespace hopfsplit {

struct ClosedFormIntegrals {
    Real i_arctan;
    Complex i_f0log;
    Real i_blog;
    Complex i_sigma;

    Complex total() const {
        return Complex{i_arctan + i_blog, Real::zero(i_arctan.prec())} + i_f0log + i_sigma;
    }
};

ClosedFormIntegrals closed_form_integrals(const Real& epsilon, const Real& delta, const Real& b,
                                          const Real& sigma, const Real& f0);

} // namespace hopfsplit

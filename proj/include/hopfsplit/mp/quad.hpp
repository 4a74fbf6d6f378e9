#pragma once

// tanh-sinh quadrature at working precision. Converges exponentially for
// integrands analytic in a neighborhood of the (open) interval, which covers
// every integrand in this project; level doubling stops when two successive
// refinements agree to the requested tolerance.

#include <functional>

#include "hopfsplit/mp/complex.hpp"
#include "hopfsplit/mp/errors.hpp"

namespace hopfsplit {

// integral of f over [a,b], a<b real, f complex-valued
Complex tanh_sinh(const std::function<Complex(const Real&)>& f, const Real& a, const Real& b,
                  const Real& tol, int max_level = 12);

} // namespace hopfsplit

#pragma once

// Precision sizing. The splitting at the section scales like
// exp(-pi/(2*eps)), so a context derived for eps must resolve that
// magnitude with at least 128 guard bits on top of a safety multiple.

#include <optional>

#include "hopfsplit/mp/complex.hpp"

namespace hopfsplit {

struct PrecisionContext {
    prec_t bits = 64;
    double safety_factor = 1.0;
    std::optional<double> derived_for_epsilon;

    Real real(double x) const { return Real::of(x, bits); }
    Real real(long x) const { return Real::of(x, bits); }
    Real real(const std::string& s) const { return Real::from_string(s, bits); }
    Complex cplx(double re, double im) const { return Complex::of(re, im, bits); }
    // 2^(-bits/2): the default "numerically zero" threshold for residuals.
    Real residual_floor() const { return Real::pow2(-static_cast<long>(bits / 2), bits); }
};

// bits = ceil((pi/(2 eps)) * log2 e) * safety + 128, floored at min_bits and 64.
// The inner ceil is evaluated in multiprecision so the integer is exact.
PrecisionContext make_context(std::optional<double> epsilon, double safety = 1.0,
                              long min_bits = 64);

} // namespace hopfsplit

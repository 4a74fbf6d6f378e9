#pragma once

// Order-by-order solver for linear 2-vector coefficient recursions
//
//   M(m) psi_m + forcing_m + rule(m, psi_0..psi_{m-1}) = 0,
//
// M(m) = omega_shift + shift(m). This is the single backbone behind the
// Gevrey recursion, the eps-expansion and the double-series rows: each
// caller encodes its lower-order data in `rule`.

#include <functional>
#include <optional>

#include "hopfsplit/mp/series.hpp"

namespace hopfsplit {

using RecursionRule = std::function<Vec2(int order, const std::vector<Vec2>& solved)>;
using MatrixShift = std::function<Mat2(int order)>;

Vec2Series series_solve_linear(const Mat2& omega_shift, const Vec2Series& forcing,
                               const RecursionRule& rule = nullptr,
                               const MatrixShift& shift = nullptr);

} // namespace hopfsplit

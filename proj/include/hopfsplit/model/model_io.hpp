#pragma once

// Line-oriented model configuration.
//
//   # comment
//   a 1
//   b 0.5
//   sigma 0
//   degree 6
//   delta_margin 0.1
//   G: 1 x^3
//   F: -0.25 x^1 y^2
//
// Perturbation lines are `W: <coeff> [x^i] [y^j] [z^k] [eps^l]`; omitted
// factors mean exponent 0 and a bare name means exponent 1. Terms of total
// degree < 3 are rejected with their line number.

#include <istream>
#include <string>

#include "hopfsplit/model/model_spec.hpp"

namespace hopfsplit {

RawModel parse_model(std::istream& in);
RawModel parse_model_file(const std::string& path);
// Inverse of parse_model, used by emit for reproducibility manifests.
std::string format_model(const RawModel& raw);

} // namespace hopfsplit

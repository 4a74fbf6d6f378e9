#pragma once

// Reduction of the general co-dimension two unfolding
//
//   x' = x^2 - mu + g3 mu^2 + g4 nu^2 + g5 mu nu + g2 (y^2+z^2) + F
//   y' = (nu - b1 x) y + z (a0 + a1 nu + a2 mu + a3 x) + G
//   z' = (nu - b1 x) z - y (a0 + a1 nu + a2 mu + a3 x) + H
//
// to the normal form used everywhere else, through total degree D:
//   (i)   time division by (a0 + a1 nu + a2 mu + a3 x) as a truncated
//         power-series reciprocal,
//   (ii)  the x-shift removing the five removable cubic axis terms
//         x mu^2, x nu^2, x mu nu, x^2 mu, x^2 nu of F,
//   (iii) the parameter change (mu,nu) -> (mu~,nu) absorbing every pure
//         parameter term of the x-equation.
// All three truncations report their dropped-coefficient norms.

#include "hopfsplit/model/model_spec.hpp"

namespace hopfsplit {

// variable order of all 5-variable polynomials here
enum Var5 : int { UX = 0, UY = 1, UZ = 2, UMU = 3, UNU = 4 };

struct GeneralUnfolding {
    // linear/rotation data
    std::string alpha0 = "1", alpha1 = "0", alpha2 = "0", alpha3 = "0";
    std::string beta1 = "0.5"; // -> b
    std::string gamma2 = "1";  // -> a
    std::string gamma3 = "0", gamma4 = "0", gamma5 = "0";
    // cubic+ perturbations in (x,y,z,mu,nu)
    std::vector<std::array<int, 5>> exps; // exponents per term (x,y,z,mu,nu)
    std::vector<std::string> coeffs;      // decimal coefficients, same length
    char targets_default = 'F';
    std::vector<char> targets; // 'F','G','H' per term
};

struct NormalizedUnfolding {
    Real a, b;
    Poly F5, G5, H5; // normalized perturbations in (x,y,z,mu,nu), degree <= D
    // truncation diagnostics (max coefficient magnitudes dropped)
    Real time_division_remainder;
    Real shift_remainder;
    Real parameter_change_remainder;
    int degree;
    // the model spec on the wedge mu = eps^2, nu = eps b sigma
    ModelSpec spec;
};

NormalizedUnfolding normalize_general_unfolding(const GeneralUnfolding& raw, const Real& sigma,
                                                int degree, const PrecisionContext& ctx);

} // namespace hopfsplit

#pragma once

// The eps-expansion of the perturbed manifolds in the scaling chart:
// the unique formal solution (y2,z2) = sum_{a>=1} m_a(x2) eps^a of
//
//   (Omega + eps b(sigma - x2) Id) m + eps (G2,H2)(x2,m,eps)
//     = eps (x2^2 - 1 + a eps^2 |m|^2 + eps F2) m'
//
// with polynomial coefficients m_a. Each order is solved by zero-filling the
// unknown and reading the residual, which isolates Omega m_a exactly.

#include "hopfsplit/model/model_spec.hpp"
#include "hopfsplit/mp/poly1.hpp"
#include "hopfsplit/mp/vec.hpp"

namespace hopfsplit {

struct EpsSeries {
    int order = 0; // N: highest eps power
    // m[a-1] = (y-polynomial, z-polynomial) in x2, for a = 1..N
    std::vector<std::pair<Poly1, Poly1>> m;
    prec_t prec = 64;

    Vec2 partial_sum(const Complex& x2, const Complex& eps, int upto) const;
    int degree(int a) const {
        return std::max(m[static_cast<size_t>(a - 1)].first.degree(),
                        m[static_cast<size_t>(a - 1)].second.degree());
    }
};

EpsSeries eps_series(const ModelSpec& spec, int N);

// Residual of the invariance equation for the partial sum: the largest
// coefficient magnitude over all (x2-degree, eps-order <= N) slots, scaled.
Real eps_series_residual(const ModelSpec& spec, const EpsSeries& s);

// m1_a(eps1) = m2_a(1/eps1) eps1^(a+2), polynomial whenever deg m2_a <= a+2;
// otherwise the conversion is impossible and reported, never guessed.
std::vector<std::pair<Poly1, Poly1>> m1_series_from_m2(const EpsSeries& s);

} // namespace hopfsplit

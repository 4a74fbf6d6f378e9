#pragma once

// The unperturbed-manifold series: the unique formal solution
// (y,z) = sum_{a>=3} psi_a x^a of the eps = 0 invariance relation
//
//   (x^2 + a(y^2+z^2) + F(x,y,z,0)) d(y,z)/dx = (Omega - b x Id)(y,z) + (G,H)
//
// solved order by order (Omega is invertible at every order). The
// coefficients are real 2-vectors and generically grow like Gevrey-1,
// |psi_a| <= c1 c2^a a!.

#include "hopfsplit/model/model_spec.hpp"
#include "hopfsplit/mp/vec.hpp"

namespace hopfsplit {

struct GevreySeries {
    int order = 0;              // N: highest computed power
    std::vector<Vec2> coeff;    // index 0..N; entries below 3 are zero
    prec_t prec = 64;
    // Gevrey-1 growth claim fitted from the computed orders (0 when the
    // series is identically zero)
    Real c1 = Real::zero(64);
    Real c2 = Real::zero(64);

    Vec2 at(int k) const { return coeff[static_cast<size_t>(k)]; }
    int first_nonzero() const;
    // partial sum through order M at a point
    Vec2 partial_sum(const Complex& x, int M) const;
    // least-term truncation: index and value of the optimal partial sum,
    // plus the least term magnitude (the superasymptotic error scale)
    struct Optimal {
        int index;
        Vec2 value;
        Real least_term;
    };
    Optimal optimal_truncation(const Complex& x) const;
};

GevreySeries unperturbed_series(const ModelSpec& spec, int N);

// Residual of the defining relation through order N via an independent
// truncated-series substitution (not the recursion path). Returns the largest
// coefficient magnitude of the residual, which must sit at the roundoff floor.
Real unperturbed_residual(const ModelSpec& spec, const GevreySeries& s);

} // namespace hopfsplit

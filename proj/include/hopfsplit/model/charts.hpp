#pragma once

// Blowup charts and exact transitions. Two separate atlases:
//
//  Full (x,y,z; eps)  <->  Scaling (x2,y2,z2; r2=eps)  <->  R1 (r1,y1,z1,eps1)
//
// for the phase-space blowup x = r xbreve, y = r^2 ybreve, z = r^2 zbreve,
// eps = r epsbreve, and the real 2D charts
//
//  DiffV1 (rho1, eps1)   v = rho1,   eps = rho1 eps1
//  DiffEps (rho2, v2)    v = rho2 v2, eps = rho2
//  DiffV3 (rho3, eps3)   v = -rho3,  eps = rho3 eps3
//
// for the (v, eps)-blowup used along the imaginary axis. Rescaled W-terms are
// pure exponent shifts on the polynomial data; nothing ever divides.

#include <optional>

#include "hopfsplit/model/model_spec.hpp"
#include "hopfsplit/mp/taylor.hpp"

namespace hopfsplit {

enum class ChartId { Full, Scaling, R1, DiffV1, DiffEps, DiffV3 };

struct ChartPoint {
    ChartId chart;
    // Full: (x,y,z,eps); Scaling: (x2,y2,z2,r2); R1: (r1,y1,z1,eps1);
    // DiffV1: (rho1,eps1); DiffEps: (rho2,v2); DiffV3: (rho3,eps3)
    std::vector<Complex> coords;
};

// The exact polynomial vector field in a chart. For Full/Scaling a numeric
// eps gives a 3-variable field ready for the integrator; eps == nullopt keeps
// eps as the fourth variable (components still 3). R1 is always the full
// 4-variable system of the r1-chart pull-back (with eps1' included) and
// rejects a numeric eps. Diff charts carry no vector field here.
std::vector<Poly> vector_field(const ModelSpec& spec, ChartId chart,
                               std::optional<Complex> eps);

// PolyField wrapper for the 3D flows (numeric eps required).
PolyField flow_field(const ModelSpec& spec, ChartId chart, const Complex& eps);
// PolyField for the R1-chart 4D system.
PolyField r1_field(const ModelSpec& spec);

// Time-rescaled r1-chart system: right-hand side of the r1 chart multiplied
// by (1 - eps1^2 + r1 F0) / E, E = 1 - eps1^2 + a r1^2(y1^2+z1^2) + r1 F1,
// expanded as a polynomial through total degree `deg`. The scalar driver
// becomes exactly r1^2 (1 - eps1^2 + r1 F0). Returns the truncated field and
// the max-coefficient norm of the dropped remainder.
struct RescaledR1Field {
    std::vector<Poly> rhs; // vars (r1,y1,z1,eps1)
    Real remainder_norm;
    int degree;
};
RescaledR1Field r1_field_rescaled(const ModelSpec& spec, int deg);

// Exact algebraic chart transitions; round-trips compose to the identity on
// the overlap domains. Throws DomainError when the overlap condition fails
// and ParameterError when the two charts belong to different atlases.
ChartPoint chart_transition(const ChartPoint& p, ChartId to, prec_t bits);

// Raw rescaled perturbations, as polynomials over the chart variables:
// W2(x2,y2,z2,eps) = eps^-3 W(eps x2, eps^2 y2, eps^2 z2, eps) and
// W1(r1,y1,z1,eps1) = r1^-3 W(r1, r1^2 y1, r1^2 z1, r1 eps1).
Poly scaling_w2(const Poly& W);
Poly r1_w1(const Poly& W);

} // namespace hopfsplit

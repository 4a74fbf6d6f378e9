#pragma once

// The invariance-equation right-hand side for manifold graphs (y,z) = m(x):
//
//   d(y,z)/dx = J(x,y,z,eps) = [ (Omega + b(sigma eps - x) Id)(y,z)^T + (G,H)^T ]
//               / ( x^2 - eps^2 + a(y^2+z^2) + F )
//
// J is rational; for Taylor transport the denominator is closed off with an
// auxiliary state w = 1/D, whose derivative along solutions is polynomial:
//
//   w' = -w^2 D_x - w^3 (D_y Ny + D_z Nz).
//
// eval/jacobian work at points; augmented_field feeds integrate_path with
// variable order (x, y, z, w).

#include "hopfsplit/model/model_spec.hpp"
#include "hopfsplit/mp/vec.hpp"
#include "hopfsplit/mp/taylor.hpp"

namespace hopfsplit {

class GraphRhs {
  public:
    GraphRhs(const ModelSpec& spec, const Complex& eps);

    // J at a point; throws SingularityError when the denominator vanishes.
    Vec2 eval(const Complex& x, const Vec2& yz) const;
    Complex denominator(const Complex& x, const Vec2& yz) const;
    // dJ/d(y,z), the exact Jacobian of the fiber map (midpoint-system input)
    Mat2 jacobian_yz(const Complex& x, const Vec2& yz) const;

    // polynomial transport system in (x, y, z, w); w0 must be 1/D(start)
    const PolyField& augmented_field() const { return field_; }

    // numerator/denominator polynomials in (x,y,z); eps folded in
    const Poly& Ny() const { return ny_; }
    const Poly& Nz() const { return nz_; }
    const Poly& D() const { return d_; }

    prec_t prec() const { return prec_; }

  private:
    prec_t prec_;
    Poly ny_, nz_, d_;
    PolyField field_;
};

// Twin transport system for two graphs sharing one x: variable order
// (x, y+, z+, w+, y-, z-, w-). Both copies are the same GraphRhs polynomials
// with states relabelled; one shared path discretization keeps the
// exponentially small difference coherent.
PolyField twin_graph_field(const GraphRhs& rhs);

} // namespace hopfsplit

#include "hopfsplit/model/graph_rhs.hpp"

namespace hopfsplit {

namespace {

// relabel variables: out var perm[i] takes in var i
Poly remap_vars(const Poly& p, const std::array<int, kMaxVars>& perm, int new_nvars, prec_t prec) {
    Poly r(new_nvars, prec);
    for (const auto& [e, c] : p.terms()) {
        Expo ne{};
        for (int v = 0; v < kMaxVars; ++v) {
            if (e[static_cast<size_t>(v)] == 0) continue;
            ne[static_cast<size_t>(perm[static_cast<size_t>(v)])] = e[static_cast<size_t>(v)];
        }
        r.add_term(ne, c);
    }
    return r;
}

} // namespace

GraphRhs::GraphRhs(const ModelSpec& spec, const Complex& eps)
    : prec_(spec.prec), ny_(4, spec.prec), nz_(4, spec.prec), d_(4, spec.prec) {
    prec_t p = spec.prec;
    Poly x = Poly::variable(VX, 4, p);
    Poly y = Poly::variable(VY, 4, p);
    Poly z = Poly::variable(VZ, 4, p);
    Complex A{spec.a, Real::zero(p)};
    Complex B{spec.b, Real::zero(p)};
    Complex S{spec.sigma, Real::zero(p)};
    Poly epsP = Poly::constant(eps, 4);

    Poly lin = B * (S * epsP - x);           // b(sigma eps - x)
    Poly G = spec.G.substituted(VEPS, epsP); // eps folded numerically
    Poly H = spec.H.substituted(VEPS, epsP);
    Poly F = spec.F.substituted(VEPS, epsP);

    ny_ = lin * y + z + G;
    nz_ = lin * z - y + H;
    d_ = x * x - Poly::constant(eps * eps, 4) + A * (y * y + z * z) + F;

    // w' = -w^2 D_x - w^3 (D_y Ny + D_z Nz), vars (x,y,z,w) with w in the eps slot
    Poly w = Poly::variable(VEPS, 4, p);
    Poly dwdx = -(w * w * d_.derivative(VX)) -
                w * w * w * (d_.derivative(VY) * ny_ + d_.derivative(VZ) * nz_);

    field_.dim = 4;
    field_.prec = p;
    field_.rhs = {Poly(4, p), ny_ * w, nz_ * w, dwdx};
}

Complex GraphRhs::denominator(const Complex& x, const Vec2& yz) const {
    return d_.evaluate({x, yz.y, yz.z});
}

Vec2 GraphRhs::eval(const Complex& x, const Vec2& yz) const {
    Complex D = denominator(x, yz);
    if (D.is_zero())
        throw SingularityError("graph rhs: denominator zero at x = " + x.str(8));
    std::vector<Complex> pt{x, yz.y, yz.z};
    return {ny_.evaluate(pt) / D, nz_.evaluate(pt) / D};
}

Mat2 GraphRhs::jacobian_yz(const Complex& x, const Vec2& yz) const {
    std::vector<Complex> pt{x, yz.y, yz.z};
    Complex D = d_.evaluate(pt);
    if (D.is_zero())
        throw SingularityError("graph rhs jacobian: denominator zero at x = " + x.str(8));
    Complex Ny = ny_.evaluate(pt), Nz = nz_.evaluate(pt);
    Complex Dy = d_.derivative(VY).evaluate(pt), Dz = d_.derivative(VZ).evaluate(pt);
    Complex Nyy = ny_.derivative(VY).evaluate(pt), Nyz = ny_.derivative(VZ).evaluate(pt);
    Complex Nzy = nz_.derivative(VY).evaluate(pt), Nzz = nz_.derivative(VZ).evaluate(pt);
    Complex D2 = D * D;
    return {Nyy / D - Ny * Dy / D2, Nyz / D - Ny * Dz / D2,
            Nzy / D - Nz * Dy / D2, Nzz / D - Nz * Dz / D2};
}

PolyField twin_graph_field(const GraphRhs& rhs) {
    prec_t p = rhs.prec();
    const PolyField& one = rhs.augmented_field();
    PolyField f;
    f.dim = 7;
    f.prec = p;
    f.rhs.resize(7, Poly(7, p));
    // plus copy: (x,y,z,w) -> vars (0,1,2,3); minus copy -> vars (0,4,5,6)
    std::array<int, kMaxVars> plus{0, 1, 2, 3, 0, 0, 0, 0};
    std::array<int, kMaxVars> minus{0, 4, 5, 6, 0, 0, 0, 0};
    for (int i = 1; i < 4; ++i) {
        f.rhs[static_cast<size_t>(i)] = remap_vars(one.rhs[static_cast<size_t>(i)], plus, 7, p);
        f.rhs[static_cast<size_t>(i + 3)] = remap_vars(one.rhs[static_cast<size_t>(i)], minus, 7, p);
    }
    return f;
}

} // namespace hopfsplit

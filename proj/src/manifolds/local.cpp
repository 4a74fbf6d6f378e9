#include "hopfsplit/manifolds/manifolds.hpp"

#include <map>

#include "hopfsplit/model/charts.hpp"
#include "hopfsplit/mp/linalg.hpp"

namespace hopfsplit {

namespace {

// Incremental composer for f(gamma(s)): per-monomial partial-product jets
// over the three gamma component series, recomputable index by index (the
// inputs gain a new coefficient each order).
class Composer {
  public:
    Composer(const std::vector<Poly>& comps, const std::vector<std::vector<Complex>>* inputs,
             int order, prec_t p)
        : inputs_(inputs), order_(order), p_(p) {
        comp_terms_.resize(comps.size());
        std::map<std::vector<int>, int> index;
        for (size_t ci = 0; ci < comps.size(); ++ci) {
            for (const auto& [e, c] : comps[ci].terms()) {
                std::vector<int> mono;
                for (int v = 0; v < kMaxVars; ++v)
                    for (int q = 0; q < e[static_cast<size_t>(v)]; ++q) mono.push_back(v);
                int node = -1;
                std::vector<int> prefix;
                for (int v : mono) {
                    prefix.push_back(v);
                    auto it = index.find(prefix);
                    if (it == index.end()) {
                        nodes_.push_back({node, v,
                                          std::vector<Complex>(static_cast<size_t>(order_) + 1,
                                                               Complex::zero(p_))});
                        node = static_cast<int>(nodes_.size()) - 1;
                        index[prefix] = node;
                    } else {
                        node = it->second;
                    }
                }
                comp_terms_[ci].push_back({c, node});
            }
        }
    }

    // (re)compute all node jets at index k from the current inputs
    void refresh(int k) {
        for (auto& n : nodes_) {
            const auto& var = (*inputs_)[static_cast<size_t>(n.var)];
            Complex acc = Complex::zero(p_);
            if (n.parent < 0) {
                acc = var[static_cast<size_t>(k)];
            } else {
                const auto& par = nodes_[static_cast<size_t>(n.parent)].jet;
                for (int q = 0; q <= k; ++q)
                    acc += par[static_cast<size_t>(q)] * var[static_cast<size_t>(k - q)];
            }
            n.jet[static_cast<size_t>(k)] = acc;
        }
    }

    Complex component_at(size_t ci, int k) const {
        Complex acc = Complex::zero(p_);
        for (const auto& t : comp_terms_[ci]) {
            if (t.node < 0) {
                if (k == 0) acc += t.coeff;
            } else {
                acc += t.coeff * nodes_[static_cast<size_t>(t.node)].jet[static_cast<size_t>(k)];
            }
        }
        return acc;
    }

  private:
    struct Node {
        int parent;
        int var;
        std::vector<Complex> jet;
    };
    struct TermRef {
        Complex coeff;
        int node;
    };
    const std::vector<std::vector<Complex>>* inputs_;
    int order_;
    prec_t p_;
    std::vector<Node> nodes_;
    std::vector<std::vector<TermRef>> comp_terms_;
};

Vec3 cross3(const std::array<Complex, 3>& a, const std::array<Complex, 3>& b) {
    return {{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}};
}

} // namespace

Vec3 LocalManifold::at(const Complex& s) const {
    Vec3 acc = gamma.back();
    for (int k = static_cast<int>(gamma.size()) - 2; k >= 0; --k)
        acc = s * acc + gamma[static_cast<size_t>(k)];
    return acc;
}

Complex LocalManifold::x_component(const Complex& s) const { return at(s)[0]; }

Complex LocalManifold::solve_x(const Complex& x, const Complex& s0) const {
    Complex s = s0;
    prec_t p = x.prec();
    Real floor = Real::pow2(-static_cast<long>(p) + 24, p);
    for (int it = 0; it < 80; ++it) {
        // value and derivative of gamma_x at s by Horner
        Complex v = gamma.back()[0];
        Complex dv = Complex::zero(p);
        for (int k = static_cast<int>(gamma.size()) - 2; k >= 0; --k) {
            dv = s * dv + v;
            v = s * v + gamma[static_cast<size_t>(k)][0];
        }
        Complex err = v - x;
        if (abs(err) < floor * (1 + abs(x))) return s;
        s = s - err / dv;
    }
    throw ConvergenceError("LocalManifold::solve_x: Newton stalled");
}

LocalManifold local_parametrize(const ModelSpec& spec, const Equilibrium& eq, Direction dir,
                                int K, const PrecisionContext& ctx) {
    if (K < 1) throw ParameterError("local_parametrize: need K >= 1");
    prec_t p = ctx.bits;
    auto comps = vector_field(spec, ChartId::Full, eq.epsilon);

    // branch eigenvalue: the (near-)real simple one with the requested sign
    Complex lambda = eq.eigenvalues[0];
    Real imfloor = ctx.residual_floor();
    if (abs(lambda.im) > imfloor * (1 + abs(lambda.re)))
        throw SpectrumError("local_parametrize: leading eigenvalue is not real");
    if ((dir == Direction::Unstable && !(lambda.re > 0)) ||
        (dir == Direction::Stable && !(lambda.re < 0)))
        throw SpectrumError("local_parametrize: no real eigenvalue of the requested stability");
    Real gap = min(abs(lambda - eq.eigenvalues[1]), abs(lambda - eq.eigenvalues[2]));
    if (gap < imfloor) throw SpectrumError("local_parametrize: eigenvalue not simple");

    auto J = full_field_jacobian(spec, eq.epsilon, eq.location);
    // null vector of (J - lambda I) from the two largest row cross products
    std::array<std::array<Complex, 3>, 3> Jl = J;
    for (int i = 0; i < 3; ++i) Jl[static_cast<size_t>(i)][static_cast<size_t>(i)] -= lambda;
    Vec3 v01 = cross3(Jl[0], Jl[1]);
    Vec3 v02 = cross3(Jl[0], Jl[2]);
    Vec3 v12 = cross3(Jl[1], Jl[2]);
    Vec3 v = v01;
    if (abs(v02) > abs(v)) v = v02;
    if (abs(v12) > abs(v)) v = v12;
    Real nv = abs(v);
    if (nv.is_zero()) throw SpectrumError("local_parametrize: defective eigenvector");
    Complex inv{Real::one(p) / nv, Real::zero(p)};
    Vec3 g1 = inv * v;
    // orient: positive x-component (falls back to y for axis-degenerate cases)
    Complex lead = abs(g1[0].re) > Real::of(1e-30, p) ? g1[0] : g1[1];
    if (lead.re.sign() < 0) g1 = Complex{-Real::one(p), Real::zero(p)} * g1;

    LocalManifold lm;
    lm.base = eq;
    lm.lambda = lambda;
    lm.gamma.assign(static_cast<size_t>(K) + 1, Vec3::zero(p));
    lm.gamma[0] = eq.location;
    lm.gamma[1] = g1;

    std::vector<std::vector<Complex>> g(3, std::vector<Complex>(static_cast<size_t>(K) + 1,
                                                                Complex::zero(p)));
    for (int i = 0; i < 3; ++i) {
        g[static_cast<size_t>(i)][0] = eq.location[i];
        g[static_cast<size_t>(i)][1] = g1[i];
    }
    Composer comp(comps, &g, K, p);
    comp.refresh(0);
    comp.refresh(1);

    for (int k = 2; k <= K; ++k) {
        comp.refresh(k); // with gamma_k = 0: yields the known part N_k
        std::vector<Complex> rhs(3, Complex::zero(p));
        for (int i = 0; i < 3; ++i) rhs[static_cast<size_t>(i)] = -comp.component_at(static_cast<size_t>(i), k);
        DenseMatrix A(3, 3, p);
        Complex klam = Real::of(static_cast<long>(k), p) * lambda;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                A.at(i, j) = J[static_cast<size_t>(i)][static_cast<size_t>(j)];
                if (i == j) A.at(i, j) -= klam;
            }
        std::vector<Complex> gk;
        try {
            gk = lu_solve(std::move(A), std::move(rhs));
        } catch (const ConditioningError&) {
            throw ResonanceError("local_parametrize: resonance k*lambda in spectrum at k = " +
                                     std::to_string(k),
                                 k);
        }
        lm.gamma[static_cast<size_t>(k)] = Vec3{{gk[0], gk[1], gk[2]}};
        for (int i = 0; i < 3; ++i) g[static_cast<size_t>(i)][static_cast<size_t>(k)] = gk[static_cast<size_t>(i)];
        comp.refresh(k); // correct the caches now that gamma_k is known
    }

    // conjugacy residual: f(gamma(s)) - lambda s gamma'(s), orders 0..K
    Real worst = Real::zero(p);
    for (int k = 0; k <= K; ++k) {
        Real scale = Real::one(p) + abs(lm.gamma[static_cast<size_t>(k)]) *
                                        (1 + abs(lambda) * Real::of(static_cast<long>(k), p));
        Vec3 fk{{comp.component_at(0, k), comp.component_at(1, k), comp.component_at(2, k)}};
        Complex kl = Real::of(static_cast<long>(k), p) * lambda;
        Vec3 res = fk - kl * lm.gamma[static_cast<size_t>(k)];
        worst = max(worst, abs(res) / scale);
    }
    lm.conjugacy_residual = worst;
    if (worst > ctx.residual_floor())
        throw InternalConsistencyError("local_parametrize: conjugacy residual above the floor");
    return lm;
}

} // namespace hopfsplit

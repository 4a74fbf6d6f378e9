#include "hopfsplit/mp/taylor.hpp"

#include <map>
#include <sstream>

namespace hopfsplit {

namespace {

int order_from_tol(const Real& tol, int cap) {
    // K ~ -ln(tol)/2 + 6: standard high-precision Taylor practice
    double lt = log(tol).to_double();
    int k = static_cast<int>(-lt / 2.0) + 6;
    if (k < 8) k = 8;
    if (k > cap) k = cap;
    return k;
}

std::string cplx_brief(const Complex& z) { return z.str(6); }

} // namespace

TaylorStepper::TaylorStepper(const PolyField& field, IntegratorOptions opts, prec_t bits)
    : dim_(field.dim), bits_(bits), opts_(std::move(opts)) {
    if (field.dim <= 0 || static_cast<int>(field.rhs.size()) != field.dim)
        throw ParameterError("TaylorStepper: field dimension mismatch");
    order_ = order_from_tol(opts_.tol, opts_.order_cap);
    build_plan(field);
    jets_.assign(static_cast<size_t>(dim_),
                 std::vector<Complex>(static_cast<size_t>(order_) + 1, Complex::zero(bits_)));
}

void TaylorStepper::build_plan(const PolyField& field) {
    // Shared trie of monomial prefixes: a monomial x0^2 x3 becomes the chain
    // [0] -> [0,0] -> [0,0,3]; each node's jet is parent_jet (x) var_jet.
    std::map<std::vector<int>, int> index;
    auto intern = [&](const std::vector<int>& mono) -> int {
        if (mono.empty()) return -1;
        auto it = index.find(mono);
        if (it != index.end()) return it->second;
        std::vector<int> prefix = mono;
        prefix.pop_back();
        int par = -1;
        if (!prefix.empty()) {
            auto pit = index.find(prefix);
            if (pit == index.end()) {
                // build recursively (depth is tiny)
                std::vector<std::vector<int>> chain;
                std::vector<int> cur = prefix;
                while (!cur.empty() && index.find(cur) == index.end()) {
                    chain.push_back(cur);
                    cur.pop_back();
                }
                for (auto rit = chain.rbegin(); rit != chain.rend(); ++rit) {
                    std::vector<int> pp = *rit;
                    int v = pp.back();
                    pp.pop_back();
                    int parent = pp.empty() ? -1 : index.at(pp);
                    nodes_.push_back({parent, v, {}});
                    index[*rit] = static_cast<int>(nodes_.size()) - 1;
                }
            }
            par = index.at(prefix);
        }
        nodes_.push_back({par, mono.back(), {}});
        int id = static_cast<int>(nodes_.size()) - 1;
        index[mono] = id;
        return id;
    };

    comp_terms_.assign(static_cast<size_t>(dim_), {});
    for (int i = 0; i < dim_; ++i) {
        for (const auto& [e, c] : field.rhs[static_cast<size_t>(i)].terms()) {
            std::vector<int> mono;
            for (int v = 0; v < kMaxVars; ++v)
                for (int k = 0; k < e[static_cast<size_t>(v)]; ++k) mono.push_back(v);
            if (!mono.empty() && mono.back() >= dim_)
                throw ParameterError("TaylorStepper: term references unknown variable");
            comp_terms_[static_cast<size_t>(i)].push_back({c, intern(mono)});
        }
    }
}

void TaylorStepper::compute_jet(const std::vector<Complex>& y) {
    const Complex czero = Complex::zero(bits_);
    for (int i = 0; i < dim_; ++i) {
        auto& j = jets_[static_cast<size_t>(i)];
        j.assign(static_cast<size_t>(order_) + 1, czero);
        j[0] = y[static_cast<size_t>(i)];
    }
    for (auto& n : nodes_) n.jet.assign(static_cast<size_t>(order_), czero);

    // order-by-order: knowing state coefficients 0..n, extend monomial jets to
    // index n, then state coefficient n+1 = rhs_n / (n+1)
    for (int n = 0; n + 1 <= order_; ++n) {
        for (auto& node : nodes_) {
            const std::vector<Complex>& var_jet = jets_[static_cast<size_t>(node.var)];
            Complex acc = czero;
            if (node.parent < 0) {
                acc = var_jet[static_cast<size_t>(n)];
            } else {
                const auto& par = nodes_[static_cast<size_t>(node.parent)].jet;
                for (int q = 0; q <= n; ++q) acc += par[static_cast<size_t>(q)] * var_jet[static_cast<size_t>(n - q)];
            }
            node.jet[static_cast<size_t>(n)] = acc;
        }
        Real inv = Real::one(bits_) / static_cast<long>(n + 1);
        for (int i = 0; i < dim_; ++i) {
            Complex acc = czero;
            for (const auto& t : comp_terms_[static_cast<size_t>(i)]) {
                if (t.node < 0) {
                    if (n == 0) acc += t.coeff;
                } else {
                    acc += t.coeff * nodes_[static_cast<size_t>(t.node)].jet[static_cast<size_t>(n)];
                }
            }
            jets_[static_cast<size_t>(i)][static_cast<size_t>(n + 1)] = inv * acc;
        }
    }
    if (order_ > stats_.max_order_used) stats_.max_order_used = order_;
}

std::vector<Complex> TaylorStepper::eval_last_jet(const Real& h) const {
    std::vector<Complex> out(static_cast<size_t>(dim_), Complex::zero(bits_));
    for (int i = 0; i < dim_; ++i) {
        const auto& j = jets_[static_cast<size_t>(i)];
        Complex acc = j[static_cast<size_t>(order_)];
        for (int k = order_ - 1; k >= 0; --k) acc = h * acc + j[static_cast<size_t>(k)];
        out[static_cast<size_t>(i)] = acc;
    }
    return out;
}

Real TaylorStepper::step(std::vector<Complex>& y, const Real& h_max) {
    compute_jet(y);

    Real scale = Real::one(bits_);
    for (const auto& c : y) scale = max(scale, abs(c));
    Real target = opts_.tol * scale;

    // last-two-terms heuristic: h_k = (target/||x_k||)^(1/k) estimates the
    // radius at which the tail reaches the tolerance
    Real h = h_max;
    for (int k : {order_ - 1, order_}) {
        Real nk = Real::zero(bits_);
        for (int i = 0; i < dim_; ++i)
            nk = max(nk, abs(jets_[static_cast<size_t>(i)][static_cast<size_t>(k)]));
        if (nk.is_zero()) continue;
        Real hk = exp(log(target / nk) / static_cast<long>(k));
        hk = Real::of(opts_.radius_fraction, bits_) * hk;
        h = min(h, hk);
    }

    Real floor_h = Real::pow2(-static_cast<long>(bits_ / 2), bits_);
    while (true) {
        if (h < floor_h) {
            std::ostringstream os;
            os << "taylor step underflow near state " << cplx_brief(y.empty() ? Complex::zero(64) : y[0]);
            throw StiffnessError(os.str());
        }
        // error estimate of the truncated tail at h (4x slack: the last-two-
        // terms bound is a heuristic, not an enclosure)
        Real err = Real::zero(bits_);
        for (int k : {order_ - 1, order_}) {
            Real nk = Real::zero(bits_);
            for (int i = 0; i < dim_; ++i)
                nk = max(nk, abs(jets_[static_cast<size_t>(i)][static_cast<size_t>(k)]));
            err = err + nk * pow(h, static_cast<long>(k));
        }
        if (err <= 4 * target) break;
        stats_.rejected += 1;
        h = h / 2;
    }

    auto ynew = eval_last_jet(h);
    for (const auto& c : ynew)
        if (!c.is_finite()) throw OverflowError("taylor step produced non-finite state");
    y = std::move(ynew);
    stats_.steps += 1;
    return h;
}

Trajectory integrate_real(const PolyField& field, const std::vector<Complex>& y0, const Real& t0,
                          const Real& t1, const IntegratorOptions& opts, prec_t bits) {
    if (static_cast<int>(y0.size()) != field.dim)
        throw ParameterError("integrate_real: initial state dimension mismatch");
    Trajectory traj;
    traj.samples.emplace_back(Complex(t0), y0);
    if (t0 == t1) return traj;

    // integrate in s over [0, L] with field scaled by sign(t1-t0)
    Real span = t1 - t0;
    Real dir = Real::of(span.sign() > 0 ? 1L : -1L, bits);
    Real len = abs(span);
    PolyField f = field;
    if (dir.sign() < 0)
        for (auto& c : f.rhs) c = Complex{-Real::one(bits), Real::zero(bits)} * c;

    TaylorStepper stepper(f, opts, bits);
    std::vector<Complex> y = y0;
    Real s = Real::zero(bits);
    Real done_floor = Real::pow2(-static_cast<long>(bits) + 8, bits);
    while (len - s > done_floor) {
        Real h = stepper.step(y, len - s);
        s = s + h;
        Complex t = Complex(t0 + dir * s);
        traj.samples.emplace_back(t, y);
        if (opts.on_step) opts.on_step(s, y);
        if (stepper.stats().steps > opts.max_steps)
            throw StiffnessError("integrate_real: step budget exhausted");
    }
    traj.samples.back().first = Complex(t1);
    traj.stats = stepper.stats();
    return traj;
}

Trajectory integrate_path(const PolyField& field_in_x, const std::vector<Complex>& y0,
                          const ComplexPath& path, const IntegratorOptions& opts, prec_t bits) {
    int dim = field_in_x.dim; // includes x as variable 0
    if (static_cast<int>(y0.size()) != dim - 1)
        throw ParameterError("integrate_path: initial state dimension mismatch");
    Trajectory traj;
    if (path.empty()) throw ParameterError("integrate_path: empty path (caller must short-circuit)");
    std::vector<Complex> y = y0;
    traj.samples.emplace_back(path.start(), y);

    for (size_t si = 0; si < path.size(); ++si) {
        const PathSegment& seg = path[si];
        // x'(s): line -> constant (to-from); arc -> i*sweep*(x - center)
        Poly xdot(dim, bits);
        if (seg.kind == PathSegment::Kind::Line) {
            xdot = Poly::constant(seg.to - seg.from, dim);
        } else {
            Complex isweep{Real::zero(bits), seg.sweep};
            xdot = isweep * (Poly::variable(0, dim, bits) -
                             Poly::constant(seg.center, dim));
        }
        PolyField f;
        f.dim = dim;
        f.prec = bits;
        f.rhs.push_back(xdot);
        for (int i = 1; i < dim; ++i)
            f.rhs.push_back(field_in_x.rhs[static_cast<size_t>(i)] * xdot);

        TaylorStepper stepper(f, opts, bits);
        std::vector<Complex> st;
        st.push_back(seg.from);
        for (const auto& c : y) st.push_back(c);

        Real s = Real::zero(bits);
        Real one = Real::one(bits);
        Real done_floor = Real::pow2(-static_cast<long>(bits) + 8, bits);
        while (one - s > done_floor) {
            Real h = stepper.step(st, one - s);
            s = s + h;
            traj.samples.emplace_back(st[0], std::vector<Complex>(st.begin() + 1, st.end()));
            if (opts.on_step) opts.on_step(s, st);
            if (stepper.stats().steps > opts.max_steps)
                throw StiffnessError("integrate_path: step budget exhausted");
        }
        traj.stats.steps += stepper.stats().steps;
        traj.stats.rejected += stepper.stats().rejected;
        if (stepper.stats().max_order_used > traj.stats.max_order_used)
            traj.stats.max_order_used = stepper.stats().max_order_used;
        // snap the parameter exactly onto the segment endpoint (the states are
        // already there to within the step tolerance)
        st[0] = seg.to;
        y.assign(st.begin() + 1, st.end());
        traj.samples.back() = {seg.to, y};
    }
    return traj;
}

} // namespace hopfsplit

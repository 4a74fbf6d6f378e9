#pragma once

// Sparse multivariate polynomial over Complex, up to 8 variables. Exponent
// vectors are small fixed arrays; the term map is ordered so that iteration
// (and hence all derived arithmetic) is deterministic. This is the exact
// algebra behind chart rescalings, the normal-form reduction, PDE residual
// oracles and field linearizations.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hopfsplit/mp/complex.hpp"
#include "hopfsplit/mp/errors.hpp"

namespace hopfsplit {

constexpr int kMaxVars = 10;
using Expo = std::array<uint8_t, kMaxVars>;

inline int total_degree(const Expo& e) {
    int d = 0;
    for (uint8_t x : e) d += x;
    return d;
}

class Poly {
  public:
    explicit Poly(int nvars = 0, prec_t prec = 64) : nvars_(nvars), prec_(prec) {
        if (nvars < 0 || nvars > kMaxVars) throw ParameterError("Poly: bad variable count");
    }

    static Poly constant(const Complex& c, int nvars) {
        Poly p(nvars, c.prec());
        if (!c.is_zero()) p.terms_.emplace(Expo{}, c);
        return p;
    }
    static Poly variable(int i, int nvars, prec_t prec) {
        Poly p(nvars, prec);
        Expo e{};
        e[static_cast<size_t>(i)] = 1;
        p.terms_.emplace(e, Complex::one(prec));
        return p;
    }

    int nvars() const { return nvars_; }
    prec_t prec() const { return prec_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    int degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) {
            int t = total_degree(e);
            if (t > d) d = t;
        }
        return d;
    }

    void add_term(const Expo& e, const Complex& c) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    Complex coeff(const Expo& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Complex::zero(prec_) : it->second;
    }

    const std::map<Expo, Complex>& terms() const { return terms_; }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        Poly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
        return r;
    }
    Poly operator-() const {
        Poly r(nvars_, prec_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r(a.nvars_ > b.nvars_ ? a.nvars_ : b.nvars_, a.prec_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Expo e{};
                for (int i = 0; i < kMaxVars; ++i) {
                    int s = ea[static_cast<size_t>(i)] + eb[static_cast<size_t>(i)];
                    if (s > 255) throw OverflowError("Poly: exponent overflow");
                    e[static_cast<size_t>(i)] = static_cast<uint8_t>(s);
                }
                r.add_term(e, ca * cb);
            }
        return r;
    }
    friend Poly operator*(const Complex& s, const Poly& a) {
        Poly r(a.nvars_, a.prec_);
        if (s.is_zero()) return r;
        for (const auto& [e, c] : a.terms_) r.terms_.emplace(e, s * c);
        return r;
    }
    Poly& operator+=(const Poly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }

    Poly truncated(int max_total_degree) const {
        Poly r(nvars_, prec_);
        for (const auto& [e, c] : terms_)
            if (total_degree(e) <= max_total_degree) r.terms_.emplace(e, c);
        return r;
    }
    // drop terms whose exponent in one variable exceeds max_deg
    Poly truncated_in(int var, int max_deg) const {
        Poly r(nvars_, prec_);
        for (const auto& [e, c] : terms_)
            if (e[static_cast<size_t>(var)] <= max_deg) r.terms_.emplace(e, c);
        return r;
    }
    // the part of degree strictly above max_total_degree (remainder reporting)
    Poly tail(int max_total_degree) const {
        Poly r(nvars_, prec_);
        for (const auto& [e, c] : terms_)
            if (total_degree(e) > max_total_degree) r.terms_.emplace(e, c);
        return r;
    }

    Poly derivative(int var) const {
        Poly r(nvars_, prec_);
        for (const auto& [e, c] : terms_) {
            int k = e[static_cast<size_t>(var)];
            if (k == 0) continue;
            Expo d = e;
            d[static_cast<size_t>(var)] = static_cast<uint8_t>(k - 1);
            r.add_term(d, Real::of(static_cast<long>(k), prec_) * c);
        }
        return r;
    }

    // substitute variable -> polynomial (in the same variable set), truncating
    // the result to max_deg when max_deg >= 0
    Poly substituted(int var, const Poly& value, int max_deg = -1) const {
        Poly r(nvars_, prec_);
        for (const auto& [e, c] : terms_) {
            int k = e[static_cast<size_t>(var)];
            Expo base = e;
            base[static_cast<size_t>(var)] = 0;
            Poly t(nvars_, prec_);
            t.terms_.emplace(base, c);
            for (int j = 0; j < k; ++j) {
                t = t * value;
                if (max_deg >= 0) t = t.truncated(max_deg);
            }
            r += t;
        }
        if (max_deg >= 0) r = r.truncated(max_deg);
        return r;
    }

    // exponent bookkeeping for blowup rescalings: multiply each term by
    // prod_i var_i^(sum_j weights[i][j] * e_j + shift_i); all resulting
    // exponents must stay non-negative (checked), so nothing ever divides
    Poly exponent_shifted(const std::function<std::array<int, kMaxVars>(const Expo&)>& remap) const {
        Poly r(nvars_, prec_);
        for (const auto& [e, c] : terms_) {
            auto ne = remap(e);
            Expo out{};
            for (int i = 0; i < kMaxVars; ++i) {
                if (ne[static_cast<size_t>(i)] < 0)
                    throw InternalConsistencyError("Poly: negative exponent in rescaling");
                if (ne[static_cast<size_t>(i)] > 255) throw OverflowError("Poly: exponent overflow");
                out[static_cast<size_t>(i)] = static_cast<uint8_t>(ne[static_cast<size_t>(i)]);
            }
            r.add_term(out, c);
        }
        return r;
    }

    Complex evaluate(const std::vector<Complex>& x) const {
        Complex acc = Complex::zero(prec_);
        for (const auto& [e, c] : terms_) {
            Complex t = c;
            for (size_t i = 0; i < x.size(); ++i)
                for (int j = 0; j < e[i]; ++j) t = t * x[i];
            acc += t;
        }
        return acc;
    }

    Real max_coeff_abs() const {
        Real m = Real::zero(prec_);
        for (const auto& [e, c] : terms_) m = max(m, abs(c));
        return m;
    }

    bool coeffs_real(const Real& tol) const {
        for (const auto& [e, c] : terms_)
            if (abs(c.im) > tol) return false;
        return true;
    }

    std::string str(const std::vector<std::string>& names) const;

  private:
    int nvars_;
    prec_t prec_;
    std::map<Expo, Complex> terms_;
};

// Truncated multiplicative inverse of p = c0(1 + q), c0 != 0, via the
// geometric series, exact through total degree max_deg.
Poly poly_reciprocal(const Poly& p, int max_deg);

} // namespace hopfsplit

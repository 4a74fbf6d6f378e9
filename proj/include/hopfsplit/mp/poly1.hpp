#pragma once

// Dense univariate polynomial over Complex. Used for the x2-dependent
// coefficients of the eps-expansion and as a coefficient ring for
// truncated series.

#include <vector>

#include "hopfsplit/mp/complex.hpp"

namespace hopfsplit {

class Poly1 {
  public:
    Poly1() : prec_(64) {}
    explicit Poly1(prec_t p) : prec_(p) {}
    static Poly1 constant(const Complex& c) {
        Poly1 q(c.prec());
        q.c_.push_back(c);
        q.trim();
        return q;
    }
    static Poly1 monomial(const Complex& c, int deg) {
        Poly1 q(c.prec());
        q.c_.assign(static_cast<size_t>(deg) + 1, Complex::zero(c.prec()));
        q.c_.back() = c;
        q.trim();
        return q;
    }

    prec_t prec() const { return prec_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    bool is_zero() const { return c_.empty(); }
    Complex coeff(int k) const {
        if (k < 0 || k > degree()) return Complex::zero(prec_);
        return c_[static_cast<size_t>(k)];
    }
    void set_coeff(int k, const Complex& v) {
        if (k >= static_cast<int>(c_.size()))
            c_.resize(static_cast<size_t>(k) + 1, Complex::zero(prec_));
        c_[static_cast<size_t>(k)] = v;
        trim();
    }

    friend Poly1 operator+(const Poly1& a, const Poly1& b) {
        Poly1 r(a.prec_);
        size_t n = a.c_.size() > b.c_.size() ? a.c_.size() : b.c_.size();
        r.c_.assign(n, Complex::zero(r.prec_));
        for (size_t k = 0; k < a.c_.size(); ++k) r.c_[k] += a.c_[k];
        for (size_t k = 0; k < b.c_.size(); ++k) r.c_[k] += b.c_[k];
        r.trim();
        return r;
    }
    friend Poly1 operator-(const Poly1& a, const Poly1& b) { return a + (-b); }
    Poly1 operator-() const {
        Poly1 r(prec_);
        r.c_.reserve(c_.size());
        for (const auto& c : c_) r.c_.push_back(-c);
        return r;
    }
    friend Poly1 operator*(const Poly1& a, const Poly1& b) {
        if (a.is_zero() || b.is_zero()) return Poly1(a.prec_);
        Poly1 r(a.prec_);
        r.c_.assign(a.c_.size() + b.c_.size() - 1, Complex::zero(a.prec_));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        r.trim();
        return r;
    }
    friend Poly1 operator*(const Complex& s, const Poly1& a) {
        Poly1 r(a.prec_);
        r.c_.reserve(a.c_.size());
        for (const auto& c : a.c_) r.c_.push_back(s * c);
        r.trim();
        return r;
    }
    friend Poly1 operator*(const Real& s, const Poly1& a) { return Complex(s) * a; }
    Poly1& operator+=(const Poly1& o) { return *this = *this + o; }

    Poly1 derivative() const {
        Poly1 r(prec_);
        for (int k = 1; k <= degree(); ++k)
            r.c_.push_back(Real::of(static_cast<long>(k), prec_) * c_[static_cast<size_t>(k)]);
        r.trim();
        return r;
    }

    Complex evaluate(const Complex& x) const {
        Complex acc = Complex::zero(x.prec() > prec_ ? x.prec() : prec_);
        for (int k = degree(); k >= 0; --k) acc = acc * x + c_[static_cast<size_t>(k)];
        return acc;
    }

    // p(1/t) * t^n, the exponent reversal used by the chart change x2 = 1/eps1
    Poly1 reversed(int n) const {
        Poly1 r(prec_);
        r.c_.assign(static_cast<size_t>(n) + 1, Complex::zero(prec_));
        for (int k = 0; k <= degree(); ++k) {
            if (n - k < 0) throw RepresentationError("Poly1::reversed: degree exceeds shift");
            r.c_[static_cast<size_t>(n - k)] = c_[static_cast<size_t>(k)];
        }
        r.trim();
        return r;
    }

    Real max_coeff_abs() const {
        Real m = Real::zero(prec_);
        for (const auto& c : c_) m = max(m, abs(c));
        return m;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    prec_t prec_;
    std::vector<Complex> c_;
};

} // namespace hopfsplit

#pragma once

// Truncated formal power series of fixed order N. Arithmetic is exact
// through order N and never reads beyond it. The payload type is fixed per
// instance: Complex scalars, univariate polynomials (Poly1), or 2-vectors
// (as a pair of scalar series, see Vec2Series below). `offset` tracks the
// lowest power that can be nonzero.

#include <utility>
#include <vector>

#include "hopfsplit/mp/errors.hpp"
#include "hopfsplit/mp/poly1.hpp"
#include "hopfsplit/mp/vec.hpp"

namespace hopfsplit {

namespace ring {
inline Complex zero_like(const Complex& c) { return Complex::zero(c.prec()); }
inline Poly1 zero_like(const Poly1& p) { return Poly1(p.prec()); }
inline bool is_zero(const Complex& c) { return c.is_zero(); }
inline bool is_zero(const Poly1& p) { return p.is_zero(); }
} // namespace ring

template <typename T>
class TruncatedSeries {
  public:
    TruncatedSeries(int order, T zero)
        : order_(order), zero_(std::move(zero)),
          coeff_(static_cast<size_t>(order + 1), zero_) {
        if (order < 0) throw ParameterError("TruncatedSeries: negative order");
    }

    int order() const { return order_; }
    int offset() const { return offset_; }
    void set_offset(int k) { offset_ = k; }
    const T& zero_elem() const { return zero_; }

    const T& operator[](int k) const { return coeff_[static_cast<size_t>(k)]; }
    void set(int k, T v) {
        coeff_[static_cast<size_t>(k)] = std::move(v);
        if (k < offset_) offset_ = k;
    }

    TruncatedSeries operator+(const TruncatedSeries& o) const {
        require_same(o);
        TruncatedSeries r(order_, zero_);
        for (int k = 0; k <= order_; ++k) r.set(k, (*this)[k] + o[k]);
        r.offset_ = offset_ < o.offset_ ? offset_ : o.offset_;
        return r;
    }
    TruncatedSeries operator-(const TruncatedSeries& o) const {
        require_same(o);
        TruncatedSeries r(order_, zero_);
        for (int k = 0; k <= order_; ++k) r.set(k, (*this)[k] - o[k]);
        r.offset_ = offset_ < o.offset_ ? offset_ : o.offset_;
        return r;
    }

    // Cauchy product truncated at order N
    TruncatedSeries operator*(const TruncatedSeries& o) const {
        require_same(o);
        TruncatedSeries r(order_, zero_);
        for (int k = offset_; k <= order_; ++k) {
            if (ring::is_zero((*this)[k])) continue;
            for (int j = o.offset_; j + k <= order_; ++j)
                r.coeff_[static_cast<size_t>(k + j)] += (*this)[k] * o[j];
        }
        int off = offset_ + o.offset_;
        r.offset_ = off <= order_ ? off : order_;
        return r;
    }

    TruncatedSeries derivative() const {
        TruncatedSeries r(order_, zero_);
        for (int k = 1; k <= order_; ++k)
            r.set(k - 1, Real::of(static_cast<long>(k), 64) * (*this)[k]);
        r.offset_ = offset_ > 0 ? offset_ - 1 : 0;
        return r;
    }

    // substitution s(t(x)); t must have zero constant term
    TruncatedSeries compose(const TruncatedSeries& t) const {
        if (!ring::is_zero(t[0]))
            throw ParameterError("series compose: inner constant term must vanish");
        TruncatedSeries r(order_, zero_);
        r.set(0, (*this)[order_]);
        for (int k = order_ - 1; k >= 0; --k) {
            r = r * t;
            r.set(0, r[0] + (*this)[k]);
        }
        r.offset_ = 0;
        return r;
    }

    // multiplicative inverse (Complex payload); constant term must be nonzero
    TruncatedSeries reciprocal() const
        requires std::same_as<T, Complex>
    {
        if ((*this)[0].is_zero())
            throw ParameterError("series reciprocal: constant coefficient is zero");
        TruncatedSeries r(order_, zero_);
        Complex inv0 = Complex::one((*this)[0].prec()) / (*this)[0];
        r.set(0, inv0);
        for (int k = 1; k <= order_; ++k) {
            Complex acc = zero_;
            for (int j = 1; j <= k; ++j) acc += (*this)[j] * r[k - j];
            r.set(k, -(inv0 * acc));
        }
        return r;
    }

    T evaluate(const Complex& x) const {
        T acc = (*this)[order_];
        for (int k = order_ - 1; k >= 0; --k) acc = x * acc + (*this)[k];
        return acc;
    }

  private:
    void require_same(const TruncatedSeries& o) const {
        if (order_ != o.order_) throw ParameterError("series op: order mismatch");
    }
    int order_;
    int offset_ = 0;
    T zero_;
    std::vector<T> coeff_;
};

using CSeries = TruncatedSeries<Complex>;
using PSeries = TruncatedSeries<Poly1>;

// 2-vector-valued series as a pair of scalar series sharing one order.
struct Vec2Series {
    CSeries y, z;

    Vec2Series(int order, prec_t p)
        : y(order, Complex::zero(p)), z(order, Complex::zero(p)) {}

    int order() const { return y.order(); }
    Vec2 at(int k) const { return {y[k], z[k]}; }
    void set(int k, const Vec2& v) {
        y.set(k, v.y);
        z.set(k, v.z);
    }
    friend Vec2Series operator+(const Vec2Series& a, const Vec2Series& b) {
        Vec2Series r(a.order(), 64);
        r.y = a.y + b.y;
        r.z = a.z + b.z;
        return r;
    }
    friend Vec2Series operator*(const CSeries& s, const Vec2Series& v) {
        Vec2Series r(v.order(), 64);
        r.y = s * v.y;
        r.z = s * v.z;
        return r;
    }
    Vec2 evaluate(const Complex& x) const { return {y.evaluate(x), z.evaluate(x)}; }
};

} // namespace hopfsplit

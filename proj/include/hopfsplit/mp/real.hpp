#pragma once

// Thin RAII wrapper over MPFR. Every value carries its own precision;
// binary operations round to the max precision of their operands
// (MPFR_RNDN throughout), so results are deterministic and independent
// of any global state. Assignment re-inits the target at the source
// precision, which makes containers of Real safe to default-construct.

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

#include "hopfsplit/mp/errors.hpp"

namespace hopfsplit {

using prec_t = mpfr_prec_t;

class Real {
  public:
    Real() { mpfr_init2(v_, 64); } // NaN until assigned
    explicit Real(prec_t prec) { mpfr_init2(v_, prec); }

    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, 64);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    static Real of(double x, prec_t prec) {
        Real r(prec);
        mpfr_set_d(r.v_, x, MPFR_RNDN);
        return r;
    }
    static Real of(long x, prec_t prec) {
        Real r(prec);
        mpfr_set_si(r.v_, x, MPFR_RNDN);
        return r;
    }
    static Real from_string(const std::string& s, prec_t prec) {
        Real r(prec);
        if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0 && !r.is_finite())
            throw ParameterError("Real::from_string: cannot parse '" + s + "'");
        return r;
    }
    static Real zero(prec_t prec) { return of(0L, prec); }
    static Real one(prec_t prec) { return of(1L, prec); }
    static Real pi(prec_t prec) {
        Real r(prec);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }
    static Real log2e(prec_t prec) { // 1/ln(2)
        Real r(prec);
        mpfr_const_log2(r.v_, MPFR_RNDN);
        mpfr_si_div(r.v_, 1, r.v_, MPFR_RNDN);
        return r;
    }
    // 2^e, exact
    static Real pow2(long e, prec_t prec) {
        Real r(prec);
        mpfr_set_si_2exp(r.v_, 1, e, MPFR_RNDN);
        return r;
    }

    prec_t prec() const { return mpfr_get_prec(v_); }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

    std::string str(int digits = 20) const {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%%.%dRg", digits);
        char* out = nullptr;
        mpfr_asprintf(&out, buf, v_);
        std::string s(out);
        mpfr_free_str(out);
        return s;
    }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    friend prec_t join_prec(const Real& a, const Real& b) {
        return a.prec() > b.prec() ? a.prec() : b.prec();
    }

#define HS_REAL_BINOP(op, fn)                                \
    friend Real operator op(const Real& a, const Real& b) { \
        Real r(join_prec(a, b));                             \
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);                     \
        return r;                                            \
    }                                                        \
    friend Real operator op(const Real& a, long b) {         \
        Real r(a.prec());                                    \
        fn##_si(r.v_, a.v_, b, MPFR_RNDN);                   \
        return r;                                            \
    }

    HS_REAL_BINOP(+, mpfr_add)
    HS_REAL_BINOP(-, mpfr_sub)
    HS_REAL_BINOP(*, mpfr_mul)
    HS_REAL_BINOP(/, mpfr_div)
#undef HS_REAL_BINOP

    friend Real operator+(long a, const Real& b) { return b + a; }
    friend Real operator*(long a, const Real& b) { return b * a; }
    friend Real operator-(long a, const Real& b) {
        Real r(b.prec());
        mpfr_si_sub(r.raw(), a, b.raw(), MPFR_RNDN);
        return r;
    }
    friend Real operator/(long a, const Real& b) {
        Real r(b.prec());
        mpfr_si_div(r.raw(), a, b.raw(), MPFR_RNDN);
        return r;
    }
    Real operator-() const {
        Real r(prec());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }
    Real& operator+=(const Real& o) {
        bump(o.prec());
        mpfr_add(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }
    Real& operator-=(const Real& o) {
        bump(o.prec());
        mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }
    Real& operator*=(const Real& o) {
        bump(o.prec());
        mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }

    friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
    friend bool operator!=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) != 0; }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
    friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }
    friend bool operator!=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) != 0; }
    friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
    friend bool operator<=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) <= 0; }
    friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }
    friend bool operator>=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) >= 0; }

#define HS_REAL_FN1(name, fn)            \
    friend Real name(const Real& a) {    \
        Real r(a.prec());                \
        fn(r.v_, a.v_, MPFR_RNDN);       \
        return r;                        \
    }
    HS_REAL_FN1(abs, mpfr_abs)
    HS_REAL_FN1(sqrt, mpfr_sqrt)
    HS_REAL_FN1(exp, mpfr_exp)
    HS_REAL_FN1(log, mpfr_log)
    HS_REAL_FN1(log2, mpfr_log2)
    HS_REAL_FN1(sin, mpfr_sin)
    HS_REAL_FN1(cos, mpfr_cos)
    HS_REAL_FN1(tan, mpfr_tan)
    HS_REAL_FN1(tanh, mpfr_tanh)
    HS_REAL_FN1(atan, mpfr_atan)
#undef HS_REAL_FN1

    friend Real atan2(const Real& y, const Real& x) {
        Real r(join_prec(y, x));
        mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
        return r;
    }
    friend Real hypot(const Real& x, const Real& y) {
        Real r(join_prec(y, x));
        mpfr_hypot(r.v_, x.v_, y.v_, MPFR_RNDN);
        return r;
    }
    friend Real pow(const Real& a, long e) {
        Real r(a.prec());
        mpfr_pow_si(r.v_, a.v_, e, MPFR_RNDN);
        return r;
    }
    friend Real pow(const Real& a, const Real& e) {
        Real r(join_prec(a, e));
        mpfr_pow(r.v_, a.v_, e.v_, MPFR_RNDN);
        return r;
    }
    friend Real floor(const Real& a) {
        Real r(a.prec());
        mpfr_floor(r.v_, a.v_);
        return r;
    }
    friend Real ceil(const Real& a) {
        Real r(a.prec());
        mpfr_ceil(r.v_, a.v_);
        return r;
    }
    friend Real min(const Real& a, const Real& b) { return a <= b ? a : b; }
    friend Real max(const Real& a, const Real& b) { return a >= b ? a : b; }
    friend Real ldexp(const Real& a, long e) { // a * 2^e, exact
        Real r(a.prec());
        mpfr_mul_2si(r.v_, a.v_, e, MPFR_RNDN);
        return r;
    }
    friend Real lngamma(const Real& a) {
        Real r(a.prec());
        mpfr_lngamma(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend Real digamma(const Real& a) {
        Real r(a.prec());
        mpfr_digamma(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    // Rounds to the given precision (for precision-monotonicity experiments).
    friend Real round_to(const Real& a, prec_t p) {
        Real r(p);
        mpfr_set(r.raw(), a.raw(), MPFR_RNDN);
        return r;
    }

  private:
    void bump(prec_t p) {
        if (p > prec()) {
            Real tmp(p);
            mpfr_set(tmp.v_, v_, MPFR_RNDN);
            mpfr_swap(v_, tmp.v_);
        }
    }
    mpfr_t v_;
};

inline void check_finite(const Real& x, const char* where) {
    if (!x.is_finite()) throw OverflowError(std::string("non-finite value in ") + where);
}

} // namespace hopfsplit

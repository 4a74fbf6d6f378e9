#pragma once

// Complex scalar on top of Real. All component operations are built from
// sign-symmetric MPFR primitives, so conjugating the inputs of any expression
// conjugates the output bit-for-bit (the equivariance the solution operators
// inherit from real-analyticity of the vector fields).

#include <string>

#include "hopfsplit/mp/real.hpp"

namespace hopfsplit {

class Complex {
  public:
    Real re, im;

    Complex() = default;
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    explicit Complex(Real r) : re(std::move(r)), im(Real::zero(re.prec())) {}
    static Complex of(double r, double i, prec_t prec) {
        return {Real::of(r, prec), Real::of(i, prec)};
    }
    static Complex zero(prec_t prec) { return {Real::zero(prec), Real::zero(prec)}; }
    static Complex one(prec_t prec) { return {Real::one(prec), Real::zero(prec)}; }
    static Complex i_unit(prec_t prec) { return {Real::zero(prec), Real::one(prec)}; }

    prec_t prec() const { return join_prec(re, im); }
    bool is_finite() const { return re.is_finite() && im.is_finite(); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    Complex operator-() const { return {-re, -im}; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator*(const Real& a, const Complex& b) { return {a * b.re, a * b.im}; }
    friend Complex operator*(const Complex& a, const Real& b) { return {a.re * b, a.im * b}; }
    friend Complex operator*(long a, const Complex& b) { return {a * b.re, a * b.im}; }
    friend Complex operator/(const Complex& a, const Complex& b) {
        Real n = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    friend Complex operator/(const Complex& a, const Real& b) { return {a.re / b, a.im / b}; }
    friend Complex operator/(const Complex& a, long b) { return {a.re / b, a.im / b}; }
    Complex& operator+=(const Complex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Complex& operator-=(const Complex& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Complex& operator*=(const Complex& o) { return *this = *this * o; }

    friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }

    friend Complex conj(const Complex& a) { return {a.re, -a.im}; }
    friend Real abs(const Complex& a) { return hypot(a.re, a.im); }
    friend Real norm2(const Complex& a) { return a.re * a.re + a.im * a.im; }
    friend Real arg(const Complex& a) { return atan2(a.im, a.re); }
    friend Complex exp(const Complex& a) {
        Real m = exp(a.re);
        return {m * cos(a.im), m * sin(a.im)};
    }
    friend Complex log(const Complex& a) { return {log(abs(a)), arg(a)}; }
    friend Complex sqrt(const Complex& a) {
        // principal branch via polar form
        Real m = sqrt(abs(a));
        Real half = Real::of(0.5, a.prec());
        Real ph = arg(a) * half;
        return {m * cos(ph), m * sin(ph)};
    }
    friend Complex pow(const Complex& a, long e) {
        prec_t p = a.prec();
        Complex r = Complex::one(p);
        Complex base = a;
        long n = e < 0 ? -e : e;
        while (n > 0) {
            if (n & 1) r = r * base;
            base = base * base;
            n >>= 1;
        }
        if (e < 0) r = Complex::one(p) / r;
        return r;
    }

    std::string str(int digits = 20) const {
        return "(" + re.str(digits) + (im.sign() < 0 ? "" : "+") + im.str(digits) + "i)";
    }
};

inline void check_finite(const Complex& z, const char* where) {
    if (!z.is_finite()) throw OverflowError(std::string("non-finite value in ") + where);
}

} // namespace hopfsplit

#pragma once

// Fixed-size vectors/matrices over Complex used for the (y,z)-fibers and
// the 3D phase space. 2x2 solves are hand-rolled; 3x3 goes through the
// small dense LU in linalg.hpp.

#include <array>

#include "hopfsplit/mp/complex.hpp"

namespace hopfsplit {

struct Vec2 {
    Complex y, z;

    static Vec2 zero(prec_t p) { return {Complex::zero(p), Complex::zero(p)}; }
    prec_t prec() const { return y.prec() > z.prec() ? y.prec() : z.prec(); }
    bool is_finite() const { return y.is_finite() && z.is_finite(); }

    friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.y + b.y, a.z + b.z}; }
    friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.y - b.y, a.z - b.z}; }
    Vec2 operator-() const { return {-y, -z}; }
    friend Vec2 operator*(const Complex& s, const Vec2& a) { return {s * a.y, s * a.z}; }
    friend Vec2 operator*(const Real& s, const Vec2& a) { return {s * a.y, s * a.z}; }
    friend Vec2 operator/(const Vec2& a, const Complex& s) { return {a.y / s, a.z / s}; }
    Vec2& operator+=(const Vec2& o) {
        y += o.y;
        z += o.z;
        return *this;
    }
    friend Vec2 conj(const Vec2& a) { return {conj(a.y), conj(a.z)}; }
    friend Real abs(const Vec2& a) { return sqrt(norm2(a.y) + norm2(a.z)); }
};

struct Mat2 {
    Complex a11, a12, a21, a22;

    static Mat2 zero(prec_t p) {
        Complex z = Complex::zero(p);
        return {z, z, z, z};
    }
    static Mat2 identity(prec_t p) {
        return {Complex::one(p), Complex::zero(p), Complex::zero(p), Complex::one(p)};
    }
    // Omega = [[0,1],[-1,0]], the rotational linear part
    static Mat2 omega(prec_t p) {
        return {Complex::zero(p), Complex::one(p), -Complex::one(p), Complex::zero(p)};
    }
    static Mat2 scalar(const Complex& s) {
        prec_t p = s.prec();
        return {s, Complex::zero(p), Complex::zero(p), s};
    }

    friend Mat2 operator+(const Mat2& A, const Mat2& B) {
        return {A.a11 + B.a11, A.a12 + B.a12, A.a21 + B.a21, A.a22 + B.a22};
    }
    friend Mat2 operator-(const Mat2& A, const Mat2& B) {
        return {A.a11 - B.a11, A.a12 - B.a12, A.a21 - B.a21, A.a22 - B.a22};
    }
    friend Mat2 operator*(const Complex& s, const Mat2& A) {
        return {s * A.a11, s * A.a12, s * A.a21, s * A.a22};
    }
    friend Mat2 operator*(const Mat2& A, const Mat2& B) {
        return {A.a11 * B.a11 + A.a12 * B.a21, A.a11 * B.a12 + A.a12 * B.a22,
                A.a21 * B.a11 + A.a22 * B.a21, A.a21 * B.a12 + A.a22 * B.a22};
    }
    friend Vec2 operator*(const Mat2& A, const Vec2& v) {
        return {A.a11 * v.y + A.a12 * v.z, A.a21 * v.y + A.a22 * v.z};
    }
    friend Complex det(const Mat2& A) { return A.a11 * A.a22 - A.a12 * A.a21; }
    friend Mat2 inverse(const Mat2& A) {
        Complex d = det(A);
        return {A.a22 / d, -A.a12 / d, -A.a21 / d, A.a11 / d};
    }
    friend Vec2 solve(const Mat2& A, const Vec2& rhs) { return inverse(A) * rhs; }
    friend Mat2 conj(const Mat2& A) { return {conj(A.a11), conj(A.a12), conj(A.a21), conj(A.a22)}; }

    // Spectral norm of a 2x2 complex matrix: largest singular value, computed
    // from the eigenvalues of A*A (exact quadratic formula).
    friend Real op_norm(const Mat2& A) {
        Real s = norm2(A.a11) + norm2(A.a12) + norm2(A.a21) + norm2(A.a22);
        Complex d = det(A);
        Real dd = norm2(d);
        // singular values^2 solve t^2 - s t + |det|^2 = 0
        Real disc = s * s - 4 * dd;
        if (disc.sign() < 0) disc = Real::zero(s.prec()); // roundoff guard
        Real t = (s + sqrt(disc)) / 2;
        return sqrt(t);
    }
};

struct Vec3 {
    std::array<Complex, 3> c;

    static Vec3 zero(prec_t p) { return {{Complex::zero(p), Complex::zero(p), Complex::zero(p)}}; }
    Complex& operator[](int i) { return c[static_cast<size_t>(i)]; }
    const Complex& operator[](int i) const { return c[static_cast<size_t>(i)]; }
    bool is_finite() const { return c[0].is_finite() && c[1].is_finite() && c[2].is_finite(); }

    friend Vec3 operator+(const Vec3& a, const Vec3& b) {
        return {{a.c[0] + b.c[0], a.c[1] + b.c[1], a.c[2] + b.c[2]}};
    }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) {
        return {{a.c[0] - b.c[0], a.c[1] - b.c[1], a.c[2] - b.c[2]}};
    }
    friend Vec3 operator*(const Complex& s, const Vec3& a) {
        return {{s * a.c[0], s * a.c[1], s * a.c[2]}};
    }
    friend Real abs(const Vec3& a) {
        return sqrt(norm2(a.c[0]) + norm2(a.c[1]) + norm2(a.c[2]));
    }
};

} // namespace hopfsplit

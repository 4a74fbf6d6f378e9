#include "hopfsplit/mp/linalg.hpp"

namespace hopfsplit {

std::vector<Complex> lu_solve(DenseMatrix A, std::vector<Complex> b) {
    int n = A.rows();
    if (A.cols() != n || static_cast<int>(b.size()) != n)
        throw ParameterError("lu_solve: shape mismatch");
    for (int k = 0; k < n; ++k) {
        int piv = k;
        Real best = abs(A.at(k, k));
        for (int i = k + 1; i < n; ++i) {
            Real m = abs(A.at(i, k));
            if (m > best) {
                best = m;
                piv = i;
            }
        }
        if (best.is_zero()) throw ConditioningError("lu_solve: singular matrix");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(A.at(k, j), A.at(piv, j));
            std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(piv)]);
        }
        for (int i = k + 1; i < n; ++i) {
            Complex f = A.at(i, k) / A.at(k, k);
            if (f.is_zero()) continue;
            for (int j = k + 1; j < n; ++j) A.at(i, j) -= f * A.at(k, j);
            b[static_cast<size_t>(i)] -= f * b[static_cast<size_t>(k)];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        Complex acc = b[static_cast<size_t>(i)];
        for (int j = i + 1; j < n; ++j) acc -= A.at(i, j) * b[static_cast<size_t>(j)];
        b[static_cast<size_t>(i)] = acc / A.at(i, i);
    }
    return b;
}

std::vector<Complex> least_squares(const DenseMatrix& A, const std::vector<Complex>& b) {
    int m = A.rows(), n = A.cols();
    if (static_cast<int>(b.size()) != m) throw ParameterError("least_squares: shape mismatch");
    prec_t p = b.empty() ? 64 : b[0].prec();
    DenseMatrix N(n, n, p);
    std::vector<Complex> rhs(static_cast<size_t>(n), Complex::zero(p));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Complex acc = Complex::zero(p);
            for (int k = 0; k < m; ++k) acc += conj(A.at(k, i)) * A.at(k, j);
            N.at(i, j) = acc;
        }
        Complex acc = Complex::zero(p);
        for (int k = 0; k < m; ++k) acc += conj(A.at(k, i)) * b[static_cast<size_t>(k)];
        rhs[static_cast<size_t>(i)] = acc;
    }
    return lu_solve(std::move(N), std::move(rhs));
}

std::vector<Complex> poly_roots(const std::vector<Complex>& coeffs, int max_iter) {
    int deg = static_cast<int>(coeffs.size()) - 1;
    while (deg > 0 && coeffs[static_cast<size_t>(deg)].is_zero()) --deg;
    if (deg < 1) return {};
    prec_t p = coeffs[0].prec();
    Complex lead = coeffs[static_cast<size_t>(deg)];
    std::vector<Complex> c(static_cast<size_t>(deg) + 1, Complex::zero(p));
    for (int k = 0; k <= deg; ++k) c[static_cast<size_t>(k)] = coeffs[static_cast<size_t>(k)] / lead;

    // Durand-Kerner from staggered points on a circle of radius based on the
    // coefficient magnitudes (Cauchy bound).
    Real radius = Real::one(p);
    for (int k = 0; k < deg; ++k) radius = max(radius, abs(c[static_cast<size_t>(k)]));
    radius = radius + 1;
    std::vector<Complex> z(static_cast<size_t>(deg), Complex::zero(p));
    Real two_pi = 2 * Real::pi(p);
    for (int k = 0; k < deg; ++k) {
        Real ang = two_pi * Real::of(static_cast<long>(k), p) / static_cast<long>(deg) +
                   Real::of(0.4, p); // avoid symmetry traps
        z[static_cast<size_t>(k)] = Complex{radius * cos(ang), radius * sin(ang)};
    }
    auto eval = [&](const Complex& x) {
        Complex acc = Complex::one(p);
        for (int k = deg - 1; k >= 0; --k) acc = acc * x + c[static_cast<size_t>(k)];
        return acc;
    };
    Real tol = Real::pow2(-static_cast<long>(p) + 8, p);
    for (int it = 0; it < max_iter; ++it) {
        Real worst = Real::zero(p);
        for (int k = 0; k < deg; ++k) {
            Complex num = eval(z[static_cast<size_t>(k)]);
            Complex den = Complex::one(p);
            for (int j = 0; j < deg; ++j)
                if (j != k) den = den * (z[static_cast<size_t>(k)] - z[static_cast<size_t>(j)]);
            Complex delta = num / den;
            z[static_cast<size_t>(k)] -= delta;
            worst = max(worst, abs(delta));
        }
        if (worst < tol * (radius + 1)) break;
    }
    return z;
}

} // namespace hopfsplit

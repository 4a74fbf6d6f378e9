#include "hopfsplit/mp/series_solve.hpp"

namespace hopfsplit {

Vec2Series series_solve_linear(const Mat2& omega_shift, const Vec2Series& forcing,
                               const RecursionRule& rule, const MatrixShift& shift) {
    int N = forcing.order();
    prec_t p = forcing.y[0].prec();
    Vec2Series psi(N, p);
    std::vector<Vec2> solved;
    solved.reserve(static_cast<size_t>(N) + 1);
    Real floor = Real::pow2(-static_cast<long>(p) + 16, p);
    for (int m = 0; m <= N; ++m) {
        Mat2 M = omega_shift;
        if (shift) M = M + shift(m);
        Vec2 rhs = forcing.at(m);
        if (rule) rhs += rule(m, solved);
        Complex dm = det(M);
        if (abs(dm) < floor)
            throw ResonanceError("series_solve_linear: matrix not invertible at order " +
                                     std::to_string(m),
                                 m);
        Vec2 cm = -Complex::one(p) * solve(M, rhs);
        psi.set(m, cm);
        solved.push_back(cm);
    }
    return psi;
}

} // namespace hopfsplit

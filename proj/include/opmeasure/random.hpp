#pragma once

#include "opmeasure/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace opmeasure {

using Rng = std::mt19937_64;

/// Standard complex normal coordinates: real and imaginary parts N(0, 1/2).
inline Vector complex_gaussian(Index n, Rng& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    Vector v(n);
    for (Index i = 0; i < n; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        v(i) = Complex(re, im);
    }
    return v;
}

inline Matrix complex_gaussian_matrix(Index rows, Index cols, Rng& rng) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        m.col(j) = complex_gaussian(rows, rng);
    }
    return m;
}

/// Haar-distributed unitary (QR of a Ginibre matrix with the phase fix).
inline Matrix random_unitary(Index n, Rng& rng) {
    const Matrix g = complex_gaussian_matrix(n, n, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        if (a > 0.0) {
            q.col(j) *= d / a;
        }
    }
    return q;
}

/// B B* with B of size n × rank.
inline Matrix random_psd(Index n, Index rank, Rng& rng) {
    const Matrix b = complex_gaussian_matrix(n, rank, rng);
    return linalg::hermitian_part(b * b.adjoint());
}

/// U diag(s) W* with singular values log-uniform in [1, max_condition].
inline Matrix random_invertible(Index n, double max_condition, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    RealVector s(n);
    for (Index i = 0; i < n; ++i) {
        s(i) = std::pow(max_condition, unit(rng));
    }
    if (n > 1) {
        s(0) = 1.0;
    }
    return random_unitary(n, rng) * s.cast<Complex>().asDiagonal() * random_unitary(n, rng).adjoint();
}

} // namespace opmeasure

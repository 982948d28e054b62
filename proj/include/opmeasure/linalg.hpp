#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>

namespace opmeasure {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace linalg {

inline Matrix hermitian_part(const Matrix& a) { return (a + a.adjoint()) * 0.5; }

inline bool is_hermitian(const Matrix& a, double rel_tol) {
    if (a.rows() != a.cols()) {
        return false;
    }
    return (a - a.adjoint()).norm() <= rel_tol * a.norm();
}

/// Ascending eigenvalues of a Hermitian matrix.
inline RealVector hermitian_eigenvalues(const Matrix& a) {
    if (a.size() == 0) {
        return {};
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

inline RealVector singular_values(const Matrix& a) {
    if (a.size() == 0) {
        return {};
    }
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues();
}

inline double spectral_norm(const Matrix& a) {
    const RealVector s = singular_values(a);
    return s.size() == 0 ? 0.0 : s(0);
}

/// Number of singular values above rel_tol · max(σ_max, 1).
inline Index numerical_rank(const Matrix& a, double rel_tol) {
    const RealVector s = singular_values(a);
    if (s.size() == 0) {
        return 0;
    }
    const double cut = rel_tol * std::max(s(0), 1.0);
    return static_cast<Index>((s.array() > cut).count());
}

/// Minimum eigenvalue ≥ −rel_tol · max(‖a‖, scale).
inline bool is_psd(const Matrix& a, double rel_tol, double scale = 0.0) {
    const RealVector ev = hermitian_eigenvalues(a);
    if (ev.size() == 0) {
        return true;
    }
    const double norm = std::max({std::abs(ev(0)), std::abs(ev(ev.size() - 1)), scale});
    return ev(0) >= -rel_tol * norm;
}

/// Principal square root of a PSD matrix; slightly negative eigenvalues are
/// clamped to zero.
inline Matrix psd_sqrt(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    const RealVector root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().adjoint();
}

inline double trace_norm(const Matrix& a) { return singular_values(a).sum(); }

/// Trace norm via absolute eigenvalues; equal to trace_norm for Hermitian input.
inline double trace_norm_hermitian(const Matrix& a) {
    return hermitian_eigenvalues(a).cwiseAbs().sum();
}

struct SpectralSplit {
    Matrix positive;
    Matrix negative;
};

/// A = A₊ − A₋ with A₊, A₋ ⪰ 0 supported on complementary eigenspaces.
inline SpectralSplit spectral_split(const Matrix& a) {
    if (a.size() == 0) {
        return {a, a};
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    const Matrix& u = solver.eigenvectors();
    const RealVector& ev = solver.eigenvalues();
    const RealVector pos = ev.cwiseMax(0.0);
    const RealVector neg = (-ev).cwiseMax(0.0);
    return {hermitian_part(u * pos.asDiagonal() * u.adjoint()),
            hermitian_part(u * neg.asDiagonal() * u.adjoint())};
}

/// max |(B*B − I)_ij| over the columns of B.
inline double orthonormality_defect(const Matrix& basis) {
    if (basis.cols() == 0) {
        return 0.0;
    }
    const Matrix gram = basis.adjoint() * basis;
    return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

/// Orthonormal columns spanning ker A.
inline Matrix null_space(const Matrix& a, double rel_tol) {
    const Index n = a.cols();
    if (a.rows() == 0) {
        return Matrix::Identity(n, n);
    }
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const RealVector& s = svd.singularValues();
    const double cut = rel_tol * std::max(s.size() ? s(0) : 0.0, 1.0);
    const Index rank = static_cast<Index>((s.array() > cut).count());
    return svd.matrixV().rightCols(n - rank);
}

/// R (rank × n) with R*R = A for PSD A, keeping eigenvalues above
/// rel_tol · λ_max. Row j is √λ_j u_j*, so the rows coordinatize ran A^{1/2}
/// in the orthonormal eigenbasis.
inline Matrix range_factor(const Matrix& a, double rel_tol) {
    const Index n = a.rows();
    if (n == 0) {
        return Matrix(0, 0);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    const RealVector& ev = solver.eigenvalues();
    const double top = ev(n - 1);
    if (top <= 0.0) {
        return Matrix(0, n);
    }
    Index rank = 0;
    for (Index j = 0; j < n; ++j) {
        if (ev(j) > rel_tol * top) {
            ++rank;
        }
    }
    Matrix r(rank, n);
    Index row = 0;
    for (Index j = n - rank; j < n; ++j, ++row) {
        r.row(row) = std::sqrt(ev(j)) * solver.eigenvectors().col(j).adjoint();
    }
    return r;
}

inline bool is_invertible(const Matrix& t, double rel_tol) {
    if (t.rows() != t.cols() || t.size() == 0) {
        return false;
    }
    const RealVector s = singular_values(t);
    return s(0) > 0.0 && s(s.size() - 1) > rel_tol * s(0);
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline double real_trace(const Matrix& a) { return a.trace().real(); }

} // namespace linalg
} // namespace opmeasure

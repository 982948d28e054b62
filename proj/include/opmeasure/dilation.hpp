#pragma once

#include "opmeasure/l2.hpp"
#include "opmeasure/measure.hpp"
#include "opmeasure/multiplicity.hpp"

#include <string>
#include <vector>

namespace opmeasure {

/// Σ(ℝ) = I within the POVM tolerance.
template <ValueClass V>
bool is_povm(const BasicMeasure<V>& m, const Tolerances& tol = default_tolerances()) {
    const Matrix gap = m.total() - Matrix::Identity(m.dim(), m.dim());
    return gap.cwiseAbs().maxCoeff() <= tol.povm;
}

/// Atomic, projection-valued, pairwise orthogonal, summing to the identity.
inline bool is_orthogonal_resolution(const MatrixMeasure& e, const Tolerances& tol = default_tolerances()) {
    if (!e.is_atomic() || !is_povm(e, tol)) {
        return false;
    }
    const auto& atoms = e.atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const Matrix& p = atoms[i].value;
        if ((p * p - p).cwiseAbs().maxCoeff() > tol.povm) {
            return false;
        }
        for (std::size_t j = i + 1; j < atoms.size(); ++j) {
            if ((p * atoms[j].value).cwiseAbs().maxCoeff() > tol.povm) {
                return false;
            }
        }
    }
    return true;
}

/// Orthogonal resolution E on the dilation space with V*E(·)V = Σ.
struct DilationResult {
    Index big_dim = 0;
    MatrixMeasure E{1};
    /// big_dim × dim isometry.
    Matrix V;
    bool minimal = false;
    std::vector<MultiplicationBlock> blocks;
};

/// span{E(δ) V H} is the whole dilation space.
inline bool is_minimal_dilation(const MatrixMeasure& e, const Matrix& v,
                                const Tolerances& tol = default_tolerances()) {
    Matrix stacked(v.rows(), 0);
    for (const auto& a : e.atoms()) {
        Matrix next(v.rows(), stacked.cols() + v.cols());
        next << stacked, a.value * v;
        stacked = std::move(next);
    }
    return linalg::numerical_rank(stacked, tol.rank) == v.rows();
}

/// Minimal Naimark dilation of an atomic POVM. Block i carries the rows of
/// A_i^{1/2} expressed in an orthonormal eigenbasis of its range, so the
/// dilation space is L₂(Σ, H) and E is the resolution of identity of Q.
inline DilationResult naimark_dilate(const MatrixMeasure& m, const Tolerances& tol = default_tolerances()) {
    if (!m.is_atomic()) {
        throw InvalidInput("naimark_dilate: measure has an absolutely continuous part");
    }
    if (!is_povm(m, tol)) {
        throw InvalidInput("naimark_dilate: atoms do not sum to the identity");
    }
    std::vector<Matrix> factors;
    DilationResult out;
    for (const auto& a : m.atoms()) {
        Matrix r = detail::atom_range_factor(m, a, tol);
        if (r.rows() == 0) {
            continue;
        }
        out.blocks.push_back({a.t, out.big_dim, r.rows()});
        out.big_dim += r.rows();
        factors.push_back(std::move(r));
    }
    out.V = Matrix(out.big_dim, m.dim());
    std::vector<MatrixAtom> projections;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto& b = out.blocks[i];
        out.V.middleRows(b.offset, b.size) = factors[i];
        Matrix p = Matrix::Zero(out.big_dim, out.big_dim);
        p.diagonal().segment(b.offset, b.size).setOnes();
        projections.push_back({b.location, std::move(p)});
    }
    out.E = MatrixMeasure(out.big_dim, std::move(projections), std::nullopt, tol);
    out.minimal = is_minimal_dilation(out.E, out.V, tol);
    return out;
}

/// V*E(·)V for an orthogonal resolution E and an isometry V.
inline MatrixMeasure compress_resolution(const MatrixMeasure& e, const Matrix& v,
                                         const Tolerances& tol = default_tolerances()) {
    if (!is_orthogonal_resolution(e, tol)) {
        throw InvalidInput("compress_resolution: E is not an orthogonal resolution of the identity");
    }
    if (v.rows() != e.dim() || v.cols() == 0 || linalg::orthonormality_defect(v) > tol.orthonormal) {
        throw InvalidInput("compress_resolution: V is not an isometry into the dilation space");
    }
    return compress(e, v, tol);
}

/// The minimal dilation is spectrally equivalent to Σ.
inline bool verify_dilation_equivalence(const MatrixMeasure& m, const Tolerances& tol = default_tolerances()) {
    return is_spectrally_equivalent(m, naimark_dilate(m, tol).E, tol);
}

struct EigenCluster {
    double location;
    /// Orthonormal eigenvectors, one per column.
    Matrix vectors;
};

/// Distinct eigenvalues of a Hermitian matrix; eigenvalues within
/// eigen_cluster · ‖A‖ of their neighbour form one spectral point.
inline std::vector<EigenCluster> eigen_clusters(const Matrix& a, const Tolerances& tol = default_tolerances()) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw InvalidInput("eigen_clusters: matrix must be square and nonempty");
    }
    if (!linalg::is_hermitian(a, tol.hermitian)) {
        throw InvalidInput("eigen_clusters: matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(linalg::hermitian_part(a));
    const RealVector& ev = solver.eigenvalues();
    const double norm = ev.cwiseAbs().maxCoeff();
    std::vector<EigenCluster> out;
    Index start = 0;
    for (Index i = 1; i <= ev.size(); ++i) {
        if (i == ev.size() || ev(i) - ev(i - 1) > tol.eigen_cluster * norm) {
            const Index len = i - start;
            out.push_back({ev.segment(start, len).mean(), solver.eigenvectors().middleCols(start, len)});
            start = i;
        }
    }
    return out;
}

/// E_A: atom at each distinct eigenvalue, valued in the eigenprojection.
inline MatrixMeasure resolution_of_identity(const Matrix& a, const Tolerances& tol = default_tolerances()) {
    std::vector<MatrixAtom> atoms;
    for (const auto& c : eigen_clusters(a, tol)) {
        atoms.push_back({c.location, linalg::hermitian_part(c.vectors * c.vectors.adjoint())});
    }
    return MatrixMeasure(a.rows(), std::move(atoms), std::nullopt, tol);
}

/// Eigenspace dimension at each distinct eigenvalue.
inline MultiplicityFunction classical_multiplicity(const Matrix& a, const Tolerances& tol = default_tolerances()) {
    MultiplicityFunction f;
    std::vector<ScalarAtom> base;
    for (const auto& c : eigen_clusters(a, tol)) {
        f.values.emplace_back(Cell::point(c.location), c.vectors.cols());
        base.push_back({c.location, static_cast<double>(c.vectors.cols())});
    }
    f.base = ScalarMeasure(std::move(base));
    return f;
}

/// span{E_A(δ) L} = H, tested as the rank of [P_λ L]_λ.
inline bool is_cyclic(const Matrix& a, const Matrix& l_basis, const Tolerances& tol = default_tolerances()) {
    if (l_basis.rows() != a.rows()) {
        throw InvalidInput("is_cyclic: subspace basis has the wrong dimension");
    }
    const auto clusters = eigen_clusters(a, tol);
    Matrix stacked(a.rows(), 0);
    for (const auto& c : clusters) {
        Matrix next(a.rows(), stacked.cols() + l_basis.cols());
        next << stacked, c.vectors * (c.vectors.adjoint() * l_basis);
        stacked = std::move(next);
    }
    return linalg::numerical_rank(stacked, tol.rank) == a.rows();
}

} // namespace opmeasure

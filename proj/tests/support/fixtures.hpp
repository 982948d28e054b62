#pragma once

#include "opmeasure/opmeasure.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace fixtures {

using namespace opmeasure;

inline Matrix diag(std::initializer_list<double> d) {
    Matrix m = Matrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
    Index i = 0;
    for (double x : d) {
        m(i, i) = x;
        ++i;
    }
    return m;
}

inline Vector vec(std::initializer_list<Complex> v) {
    Vector out(static_cast<Index>(v.size()));
    Index i = 0;
    for (Complex x : v) {
        out(i++) = x;
    }
    return out;
}

inline Matrix columns(std::initializer_list<Vector> cols) {
    Matrix out(cols.begin()->size(), static_cast<Index>(cols.size()));
    Index j = 0;
    for (const Vector& c : cols) {
        out.col(j++) = c;
    }
    return out;
}

/// Two-dimensional measure with jumps P1 = diag(1,0), P2 = diag(0,1) and
/// P3 = I at the points 1, 2, 3.
inline MatrixMeasure jumps_123() {
    return MatrixMeasure(2, {{1.0, diag({1, 0})}, {2.0, diag({0, 1})}, {3.0, diag({1, 1})}});
}

inline MatrixMeasure jumps_123_povm() { return scaled(jumps_123(), 0.5); }

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

struct RandomShape {
    int max_dim = 5;
    int max_atoms = 6;
    int max_cells = 8;
    bool allow_ac = true;
    bool allow_null = true;
};

/// PSD matrix of random rank in [0, n] (rank 0 only when allowed).
inline Matrix random_psd_any_rank(Rng& rng, Index n, bool allow_null) {
    const Index r = uniform_int(rng, allow_null ? 0 : 1, static_cast<int>(n));
    if (r == 0) {
        return Matrix::Zero(n, n);
    }
    return uniform(rng, 0.1, 3.0) * random_psd(n, r, rng);
}

inline std::vector<double> distinct_points(Rng& rng, int count, double lo, double hi) {
    std::vector<double> pts;
    while (static_cast<int>(pts.size()) < count) {
        const double t = std::round(uniform(rng, lo, hi) * 64.0) / 64.0;
        if (std::find(pts.begin(), pts.end(), t) == pts.end()) {
            pts.push_back(t);
        }
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

/// Random measure with atoms (some inside the AC grid) and a density part.
/// Never zero.
inline MatrixMeasure random_measure(Rng& rng, const RandomShape& shape = {}) {
    const Index n = uniform_int(rng, 1, shape.max_dim);
    for (;;) {
        const int n_atoms = uniform_int(rng, shape.allow_ac ? 0 : 1, shape.max_atoms);
        std::vector<MatrixAtom> atoms;
        for (double t : distinct_points(rng, n_atoms, -4.0, 4.0)) {
            atoms.push_back({t, random_psd_any_rank(rng, n, shape.allow_null)});
        }
        std::optional<AcPart> ac;
        const int n_cells = shape.allow_ac ? uniform_int(rng, 0, shape.max_cells) : 0;
        if (n_cells > 0) {
            ac.emplace();
            ac->grid = distinct_points(rng, n_cells + 1, -5.0, 5.0);
            for (int j = 0; j < n_cells; ++j) {
                ac->densities.push_back(random_psd_any_rank(rng, n, shape.allow_null));
            }
        }
        MatrixMeasure m(n, std::move(atoms), std::move(ac));
        if (!m.is_zero()) {
            return m;
        }
    }
}

inline MatrixMeasure random_atomic_measure(Rng& rng, int max_dim, int max_atoms) {
    RandomShape s;
    s.max_dim = max_dim;
    s.max_atoms = max_atoms;
    s.allow_ac = false;
    return random_measure(rng, s);
}

/// Atomic POVM: random PSD B_i normalized by S^{-1/2} with S = Σ B_i.
inline MatrixMeasure random_povm(Rng& rng, int max_dim, int max_atoms) {
    const Index n = uniform_int(rng, 1, max_dim);
    const int k = uniform_int(rng, 1, max_atoms);
    std::vector<Matrix> parts;
    Index total_rank = 0;
    for (int i = 0; i < k; ++i) {
        const Index r = (i == k - 1 && total_rank < n) ? n : uniform_int(rng, 1, static_cast<int>(n));
        total_rank += r;
        parts.push_back(random_psd(n, r, rng));
    }
    Matrix s = Matrix::Zero(n, n);
    for (const auto& p : parts) {
        s += p;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    const Matrix inv_sqrt =
        es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() *
        es.eigenvectors().adjoint();
    std::vector<MatrixAtom> atoms;
    const auto pts = distinct_points(rng, k, -3.0, 3.0);
    for (int i = 0; i < k; ++i) {
        atoms.push_back({pts[static_cast<std::size_t>(i)], inv_sqrt * parts[static_cast<std::size_t>(i)] * inv_sqrt});
    }
    return MatrixMeasure(n, std::move(atoms));
}

inline Matrix random_hermitian(Rng& rng, Index n) {
    const Matrix g = complex_gaussian_matrix(n, n, rng);
    return linalg::hermitian_part(g);
}

inline MatrixCharge random_charge(Rng& rng, int max_dim = 5, int max_atoms = 6, int max_cells = 6) {
    const Index n = uniform_int(rng, 1, max_dim);
    std::vector<MatrixAtom> atoms;
    for (double t : distinct_points(rng, uniform_int(rng, 0, max_atoms), -4.0, 4.0)) {
        atoms.push_back({t, random_hermitian(rng, n)});
    }
    std::optional<AcPart> ac;
    const int cells = uniform_int(rng, atoms.empty() ? 1 : 0, max_cells);
    if (cells > 0) {
        ac.emplace();
        ac->grid = distinct_points(rng, cells + 1, -5.0, 5.0);
        for (int j = 0; j < cells; ++j) {
            ac->densities.push_back(random_hermitian(rng, n));
        }
    }
    return MatrixCharge(n, std::move(atoms), std::move(ac));
}

/// Hermitian matrix with prescribed distinct eigenvalues and multiplicities,
/// rotated by a Haar unitary.
struct PlantedSpectrum {
    Matrix a;
    std::vector<double> eigenvalues;
    std::vector<Index> multiplicities;
};

inline PlantedSpectrum planted_hermitian(Rng& rng, int max_dim) {
    PlantedSpectrum p;
    const Index n = uniform_int(rng, 1, max_dim);
    Index left = n;
    double next = uniform(rng, -3.0, -2.0);
    RealVector d(n);
    Index pos = 0;
    while (left > 0) {
        const Index mult = uniform_int(rng, 1, static_cast<int>(left));
        p.eigenvalues.push_back(next);
        p.multiplicities.push_back(mult);
        d.segment(pos, mult).setConstant(next);
        pos += mult;
        left -= mult;
        next += uniform(rng, 0.2, 1.5);
    }
    const Matrix u = random_unitary(n, rng);
    p.a = linalg::hermitian_part(u * d.cast<Complex>().asDiagonal() * u.adjoint());
    return p;
}

/// Cell-wise constant vector function with Gaussian values on every own cell.
inline StepVectorFunction random_step_function(Rng& rng, const MatrixMeasure& m) {
    std::vector<Cell> cells = m.cells();
    std::vector<Vector> values;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        values.push_back(complex_gaussian(m.dim(), rng));
    }
    return StepVectorFunction(std::move(cells), std::move(values));
}

inline BorelSet random_borel_set(Rng& rng) {
    BorelSet s = BorelSet::empty();
    const int pieces = uniform_int(rng, 0, 3);
    for (int i = 0; i < pieces; ++i) {
        const double a = std::round(uniform(rng, -6.0, 6.0) * 8.0) / 8.0;
        const double b = a + std::round(uniform(rng, 0.125, 4.0) * 8.0) / 8.0;
        s = s | BorelSet::interval(a, b);
    }
    const int points = uniform_int(rng, 0, 3);
    for (int i = 0; i < points; ++i) {
        s = s | BorelSet::point(std::round(uniform(rng, -4.0, 4.0) * 64.0) / 64.0);
    }
    return s;
}

inline double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

/// Pair for the unitary-equivalence suite: equivalent by construction in
/// even cases, perturbed in rank or support otherwise.
inline std::pair<MatrixMeasure, MatrixMeasure> equivalence_pair(Rng& rng, int k) {
    const auto m1 = random_atomic_measure(rng, 4, 5);
    switch (k % 4) {
    case 0:
        return {m1, conjugate_by(m1, random_invertible(m1.dim(), 50.0, rng))};
    case 1: {
        std::vector<MatrixAtom> atoms;
        for (const auto& a : m1.atoms()) {
            const Index r = linalg::numerical_rank(a.value, 1e-10);
            atoms.push_back({a.t, r == 0 ? a.value : Matrix(random_psd(m1.dim(), r, rng))});
        }
        return {m1, MatrixMeasure(m1.dim(), std::move(atoms))};
    }
    case 2: {
        std::vector<MatrixAtom> atoms = m1.atoms();
        const auto i = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(atoms.size()) - 1));
        const Index r = linalg::numerical_rank(atoms[i].value, 1e-10);
        const Index r2 = r == m1.dim() ? r - 1 : r + 1;
        atoms[i].value = r2 == 0 ? Matrix(Matrix::Zero(m1.dim(), m1.dim())) : random_psd(m1.dim(), r2, rng);
        if (std::all_of(atoms.begin(), atoms.end(), [](const MatrixAtom& a) { return a.value.norm() == 0.0; })) {
            atoms.push_back({10.0, Matrix::Identity(m1.dim(), m1.dim())});
        }
        return {m1, MatrixMeasure(m1.dim(), std::move(atoms))};
    }
    default: {
        std::vector<MatrixAtom> atoms = m1.atoms();
        atoms.back().t += 0.5;
        return {m1, MatrixMeasure(m1.dim(), std::move(atoms))};
    }
    }
}

} // namespace fixtures

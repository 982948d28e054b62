#pragma once

#include "opmeasure/maximal_type.hpp"
#include "opmeasure/measure.hpp"
#include "opmeasure/multiplicity.hpp"
#include "opmeasure/random.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace opmeasure {

namespace detail {

/// Ψ = value / trace(value) on a cell (density against the trace measure).
inline Matrix trace_density(const Matrix& v) {
    const double tr = linalg::real_trace(v);
    return tr > 0.0 ? Matrix(v / tr) : Matrix(Matrix::Zero(v.rows(), v.cols()));
}

struct BlockDeterminant {
    double det = 0.0;
    bool nonzero = false;
};

/// det of a Hermitian PSD block from its eigenvalues. Nonzero means
/// |det| > determinant · Π diag and no eigenvalue below the rank floor.
inline BlockDeterminant block_determinant(const Matrix& block, const Tolerances& tol) {
    if (block.rows() == 0) {
        return {1.0, true};
    }
    const RealVector ev = linalg::hermitian_eigenvalues(block);
    double det = 1.0;
    for (Index i = 0; i < ev.size(); ++i) {
        det *= ev(i);
    }
    double diag = 1.0;
    for (Index i = 0; i < block.rows(); ++i) {
        diag *= std::max(block(i, i).real(), 0.0);
    }
    const double floor = tol.rank * std::max(ev(ev.size() - 1), 1.0);
    const bool nonzero = ev(0) > floor && std::abs(det) > tol.determinant * diag;
    return {det, nonzero};
}

inline void check_orthonormal(const Matrix& vectors, Index dim, const Tolerances& tol, const char* who) {
    if (vectors.cols() > 0 && vectors.rows() != dim) {
        throw InvalidInput(std::string(who) + ": vectors have the wrong dimension");
    }
    if (linalg::orthonormality_defect(vectors) > tol.orthonormal) {
        throw InvalidInput(std::string(who) + ": vectors are not orthonormal");
    }
}

} // namespace detail

/// {cells: det Ψ_k ≠ 0} where Ψ_k is the density compressed to the span of
/// the first k columns of basis.
inline SupportSet determinant_support(const MatrixMeasure& m, const Matrix& basis, Index k,
                                      const Tolerances& tol = default_tolerances()) {
    const Matrix b = basis.leftCols(k);
    std::vector<Cell> out;
    for (const Cell& c : m.positive_cells(tol)) {
        const Matrix psi = detail::trace_density(m.value(c));
        if (detail::block_determinant(b.adjoint() * psi * b, tol).nonzero) {
            out.push_back(c);
        }
    }
    return SupportSet(std::move(out));
}

/// Hellinger-chain test: Γ_j(Σ) = {det Ψ_j ≠ 0} (mod ρ) for every j ≤ k,
/// with k the number of columns of vectors.
inline bool chain_criterion(const MatrixMeasure& m, const Matrix& vectors,
                            const Tolerances& tol = default_tolerances()) {
    detail::check_orthonormal(vectors, m.dim(), tol, "chain_criterion");
    const MultiplicityFunction n = multiplicity_function(m, tol);
    for (Index j = 1; j <= vectors.cols(); ++j) {
        if (!equivalent_mod(determinant_support(m, vectors, j, tol), n.level_set(j), n.base, tol)) {
            return false;
        }
    }
    return true;
}

/// k-th Hellinger subspace: Γ_i(P_L Σ ↾ L) = Γ_i(Σ) for all i ≤ k = dim L.
inline bool is_hellinger_subspace(const MatrixMeasure& m, const Matrix& basis,
                                  const Tolerances& tol = default_tolerances()) {
    const MatrixMeasure c = compress(m, basis, tol);
    const MultiplicityFunction full = multiplicity_function(m, tol);
    const MultiplicityFunction part = multiplicity_function(c, full.base, tol);
    for (Index i = 1; i <= basis.cols(); ++i) {
        if (!equivalent_mod(part.level_set(i), full.level_set(i), full.base, tol)) {
            return false;
        }
    }
    return true;
}

/// Orthonormal e_1 … e_m whose nested spans H_k are Hellinger subspaces.
struct HellingerChain {
    MatrixMeasure measure{1};
    Matrix vectors;
    Index verified_depth = 0;
    std::vector<std::size_t> tries_per_level;

    Index length() const { return vectors.cols(); }
    Matrix subspace(Index k) const { return vectors.leftCols(k); }
};

/// (∧^k Ψ φ_k, φ_k) dρ with φ_k = e_1 ∧ … ∧ e_k, evaluated through the Gram
/// identity as det[(Ψ e_i, e_j)]_{i,j ≤ k}. Sub-threshold determinants are
/// reported as zero.
inline ScalarMeasure exterior_density(const MatrixMeasure& m, const Matrix& basis, Index k,
                                      const Tolerances& tol = default_tolerances()) {
    if (k < 1 || k > basis.cols()) {
        throw InvalidInput("exterior_density: level " + std::to_string(k) + " out of range");
    }
    if (basis.rows() != m.dim()) {
        throw InvalidInput("exterior_density: basis has the wrong dimension");
    }
    const Matrix b = basis.leftCols(k);
    auto weight = [&](const Matrix& v) {
        if (m.is_null_value(v, tol)) {
            return 0.0;
        }
        const double tr = linalg::real_trace(v);
        const auto d = detail::block_determinant(b.adjoint() * (v / tr) * b, tol);
        return d.nonzero ? d.det * tr : 0.0;
    };
    std::vector<ScalarAtom> atoms;
    for (const auto& a : m.atoms()) {
        const double w = weight(a.value);
        if (w > 0.0) {
            atoms.push_back({a.t, w});
        }
    }
    std::vector<double> grid;
    std::vector<double> dens;
    if (const auto& ac = m.ac()) {
        grid = ac->grid;
        for (const auto& d : ac->densities) {
            dens.push_back(weight(d));
        }
    }
    return ScalarMeasure(std::move(atoms), std::move(grid), std::move(dens));
}

inline ScalarMeasure exterior_density(const HellingerChain& chain, Index k,
                                      const Tolerances& tol = default_tolerances()) {
    return exterior_density(chain.measure, chain.vectors, k, tol);
}

namespace detail {

/// Greedy randomized extension: each new vector is Gaussian in span(space)
/// minus the current chain, accepted once the level passes the criterion.
inline HellingerChain grow_chain(const MatrixMeasure& m, const Matrix& space, const Vector& h,
                                 std::uint64_t seed, std::size_t max_tries, const Tolerances& tol) {
    if (!is_maximal_type(m, h, tol)) {
        throw InvalidInput("Hellinger chain: starting vector is not of maximal type");
    }
    const MultiplicityFunction n = multiplicity_function(m, tol);
    const Index depth = n.total();

    HellingerChain chain;
    chain.measure = m;
    chain.vectors = Matrix(m.dim(), depth);
    chain.vectors.col(0) = h / h.norm();
    if (!equivalent_mod(determinant_support(m, chain.vectors, 1, tol), n.level_set(1), n.base, tol)) {
        throw InvalidInput("Hellinger chain: starting vector fails the first-level criterion");
    }
    chain.tries_per_level.push_back(1);
    chain.verified_depth = 1;

    Rng rng(seed);
    for (Index k = 2; k <= depth; ++k) {
        const Matrix prev = chain.vectors.leftCols(k - 1);
        const SupportSet target = n.level_set(k);
        bool done = false;
        for (std::size_t attempt = 1; attempt <= max_tries && !done; ++attempt) {
            Vector g = space * complex_gaussian(space.cols(), rng);
            g -= prev * (prev.adjoint() * g);
            g -= prev * (prev.adjoint() * g);
            const double norm = g.norm();
            if (norm <= 1e-8 * std::max(1.0, space.norm())) {
                continue;
            }
            chain.vectors.col(k - 1) = g / norm;
            if (equivalent_mod(determinant_support(m, chain.vectors, k, tol), target, n.base, tol)) {
                chain.tries_per_level.push_back(attempt);
                chain.verified_depth = k;
                done = true;
            }
        }
        if (!done) {
            throw SearchExhausted("Hellinger chain: no vector certified level " + std::to_string(k) +
                                      " within " + std::to_string(max_tries) + " tries",
                                  max_tries);
        }
    }
    return chain;
}

} // namespace detail

/// Chain H_1 = span{h} ⊂ H_2 ⊂ … ⊂ H_m with m = m(Σ), every level certified
/// by chain_criterion.
inline HellingerChain build_hellinger_chain(const MatrixMeasure& m, const Vector& h, std::uint64_t seed,
                                            std::size_t max_tries = 100,
                                            const Tolerances& tol = default_tolerances()) {
    detail::check_vector(m, h, "build_hellinger_chain");
    return detail::grow_chain(m, Matrix::Identity(m.dim(), m.dim()), h, seed, max_tries, tol);
}

/// Same, with every chain vector inside span(subspace_basis).
inline HellingerChain chain_in_subspace(const MatrixMeasure& m, const Matrix& subspace_basis,
                                        const Vector& h, std::uint64_t seed, std::size_t max_tries = 100,
                                        const Tolerances& tol = default_tolerances()) {
    detail::check_vector(m, h, "chain_in_subspace");
    detail::check_orthonormal(subspace_basis, m.dim(), tol, "chain_in_subspace");
    if (subspace_basis.cols() == 0) {
        throw InvalidInput("chain_in_subspace: empty subspace");
    }
    const Vector outside = h - subspace_basis * (subspace_basis.adjoint() * h);
    if (outside.norm() > tol.orthonormal * std::max(1.0, h.norm())) {
        throw InvalidInput("chain_in_subspace: starting vector is not in the subspace");
    }
    return detail::grow_chain(m, subspace_basis, h, seed, max_tries, tol);
}

/// Number of Γ_i equivalent to Γ_1 mod ρ.
inline Index principal_type_count(const MatrixMeasure& m, const Tolerances& tol = default_tolerances()) {
    const MultiplicityFunction n = multiplicity_function(m, tol);
    const SupportSet g1 = n.level_set(1);
    Index count = 0;
    for (Index i = 1; i <= n.total(); ++i) {
        if (equivalent_mod(n.level_set(i), g1, n.base, tol)) {
            ++count;
        }
    }
    return count;
}

/// (Σ(δ) e_i, e_j) = 0 on every cell for i ≠ j.
inline bool are_spectrally_orthogonal(const MatrixMeasure& m, const Matrix& vectors,
                                      const Tolerances& tol = default_tolerances()) {
    for (const Cell& c : m.cells()) {
        const Matrix v = m.value(c);
        const Matrix g = vectors.adjoint() * v * vectors;
        for (Index i = 0; i < g.rows(); ++i) {
            for (Index j = 0; j < g.cols(); ++j) {
                if (i != j && std::abs(g(i, j)) > tol.null * std::max(1.0, m.value_scale())) {
                    return false;
                }
            }
        }
    }
    return true;
}

struct JuniorTypeSearch {
    Index level = 0;
    SupportSet target;
    std::optional<Vector> witness;
    std::size_t samples_tested = 0;
    /// Set when the exact zero-pattern analysis ran.
    bool exact = false;
    std::optional<bool> exact_exists;
    std::vector<SupportSet> achievable_supports;

    bool found() const { return witness.has_value(); }
};

namespace detail {

/// Γ(h) is determined by which atom kernels contain h. The support S is
/// realizable iff K_S = ∩_{c∉S} ker Ψ_c is not contained in any ker Ψ_c with
/// c ∈ S (a space is never a finite union of proper subspaces).
inline std::optional<Matrix> realizing_space(const std::vector<Matrix>& psis, std::uint32_t mask,
                                             Index dim, const Tolerances& tol) {
    Matrix stacked(0, dim);
    for (std::size_t c = 0; c < psis.size(); ++c) {
        if (!(mask & (1u << c))) {
            Matrix next(stacked.rows() + dim, dim);
            next << stacked, psis[c];
            stacked = std::move(next);
        }
    }
    const Matrix k = linalg::null_space(stacked, tol.rank);
    if (k.cols() == 0) {
        return std::nullopt;
    }
    for (std::size_t c = 0; c < psis.size(); ++c) {
        if ((mask & (1u << c)) && linalg::numerical_rank(psis[c] * k, tol.rank) == 0) {
            return std::nullopt;
        }
    }
    return k;
}

} // namespace detail

/// Looks for g with Γ(g) = Γ_i(Σ) among the standard basis and n_samples
/// Gaussian vectors. Purely atomic measures with dim ≤ 3 and at most 6
/// positive atoms also get an exact answer by enumerating kernel patterns.
inline JuniorTypeSearch junior_type_vector_search(const MatrixMeasure& m, Index i, std::size_t n_samples,
                                                  std::uint64_t seed,
                                                  const Tolerances& tol = default_tolerances()) {
    const MultiplicityFunction n = multiplicity_function(m, tol);
    if (i < 1 || i > n.total()) {
        throw InvalidInput("junior_type_vector_search: level must lie in [1, m(Sigma)]");
    }
    JuniorTypeSearch out;
    out.level = i;
    out.target = n.level_set(i);

    auto matches = [&](const Vector& g) {
        return g.squaredNorm() > 0.0 && equivalent_mod(support_of_vector(m, g, tol), out.target, n.base, tol);
    };

    for (Index j = 0; j < m.dim() && !out.witness; ++j) {
        ++out.samples_tested;
        const Vector e = Vector::Unit(m.dim(), j);
        if (matches(e)) {
            out.witness = e;
        }
    }
    Rng rng(seed);
    for (std::size_t s = 0; s < n_samples && !out.witness; ++s) {
        ++out.samples_tested;
        Vector g = complex_gaussian(m.dim(), rng);
        if (matches(g)) {
            out.witness = std::move(g);
        }
    }

    const std::vector<Cell> cells = m.positive_cells(tol);
    if (!m.is_atomic() || m.dim() > 3 || cells.size() > 6) {
        return out;
    }
    out.exact = true;
    std::vector<Matrix> psis;
    for (const Cell& c : cells) {
        psis.push_back(detail::trace_density(m.value(c)));
    }
    std::optional<Matrix> target_space;
    for (std::uint32_t mask = 1; mask < (1u << cells.size()); ++mask) {
        auto k = detail::realizing_space(psis, mask, m.dim(), tol);
        if (!k) {
            continue;
        }
        std::vector<Cell> s;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (mask & (1u << c)) {
                s.push_back(cells[c]);
            }
        }
        SupportSet support(std::move(s));
        if (support == out.target) {
            target_space = k;
        }
        out.achievable_supports.push_back(std::move(support));
    }
    out.exact_exists = target_space.has_value();
    if (target_space && !out.witness) {
        for (int attempt = 0; attempt < 16 && !out.witness; ++attempt) {
            Vector g = *target_space * complex_gaussian(target_space->cols(), rng);
            if (matches(g)) {
                out.witness = std::move(g);
            }
        }
    }
    return out;
}

} // namespace opmeasure

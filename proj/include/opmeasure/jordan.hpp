#pragma once

#include "opmeasure/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace opmeasure {

/// Σ_i ‖T*Σ(Δ_i)T‖₁ over a partition, with the per-cell terms.
struct VariationReport {
    double value = 0.0;
    bool infinite = false;
    std::vector<Cell> partition;
    std::vector<double> per_cell;
};

/// Total variation of the scalar charge δ ↦ (Σ(δ) f, g).
template <ValueClass V>
double weak_variation(const BasicMeasure<V>& ch, const Vector& f, const Vector& g) {
    if (f.size() != ch.dim() || g.size() != ch.dim()) {
        throw InvalidInput("weak_variation: vector dimension does not match the charge");
    }
    double total = 0.0;
    for (const auto& a : ch.atoms()) {
        total += std::abs(g.dot(a.value * f));
    }
    if (const auto& ac = ch.ac()) {
        for (std::size_t j = 0; j < ac->densities.size(); ++j) {
            total += (ac->grid[j + 1] - ac->grid[j]) * std::abs(g.dot(ac->densities[j] * f));
        }
    }
    return total;
}

namespace detail {

inline void check_weight_operator(const Matrix& t, Index dim, const Tolerances& tol) {
    if (t.rows() != dim || t.cols() != dim) {
        throw InvalidInput("trace_norm_variation: T has the wrong shape");
    }
    if (!linalg::is_invertible(t, tol.invertible)) {
        throw InvalidInput("trace_norm_variation: T is singular");
    }
}

} // namespace detail

/// Supremum over partitions of Σ‖T*Σ(Δ_i)T‖₁. For cell-wise constant
/// charges the triangle inequality makes refinement monotone, so the
/// supremum is the sum over the charge's own cells.
template <ValueClass V>
VariationReport trace_norm_variation(const BasicMeasure<V>& ch, const Matrix& t,
                                     const Tolerances& tol = default_tolerances()) {
    detail::check_weight_operator(t, ch.dim(), tol);
    VariationReport r;
    const Matrix ta = t.adjoint();
    for (const Cell& c : ch.cells()) {
        const double v = linalg::trace_norm(ta * ch.mass(c) * t);
        r.partition.push_back(c);
        r.per_cell.push_back(v);
        r.value += v;
    }
    return r;
}

/// Σ‖T*Σ(Δ_i)T‖₁ for the partition of ℝ cut at the given breakpoints:
/// (−∞, t_0), [t_0, t_1), …, [t_N, ∞).
template <ValueClass V>
VariationReport partition_variation(const BasicMeasure<V>& ch, const Matrix& t, std::vector<double> breakpoints,
                                    const Tolerances& tol = default_tolerances()) {
    detail::check_weight_operator(t, ch.dim(), tol);
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> ends;
    ends.push_back(-inf);
    ends.insert(ends.end(), breakpoints.begin(), breakpoints.end());
    ends.push_back(inf);
    VariationReport r;
    const Matrix ta = t.adjoint();
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
        const Matrix piece = measure_eval(ch, BorelSet::interval(ends[i], ends[i + 1]));
        const double v = linalg::trace_norm(ta * piece * t);
        r.partition.push_back(Cell::interval(ends[i], ends[i + 1]));
        r.per_cell.push_back(v);
        r.value += v;
    }
    return r;
}

struct JordanDecomposition {
    MatrixMeasure positive;
    MatrixMeasure negative;
};

/// Σ = Σ₁ − Σ₂ with both parts PSD, split cell by cell along eigenspaces.
/// Per cell trace(M₊) + trace(M₋) = ‖M‖₁, so the split attains the trace-norm
/// variation.
inline JordanDecomposition jordan_decompose(const MatrixCharge& ch, const Tolerances& tol = default_tolerances()) {
    auto part = [&](bool positive) {
        return ch.map_values<ValueClass::positive>(
            ch.dim(),
            [positive](const Matrix& a) -> Matrix {
                auto s = linalg::spectral_split(a);
                return positive ? s.positive : s.negative;
            },
            tol);
    };
    return {part(true), part(false)};
}

/// Jordan–Wigner Clifford generators x_k = Z^{⊗(k−1)} ⊗ X ⊗ I^{⊗(n−k)},
/// Hermitian 2ⁿ × 2ⁿ involutions with x_i x_j + x_j x_i = 2δ_ij I.
inline std::vector<Matrix> clifford_generators(int n, int cap = 10) {
    if (n < 1 || n > cap) {
        throw InvalidInput("clifford_generators: n must lie in [1, " + std::to_string(cap) + "]");
    }
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    Matrix z(2, 2);
    z << 1, 0, 0, -1;
    const Matrix id = Matrix::Identity(2, 2);
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        Matrix g = Matrix::Identity(1, 1);
        for (int site = 1; site <= n; ++site) {
            g = linalg::kron(g, site < k ? z : (site == k ? x : id));
        }
        out.push_back(std::move(g));
    }
    return out;
}

/// Block n of the Clifford charge: atoms x_k / √(2n) at 1/k, k = 1 … n.
inline MatrixCharge clifford_block_charge(int n, int cap = 10) {
    const auto gens = clifford_generators(n, cap);
    const double scale = 1.0 / std::sqrt(2.0 * n);
    std::vector<MatrixAtom> atoms;
    for (int k = 1; k <= n; ++k) {
        atoms.push_back({1.0 / k, scale * gens[static_cast<std::size_t>(k - 1)]});
    }
    return MatrixCharge(Index{1} << n, std::move(atoms));
}

/// Trace-norm variation of block n with T = t·I: t² 2ⁿ √(n/2).
inline double clifford_block_variation(int n, double t) {
    return t * t * std::ldexp(1.0, n) * std::sqrt(n / 2.0);
}

struct CliffordSeries {
    /// S_N = Σ_{n≤N} ‖T_n*Σ_n T_n‖ variation, one entry per N.
    std::vector<double> variation_partial_sums;
    /// Σ_{n≤N} t_n² 2ⁿ, the squared Hilbert–Schmidt norm of T.
    std::vector<double> hs_partial_sums;
    /// |numerical − formula| for blocks computed both ways.
    std::vector<double> cross_check_deltas;
    std::vector<double> weights;
};

/// Default block weights with t_n² = n^{−3/2} 2^{−n}: summable
/// Hilbert–Schmidt norm, harmonic (divergent) variation.
inline std::vector<double> default_clifford_weights(int max_block) {
    std::vector<double> w;
    for (int n = 1; n <= max_block; ++n) {
        w.push_back(std::sqrt(std::pow(n, -1.5) * std::ldexp(1.0, -n)));
    }
    return w;
}

/// Partial sums of the block-scalar weighted variation. Blocks with
/// n ≤ numeric_limit are also computed by SVD and cross-checked.
inline CliffordSeries clifford_variation_series(int max_block, std::vector<double> weights,
                                                int numeric_limit = 6) {
    if (max_block < 1) {
        throw InvalidInput("clifford_variation_series: max block must be positive");
    }
    if (weights.size() < static_cast<std::size_t>(max_block)) {
        throw InvalidInput("clifford_variation_series: need one weight per block");
    }
    weights.resize(static_cast<std::size_t>(max_block));
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw InvalidInput("clifford_variation_series: weights must be positive");
        }
    }
    CliffordSeries out;
    out.weights = weights;
    double s = 0.0;
    double hs = 0.0;
    for (int n = 1; n <= max_block; ++n) {
        const double t = weights[static_cast<std::size_t>(n - 1)];
        const double exact = clifford_block_variation(n, t);
        if (n <= numeric_limit) {
            const Index d = Index{1} << n;
            const Matrix tn = t * Matrix::Identity(d, d);
            const double numeric = trace_norm_variation(clifford_block_charge(n), tn).value;
            out.cross_check_deltas.push_back(std::abs(numeric - exact));
        }
        s += exact;
        hs += t * t * std::ldexp(1.0, n);
        out.variation_partial_sums.push_back(s);
        out.hs_partial_sums.push_back(hs);
    }
    return out;
}

} // namespace opmeasure

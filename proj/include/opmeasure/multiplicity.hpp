#pragma once

#include "opmeasure/measure.hpp"

#include <algorithm>
#include <iterator>
#include <utility>
#include <vector>

namespace opmeasure {

/// Subset of the cells of a reference scalar measure (Γ_i(Σ), Γ(g)).
class SupportSet {
public:
    SupportSet() = default;
    explicit SupportSet(std::vector<Cell> cells) : cells_(std::move(cells)) {
        std::sort(cells_.begin(), cells_.end());
        cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
    }

    const std::vector<Cell>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    bool contains(const Cell& c) const { return std::binary_search(cells_.begin(), cells_.end(), c); }

    bool is_subset_of(const SupportSet& other) const {
        return std::includes(other.cells_.begin(), other.cells_.end(), cells_.begin(), cells_.end());
    }

    friend bool operator==(const SupportSet&, const SupportSet&) = default;

private:
    std::vector<Cell> cells_;
};

/// ρ-weight of the symmetric difference.
inline double symmetric_difference_weight(const SupportSet& a, const SupportSet& b,
                                          const ScalarMeasure& rho) {
    std::vector<Cell> diff;
    std::set_symmetric_difference(a.cells().begin(), a.cells().end(), b.cells().begin(),
                                  b.cells().end(), std::back_inserter(diff));
    double w = 0.0;
    for (const Cell& c : diff) {
        w += rho.weight(c);
    }
    return w;
}

/// a = b (mod ρ).
inline bool equivalent_mod(const SupportSet& a, const SupportSet& b, const ScalarMeasure& rho,
                           const Tolerances& tol = default_tolerances()) {
    const double w = symmetric_difference_weight(a, b, rho);
    return w == 0.0 || w < tol.support_equality * rho.total();
}

/// N_Σ on the cells of positive weight of its base measure ρ.
struct MultiplicityFunction {
    std::vector<std::pair<Cell, Index>> values;
    ScalarMeasure base;

    bool empty() const { return values.empty(); }

    /// N on a cell; 0 off the positive-weight cells.
    Index at(const Cell& c) const {
        auto it = std::lower_bound(values.begin(), values.end(), c,
                                   [](const auto& v, const Cell& x) { return v.first < x; });
        return (it != values.end() && it->first == c) ? it->second : 0;
    }

    /// m(Σ) = vraisup N.
    Index total() const {
        Index m = 0;
        for (const auto& [cell, n] : values) {
            m = std::max(m, n);
        }
        return m;
    }

    /// Γ_i = {N ≥ i}.
    SupportSet level_set(Index i) const {
        std::vector<Cell> out;
        for (const auto& [cell, n] : values) {
            if (n >= i) {
                out.push_back(cell);
            }
        }
        return SupportSet(std::move(out));
    }
};

/// Rank of a density matrix. In finite dimension the supremum over leading
/// principal minors in any basis equals the rank of the whole matrix.
inline Index density_rank(const Matrix& psi, const Tolerances& tol = default_tolerances()) {
    return linalg::numerical_rank(psi, tol.rank);
}

inline MultiplicityFunction multiplicity_function(const MatrixMeasure& m, const ScalarMeasure& rho,
                                                  const Tolerances& tol = default_tolerances()) {
    MultiplicityFunction f;
    f.base = rho;
    for (const DensityCell& d : density(m, rho, tol).cells) {
        if (d.rho_weight > 0.0) {
            f.values.emplace_back(d.cell, density_rank(d.psi, tol));
        }
    }
    return f;
}

/// N_Σ against the trace measure. Empty for the zero measure.
inline MultiplicityFunction multiplicity_function(const MatrixMeasure& m,
                                                  const Tolerances& tol = default_tolerances()) {
    return multiplicity_function(m, trace_measure(m, tol), tol);
}

inline Index total_multiplicity(const MatrixMeasure& m, const Tolerances& tol = default_tolerances()) {
    return multiplicity_function(m, tol).total();
}

/// Γ_i(Σ); empty for i > dim.
inline SupportSet hellinger_support(const MatrixMeasure& m, Index i,
                                    const Tolerances& tol = default_tolerances()) {
    if (i < 1) {
        throw InvalidInput("hellinger_support: level must be at least 1");
    }
    return multiplicity_function(m, tol).level_set(i);
}

namespace detail {

/// Walks the common refinement of two measures, handing each cell's values
/// to visit(cell, v1, v2); stops early when visit returns false.
template <class F>
bool for_common_cells(const MatrixMeasure& m1, const MatrixMeasure& m2, F&& visit) {
    const CellLayout l1 = m1.layout();
    const CellLayout l2 = m2.layout();
    for (const Cell& c : common_cells({&l1, &l2})) {
        if (!visit(c, m1.value(c), m2.value(c))) {
            return false;
        }
    }
    return true;
}

inline Index normalized_rank(const Matrix& v, const Tolerances& tol) {
    const double tr = linalg::real_trace(v);
    return tr > 0.0 ? density_rank(v / tr, tol) : 0;
}

} // namespace detail

/// Σ₁ ≺ Σ₂: every Σ₂-null cell is Σ₁-null. Dimensions may differ.
inline bool is_subordinate(const MatrixMeasure& m1, const MatrixMeasure& m2,
                           const Tolerances& tol = default_tolerances()) {
    return detail::for_common_cells(m1, m2, [&](const Cell&, const Matrix& v1, const Matrix& v2) {
        return !(m2.is_null_value(v2, tol) && !m1.is_null_value(v1, tol));
    });
}

/// Σ₁ ≺≺ Σ₂: Σ₁ ≺ Σ₂ and N_{Σ₁} ≤ N_{Σ₂} on the Σ₂-positive cells.
inline bool is_spectrally_subordinate(const MatrixMeasure& m1, const MatrixMeasure& m2,
                                      const Tolerances& tol = default_tolerances()) {
    return detail::for_common_cells(m1, m2, [&](const Cell&, const Matrix& v1, const Matrix& v2) {
        const bool null1 = m1.is_null_value(v1, tol);
        const bool null2 = m2.is_null_value(v2, tol);
        if (null2) {
            return null1;
        }
        const Index n1 = null1 ? 0 : detail::normalized_rank(v1, tol);
        return n1 <= detail::normalized_rank(v2, tol);
    });
}

inline bool is_spectrally_equivalent(const MatrixMeasure& m1, const MatrixMeasure& m2,
                                     const Tolerances& tol = default_tolerances()) {
    return is_spectrally_subordinate(m1, m2, tol) && is_spectrally_subordinate(m2, m1, tol);
}

} // namespace opmeasure

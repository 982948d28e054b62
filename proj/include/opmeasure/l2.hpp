#pragma once

#include "opmeasure/measure.hpp"
#include "opmeasure/multiplicity.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace opmeasure {

/// Vector function constant on each cell of a measure: the cell-wise
/// constant stand-in for compactly supported continuous functions, for which
/// Riemann sums against a cell-wise constant measure are exact.
class StepVectorFunction {
public:
    StepVectorFunction() = default;

    StepVectorFunction(std::vector<Cell> cells, std::vector<Vector> values) {
        if (cells.size() != values.size()) {
            throw InvalidInput("StepVectorFunction: cells and values differ in length");
        }
        std::vector<std::size_t> order(cells.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            order[i] = i;
        }
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return cells[a] < cells[b]; });
        for (auto i : order) {
            if (!cells_.empty() && cells_.back() == cells[i]) {
                throw InvalidInput("StepVectorFunction: duplicate cell " + to_string(cells[i]));
            }
            cells_.push_back(cells[i]);
            values_.push_back(std::move(values[i]));
        }
    }

    /// f ≡ v on every cell of m.
    template <ValueClass V>
    static StepVectorFunction constant(const BasicMeasure<V>& m, const Vector& v) {
        auto cells = m.cells();
        std::vector<Vector> values(cells.size(), v);
        return {std::move(cells), std::move(values)};
    }

    const std::vector<Cell>& cells() const { return cells_; }
    const std::vector<Vector>& values() const { return values_; }

    /// Value on c, or on the interval cell containing c when c is a finer piece.
    const Vector* find(const Cell& c) const {
        auto it = std::lower_bound(cells_.begin(), cells_.end(), c);
        if (it != cells_.end() && *it == c) {
            return &values_[it - cells_.begin()];
        }
        if (c.is_atom()) {
            return nullptr;
        }
        for (std::size_t i = 0; i < cells_.size(); ++i) {
            const Cell& k = cells_[i];
            if (!k.is_atom() && k.lo <= c.lo && c.hi <= k.hi) {
                return &values_[i];
            }
        }
        return nullptr;
    }

private:
    std::vector<Cell> cells_;
    std::vector<Vector> values_;
};

namespace detail {

inline const Vector& sample_on(const StepVectorFunction& f, const Cell& c, Index dim) {
    const Vector* v = f.find(c);
    if (v == nullptr) {
        throw InvalidInput("function is not defined on cell " + to_string(c));
    }
    if (v->size() != dim) {
        throw InvalidInput("function value on " + to_string(c) + " has wrong dimension");
    }
    return *v;
}

} // namespace detail

/// (f, g)_{L₂(Σ,H)} = Σ_cells (Σ(cell) f, g).
inline Complex inner_product(const StepVectorFunction& f, const StepVectorFunction& g,
                             const MatrixMeasure& m, const Tolerances& tol = default_tolerances()) {
    Complex sum = 0.0;
    for (const Cell& c : m.positive_cells(tol)) {
        const Vector& fc = detail::sample_on(f, c, m.dim());
        const Vector& gc = detail::sample_on(g, c, m.dim());
        sum += gc.dot(m.mass(c) * fc);
    }
    return sum;
}

/// ∫ ‖Ψ_T(t)^{1/2} T⁻¹ f(t)‖² dρ(t) with Ψ_T = d(T*ΣT)/dρ.
inline double norm_via_density(const StepVectorFunction& f, const MatrixMeasure& m, const Matrix& t,
                               const ScalarMeasure& rho, const Tolerances& tol = default_tolerances()) {
    const MatrixMeasure conj = conjugate_by(m, t, tol);
    const Eigen::PartialPivLU<Matrix> lu(t);
    double sum = 0.0;
    for (const DensityCell& d : density(conj, rho, tol).cells) {
        if (d.rho_weight <= 0.0 || m.is_null_cell(d.cell, tol)) {
            continue;
        }
        const Vector& fc = detail::sample_on(f, d.cell, m.dim());
        const Vector v = linalg::psd_sqrt(d.psi) * lu.solve(fc);
        sum += v.squaredNorm() * d.rho_weight;
    }
    return sum;
}

/// Same, with ρ the trace measure of Σ.
inline double norm_via_density(const StepVectorFunction& f, const MatrixMeasure& m, const Matrix& t,
                               const Tolerances& tol = default_tolerances()) {
    return norm_via_density(f, m, t, trace_measure(m, tol), tol);
}

struct MultiplicationBlock {
    double location;
    Index offset;
    Index size;
};

/// Q: f ↦ x f on L₂(Σ, H) of an atomic measure. Block i has size rank A_i
/// and acts as t_i times the identity in an orthonormal basis of ran A_i^{1/2}.
struct MultiplicationOperator {
    Matrix matrix;
    std::vector<MultiplicationBlock> blocks;

    /// Eigenvalues with multiplicity, ascending.
    std::vector<double> spectrum() const {
        std::vector<double> out;
        for (const auto& b : blocks) {
            out.insert(out.end(), static_cast<std::size_t>(b.size), b.location);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

namespace detail {

/// Rank of an atom used for L₂ and dilation blocks: eigenvalues above
/// dilation_range · λ_max, on non-null atoms only.
inline Matrix atom_range_factor(const MatrixMeasure& m, const MatrixAtom& a, const Tolerances& tol) {
    if (m.is_null_value(a.value, tol)) {
        return Matrix(0, m.dim());
    }
    return linalg::range_factor(a.value, tol.dilation_range);
}

} // namespace detail

inline MultiplicationOperator multiplication_operator(const MatrixMeasure& m,
                                                      const Tolerances& tol = default_tolerances()) {
    if (!m.is_atomic()) {
        throw InvalidInput("multiplication_operator: measure has an absolutely continuous part");
    }
    MultiplicationOperator q;
    Index offset = 0;
    for (const auto& a : m.atoms()) {
        const Index r = detail::atom_range_factor(m, a, tol).rows();
        if (r > 0) {
            q.blocks.push_back({a.t, offset, r});
            offset += r;
        }
    }
    q.matrix = Matrix::Zero(offset, offset);
    for (const auto& b : q.blocks) {
        q.matrix.diagonal().segment(b.offset, b.size).setConstant(b.location);
    }
    return q;
}

/// Q₁ ≅ Q₂ iff their eigenvalue multisets coincide.
inline bool q_unitarily_equivalent(const MatrixMeasure& m1, const MatrixMeasure& m2,
                                   const Tolerances& tol = default_tolerances()) {
    const auto s1 = multiplication_operator(m1, tol).spectrum();
    const auto s2 = multiplication_operator(m2, tol).spectrum();
    if (s1.size() != s2.size()) {
        return false;
    }
    for (std::size_t i = 0; i < s1.size(); ++i) {
        if (std::abs(s1[i] - s2[i]) > tol.eigenvalue_match) {
            return false;
        }
    }
    return true;
}

} // namespace opmeasure

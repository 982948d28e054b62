#pragma once

#include "opmeasure/borel_set.hpp"
#include "opmeasure/cell.hpp"
#include "opmeasure/errors.hpp"
#include "opmeasure/linalg.hpp"
#include "opmeasure/scalar_measure.hpp"
#include "opmeasure/tolerances.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace opmeasure {

struct MatrixAtom {
    double t;
    Matrix value;
};

/// Piecewise-constant density w.r.t. Lebesgue measure: densities[j] on
/// [grid[j], grid[j+1]).
struct AcPart {
    std::vector<double> grid;
    std::vector<Matrix> densities;
};

enum class ValueClass { positive, hermitian };

/// Matrix-valued set function on ℝ made of finitely many atoms and a
/// piecewise-constant density. With ValueClass::positive every value is PSD
/// (an operator measure Σ); with ValueClass::hermitian values are only
/// Hermitian (a measure-charge).
///
/// Values are stored as their exact Hermitian part after validation. Cells
/// are half-open, so Σ(t) := Σ((−∞, t)) is left-continuous.
template <ValueClass V>
class BasicMeasure {
public:
    static constexpr bool positive = V == ValueClass::positive;

    explicit BasicMeasure(Index dim) : dim_(dim) {
        if (dim <= 0) {
            throw InvalidInput("measure dimension must be positive");
        }
    }

    BasicMeasure(Index dim, std::vector<MatrixAtom> atoms, std::optional<AcPart> ac = std::nullopt,
                 const Tolerances& tol = default_tolerances())
        : dim_(dim), atoms_(std::move(atoms)), ac_(std::move(ac)) {
        if (dim <= 0) {
            throw InvalidInput("measure dimension must be positive");
        }
        std::sort(atoms_.begin(), atoms_.end(),
                  [](const MatrixAtom& a, const MatrixAtom& b) { return a.t < b.t; });
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (!std::isfinite(atoms_[i].t)) {
                throw InvalidInput("atom location must be finite");
            }
            if (i > 0 && atoms_[i - 1].t == atoms_[i].t) {
                throw InvalidInput("duplicate atom location t=" + format_real(atoms_[i].t));
            }
            atoms_[i].value = checked(atoms_[i].value, Cell::point(atoms_[i].t), tol);
        }
        if (ac_) {
            const auto& g = ac_->grid;
            if (g.size() < 2 || ac_->densities.size() + 1 != g.size()) {
                throw InvalidInput("AC part: grid of size " + std::to_string(g.size()) +
                                   " needs exactly grid.size()-1 densities, got " +
                                   std::to_string(ac_->densities.size()));
            }
            for (std::size_t j = 0; j + 1 < g.size(); ++j) {
                if (!std::isfinite(g[j]) || !std::isfinite(g[j + 1]) || !(g[j] < g[j + 1])) {
                    throw InvalidInput("AC part: grid must be finite and strictly increasing");
                }
                ac_->densities[j] = checked(ac_->densities[j], Cell::interval(g[j], g[j + 1]), tol);
            }
        }
        if constexpr (positive) {
            const double scale = value_scale();
            for (const auto& a : atoms_) {
                check_psd(a.value, Cell::point(a.t), scale, tol);
            }
            if (ac_) {
                for (std::size_t j = 0; j < ac_->densities.size(); ++j) {
                    check_psd(ac_->densities[j], Cell::interval(ac_->grid[j], ac_->grid[j + 1]), scale, tol);
                }
            }
        }
    }

    Index dim() const { return dim_; }
    const std::vector<MatrixAtom>& atoms() const { return atoms_; }
    const std::optional<AcPart>& ac() const { return ac_; }
    bool is_atomic() const { return !ac_.has_value(); }

    CellLayout layout() const {
        CellLayout l;
        for (const auto& a : atoms_) {
            l.points.push_back(a.t);
        }
        if (ac_) {
            l.grid = ac_->grid;
        }
        return l;
    }

    /// Own cells: every atom location and every grid interval.
    std::vector<Cell> cells() const {
        const CellLayout l = layout();
        return common_cells({&l});
    }

    /// Σ(cell), for any cell (not only own cells).
    Matrix mass(const Cell& c) const {
        if (c.is_atom()) {
            if (const MatrixAtom* a = find_atom(c.lo)) {
                return a->value;
            }
            return Matrix::Zero(dim_, dim_);
        }
        Matrix total = Matrix::Zero(dim_, dim_);
        if (ac_) {
            const auto& g = ac_->grid;
            for (std::size_t j = 0; j + 1 < g.size(); ++j) {
                const double len = overlap_length(c.lo, c.hi, g[j], g[j + 1]);
                if (len > 0.0) {
                    total += len * ac_->densities[j];
                }
            }
        }
        return total;
    }

    /// Atom value, or the (average) Lebesgue density on an interval cell.
    Matrix value(const Cell& c) const {
        if (c.is_atom()) {
            return mass(c);
        }
        return c.length() > 0.0 ? Matrix(mass(c) / c.length()) : Matrix(Matrix::Zero(dim_, dim_));
    }

    /// Largest Frobenius norm among atom values and densities; the reference
    /// scale for null-cell decisions.
    double value_scale() const {
        double s = 0.0;
        for (const auto& a : atoms_) {
            s = std::max(s, a.value.norm());
        }
        if (ac_) {
            for (const auto& d : ac_->densities) {
                s = std::max(s, d.norm());
            }
        }
        return s;
    }

    bool is_null_value(const Matrix& v, const Tolerances& tol = default_tolerances()) const {
        return v.norm() <= tol.null * value_scale();
    }

    bool is_null_cell(const Cell& c, const Tolerances& tol = default_tolerances()) const {
        return is_null_value(value(c), tol);
    }

    std::vector<Cell> positive_cells(const Tolerances& tol = default_tolerances()) const {
        std::vector<Cell> out;
        for (const Cell& c : cells()) {
            if (!is_null_cell(c, tol)) {
                out.push_back(c);
            }
        }
        return out;
    }

    bool is_zero() const { return value_scale() == 0.0; }

    Matrix total() const {
        Matrix sum = Matrix::Zero(dim_, dim_);
        for (const auto& a : atoms_) {
            sum += a.value;
        }
        if (ac_) {
            for (std::size_t j = 0; j < ac_->densities.size(); ++j) {
                sum += (ac_->grid[j + 1] - ac_->grid[j]) * ac_->densities[j];
            }
        }
        return sum;
    }

    /// Applies f to every atom value and density, yielding a measure of
    /// dimension out_dim and value class Out (validated on construction).
    template <ValueClass Out = V, class F>
    BasicMeasure<Out> map_values(Index out_dim, F&& f,
                                 const Tolerances& tol = default_tolerances()) const {
        std::vector<MatrixAtom> atoms;
        atoms.reserve(atoms_.size());
        for (const auto& a : atoms_) {
            atoms.push_back({a.t, linalg::hermitian_part(f(a.value))});
        }
        std::optional<AcPart> ac;
        if (ac_) {
            ac.emplace();
            ac->grid = ac_->grid;
            for (const auto& d : ac_->densities) {
                ac->densities.push_back(linalg::hermitian_part(f(d)));
            }
        }
        return BasicMeasure<Out>(out_dim, std::move(atoms), std::move(ac), tol);
    }

private:
    const MatrixAtom* find_atom(double t) const {
        auto it = std::lower_bound(atoms_.begin(), atoms_.end(), t,
                                   [](const MatrixAtom& a, double x) { return a.t < x; });
        return (it != atoms_.end() && it->t == t) ? &*it : nullptr;
    }

    Matrix checked(const Matrix& v, const Cell& where, const Tolerances& tol) const {
        if (v.rows() != dim_ || v.cols() != dim_) {
            throw InvalidInput("value on " + to_string(where) + " is " + std::to_string(v.rows()) +
                               "x" + std::to_string(v.cols()) + ", expected " +
                               std::to_string(dim_) + "x" + std::to_string(dim_));
        }
        if (!v.allFinite()) {
            throw InvalidInput("value on " + to_string(where) + " has non-finite entries");
        }
        if (!linalg::is_hermitian(v, tol.hermitian)) {
            throw InvalidInput("value on " + to_string(where) + " is not Hermitian");
        }
        return linalg::hermitian_part(v);
    }

    /// PSD up to tol.psd relative to the larger of the value's norm and the
    /// measure's scale, so that values at rounding level pass.
    static void check_psd(const Matrix& v, const Cell& where, double scale, const Tolerances& tol) {
        if (!linalg::is_psd(v, tol.psd, scale)) {
            const RealVector ev = linalg::hermitian_eigenvalues(v);
            throw InvalidInput("value on " + to_string(where) + " is not positive semidefinite (min eigenvalue " +
                               format_real(ev(0)) + ")");
        }
    }

    Index dim_ = 1;
    std::vector<MatrixAtom> atoms_;
    std::optional<AcPart> ac_;
};

using MatrixMeasure = BasicMeasure<ValueClass::positive>;
using MatrixCharge = BasicMeasure<ValueClass::hermitian>;

/// Σ(s): atoms inside s plus the density integrated over s.
template <ValueClass V>
Matrix measure_eval(const BasicMeasure<V>& m, const BorelSet& s) {
    Matrix total = Matrix::Zero(m.dim(), m.dim());
    for (const auto& a : m.atoms()) {
        if (s.contains(a.t)) {
            total += a.value;
        }
    }
    if (const auto& ac = m.ac()) {
        for (std::size_t j = 0; j < ac->densities.size(); ++j) {
            const double len = s.overlap_length(ac->grid[j], ac->grid[j + 1]);
            if (len > 0.0) {
                total += len * ac->densities[j];
            }
        }
    }
    return total;
}

/// ρ(Δ) = trace Σ(Δ). Null cells get weight exactly zero so that ρ(cell) > 0
/// iff the cell is non-null for Σ.
inline ScalarMeasure trace_measure(const MatrixMeasure& m,
                                   const Tolerances& tol = default_tolerances()) {
    std::vector<ScalarAtom> atoms;
    for (const auto& a : m.atoms()) {
        atoms.push_back({a.t, m.is_null_value(a.value, tol) ? 0.0
                                                            : std::max(0.0, linalg::real_trace(a.value))});
    }
    std::vector<double> grid;
    std::vector<double> dens;
    if (const auto& ac = m.ac()) {
        grid = ac->grid;
        for (const auto& d : ac->densities) {
            dens.push_back(m.is_null_value(d, tol) ? 0.0 : std::max(0.0, linalg::real_trace(d)));
        }
    }
    return ScalarMeasure(std::move(atoms), std::move(grid), std::move(dens));
}

/// The trace of a charge is not equivalent to it.
ScalarMeasure trace_measure(const MatrixCharge&, const Tolerances& = default_tolerances()) = delete;

struct DensityCell {
    Cell cell;
    Matrix psi;
    double rho_weight;
};

/// Ψ = dΣ/dρ on every cell of positive ρ-weight.
struct DensityField {
    Index dim = 0;
    std::vector<DensityCell> cells;
    ScalarMeasure base;

    const DensityCell* find(const Cell& c) const {
        auto it = std::lower_bound(cells.begin(), cells.end(), c,
                                   [](const DensityCell& d, const Cell& x) { return d.cell < x; });
        return (it != cells.end() && it->cell == c) ? &*it : nullptr;
    }
};

/// Radon–Nikodym density of m against rho on their common cell refinement.
/// Throws if some cell carries mass of m but no ρ-weight.
template <ValueClass V>
DensityField density(const BasicMeasure<V>& m, const ScalarMeasure& rho,
                     const Tolerances& tol = default_tolerances()) {
    DensityField field;
    field.dim = m.dim();
    field.base = rho;
    const CellLayout lm = m.layout();
    const CellLayout lr = rho.layout();
    for (const Cell& c : common_cells({&lm, &lr})) {
        const Matrix v = m.value(c);
        const bool null = m.is_null_value(v, tol);
        const double r = rho.value(c);
        if (r > 0.0) {
            Matrix psi = null ? Matrix(Matrix::Zero(m.dim(), m.dim())) : Matrix(v / r);
            field.cells.push_back({c, std::move(psi), rho.weight(c)});
        } else if (!null) {
            throw InvalidInput("density: reference measure does not dominate on cell " + to_string(c));
        }
    }
    return field;
}

inline DensityField density(const MatrixMeasure& m, const Tolerances& tol = default_tolerances()) {
    return density(m, trace_measure(m, tol), tol);
}

/// Σ_T(Δ) = T*Σ(Δ)T for invertible T.
template <ValueClass V>
BasicMeasure<V> conjugate_by(const BasicMeasure<V>& m, const Matrix& t,
                             const Tolerances& tol = default_tolerances()) {
    if (t.rows() != m.dim() || t.cols() != m.dim()) {
        throw InvalidInput("conjugate_by: T has wrong shape");
    }
    if (!linalg::is_invertible(t, tol.invertible)) {
        throw InvalidInput("conjugate_by: T is singular");
    }
    const Matrix ta = t.adjoint();
    return m.map_values(m.dim(), [&](const Matrix& a) -> Matrix { return ta * a * t; }, tol);
}

/// P_L Σ ↾ L expressed in the given orthonormal basis of L (columns).
template <ValueClass V>
BasicMeasure<V> compress(const BasicMeasure<V>& m, const Matrix& basis,
                         const Tolerances& tol = default_tolerances()) {
    if (basis.rows() != m.dim() || basis.cols() == 0) {
        throw InvalidInput("compress: basis must have " + std::to_string(m.dim()) +
                           " rows and at least one column");
    }
    if (linalg::orthonormality_defect(basis) > tol.orthonormal) {
        throw InvalidInput("compress: basis is not orthonormal");
    }
    const Matrix ba = basis.adjoint();
    return m.map_values(basis.cols(), [&](const Matrix& a) -> Matrix { return ba * a * basis; }, tol);
}

template <ValueClass V>
BasicMeasure<V> scaled(const BasicMeasure<V>& m, double c) {
    if constexpr (V == ValueClass::positive) {
        if (!(c >= 0.0)) {
            throw InvalidInput("scaled: negative factor would break positivity");
        }
    }
    return m.map_values(m.dim(), [c](const Matrix& a) -> Matrix { return c * a; });
}

/// Σ(· ∩ s). The grid is refined at the interval ends of s.
template <ValueClass V>
BasicMeasure<V> restricted(const BasicMeasure<V>& m, const BorelSet& s) {
    std::vector<MatrixAtom> atoms;
    for (const auto& a : m.atoms()) {
        if (s.contains(a.t)) {
            atoms.push_back(a);
        }
    }
    std::optional<AcPart> ac;
    if (m.ac()) {
        const auto& g = m.ac()->grid;
        std::vector<double> grid = g;
        for (const auto& iv : s.intervals()) {
            for (double e : {iv.lo, iv.hi}) {
                if (g.front() < e && e < g.back()) {
                    grid.push_back(e);
                }
            }
        }
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        ac.emplace();
        ac->grid = grid;
        for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
            const Cell piece = Cell::interval(grid[j], grid[j + 1]);
            const double inside = s.overlap_length(piece.lo, piece.hi);
            ac->densities.push_back(inside > 0.0 ? m.value(piece)
                                                 : Matrix(Matrix::Zero(m.dim(), m.dim())));
        }
    }
    return BasicMeasure<V>(m.dim(), std::move(atoms), std::move(ac));
}

/// Σ ⊕ 0 with a zero block of size extra.
template <ValueClass V>
BasicMeasure<V> zero_padded(const BasicMeasure<V>& m, Index extra) {
    const Index n = m.dim() + extra;
    return m.map_values(n, [&](const Matrix& a) -> Matrix {
        Matrix out = Matrix::Zero(n, n);
        out.topLeftCorner(m.dim(), m.dim()) = a;
        return out;
    });
}

inline MatrixCharge as_charge(const MatrixMeasure& m) {
    return m.map_values<ValueClass::hermitian>(m.dim(), [](const Matrix& a) { return a; });
}

} // namespace opmeasure

#pragma once

#include "opmeasure/borel_set.hpp"
#include "opmeasure/cell.hpp"
#include "opmeasure/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace opmeasure {

struct ScalarAtom {
    double t;
    double weight;
};

/// Nonnegative measure on ℝ: finitely many atoms plus a piecewise-constant
/// density on a grid. Realizes ρ, μ_f and exterior-power type measures.
class ScalarMeasure {
public:
    ScalarMeasure() = default;

    explicit ScalarMeasure(std::vector<ScalarAtom> atoms, std::vector<double> grid = {},
                           std::vector<double> densities = {})
        : atoms_(std::move(atoms)), grid_(std::move(grid)), densities_(std::move(densities)) {
        std::sort(atoms_.begin(), atoms_.end(),
                  [](const ScalarAtom& a, const ScalarAtom& b) { return a.t < b.t; });
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            const auto& a = atoms_[i];
            if (!std::isfinite(a.t) || !std::isfinite(a.weight) || a.weight < 0.0) {
                throw InvalidInput("scalar measure: atom at t=" + format_real(a.t) +
                                   " has invalid weight " + format_real(a.weight));
            }
            if (i > 0 && atoms_[i - 1].t == a.t) {
                throw InvalidInput("scalar measure: duplicate atom location t=" + format_real(a.t));
            }
        }
        if (grid_.empty() && densities_.empty()) {
            return;
        }
        if (grid_.size() < 2 || densities_.size() + 1 != grid_.size()) {
            throw InvalidInput("scalar measure: grid of size " + std::to_string(grid_.size()) +
                               " needs exactly grid.size()-1 densities, got " +
                               std::to_string(densities_.size()));
        }
        for (std::size_t j = 0; j + 1 < grid_.size(); ++j) {
            if (!(grid_[j] < grid_[j + 1]) || !std::isfinite(grid_[j + 1]) || !std::isfinite(grid_[j])) {
                throw InvalidInput("scalar measure: grid must be finite and strictly increasing");
            }
            if (!std::isfinite(densities_[j]) || densities_[j] < 0.0) {
                throw InvalidInput("scalar measure: negative density on " +
                                   to_string(Cell::interval(grid_[j], grid_[j + 1])));
            }
        }
    }

    const std::vector<ScalarAtom>& atoms() const { return atoms_; }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& densities() const { return densities_; }
    bool has_ac() const { return !grid_.empty(); }

    CellLayout layout() const {
        CellLayout l;
        l.points.reserve(atoms_.size());
        for (const auto& a : atoms_) {
            l.points.push_back(a.t);
        }
        l.grid = grid_;
        return l;
    }

    std::vector<Cell> cells() const {
        const CellLayout l = layout();
        return common_cells({&l});
    }

    /// ρ(cell).
    double weight(const Cell& c) const {
        if (c.is_atom()) {
            auto it = std::lower_bound(atoms_.begin(), atoms_.end(), c.lo,
                                       [](const ScalarAtom& a, double t) { return a.t < t; });
            return (it != atoms_.end() && it->t == c.lo) ? it->weight : 0.0;
        }
        double total = 0.0;
        for (std::size_t j = 0; j + 1 < grid_.size(); ++j) {
            total += densities_[j] * overlap_length(c.lo, c.hi, grid_[j], grid_[j + 1]);
        }
        return total;
    }

    /// Atom weight, or the (average) density on an interval cell.
    double value(const Cell& c) const {
        if (c.is_atom()) {
            return weight(c);
        }
        return c.length() > 0.0 ? weight(c) / c.length() : 0.0;
    }

    double evaluate(const BorelSet& s) const {
        double total = 0.0;
        for (const auto& a : atoms_) {
            if (s.contains(a.t)) {
                total += a.weight;
            }
        }
        for (std::size_t j = 0; j + 1 < grid_.size(); ++j) {
            total += densities_[j] * s.overlap_length(grid_[j], grid_[j + 1]);
        }
        return total;
    }

    double total() const { return evaluate(BorelSet::line()); }

    bool is_zero() const { return total() == 0.0; }

    std::vector<Cell> positive_cells() const {
        std::vector<Cell> out;
        for (const Cell& c : cells()) {
            if (weight(c) > 0.0) {
                out.push_back(c);
            }
        }
        return out;
    }

private:
    std::vector<ScalarAtom> atoms_;
    std::vector<double> grid_;
    std::vector<double> densities_;
};

} // namespace opmeasure

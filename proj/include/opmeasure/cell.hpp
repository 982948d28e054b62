#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace opmeasure {

/// Elementary piece of the line on which a measure is constant: a single
/// point carrying an atom, or a half-open interval [lo, hi) of the AC grid.
struct Cell {
    enum class Kind : std::uint8_t { atom, interval };

    Kind kind = Kind::atom;
    double lo = 0.0;
    double hi = 0.0;

    static constexpr Cell point(double t) { return {Kind::atom, t, t}; }
    static constexpr Cell interval(double a, double b) { return {Kind::interval, a, b}; }

    constexpr bool is_atom() const { return kind == Kind::atom; }
    constexpr double length() const { return is_atom() ? 0.0 : hi - lo; }

    friend constexpr bool operator==(const Cell&, const Cell&) = default;

    /// Orders by left end; a point sorts before an interval starting there.
    friend constexpr bool operator<(const Cell& a, const Cell& b) {
        if (a.lo != b.lo) {
            return a.lo < b.lo;
        }
        if (a.kind != b.kind) {
            return a.kind == Kind::atom;
        }
        return a.hi < b.hi;
    }
};

inline std::string format_real(double x) {
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

inline std::string to_string(const Cell& c) {
    if (c.is_atom()) {
        return "{" + format_real(c.lo) + "}";
    }
    return "[" + format_real(c.lo) + ", " + format_real(c.hi) + ")";
}

/// Atom locations and grid breakpoints of one measure, enough to build cell
/// refinements shared between several measures.
struct CellLayout {
    std::vector<double> points;
    std::vector<double> grid;
};

/// Coarsest cell family on which every listed measure is constant: the union
/// of atom locations, plus the intervals cut by the union of breakpoints that
/// lie inside at least one grid hull.
inline std::vector<Cell> common_cells(std::initializer_list<const CellLayout*> layouts) {
    std::vector<double> points;
    std::vector<double> breaks;
    for (const CellLayout* l : layouts) {
        points.insert(points.end(), l->points.begin(), l->points.end());
        breaks.insert(breaks.end(), l->grid.begin(), l->grid.end());
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    std::vector<Cell> cells;
    cells.reserve(points.size() + breaks.size());
    for (double t : points) {
        cells.push_back(Cell::point(t));
    }
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
        const bool covered = std::any_of(layouts.begin(), layouts.end(), [&](const CellLayout* l) {
            return l->grid.size() >= 2 && l->grid.front() <= mid && mid < l->grid.back();
        });
        if (covered) {
            cells.push_back(Cell::interval(breaks[i], breaks[i + 1]));
        }
    }
    std::sort(cells.begin(), cells.end());
    return cells;
}

/// Lebesgue measure of [a, b) ∩ [c, d).
inline double overlap_length(double a, double b, double c, double d) {
    const double lo = std::max(a, c);
    const double hi = std::min(b, d);
    return hi > lo ? hi - lo : 0.0;
}

} // namespace opmeasure

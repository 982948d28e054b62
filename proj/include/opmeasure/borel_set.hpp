#pragma once

#include "opmeasure/cell.hpp"
#include "opmeasure/errors.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace opmeasure {

/// Finite union of half-open intervals [a, b) and singletons, kept in
/// canonical form: intervals sorted, disjoint and non-adjacent; points sorted,
/// unique and outside every interval. Interval ends may be ±∞.
class BorelSet {
public:
    struct Interval {
        double lo;
        double hi;
        friend bool operator==(const Interval&, const Interval&) = default;
    };

    BorelSet() = default;

    BorelSet(std::vector<Interval> intervals, std::vector<double> points)
        : intervals_(std::move(intervals)), points_(std::move(points)) {
        canonicalize();
    }

    static BorelSet empty() { return {}; }
    static BorelSet interval(double a, double b) { return BorelSet({{a, b}}, {}); }
    static BorelSet point(double t) { return BorelSet({}, {t}); }
    static BorelSet line() {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return interval(-inf, inf);
    }

    const std::vector<Interval>& intervals() const { return intervals_; }
    const std::vector<double>& points() const { return points_; }

    bool is_empty() const { return intervals_.empty() && points_.empty(); }

    bool contains(double t) const {
        return in_intervals(t) || std::binary_search(points_.begin(), points_.end(), t);
    }

    /// Lebesgue measure of this set ∩ [a, b).
    double overlap_length(double a, double b) const {
        double total = 0.0;
        for (const auto& iv : intervals_) {
            total += opmeasure::overlap_length(iv.lo, iv.hi, a, b);
        }
        return total;
    }

    BorelSet unite(const BorelSet& other) const {
        auto iv = intervals_;
        iv.insert(iv.end(), other.intervals_.begin(), other.intervals_.end());
        auto pts = points_;
        pts.insert(pts.end(), other.points_.begin(), other.points_.end());
        return {std::move(iv), std::move(pts)};
    }

    BorelSet intersect(const BorelSet& other) const {
        std::vector<Interval> iv;
        for (const auto& a : intervals_) {
            for (const auto& b : other.intervals_) {
                const double lo = std::max(a.lo, b.lo);
                const double hi = std::min(a.hi, b.hi);
                if (lo < hi) {
                    iv.push_back({lo, hi});
                }
            }
        }
        std::vector<double> pts;
        for (double t : points_) {
            if (other.contains(t)) {
                pts.push_back(t);
            }
        }
        for (double t : other.points_) {
            if (in_intervals(t)) {
                pts.push_back(t);
            }
        }
        return {std::move(iv), std::move(pts)};
    }

    bool disjoint_with(const BorelSet& other) const { return intersect(other).is_empty(); }

    friend BorelSet operator|(const BorelSet& a, const BorelSet& b) { return a.unite(b); }
    friend BorelSet operator&(const BorelSet& a, const BorelSet& b) { return a.intersect(b); }
    friend bool operator==(const BorelSet&, const BorelSet&) = default;

private:
    bool in_intervals(double t) const {
        auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                                   [](double x, const Interval& iv) { return x < iv.lo; });
        if (it == intervals_.begin()) {
            return false;
        }
        --it;
        return it->lo <= t && t < it->hi;
    }

    void canonicalize() {
        std::erase_if(intervals_, [](const Interval& iv) { return !(iv.lo < iv.hi); });
        std::sort(intervals_.begin(), intervals_.end(),
                  [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        std::vector<Interval> merged;
        for (const auto& iv : intervals_) {
            if (!merged.empty() && iv.lo <= merged.back().hi) {
                merged.back().hi = std::max(merged.back().hi, iv.hi);
            } else {
                merged.push_back(iv);
            }
        }
        intervals_ = std::move(merged);

        for (double t : points_) {
            if (std::isnan(t)) {
                throw InvalidInput("BorelSet: NaN point");
            }
        }
        std::sort(points_.begin(), points_.end());
        points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
        std::erase_if(points_, [this](double t) { return in_intervals(t); });
    }

    std::vector<Interval> intervals_;
    std::vector<double> points_;
};

inline std::string to_string(const BorelSet& s) {
    if (s.is_empty()) {
        return "{}";
    }
    std::string out;
    for (const auto& iv : s.intervals()) {
        if (!out.empty()) {
            out += " u ";
        }
        out += to_string(Cell::interval(iv.lo, iv.hi));
    }
    for (double t : s.points()) {
        if (!out.empty()) {
            out += " u ";
        }
        out += to_string(Cell::point(t));
    }
    return out;
}

} // namespace opmeasure

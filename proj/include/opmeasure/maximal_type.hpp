#pragma once

#include "opmeasure/measure.hpp"
#include "opmeasure/multiplicity.hpp"
#include "opmeasure/random.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace opmeasure {

namespace detail {

inline void check_vector(const MatrixMeasure& m, const Vector& f, const char* who) {
    if (f.size() != m.dim()) {
        throw InvalidInput(std::string(who) + ": vector has dimension " + std::to_string(f.size()) +
                           ", measure has " + std::to_string(m.dim()));
    }
}

inline double quadratic_form(const Matrix& a, const Vector& f) { return f.dot(a * f).real(); }

} // namespace detail

/// μ_f(δ) = (Σ(δ) f, f).
inline ScalarMeasure vector_measure(const MatrixMeasure& m, const Vector& f) {
    detail::check_vector(m, f, "vector_measure");
    std::vector<ScalarAtom> atoms;
    for (const auto& a : m.atoms()) {
        atoms.push_back({a.t, std::max(0.0, detail::quadratic_form(a.value, f))});
    }
    std::vector<double> grid;
    std::vector<double> dens;
    if (const auto& ac = m.ac()) {
        grid = ac->grid;
        for (const auto& d : ac->densities) {
            dens.push_back(std::max(0.0, detail::quadratic_form(d, f)));
        }
    }
    return ScalarMeasure(std::move(atoms), std::move(grid), std::move(dens));
}

/// Γ(f) = {dμ_f/dρ > 0} over the positive cells of ρ = trace Σ.
inline SupportSet support_of_vector(const MatrixMeasure& m, const Vector& f,
                                    const Tolerances& tol = default_tolerances()) {
    detail::check_vector(m, f, "support_of_vector");
    const double fn = f.squaredNorm();
    std::vector<Cell> out;
    for (const Cell& c : m.positive_cells(tol)) {
        const Matrix v = m.value(c);
        const double rho = linalg::real_trace(v);
        if (detail::quadratic_form(v, f) > tol.support * rho * fn) {
            out.push_back(c);
        }
    }
    return SupportSet(std::move(out));
}

/// f ∈ Ω_Σ: μ_f ~ Σ, i.e. Γ(f) = Γ_1(Σ) mod ρ.
inline bool is_maximal_type(const MatrixMeasure& m, const Vector& f,
                            const Tolerances& tol = default_tolerances()) {
    if (f.size() == m.dim() && f.squaredNorm() == 0.0) {
        return false;
    }
    const ScalarMeasure rho = trace_measure(m, tol);
    if (rho.is_zero()) {
        return false;
    }
    return equivalent_mod(support_of_vector(m, f, tol), hellinger_support(m, 1, tol), rho, tol);
}

struct VectorTypeReport {
    Vector vector;
    SupportSet support;
    bool is_maximal = false;
};

inline VectorTypeReport classify_vector(const MatrixMeasure& m, const Vector& f,
                                        const Tolerances& tol = default_tolerances()) {
    return {f, support_of_vector(m, f, tol), is_maximal_type(m, f, tol)};
}

struct MaximalTypeSample {
    Vector vector;
    std::size_t tries = 0;
};

/// Draws standard complex Gaussian vectors until one has maximal type.
inline MaximalTypeSample sample_maximal_type(const MatrixMeasure& m, std::uint64_t seed,
                                             std::size_t max_tries,
                                             const Tolerances& tol = default_tolerances()) {
    if (m.is_zero()) {
        throw InvalidInput("sample_maximal_type: measure is zero");
    }
    Rng rng(seed);
    for (std::size_t k = 1; k <= max_tries; ++k) {
        Vector f = complex_gaussian(m.dim(), rng);
        if (is_maximal_type(m, f, tol)) {
            return {std::move(f), k};
        }
    }
    throw SearchExhausted("no maximal-type vector among " + std::to_string(max_tries) + " samples",
                          max_tries);
}

/// Fraction of Gaussian samples g ∈ span(basis) with g ∈ Ω_Σ.
inline double maximal_type_fraction(const MatrixMeasure& m, const Matrix& basis, std::size_t n_samples,
                                    std::uint64_t seed, const Tolerances& tol = default_tolerances()) {
    if (basis.rows() != m.dim() || basis.cols() == 0) {
        throw InvalidInput("maximal_type_fraction: subspace basis has the wrong shape");
    }
    if (linalg::orthonormality_defect(basis) > tol.orthonormal) {
        throw InvalidInput("maximal_type_fraction: subspace basis is not orthonormal");
    }
    if (n_samples == 0) {
        return 0.0;
    }
    const ScalarMeasure rho = trace_measure(m, tol);
    const SupportSet gamma1 = hellinger_support(m, 1, tol);
    Rng rng(seed);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const Vector g = basis * complex_gaussian(basis.cols(), rng);
        if (g.squaredNorm() > 0.0 && equivalent_mod(support_of_vector(m, g, tol), gamma1, rho, tol)) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(n_samples);
}

} // namespace opmeasure

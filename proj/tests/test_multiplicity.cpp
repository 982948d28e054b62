#include "catch2/catch_amalgamated.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace opmeasure;
using fixtures::diag;

namespace {

SupportSet points(std::initializer_list<double> ts) {
    std::vector<Cell> cells;
    for (double t : ts) {
        cells.push_back(Cell::point(t));
    }
    return SupportSet(std::move(cells));
}

/// ρ' ~ ρ with independent random positive factors per atom and per cell.
ScalarMeasure rescaled(const ScalarMeasure& rho, Rng& rng) {
    std::vector<ScalarAtom> atoms;
    for (const auto& a : rho.atoms()) {
        atoms.push_back({a.t, a.weight * fixtures::uniform(rng, 0.01, 100.0)});
    }
    std::vector<double> dens;
    for (double d : rho.densities()) {
        dens.push_back(d * fixtures::uniform(rng, 0.01, 100.0));
    }
    return ScalarMeasure(std::move(atoms), rho.grid(), std::move(dens));
}

} // namespace

TEST_CASE("multiplicity of the three-jump measure", "[multiplicity]") {
    const auto m = fixtures::jumps_123();
    const auto n = multiplicity_function(m);
    CHECK(n.at(Cell::point(1.0)) == 1);
    CHECK(n.at(Cell::point(2.0)) == 1);
    CHECK(n.at(Cell::point(3.0)) == 2);
    CHECK(n.values.size() == 3);
    CHECK(total_multiplicity(m) == 2);
    CHECK(hellinger_support(m, 1) == points({1, 2, 3}));
    CHECK(hellinger_support(m, 2) == points({3}));
    CHECK(hellinger_support(m, 3).empty());
    CHECK_THROWS_AS(hellinger_support(m, 0), InvalidInput);
}

TEST_CASE("multiplicity of simple measures", "[multiplicity]") {
    const MatrixMeasure identity(4, {{0.0, Matrix::Identity(4, 4)}});
    CHECK(multiplicity_function(identity).at(Cell::point(0.0)) == 4);

    Rng rng(5);
    const Matrix b = complex_gaussian_matrix(4, 2, rng);
    const Matrix a = b * b.adjoint();
    const MatrixMeasure rank_two(4, {{1.0, linalg::hermitian_part(a)}});
    CHECK(multiplicity_function(rank_two).at(Cell::point(1.0)) == oracle::qr_rank(a));
    CHECK(oracle::qr_rank(a) == 2);

    const MatrixMeasure scalar(1, {{0.0, diag({2})}}, AcPart{{0.0, 1.0}, {diag({0.5})}});
    CHECK(total_multiplicity(scalar) == 1);
    CHECK(total_multiplicity(zero_padded(fixtures::jumps_123(), 1)) == 2);

    CHECK(multiplicity_function(MatrixMeasure(3)).empty());
    CHECK(total_multiplicity(MatrixMeasure(3)) == 0);
}

TEST_CASE("multiplicity with a density part", "[multiplicity]") {
    AcPart ac{{0.0, 1.0, 2.0, 3.0}, {diag({1, 0, 0}), diag({1, 1, 0}), Matrix::Zero(3, 3)}};
    const MatrixMeasure m(3, {{0.5, Matrix::Identity(3, 3)}}, ac);
    const auto n = multiplicity_function(m);
    CHECK(n.at(Cell::interval(0.0, 1.0)) == 1);
    CHECK(n.at(Cell::point(0.5)) == 3);
    CHECK(n.at(Cell::interval(1.0, 2.0)) == 2);
    CHECK(n.at(Cell::interval(2.0, 3.0)) == 0);
    CHECK(hellinger_support(m, 3) == points({0.5}));
}

TEST_CASE("subordination", "[multiplicity]") {
    const auto m = fixtures::jumps_123();
    CHECK(is_subordinate(m, m));
    const auto at_one = restricted(m, BorelSet::point(1.0));
    CHECK(is_subordinate(at_one, m));
    CHECK_FALSE(is_subordinate(m, at_one));

    const MatrixMeasure left(1, {{0.0, diag({1})}});
    const MatrixMeasure right(2, {{1.0, diag({1, 1})}});
    CHECK_FALSE(is_subordinate(left, right));
    CHECK_FALSE(is_subordinate(right, left));
}

TEST_CASE("spectral subordination and equivalence", "[multiplicity]") {
    const auto m = fixtures::jumps_123();
    CHECK(is_spectrally_equivalent(m, scaled(m, 2.0)));

    const auto first = compress(m, fixtures::columns({fixtures::vec({1, 0})}));
    CHECK(is_spectrally_subordinate(first, m));
    CHECK_FALSE(is_spectrally_equivalent(first, m));
    CHECK_FALSE(is_spectrally_subordinate(m, first));

    const auto dil = naimark_dilate(fixtures::jumps_123_povm());
    CHECK(is_spectrally_equivalent(m, dil.E));

    // Same null sets, lower rank at 3.
    const MatrixMeasure thin(2, {{1.0, diag({1, 0})}, {2.0, diag({0, 1})}, {3.0, diag({1, 0})}});
    CHECK(is_subordinate(m, thin));
    CHECK(is_spectrally_subordinate(thin, m));
    CHECK_FALSE(is_spectrally_subordinate(m, thin));
}

TEST_CASE("support equality modulo rho", "[multiplicity]") {
    const ScalarMeasure rho({{1.0, 1.0}, {2.0, 1e-20}, {3.0, 2.0}});
    CHECK(equivalent_mod(points({1, 3}), points({1, 2, 3}), rho));
    CHECK_FALSE(equivalent_mod(points({1}), points({1, 3}), rho));
    CHECK(symmetric_difference_weight(points({1}), points({3}), rho) == 3.0);
}

TEST_CASE("multiplicity is basis independent", "[multiplicity][property]") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = fixtures::random_measure(rng);
        const auto n = multiplicity_function(m);
        const auto nu = multiplicity_function(conjugate_by(m, random_unitary(m.dim(), rng)));
        REQUIRE(n.values.size() == nu.values.size());
        for (std::size_t i = 0; i < n.values.size(); ++i) {
            CHECK(n.values[i].first == nu.values[i].first);
            CHECK(n.values[i].second == nu.values[i].second);
        }
    }
}

TEST_CASE("multiplicity does not depend on the choice of rho", "[multiplicity][property]") {
    Rng rng(19);
    for (int trial = 0; trial < 30; ++trial) {
        const auto m = fixtures::random_measure(rng);
        const auto rho = trace_measure(m);
        const auto rho2 = rescaled(rho, rng);
        const auto n = multiplicity_function(m, rho);
        const auto n2 = multiplicity_function(m, rho2);
        REQUIRE(n.values.size() == n2.values.size());
        for (Index i = 1; i <= m.dim(); ++i) {
            CHECK(n.level_set(i) == n2.level_set(i));
        }
        for (const auto& [cell, k] : n.values) {
            CHECK(n2.at(cell) == k);
        }
    }
}

TEST_CASE("Hellinger supports are nested", "[multiplicity][property]") {
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = fixtures::random_measure(rng);
        for (Index i = 1; i < m.dim() + 1; ++i) {
            CHECK(hellinger_support(m, i + 1).is_subset_of(hellinger_support(m, i)));
        }
        const auto n = multiplicity_function(m);
        for (const auto& [cell, k] : n.values) {
            CHECK(k >= 0);
            CHECK(k <= m.dim());
        }
    }
}

TEST_CASE("full rank equals the supremum over leading minors", "[multiplicity][property]") {
    Rng rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = fixtures::random_measure(rng);
        const Matrix u = random_unitary(m.dim(), rng);
        for (const auto& d : density(m).cells) {
            const Matrix psi = u.adjoint() * d.psi * u;
            CHECK(oracle::sup_leading_minor_rank(psi) == density_rank(d.psi));
        }
    }
}

#include "catch2/catch_amalgamated.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace opmeasure;
using fixtures::diag;
using fixtures::max_abs;
using Catch::Approx;

TEST_CASE("measure_eval on the three-jump measure", "[measure_core]") {
    const auto m = fixtures::jumps_123();
    CHECK(max_abs(measure_eval(m, BorelSet::point(1.0)) - diag({1, 0})) == 0.0);
    CHECK(max_abs(measure_eval(m, BorelSet::empty())) == 0.0);
    CHECK(max_abs(measure_eval(m, BorelSet::interval(0.0, 2.5)) - Matrix::Identity(2, 2)) == 0.0);
    CHECK(max_abs(measure_eval(m, BorelSet::line()) - diag({2, 2})) == 0.0);
    // Half-open cells: [1, 3) misses the jump at 3.
    CHECK(max_abs(measure_eval(m, BorelSet::interval(1.0, 3.0)) - Matrix::Identity(2, 2)) == 0.0);
}

TEST_CASE("measure_eval integrates the density part", "[measure_core]") {
    AcPart ac{{0.0, 1.0, 3.0}, {diag({2, 0}), diag({1, 1})}};
    const MatrixMeasure m(2, {{0.5, diag({0, 1})}}, ac);
    CHECK(max_abs(measure_eval(m, BorelSet::interval(0.5, 2.0)) - diag({2, 0}) * 0.5 - diag({1, 1}) -
                  diag({0, 1})) < 1e-15);
    CHECK(max_abs(m.total() - diag({4, 3})) < 1e-15);
}

TEST_CASE("trace measure", "[measure_core]") {
    const auto rho = trace_measure(fixtures::jumps_123());
    REQUIRE(rho.atoms().size() == 3);
    CHECK(rho.weight(Cell::point(1.0)) == 1.0);
    CHECK(rho.weight(Cell::point(2.0)) == 1.0);
    CHECK(rho.weight(Cell::point(3.0)) == 2.0);
    CHECK(trace_measure(MatrixMeasure(3)).is_zero());

    Rng rng(7);
    const Matrix a = random_psd(3, 3, rng);
    const MatrixMeasure single(3, {{0.0, a}});
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    CHECK(trace_measure(single).weight(Cell::point(0.0)) == Approx(es.eigenvalues().sum()).epsilon(1e-13));
}

TEST_CASE("density against the trace measure", "[measure_core]") {
    const auto m = fixtures::jumps_123();
    const auto field = density(m);
    REQUIRE(field.find(Cell::point(3.0)) != nullptr);
    CHECK(max_abs(field.find(Cell::point(3.0))->psi - diag({0.5, 0.5})) < 1e-15);
    CHECK(max_abs(field.find(Cell::point(1.0))->psi - diag({1, 0})) < 1e-15);
    for (const auto& d : field.cells) {
        CHECK(d.psi.trace().real() == Approx(1.0).margin(1e-10));
    }

    const auto rho = trace_measure(m);
    const auto field_scaled = density(scaled(m, 3.0), rho);
    for (const auto& d : field_scaled.cells) {
        CHECK(max_abs(d.psi - 3.0 * field.find(d.cell)->psi) < 1e-14);
    }
}

TEST_CASE("density rejects a reference measure that does not dominate", "[measure_core]") {
    const auto m = fixtures::jumps_123();
    const ScalarMeasure rho({{1.0, 1.0}, {3.0, 1.0}});
    CHECK_THROWS_AS(density(m, rho), InvalidInput);
}

TEST_CASE("conjugate_by", "[measure_core]") {
    const auto m = fixtures::jumps_123();
    const auto same = conjugate_by(m, Matrix::Identity(2, 2));
    for (const Cell& c : m.cells()) {
        CHECK(max_abs(same.mass(c) - m.mass(c)) == 0.0);
    }
    const Complex c(1.0, -2.0);
    const auto sc = conjugate_by(m, c * Matrix::Identity(2, 2));
    for (const Cell& cell : m.cells()) {
        CHECK(max_abs(sc.mass(cell) - std::norm(c) * m.mass(cell)) < 1e-14);
    }
    Matrix singular = Matrix::Zero(2, 2);
    singular(0, 0) = 1.0;
    CHECK_THROWS_AS(conjugate_by(m, singular), InvalidInput);

    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto r = fixtures::random_measure(rng);
        const Matrix t = random_invertible(r.dim(), 1e2, rng);
        const auto rt = conjugate_by(r, t);
        const BorelSet s = fixtures::random_borel_set(rng);
        const Matrix lhs = t.adjoint() * measure_eval(r, s) * t;
        CHECK(max_abs(lhs - measure_eval(rt, s)) <= 1e-10 * (1.0 + max_abs(lhs)));
    }
}

TEST_CASE("compress", "[measure_core]") {
    const auto m = fixtures::jumps_123();
    const auto full = compress(m, Matrix::Identity(2, 2));
    for (const Cell& c : m.cells()) {
        CHECK(max_abs(full.mass(c) - m.mass(c)) == 0.0);
    }

    const auto first = compress(m, fixtures::columns({fixtures::vec({1, 0})}));
    CHECK(first.dim() == 1);
    CHECK(first.mass(Cell::point(1.0))(0, 0).real() == 1.0);
    CHECK(first.mass(Cell::point(2.0))(0, 0).real() == 0.0);
    CHECK(first.mass(Cell::point(3.0))(0, 0).real() == 1.0);
    CHECK(trace_measure(first).positive_cells() == std::vector<Cell>{Cell::point(1.0), Cell::point(3.0)});

    const double r = 1.0 / std::sqrt(2.0);
    const auto diagonal = compress(m, fixtures::columns({fixtures::vec({r, r})}));
    CHECK(diagonal.mass(Cell::point(1.0))(0, 0).real() == Approx(0.5).margin(1e-15));
    CHECK(diagonal.mass(Cell::point(2.0))(0, 0).real() == Approx(0.5).margin(1e-15));
    CHECK(diagonal.mass(Cell::point(3.0))(0, 0).real() == Approx(1.0).margin(1e-15));

    CHECK_THROWS_AS(compress(m, fixtures::columns({fixtures::vec({1, 1})})), InvalidInput);
}

TEST_CASE("construction validates values", "[measure_core]") {
    Matrix non_hermitian = Matrix::Zero(2, 2);
    non_hermitian(0, 1) = 1.0;
    CHECK_THROWS_AS(MatrixMeasure(2, {{0.0, non_hermitian}}), InvalidInput);
    CHECK_THROWS_AS(MatrixMeasure(2, {{0.0, diag({1, -1})}}), InvalidInput);
    CHECK_NOTHROW(MatrixCharge(2, {{0.0, diag({1, -1})}}));
    CHECK_THROWS_AS(MatrixMeasure(2, {{0.0, diag({1, 0})}, {0.0, diag({0, 1})}}), InvalidInput);
    CHECK_THROWS_AS(MatrixMeasure(2, {{0.0, diag({1, 0, 0})}}), InvalidInput);
    CHECK_THROWS_AS(MatrixMeasure(2, {}, AcPart{{1.0, 0.0}, {diag({1, 1})}}), InvalidInput);
    CHECK_THROWS_AS(MatrixMeasure(2, {}, AcPart{{0.0, 1.0}, {}}), InvalidInput);
    CHECK_THROWS_AS(MatrixMeasure(0), InvalidInput);

    try {
        MatrixMeasure(2, {{1.0, diag({1, 0})}, {2.5, diag({1, -0.5})}});
        FAIL("non-PSD atom accepted");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("{2.5}") != std::string::npos);
    }
}

TEST_CASE("atoms are stored sorted", "[measure_core]") {
    const MatrixMeasure m(1, {{3.0, diag({1})}, {-1.0, diag({2})}});
    CHECK(m.atoms().front().t == -1.0);
    CHECK(m.cells() == std::vector<Cell>{Cell::point(-1.0), Cell::point(3.0)});
}

TEST_CASE("BorelSet canonical form", "[measure_core]") {
    const BorelSet s = BorelSet::interval(0, 1) | BorelSet::interval(0.5, 2) | BorelSet::point(1.5) |
                       BorelSet::point(3) | BorelSet::interval(2, 2.5);
    REQUIRE(s.intervals().size() == 1);
    CHECK(s.intervals()[0].lo == 0.0);
    CHECK(s.intervals()[0].hi == 2.5);
    CHECK(s.points() == std::vector<double>{3.0});
    CHECK(s.contains(0.0));
    CHECK_FALSE(s.contains(2.5));
    CHECK((s & BorelSet::interval(2.4, 4)) == (BorelSet::interval(2.4, 2.5) | BorelSet::point(3)));
    CHECK(BorelSet::interval(0, 1).disjoint_with(BorelSet::interval(1, 2)));
    CHECK(BorelSet::interval(1, 1).is_empty());
}

TEST_CASE("restriction and padding", "[measure_core]") {
    const auto m = fixtures::jumps_123();
    const auto r = restricted(m, BorelSet::point(1.0));
    CHECK(r.atoms().size() == 1);
    const auto p = zero_padded(m, 1);
    CHECK(p.dim() == 3);
    CHECK(max_abs(p.mass(Cell::point(3.0)) - diag({1, 1, 0})) == 0.0);

    AcPart ac{{0.0, 2.0}, {diag({1, 1})}};
    const MatrixMeasure dense(2, {}, ac);
    const auto half = restricted(dense, BorelSet::interval(1.0, 5.0));
    CHECK(max_abs(half.total() - diag({1, 1})) < 1e-15);
}

TEST_CASE("additivity over disjoint sets", "[measure_core][property]") {
    Rng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = fixtures::random_measure(rng);
        const BorelSet a = fixtures::random_borel_set(rng);
        const BorelSet b_raw = fixtures::random_borel_set(rng);
        // b := b_raw minus a, made disjoint by dropping overlapping pieces.
        BorelSet b = BorelSet::empty();
        for (const auto& iv : b_raw.intervals()) {
            const BorelSet piece = BorelSet::interval(iv.lo, iv.hi);
            if (piece.disjoint_with(a)) {
                b = b | piece;
            }
        }
        for (double t : b_raw.points()) {
            if (!a.contains(t)) {
                b = b | BorelSet::point(t);
            }
        }
        REQUIRE(a.disjoint_with(b));
        const Matrix lhs = measure_eval(m, a | b);
        const Matrix rhs = measure_eval(m, a) + measure_eval(m, b);
        CHECK(max_abs(lhs - rhs) <= 1e-12 * (1.0 + max_abs(lhs)));
        CHECK(linalg::is_psd(lhs, 1e-12));
    }
}

TEST_CASE("density reconstructs every cell", "[measure_core][property]") {
    Rng rng(202);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = fixtures::random_measure(rng);
        const auto field = density(m);
        for (const auto& d : field.cells) {
            const Matrix back = d.psi * d.rho_weight;
            CHECK(max_abs(back - m.mass(d.cell)) <= 1e-12 * (1.0 + max_abs(back)));
            CHECK(d.psi.trace().real() == Approx(1.0).margin(1e-10));
        }
        for (const Cell& c : m.cells()) {
            if (field.find(c) == nullptr) {
                CHECK(m.is_null_cell(c));
            }
        }
    }
}

TEST_CASE("trace measure sees exactly the non-null sets", "[measure_core][property]") {
    Rng rng(303);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = fixtures::random_measure(rng);
        const auto rho = trace_measure(m);
        const BorelSet s = fixtures::random_borel_set(rng);
        const Matrix v = measure_eval(m, s);
        const double tr = rho.evaluate(s);
        const bool matrix_zero = v.norm() <= 1e-12 * (1.0 + m.value_scale());
        const bool trace_zero = tr <= 1e-12 * (1.0 + m.value_scale());
        CHECK(matrix_zero == trace_zero);
        CHECK(tr == Approx(v.trace().real()).margin(1e-12 * (1.0 + tr)));
    }
}

TEST_CASE("conjugation round trip", "[measure_core][property]") {
    Rng rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = fixtures::random_measure(rng);
        const Matrix t = random_invertible(m.dim(), 1e2, rng);
        const auto back = conjugate_by(conjugate_by(m, t), t.inverse());
        for (const Cell& c : m.cells()) {
            CHECK(max_abs(back.mass(c) - m.mass(c)) <= 1e-9 * (1.0 + max_abs(m.mass(c))));
        }
    }
}

#pragma once

#include "opmeasure/io.hpp"
#include "opmeasure/opmeasure.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace opmeasure::cli {

using json = nlohmann::json;

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex digits.
inline std::string fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInput("cannot open " + path);
    }
    std::uint64_t h = 0xcbf29ce484222325ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << h;
    return s.str();
}

struct Flags {
    std::optional<std::uint64_t> seed;
    std::size_t samples = 1000;
    std::size_t tries = 100;
    std::size_t trials = 100;
    std::optional<double> tol;
    std::string subspace;
    int max_block = 6;
    std::string weights;
};

class Session {
public:
    explicit Session(std::ostream& err) : err_(err) {}

    Tolerances tol;
    json files = json::array();
    json flags = json::object();

    json read(const std::string& path) {
        files.push_back({{"path", path}, {"fnv1a64", fnv1a64_file(path)}});
        return io::load_file(path);
    }

    MatrixMeasure measure(const std::string& path) {
        MatrixMeasure m = io::parse_measure(read(path));
        if (m.is_zero()) {
            throw InvalidInput(path + ": measure is zero");
        }
        return m;
    }

    Matrix basis(const std::string& path, Index dim) {
        Matrix b = io::parse_basis(read(path));
        if (b.rows() != dim) {
            throw InvalidInput(path + ": basis vectors have the wrong dimension");
        }
        return b;
    }

    void note(const std::string& line) { err_ << line << '\n'; }

private:
    std::ostream& err_;
};

inline json tolerances_json(const Tolerances& t) {
    return {{"hermitian", t.hermitian},           {"psd", t.psd},
            {"rank", t.rank},                     {"null", t.null},
            {"support", t.support},               {"support_equality", t.support_equality},
            {"determinant", t.determinant},       {"orthonormal", t.orthonormal},
            {"povm", t.povm},                     {"dilation_range", t.dilation_range},
            {"eigen_cluster", t.eigen_cluster},   {"eigenvalue_match", t.eigenvalue_match},
            {"invertible", t.invertible}};
}

inline json vectors_json(const Matrix& cols) {
    json out = json::array();
    for (Index j = 0; j < cols.cols(); ++j) {
        out.push_back(io::to_json(Vector(cols.col(j))));
    }
    return out;
}

inline std::vector<double> parse_weights(const std::string& csv) {
    std::vector<double> out;
    std::stringstream s(csv);
    std::string item;
    while (std::getline(s, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::logic_error&) {
            throw InvalidInput("--weights: cannot parse \"" + item + "\"");
        }
    }
    return out;
}

/// Orthonormal basis for the span of the given columns.
inline Matrix orthonormalize(const Matrix& b, const Tolerances& tol) {
    Eigen::ColPivHouseholderQR<Matrix> qr(b);
    qr.setThreshold(tol.rank);
    if (qr.rank() != b.cols()) {
        throw InvalidInput("--subspace: basis vectors are linearly dependent");
    }
    return Matrix(qr.householderQ()).leftCols(b.cols());
}

namespace commands {

inline json multiplicity(Session& s, const std::string& path) {
    const MatrixMeasure m = s.measure(path);
    const MultiplicityFunction n = multiplicity_function(m, s.tol);
    json cells = json::array();
    json values = json::array();
    for (const auto& [c, k] : n.values) {
        cells.push_back(io::to_json(c));
        values.push_back({{"cell", io::to_json(c)}, {"n", k}});
    }
    json gamma = json::array();
    for (Index i = 1; i <= n.total(); ++i) {
        gamma.push_back(io::to_json(n.level_set(i)));
    }
    s.note("multiplicity: m = " + std::to_string(n.total()) + " over " + std::to_string(n.values.size()) +
           " cells");
    return {{"cells", cells},
            {"N", values},
            {"m", n.total()},
            {"gamma", gamma},
            {"principal_type_count", principal_type_count(m, s.tol)}};
}

inline json hellinger(Session& s, const std::string& path, const Flags& f) {
    const MatrixMeasure m = s.measure(path);
    const std::uint64_t seed = *f.seed;
    HellingerChain chain;
    std::size_t start_tries = 0;
    if (f.subspace.empty()) {
        const auto h = sample_maximal_type(m, seed, f.tries, s.tol);
        start_tries = h.tries;
        chain = build_hellinger_chain(m, h.vector, seed + 1, f.tries, s.tol);
    } else {
        const Matrix l = orthonormalize(s.basis(f.subspace, m.dim()), s.tol);
        Rng rng(seed);
        std::optional<Vector> h;
        while (!h && start_tries < f.tries) {
            ++start_tries;
            Vector g = l * complex_gaussian(l.cols(), rng);
            if (is_maximal_type(m, g, s.tol)) {
                h = std::move(g);
            }
        }
        if (!h) {
            throw SearchExhausted("hellinger: no maximal-type vector found in the subspace", start_tries);
        }
        chain = chain_in_subspace(m, l, *h, seed + 1, f.tries, s.tol);
    }
    const MultiplicityFunction n = multiplicity_function(m, s.tol);
    json levels = json::array();
    for (Index k = 1; k <= chain.length(); ++k) {
        levels.push_back({{"k", k},
                          {"support", io::to_json(determinant_support(m, chain.vectors, k, s.tol))},
                          {"target", io::to_json(n.level_set(k))},
                          {"exterior_density", io::to_json(exterior_density(chain, k, s.tol))},
                          {"tries", chain.tries_per_level[static_cast<std::size_t>(k - 1)]}});
    }
    s.note("hellinger: chain of length " + std::to_string(chain.length()) + ", verified depth " +
           std::to_string(chain.verified_depth));
    return {{"vectors", vectors_json(chain.vectors)},
            {"verified_depth", chain.verified_depth},
            {"m", n.total()},
            {"start_tries", start_tries},
            {"levels", levels}};
}

inline json maximal_type(Session& s, const std::string& path, const Flags& f) {
    const MatrixMeasure m = s.measure(path);
    const std::uint64_t seed = *f.seed;
    Matrix basis = Matrix::Identity(m.dim(), m.dim());
    json out;
    if (!f.subspace.empty()) {
        basis = orthonormalize(s.basis(f.subspace, m.dim()), s.tol);
        out["subspace_dim"] = basis.cols();
    } else {
        const auto h = sample_maximal_type(m, seed, f.tries, s.tol);
        out["vector"] = io::to_json(h.vector);
        out["tries"] = h.tries;
        out["support"] = io::to_json(support_of_vector(m, h.vector, s.tol));
    }
    const double fraction = maximal_type_fraction(m, basis, f.samples, seed, s.tol);
    out["samples"] = f.samples;
    out["fraction"] = fraction;
    out["gamma_1"] = io::to_json(hellinger_support(m, 1, s.tol));
    std::ostringstream line;
    line << "maximal-type: fraction " << fraction << " over " << f.samples << " samples";
    s.note(line.str());
    return out;
}

inline json dilate(Session& s, const std::string& path) {
    const MatrixMeasure m = s.measure(path);
    const DilationResult d = naimark_dilate(m, s.tol);
    const bool equivalent = is_spectrally_equivalent(compress_resolution(d.E, d.V, s.tol), d.E, s.tol);
    s.note("dilate: H+ has dimension " + std::to_string(d.big_dim) + (d.minimal ? ", minimal" : ", not minimal"));
    return {{"big_dim", d.big_dim},
            {"E", io::to_json(d.E)},
            {"V", io::to_json(d.V)},
            {"minimal", d.minimal},
            {"spectrally_equivalent", equivalent}};
}

inline json l2_check(Session& s, const std::string& path, const Flags& f) {
    const MatrixMeasure m = s.measure(path);
    Rng rng(*f.seed);
    const auto cells = m.cells();
    double identity_dev = 0.0;
    double t_dev = 0.0;
    for (std::size_t trial = 0; trial < f.trials; ++trial) {
        std::vector<Vector> values;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            values.push_back(complex_gaussian(m.dim(), rng));
        }
        const StepVectorFunction fn(cells, std::move(values));
        const double lhs = inner_product(fn, fn, m).real();
        const double base = norm_via_density(fn, m, Matrix::Identity(m.dim(), m.dim()), s.tol);
        identity_dev = std::max(identity_dev, std::abs(lhs - base) / (1.0 + lhs));
        const Matrix t = random_invertible(m.dim(), 1e3, rng);
        const double other = norm_via_density(fn, m, t, s.tol);
        t_dev = std::max(t_dev, std::abs(other - base) / std::max(1.0, base));
    }
    std::ostringstream line;
    line << "l2-check: max deviation " << identity_dev << " (T = I), " << t_dev << " (random T)";
    s.note(line.str());
    return {{"trials", f.trials}, {"max_identity_deviation", identity_dev}, {"max_t_deviation", t_dev}};
}

inline json jordan(Session& s, const std::string& path) {
    const MatrixCharge ch = io::parse_charge(s.read(path));
    const auto parts = jordan_decompose(ch, s.tol);
    const auto tv = trace_norm_variation(ch, Matrix::Identity(ch.dim(), ch.dim()), s.tol);
    json per_cell = json::array();
    for (std::size_t i = 0; i < tv.partition.size(); ++i) {
        per_cell.push_back({{"cell", io::to_json(tv.partition[i])}, {"trace_norm", tv.per_cell[i]}});
    }
    std::ostringstream line;
    line << "jordan: trace-norm variation " << tv.value;
    s.note(line.str());
    return {{"positive", io::to_json(parts.positive)},
            {"negative", io::to_json(parts.negative)},
            {"variation", tv.value},
            {"per_cell", per_cell}};
}

inline json clifford_demo(Session& s, const Flags& f) {
    std::vector<double> weights =
        f.weights.empty() ? default_clifford_weights(f.max_block) : parse_weights(f.weights);
    const auto series = clifford_variation_series(f.max_block, std::move(weights));
    std::ostringstream line;
    line << "clifford-demo: S_" << f.max_block << " = " << series.variation_partial_sums.back();
    s.note(line.str());
    return {{"max_block", f.max_block},
            {"weights", series.weights},
            {"S", series.variation_partial_sums},
            {"hs_proxy", series.hs_partial_sums},
            {"cross_check_deltas", series.cross_check_deltas}};
}

inline json compare(Session& s, const std::string& a, const std::string& b) {
    const MatrixMeasure m1 = io::parse_measure(s.read(a));
    const MatrixMeasure m2 = io::parse_measure(s.read(b));
    json out = {{"subordinate_12", is_subordinate(m1, m2, s.tol)},
                {"subordinate_21", is_subordinate(m2, m1, s.tol)},
                {"spectrally_subordinate_12", is_spectrally_subordinate(m1, m2, s.tol)},
                {"spectrally_subordinate_21", is_spectrally_subordinate(m2, m1, s.tol)},
                {"spectrally_equivalent", is_spectrally_equivalent(m1, m2, s.tol)}};
    if (m1.is_atomic() && m2.is_atomic()) {
        out["q_unitarily_equivalent"] = q_unitarily_equivalent(m1, m2, s.tol);
    } else {
        out["q_unitarily_equivalent"] = nullptr;
    }
    s.note(std::string("compare: ") + (out["spectrally_equivalent"].get<bool>() ? "equivalent" : "not equivalent"));
    return out;
}

} // namespace commands

/// Runs one command line (without the program name). Writes the report to
/// out and messages to err; returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral analysis of matrix-valued measures", "opmeasure"};
    app.require_subcommand(1);
    Flags f;
    std::string file_a;
    std::string file_b;

    auto add_seed = [&](CLI::App* c, bool required) {
        auto* o = c->add_option("--seed", f.seed, "Random seed");
        if (required) {
            o->required();
        }
    };
    auto add_tol = [&](CLI::App* c) {
        c->add_option("--tol", f.tol, "Relative rank tolerance")->check(CLI::PositiveNumber);
    };

    auto* mult = app.add_subcommand("multiplicity", "Multiplicity function and Hellinger types");
    mult->add_option("measure", file_a)->required();
    add_tol(mult);

    auto* hell = app.add_subcommand("hellinger", "Chain of Hellinger subspaces");
    hell->add_option("measure", file_a)->required();
    add_seed(hell, true);
    hell->add_option("--tries", f.tries, "Tries per level")->check(CLI::PositiveNumber);
    hell->add_option("--subspace", f.subspace, "Basis file for a subspace to stay in");
    add_tol(hell);

    auto* maxt = app.add_subcommand("maximal-type", "Sample maximal-type vectors");
    maxt->add_option("measure", file_a)->required();
    add_seed(maxt, true);
    maxt->add_option("--samples", f.samples, "Gaussian samples")->check(CLI::PositiveNumber);
    maxt->add_option("--tries", f.tries, "Tries for the witness vector")->check(CLI::PositiveNumber);
    maxt->add_option("--subspace", f.subspace, "Basis file for the sampling subspace");
    add_tol(maxt);

    auto* dil = app.add_subcommand("dilate", "Minimal Naimark dilation of an atomic POVM");
    dil->add_option("povm", file_a)->required();
    add_tol(dil);

    auto* l2 = app.add_subcommand("l2-check", "Norm identity and T-independence checks");
    l2->add_option("measure", file_a)->required();
    add_seed(l2, true);
    l2->add_option("--trials", f.trials, "Random functions")->check(CLI::PositiveNumber);
    add_tol(l2);

    auto* jor = app.add_subcommand("jordan", "Jordan decomposition of a charge");
    jor->add_option("charge", file_a)->required();
    add_tol(jor);

    auto* cliff = app.add_subcommand("clifford-demo", "Clifford block variation series");
    cliff->add_option("--max-block", f.max_block, "Largest block")->check(CLI::PositiveNumber);
    cliff->add_option("--weights", f.weights, "Comma-separated block weights t_n");

    auto* cmp = app.add_subcommand("compare", "Subordination and equivalence of two measures");
    cmp->add_option("first", file_a)->required();
    cmp->add_option("second", file_b)->required();
    add_tol(cmp);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    Session s(err);
    if (f.tol) {
        s.tol.rank = *f.tol;
    }
    for (const CLI::Option* o : sub->get_options()) {
        if (o->get_positional() || o->count() == 0 || o->get_name() == "--help") {
            continue;
        }
        s.flags[o->get_name()] = o->as<std::string>();
    }

    json report;
    report["command"] = sub->get_name();
    try {
        const std::string name = sub->get_name();
        if (name == "multiplicity") {
            report["results"] = commands::multiplicity(s, file_a);
        } else if (name == "hellinger") {
            report["results"] = commands::hellinger(s, file_a, f);
        } else if (name == "maximal-type") {
            report["results"] = commands::maximal_type(s, file_a, f);
        } else if (name == "dilate") {
            report["results"] = commands::dilate(s, file_a);
        } else if (name == "l2-check") {
            report["results"] = commands::l2_check(s, file_a, f);
        } else if (name == "jordan") {
            report["results"] = commands::jordan(s, file_a);
        } else if (name == "clifford-demo") {
            report["results"] = commands::clifford_demo(s, f);
        } else {
            report["results"] = commands::compare(s, file_a, file_b);
        }
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const SearchExhausted& e) {
        err << "search exhausted after " << e.tries() << " tries: " << e.what() << '\n';
        return 3;
    }

    report["inputs"] = {{"files", s.files}, {"flags", s.flags}};
    json diag = {{"tolerances", tolerances_json(s.tol)}};
    diag["seed"] = f.seed ? json(*f.seed) : json(nullptr);
    diag["tries"] = f.tries;
    report["diagnostics"] = std::move(diag);
    out << report.dump(2) << '\n';
    return 0;
}

} // namespace opmeasure::cli

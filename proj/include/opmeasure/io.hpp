#pragma once

// JSON reading and writing for measures, charges, vectors and bases.
//
// Measure files:
//   { "dim": n, "kind": "measure" | "charge",
//     "atoms": [ { "t": real, "matrix": M } ],
//     "ac": { "grid": [t0, ..., tN], "densities": [M, ...] } }
// with M row-major and each entry either [re, im] or a plain real number.

#include "opmeasure/measure.hpp"
#include "opmeasure/multiplicity.hpp"
#include "opmeasure/scalar_measure.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <variant>

namespace opmeasure::io {

using json = nlohmann::json;

inline Complex parse_complex(const json& j, const std::string& where) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw InvalidInput(where + ": expected a number or a [re, im] pair");
}

inline Vector parse_vector(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) {
        throw InvalidInput(where + ": expected a nonempty array of entries");
    }
    Vector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Index>(i)) = parse_complex(j[i], where + "[" + std::to_string(i) + "]");
    }
    return v;
}

inline Matrix parse_matrix(const json& j, Index dim, const std::string& where) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(dim)) {
        throw InvalidInput(where + ": expected " + std::to_string(dim) + " rows");
    }
    Matrix m(dim, dim);
    for (Index r = 0; r < dim; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        const std::string rw = where + "[" + std::to_string(r) + "]";
        if (!row.is_array() || row.size() != static_cast<std::size_t>(dim)) {
            throw InvalidInput(rw + ": expected " + std::to_string(dim) + " entries");
        }
        for (Index c = 0; c < dim; ++c) {
            m(r, c) = parse_complex(row[static_cast<std::size_t>(c)], rw + "[" + std::to_string(c) + "]");
        }
    }
    return m;
}

template <ValueClass V>
BasicMeasure<V> parse_as(const json& j) {
    if (!j.is_object()) {
        throw InvalidInput("measure: expected a JSON object");
    }
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long long>() <= 0) {
        throw InvalidInput("measure: \"dim\" must be a positive integer");
    }
    const Index dim = j["dim"].get<Index>();
    std::vector<MatrixAtom> atoms;
    if (j.contains("atoms")) {
        const json& ja = j["atoms"];
        if (!ja.is_array()) {
            throw InvalidInput("measure: \"atoms\" must be an array");
        }
        for (std::size_t i = 0; i < ja.size(); ++i) {
            const std::string where = "atoms[" + std::to_string(i) + "]";
            const json& a = ja[i];
            if (!a.is_object() || !a.contains("t") || !a["t"].is_number() || !a.contains("matrix")) {
                throw InvalidInput(where + ": expected {\"t\": real, \"matrix\": ...}");
            }
            atoms.push_back({a["t"].get<double>(), parse_matrix(a["matrix"], dim, where + ".matrix")});
        }
    }
    std::optional<AcPart> ac;
    if (j.contains("ac") && !j["ac"].is_null()) {
        const json& jc = j["ac"];
        if (!jc.is_object() || !jc.contains("grid") || !jc.contains("densities") || !jc["grid"].is_array() ||
            !jc["densities"].is_array()) {
            throw InvalidInput("ac: expected {\"grid\": [...], \"densities\": [...]}");
        }
        ac.emplace();
        for (const json& t : jc["grid"]) {
            if (!t.is_number()) {
                throw InvalidInput("ac.grid: entries must be real numbers");
            }
            ac->grid.push_back(t.get<double>());
        }
        for (std::size_t i = 0; i < jc["densities"].size(); ++i) {
            ac->densities.push_back(
                parse_matrix(jc["densities"][i], dim, "ac.densities[" + std::to_string(i) + "]"));
        }
    }
    return BasicMeasure<V>(dim, std::move(atoms), std::move(ac));
}

inline bool is_charge_document(const json& j) {
    return j.is_object() && j.contains("kind") && j["kind"] == "charge";
}

/// Reads a nonnegative operator measure; charge documents are rejected.
inline MatrixMeasure parse_measure(const json& j) {
    if (is_charge_document(j)) {
        throw InvalidInput("measure: document has kind \"charge\"; a nonnegative measure is required");
    }
    if (j.is_object() && j.contains("kind") && j["kind"] != "measure") {
        throw InvalidInput("measure: unknown \"kind\"");
    }
    return parse_as<ValueClass::positive>(j);
}

/// Reads a charge; measure documents are accepted as charges.
inline MatrixCharge parse_charge(const json& j) {
    if (j.is_object() && j.contains("kind") && j["kind"] != "measure" && j["kind"] != "charge") {
        throw InvalidInput("charge: unknown \"kind\"");
    }
    return parse_as<ValueClass::hermitian>(j);
}

/// Orthonormal basis file: { "vectors": [v1, v2, ...] } or a bare array of
/// vectors. Returns the vectors as columns.
inline Matrix parse_basis(const json& j) {
    const json& jv = (j.is_object() && j.contains("vectors")) ? j["vectors"] : j;
    if (!jv.is_array() || jv.empty()) {
        throw InvalidInput("basis: expected a nonempty array of vectors");
    }
    std::vector<Vector> cols;
    for (std::size_t i = 0; i < jv.size(); ++i) {
        cols.push_back(parse_vector(jv[i], "basis[" + std::to_string(i) + "]"));
        if (cols.back().size() != cols.front().size()) {
            throw InvalidInput("basis: vectors differ in dimension");
        }
    }
    Matrix b(cols.front().size(), static_cast<Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
        b.col(static_cast<Index>(i)) = cols[i];
    }
    return b;
}

inline json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw InvalidInput(path + ": malformed JSON (" + e.what() + ")");
    }
}

inline json to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const Vector& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) {
        out.push_back(to_json(v(i)));
    }
    return out;
}

inline json to_json(const Matrix& m) {
    json out = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) {
            row.push_back(to_json(Complex(m(r, c))));
        }
        out.push_back(std::move(row));
    }
    return out;
}

/// Atoms as their location, intervals as [lo, hi].
inline json to_json(const Cell& c) {
    if (c.is_atom()) {
        return c.lo;
    }
    return json::array({c.lo, c.hi});
}

inline json to_json(const SupportSet& s) {
    json out = json::array();
    for (const Cell& c : s.cells()) {
        out.push_back(to_json(c));
    }
    return out;
}

template <ValueClass V>
json to_json(const BasicMeasure<V>& m) {
    json out;
    out["dim"] = m.dim();
    out["kind"] = V == ValueClass::positive ? "measure" : "charge";
    json atoms = json::array();
    for (const auto& a : m.atoms()) {
        atoms.push_back({{"t", a.t}, {"matrix", to_json(a.value)}});
    }
    out["atoms"] = std::move(atoms);
    if (const auto& ac = m.ac()) {
        json dens = json::array();
        for (const auto& d : ac->densities) {
            dens.push_back(to_json(d));
        }
        out["ac"] = {{"grid", ac->grid}, {"densities", std::move(dens)}};
    }
    return out;
}

inline json to_json(const ScalarMeasure& s) {
    json atoms = json::array();
    for (const auto& a : s.atoms()) {
        atoms.push_back({{"t", a.t}, {"weight", a.weight}});
    }
    json out;
    out["atoms"] = std::move(atoms);
    if (s.has_ac()) {
        out["ac"] = {{"grid", s.grid()}, {"densities", s.densities()}};
    }
    return out;
}

} // namespace opmeasure::io

/**
 * @file instance_io.hpp
 * @brief JSON instance files: {"mu": [...], "nu": [...], "matrix": [[...], ...]}
 *        with optional "name" and "description".
 */
#pragma once

#include <cmath>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ktfunc/errors.hpp"
#include "ktfunc/measure.hpp"

namespace ktfunc {

struct InstanceFile {
    std::vector<double> mu;
    std::vector<double> nu;
    std::vector<std::vector<double>> matrix;
    std::optional<std::string> name;
    std::optional<std::string> description;

    WeightedMatrix to_matrix() const {
        std::vector<double> e;
        e.reserve(mu.size() * nu.size());
        for (const auto& row : matrix) e.insert(e.end(), row.begin(), row.end());
        return WeightedMatrix(MeasureSpace(mu), MeasureSpace(nu), std::move(e));
    }

    static InstanceFile from_matrix(const WeightedMatrix& a) {
        InstanceFile f;
        const auto mu = a.row_space().masses();
        const auto nu = a.col_space().masses();
        f.mu.assign(mu.begin(), mu.end());
        f.nu.assign(nu.begin(), nu.end());
        for (std::size_t i = 0; i < a.rows(); ++i) {
            auto r = a.row(i);
            f.matrix.emplace_back(r.begin(), r.end());
        }
        return f;
    }

    friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};

namespace detail {

inline std::size_t line_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k)
        if (text[k] == '\n') ++line;
    return line;
}

inline std::vector<double> read_masses(const nlohmann::json& doc, const char* field) {
    if (!doc.contains(field)) throw ParseError(std::string("field '") + field + "'", "missing");
    const auto& arr = doc.at(field);
    if (!arr.is_array() || arr.empty())
        throw ParseError(std::string("field '") + field + "'", "expected a nonempty array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string where = std::string("field '") + field + "' entry " + std::to_string(k + 1);
        if (!arr[k].is_number()) throw ParseError(where, "expected a number");
        const double v = arr[k].get<double>();
        if (!(v > 0.0) || !std::isfinite(v)) throw ParseError(where, "mass must be positive and finite");
        out.push_back(v);
    }
    return out;
}

}  // namespace detail

inline InstanceFile parse_instance(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("line " + std::to_string(detail::line_of(text, e.byte == 0 ? 0 : e.byte - 1)),
                         e.what());
    }
    if (!doc.is_object()) throw ParseError("document", "expected an object");

    InstanceFile f;
    f.mu = detail::read_masses(doc, "mu");
    f.nu = detail::read_masses(doc, "nu");
    if (!doc.contains("matrix")) throw ParseError("field 'matrix'", "missing");
    const auto& mat = doc.at("matrix");
    if (!mat.is_array()) throw ParseError("field 'matrix'", "expected an array of rows");
    if (mat.size() != f.mu.size())
        throw ParseError("field 'matrix'", "has " + std::to_string(mat.size()) + " rows but mu has " +
                                               std::to_string(f.mu.size()) + " atoms");
    for (std::size_t i = 0; i < mat.size(); ++i) {
        const std::string where = "field 'matrix' row " + std::to_string(i + 1);
        if (!mat[i].is_array()) throw ParseError(where, "expected an array of numbers");
        if (mat[i].size() != f.nu.size())
            throw ParseError(where, "has " + std::to_string(mat[i].size()) + " entries but nu has " +
                                        std::to_string(f.nu.size()) + " atoms");
        std::vector<double> row;
        for (std::size_t j = 0; j < mat[i].size(); ++j) {
            if (!mat[i][j].is_number())
                throw ParseError(where + " column " + std::to_string(j + 1), "expected a number");
            const double v = mat[i][j].get<double>();
            if (!std::isfinite(v)) throw ParseError(where + " column " + std::to_string(j + 1), "not finite");
            row.push_back(v);
        }
        f.matrix.push_back(std::move(row));
    }
    for (const char* key : {"name", "description"}) {
        if (!doc.contains(key)) continue;
        if (!doc.at(key).is_string()) throw ParseError(std::string("field '") + key + "'", "expected a string");
        (std::string(key) == "name" ? f.name : f.description) = doc.at(key).get<std::string>();
    }
    return f;
}

inline InstanceFile read_instance(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

/// Doubles are written with round-trip precision.
inline std::string serialize_instance(const InstanceFile& f) {
    nlohmann::ordered_json doc;
    if (f.name) doc["name"] = *f.name;
    if (f.description) doc["description"] = *f.description;
    doc["mu"] = f.mu;
    doc["nu"] = f.nu;
    doc["matrix"] = f.matrix;
    return doc.dump(2) + "\n";
}

}  // namespace ktfunc

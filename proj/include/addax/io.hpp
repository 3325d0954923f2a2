#pragma once

// File formats and catalog lookup.
//
// Algebra files are JSON: { "dim": N, "mul": { "i,j": [c_1 .. c_{N-1}], ... },
// "W": [[..], ..], "complement": [..] }. All vectors are written in the
// coordinates of e_1..e_{N-1}; the unit coordinate is implied zero. Products
// absent from "mul" are zero and only keys with i <= j are stored. "W" and
// "complement" are either both present (the file describes a pointed pair) or
// both absent (algebra only). An optional "name" labels the algebra.

#include "addax/algebra.hpp"
#include "addax/catalog.hpp"
#include "addax/scalar.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace addax {

using Json = nlohmann::json;

namespace detail {

inline ValidationError format_error(std::string detail, std::vector<size_t> witness = {}) {
    return ValidationError({"format", std::move(witness), std::move(detail)});
}

// Vectors are stored without the unit coordinate.
inline Json ideal_coords(const Vec& full) {
    Json out = Json::array();
    for (size_t k = 1; k < full.size(); ++k) out.push_back(render_scalar(full[k]));
    return out;
}

inline Vec full_vec(const Json& texts, size_t dim, const std::string& what) {
    if (!texts.is_array() || texts.size() != dim - 1)
        throw format_error(what + " must be an array of " + std::to_string(dim - 1) + " scalars");
    Vec v(dim);
    for (size_t k = 0; k + 1 < dim; ++k) {
        const Json& c = texts[k];
        if (!c.is_string()) throw format_error(what + " entries must be scalar strings", {k + 1});
        try {
            v[k + 1] = parse_scalar(c.get<std::string>());
        } catch (const ParseError& e) {
            throw format_error(what + ": " + e.what(), {k + 1});
        }
    }
    return v;
}

inline std::pair<size_t, size_t> mul_key(const std::string& key, size_t dim) {
    size_t comma = key.find(',');
    size_t i = 0, j = 0;
    try {
        size_t used = 0;
        i = std::stoul(key.substr(0, comma), &used);
        if (comma == std::string::npos || used != comma) throw std::invalid_argument(key);
        j = std::stoul(key.substr(comma + 1), &used);
        if (used != key.size() - comma - 1) throw std::invalid_argument(key);
    } catch (const std::exception&) {
        throw format_error("mul keys must look like \"i,j\", got \"" + key + "\"");
    }
    if (i < 1 || j < 1 || i >= dim || j >= dim)
        throw format_error("mul key \"" + key + "\" is out of range for dimension " + std::to_string(dim));
    if (i > j) throw format_error("mul stores i <= j only, got \"" + key + "\"");
    return {i, j};
}

} // namespace detail

inline Json entry_to_json(const LocalAlgebra& algebra, const std::optional<PointedPair>& pair) {
    Json j;
    j["dim"] = algebra.dim();
    if (!algebra.name().empty()) j["name"] = algebra.name();
    Json mul = Json::object();
    for (size_t i = 1; i < algebra.dim(); ++i)
        for (size_t k = i; k < algebra.dim(); ++k) {
            const Vec& prod = algebra.basis_product(i, k);
            if (vec_is_zero(prod)) continue;
            mul[std::to_string(i) + "," + std::to_string(k)] = detail::ideal_coords(prod);
        }
    j["mul"] = std::move(mul);
    if (pair) {
        Json w = Json::array();
        for (const Vec& b : pair->w_basis()) w.push_back(detail::ideal_coords(b));
        j["W"] = std::move(w);
        j["complement"] = detail::ideal_coords(pair->complement());
    }
    return j;
}

inline Json entry_to_json(const CatalogEntry& entry) { return entry_to_json(entry.algebra, entry.pair); }

inline CatalogEntry entry_from_json(const Json& j) {
    if (!j.is_object()) throw detail::format_error("top level must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "dim" && key != "name" && key != "mul" && key != "W" && key != "complement")
            throw detail::format_error("unknown key \"" + key + "\"");
    }
    if (!j.contains("dim") || !j["dim"].is_number_unsigned())
        throw detail::format_error("\"dim\" must be a positive integer");
    size_t dim = j["dim"].get<size_t>();
    if (dim < 1) throw detail::format_error("\"dim\" must be a positive integer");
    std::string name = j.contains("name") ? j["name"].get<std::string>() : std::string();

    LocalAlgebra::MulTable mul(dim - 1, std::vector<Vec>(dim - 1, Vec(dim)));
    if (j.contains("mul")) {
        if (!j["mul"].is_object()) throw detail::format_error("\"mul\" must be an object");
        for (const auto& [key, value] : j["mul"].items()) {
            auto [i, k] = detail::mul_key(key, dim);
            Vec prod = detail::full_vec(value, dim, "mul[\"" + key + "\"]");
            mul[i - 1][k - 1] = prod;
            mul[k - 1][i - 1] = std::move(prod);
        }
    }
    LocalAlgebra algebra = LocalAlgebra::create(dim, std::move(mul), std::move(name));

    if (j.contains("W") != j.contains("complement"))
        throw detail::format_error("\"W\" and \"complement\" must be given together");
    if (!j.contains("W")) return {std::move(algebra), std::nullopt};

    if (!j["W"].is_array()) throw detail::format_error("\"W\" must be an array of vectors");
    std::vector<Vec> w_basis;
    for (size_t k = 0; k < j["W"].size(); ++k)
        w_basis.push_back(detail::full_vec(j["W"][k], dim, "W[" + std::to_string(k) + "]"));
    Vec complement = detail::full_vec(j["complement"], dim, "complement");
    PointedPair pair(algebra, std::move(w_basis), std::move(complement));
    return {std::move(algebra), std::move(pair)};
}

inline CatalogEntry load_entry(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw detail::format_error("cannot open \"" + path + "\"");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw detail::format_error("\"" + path + "\" is not valid JSON: " + e.what());
    }
    return entry_from_json(j);
}

inline std::optional<std::string> catalog_dir() {
    const char* dir = std::getenv("ADDAX_CATALOG_DIR");
    if (!dir || !*dir) return std::nullopt;
    return std::string(dir);
}

// Built-in families first; otherwise "<name>.json" under ADDAX_CATALOG_DIR.
inline CatalogEntry lookup_entry(const std::string& name, const std::optional<Matrix>& lambda = std::nullopt) {
    try {
        return catalog(name, lambda);
    } catch (const std::invalid_argument&) {
        if (auto dir = catalog_dir()) {
            auto path = std::filesystem::path(*dir) / (name + ".json");
            if (std::filesystem::exists(path)) {
                if (lambda) throw detail::format_error("lambda applies to the built-in corank_one family only");
                return load_entry(path.string());
            }
        }
        throw;
    }
}

// Names of user catalog files (sorted stems), if the directory is set.
inline std::vector<std::string> user_catalog_names() {
    std::vector<std::string> names;
    if (auto dir = catalog_dir()) {
        std::error_code ec;
        for (const auto& entry : std::filesystem::directory_iterator(*dir, ec))
            if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
        std::sort(names.begin(), names.end());
    }
    return names;
}

} // namespace addax

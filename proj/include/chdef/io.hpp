#pragma once

/**
 * @file io.hpp
 * @brief JSON forms of ring matrices and exact representations.
 *
 * RingMatrix:
 *     {"dim": k, "entries": [[{"<exp>": "<p/q>", ...}, ...], ...]}
 * Representation (exact):
 *     {"presentation": "<presentation text>", "variable": "u",
 *      "form": <RingMatrix>, "images": {"<gen>": <RingMatrix>, ...}}
 */

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "representation.hpp"

namespace chdef {

inline nlohmann::json to_json(const StarLaurent& p) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [e, c] : p.terms()) out[std::to_string(e)] = c.get_str();
    return out;
}

inline StarLaurent laurent_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw parse_error("Laurent entry must be an object {exponent: \"p/q\"}");
    StarLaurent::Terms terms;
    for (const auto& [key, value] : j.items()) {
        std::size_t used = 0;
        int e = 0;
        try {
            e = std::stoi(key, &used);
        } catch (const std::exception&) {
            throw parse_error("bad exponent key '" + key + "'");
        }
        if (used != key.size()) throw parse_error("bad exponent key '" + key + "'");
        if (!value.is_string()) throw parse_error("coefficient for exponent " + key + " must be a string");
        Rational c = parse_rational(value.get<std::string>());
        if (c != 0) terms[e] += c;
    }
    return StarLaurent(std::move(terms));
}

inline nlohmann::json to_json(const RingMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return {{"dim", m.dim()}, {"entries", std::move(rows)}};
}

inline RingMatrix ring_matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) throw parse_error("matrix needs 'dim' and 'entries'");
    if (!j["dim"].is_number_integer() || j["dim"].get<long>() <= 0) throw parse_error("'dim' must be a positive integer");
    const auto n = j["dim"].get<std::size_t>();
    const auto& rows = j["entries"];
    if (!rows.is_array() || rows.size() != n) throw parse_error("'entries' must have dim rows");
    RingMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n) throw parse_error("matrix row " + std::to_string(i) + " has wrong length");
        for (std::size_t k = 0; k < n; ++k) m(i, k) = laurent_from_json(rows[i][k]);
    }
    return m;
}

/// An exact representation together with the Hermitian form it preserves.
struct FormedRepresentation {
    Representation<RingMatrix> rep;
    RingMatrix form;
    std::string variable = "u";
};

inline nlohmann::json to_json(const FormedRepresentation& fr) {
    nlohmann::json images = nlohmann::json::object();
    const auto& p = fr.rep.presentation();
    for (std::size_t g = 0; g < p.rank(); ++g) images[p.generators[g]] = to_json(fr.rep.image(g));
    return {{"presentation", format_presentation(p)},
            {"variable", fr.variable},
            {"form", to_json(fr.form)},
            {"images", std::move(images)}};
}

inline FormedRepresentation formed_representation_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw parse_error("representation must be a JSON object");
    for (const char* key : {"presentation", "form", "images"})
        if (!j.contains(key)) throw parse_error(std::string("representation is missing '") + key + "'");
    if (!j["presentation"].is_string()) throw parse_error("'presentation' must be a string");
    Presentation p = parse_presentation(j["presentation"].get<std::string>());
    const auto& imgs = j["images"];
    if (!imgs.is_object()) throw parse_error("'images' must map generator names to matrices");
    std::vector<RingMatrix> images;
    for (const auto& g : p.generators) {
        if (!imgs.contains(g)) throw parse_error("no image for generator '" + g + "'");
        images.push_back(ring_matrix_from_json(imgs[g]));
    }
    RingMatrix form = ring_matrix_from_json(j["form"]);
    std::string var = j.value("variable", std::string("u"));
    Representation<RingMatrix> rep(std::move(p), std::move(images));
    if (form.dim() != rep.dim()) throw parse_error("form dimension does not match the images");
    return {std::move(rep), std::move(form), var};
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

inline nlohmann::json parse_json_text(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace chdef

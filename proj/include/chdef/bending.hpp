#pragma once

/**
 * @file bending.hpp
 * @brief Bending deformations of representations into SU(n,1).
 *
 * The twist M_theta = Diag(e^{i theta}, e^{-i theta/n} I_n) is carried
 * symbolically in v = e^{i theta/n}, so M_theta = Diag(v^n, v^-1 I_n) is a
 * matrix of Laurent monomials.  It centralizes every block matrix
 * Diag(c, A) with A acting on the last n coordinates.
 *
 * Amalgam Gamma_1 *_Delta Gamma_2: side-1 generators keep their image,
 * side-2 generators are conjugated by M_theta.
 * HNN extension Gamma' *_t: the stable letter t becomes M_theta iota(t).
 */

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "io.hpp"

namespace chdef::bending {

struct TwistMatrix {
    int n = 0;
    RingMatrix matrix;  ///< Diag(v^n, v^-1, ..., v^-1), size n+1
    RingMatrix inverse;
};

inline TwistMatrix twist_matrix(int n) {
    if (n < 2) throw dimension_error("twist matrix needs n >= 2, got " + std::to_string(n));
    const auto size = static_cast<std::size_t>(n) + 1;
    std::vector<StarLaurent> d(size, StarLaurent::monomial(1, -1));
    std::vector<StarLaurent> dinv(size, StarLaurent::monomial(1, 1));
    d[0] = StarLaurent::monomial(1, n);
    dinv[0] = StarLaurent::monomial(1, -n);
    return {n, RingMatrix::diagonal(d), RingMatrix::diagonal(dinv)};
}

/// Diag(1, ..., 1, -1) of size n+1.
inline RingMatrix standard_form(int n) {
    std::vector<StarLaurent> d(static_cast<std::size_t>(n) + 1, StarLaurent(1L));
    d.back() = StarLaurent(-1L);
    return RingMatrix::diagonal(d);
}

enum class Kind { amalgam, hnn };
enum class Side { first, second, stable };

inline std::string to_string(Side s) {
    switch (s) {
        case Side::first: return "1";
        case Side::second: return "2";
        case Side::stable: return "t";
    }
    return "?";
}

/// Decomposition data plus the base representation iota it bends.
struct BendingDatum {
    Kind kind = Kind::amalgam;
    Presentation presentation;
    std::vector<Side> sides;  ///< one per generator
    std::vector<std::string> delta_text;
    std::vector<Word> delta;
    std::map<std::string, std::vector<int>> crossings;  ///< peripheral word -> crossing signs
    std::vector<RingMatrix> base_images;
    RingMatrix form = standard_form(2);
};

inline void validate(const BendingDatum& d) {
    const auto& p = d.presentation;
    if (d.sides.size() != p.rank()) throw parse_error("every generator needs exactly one side");
    if (d.base_images.size() != p.rank()) throw parse_error("every generator needs a base image");
    std::size_t stable = 0, second = 0;
    for (Side s : d.sides) {
        stable += s == Side::stable;
        second += s == Side::second;
    }
    if (d.kind == Kind::amalgam && stable > 0) throw parse_error("amalgam datum cannot have a stable letter");
    if (d.kind == Kind::hnn && second > 0) throw parse_error("HNN datum uses sides 1 and \"t\" only");
    if (d.kind == Kind::hnn && stable != 1) throw parse_error("HNN datum needs exactly one stable letter");
    for (const auto& m : d.base_images)
        if (m.dim() != d.form.dim()) throw dimension_error("base image and form dimensions differ");
    if (d.form.dim() < 3) throw dimension_error("bending needs n >= 2 (matrices of size >= 3)");
}

/**
 * JSON layout:
 *   {"kind": "amalgam" | "hnn",
 *    "gens": [{"name": "a", "side": 1}, {"name": "t", "side": "t"}, ...],
 *    "macros": {"w": "a b"},                (optional)
 *    "relators": ["a d A D", "c d C = d^3"],
 *    "delta": ["d"],
 *    "crossings": {"a": [1, -1]},           (optional)
 *    "images": {"a": <RingMatrix>, ...},
 *    "form": <RingMatrix>}                  (optional, default Diag(1,...,1,-1))
 */
inline BendingDatum datum_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw parse_error("bending datum must be a JSON object");
    for (const char* key : {"kind", "gens", "relators", "delta", "images"})
        if (!j.contains(key)) throw parse_error(std::string("bending datum is missing '") + key + "'");
    BendingDatum d;
    const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
    if (kind == "amalgam")
        d.kind = Kind::amalgam;
    else if (kind == "hnn")
        d.kind = Kind::hnn;
    else
        throw parse_error("'kind' must be \"amalgam\" or \"hnn\"");

    std::string text = "gens:";
    std::vector<Side> sides;
    if (!j["gens"].is_array() || j["gens"].empty()) throw parse_error("'gens' must be a nonempty array");
    for (const auto& g : j["gens"]) {
        if (!g.is_object() || !g.contains("name") || !g.contains("side") || !g["name"].is_string())
            throw parse_error("each generator needs 'name' and 'side'");
        text += " " + g["name"].get<std::string>();
        const auto& s = g["side"];
        if (s == 1 || s == "1")
            sides.push_back(Side::first);
        else if (s == 2 || s == "2")
            sides.push_back(Side::second);
        else if (s == "t")
            sides.push_back(Side::stable);
        else
            throw parse_error("side of '" + g["name"].get<std::string>() + "' must be 1, 2 or \"t\"");
    }
    text += "\n";
    if (j.contains("macros")) {
        if (!j["macros"].is_object()) throw parse_error("'macros' must be an object");
        for (const auto& [name, word] : j["macros"].items()) {
            if (!word.is_string()) throw parse_error("macro '" + name + "' must be a word string");
            text += "let " + name + " = " + word.get<std::string>() + "\n";
        }
    }
    if (!j["relators"].is_array()) throw parse_error("'relators' must be an array of words");
    for (const auto& r : j["relators"]) {
        if (!r.is_string()) throw parse_error("relators must be word strings");
        text += "rel: " + r.get<std::string>() + "\n";
    }
    d.presentation = parse_presentation(text);
    d.sides = std::move(sides);

    if (!j["delta"].is_array()) throw parse_error("'delta' must be an array of words");
    for (const auto& w : j["delta"]) {
        if (!w.is_string()) throw parse_error("delta generators must be word strings");
        d.delta_text.push_back(w.get<std::string>());
        d.delta.push_back(parse_word(d.delta_text.back(), d.presentation));
    }
    if (j.contains("crossings")) {
        if (!j["crossings"].is_object()) throw parse_error("'crossings' must be an object");
        for (const auto& [word, signs] : j["crossings"].items()) {
            parse_word(word, d.presentation);
            std::vector<int> s;
            if (!signs.is_array()) throw parse_error("crossing signs must be an array");
            for (const auto& x : signs) {
                if (!x.is_number_integer() || (x != 1 && x != -1)) throw parse_error("crossing signs must be +1 or -1");
                s.push_back(x.get<int>());
            }
            d.crossings[word] = std::move(s);
        }
    }
    const auto& imgs = j["images"];
    if (!imgs.is_object()) throw parse_error("'images' must map generator names to matrices");
    for (const auto& g : d.presentation.generators) {
        if (!imgs.contains(g)) throw parse_error("no base image for generator '" + g + "'");
        d.base_images.push_back(ring_matrix_from_json(imgs[g]));
    }
    const std::size_t size = d.base_images.front().dim();
    d.form = j.contains("form") ? ring_matrix_from_json(j["form"]) : standard_form(static_cast<int>(size) - 1);
    validate(d);
    return d;
}

inline Representation<RingMatrix> base_representation(const BendingDatum& d) {
    return Representation<RingMatrix>(d.presentation, d.base_images);
}

/// True iff M_theta rho(delta) = rho(delta) M_theta identically in v for every delta.
inline bool verify_centralizes(const TwistMatrix& twist, const Representation<RingMatrix>& base,
                               const std::vector<Word>& delta_gens) {
    for (const auto& w : delta_gens) {
        const RingMatrix img = evaluate_word(w, base);
        if (img.dim() != twist.matrix.dim()) throw dimension_error("delta image and twist dimensions differ");
        if (twist.matrix * img != img * twist.matrix) return false;
    }
    return true;
}

struct BendResult {
    Representation<RingMatrix> rep;
    TwistMatrix twist;
    RelationReport relations;
};

/**
 * Bent representation rho_theta over v.  Base images must have constant
 * entries.  Throws centralizer_error when a Delta generator does not
 * commute with the twist and relation_error when a relator fails.
 */
inline BendResult bend(const BendingDatum& datum, const Representation<RingMatrix>& base) {
    validate(datum);
    for (const auto& m : base.images())
        if (!is_constant(m)) throw std::invalid_argument("base representation must have constant entries");
    const int n = static_cast<int>(base.dim()) - 1;
    TwistMatrix twist = twist_matrix(n);
    if (!verify_centralizes(twist, base, datum.delta))
        throw centralizer_error("twist does not centralize the Delta generators");
    std::vector<RingMatrix> images;
    images.reserve(base.images().size());
    for (std::size_t g = 0; g < base.images().size(); ++g) {
        const RingMatrix& iota = base.image(g);
        switch (datum.sides[g]) {
            case Side::first: images.push_back(iota); break;
            case Side::second: images.push_back(twist.matrix * iota * twist.inverse); break;
            case Side::stable: images.push_back(twist.matrix * iota); break;
        }
    }
    Representation<RingMatrix> bent(datum.presentation, std::move(images));
    RelationReport report = check_relations(bent);
    if (!report.all_hold()) {
        std::string failed;
        for (const auto& r : report.relators)
            if (!r.holds) failed += (failed.empty() ? "" : ", ") + r.relator;
        throw relation_error("bent representation violates: " + failed);
    }
    return {std::move(bent), std::move(twist), std::move(report)};
}

inline BendResult bend(const BendingDatum& datum) { return bend(datum, base_representation(datum)); }

/// rho at v = 1, i.e. theta = 0.
inline Representation<RingMatrix> at_theta_zero(const Representation<RingMatrix>& rep) {
    std::vector<RingMatrix> images;
    for (const auto& m : rep.images()) images.push_back(substitute_one(m));
    return {rep.presentation(), std::move(images)};
}

struct PeripheralPrediction {
    int epsilon = 0;
    std::string predicted_class;  ///< "parabolic-unipotent" or "ellipto-parabolic"
    /// Rotation angle in units of theta; equals epsilon.
    int rotation_multiple = 0;
};

/// Sums the signed crossings of a peripheral loop with the lifts of the bending hypersurface.
inline PeripheralPrediction peripheral_rotation(const Word& /*word*/, const std::vector<int>& crossing_signs) {
    PeripheralPrediction p;
    for (int s : crossing_signs) {
        if (s != 1 && s != -1) throw std::invalid_argument("crossing signs must be +1 or -1");
        p.epsilon += s;
    }
    p.rotation_multiple = p.epsilon;
    p.predicted_class = p.epsilon == 0 ? "parabolic-unipotent" : "ellipto-parabolic";
    return p;
}

/**
 * Phase of the rotating eigenvalue relative to the fixed-point eigenvalue
 * for a bent peripheral element: each crossing contributes the twist
 * ratio v^n / v^-1 = e^{i theta (n+1)/n}.
 */
inline double predicted_eigenvalue_phase(const PeripheralPrediction& p, int n, double theta) {
    return static_cast<double>(p.epsilon) * theta * (n + 1) / n;
}

inline nlohmann::json to_json(const BendResult& r, const BendingDatum& d) {
    nlohmann::json images = nlohmann::json::object();
    const auto& p = r.rep.presentation();
    for (std::size_t g = 0; g < p.rank(); ++g) images[p.generators[g]] = to_json(r.rep.image(g));
    nlohmann::json rel = nlohmann::json::array();
    for (const auto& c : r.relations.relators) rel.push_back({{"relator", c.relator}, {"exact", c.holds}});
    nlohmann::json sides = nlohmann::json::object();
    for (std::size_t g = 0; g < p.rank(); ++g) sides[p.generators[g]] = to_string(d.sides[g]);
    nlohmann::json crossings = nlohmann::json::object();
    for (const auto& [word, signs] : d.crossings) {
        auto pred = peripheral_rotation(parse_word(word, p), signs);
        crossings[word] = {{"epsilon", pred.epsilon},
                           {"predicted_class", pred.predicted_class},
                           {"rotation_angle_over_theta", pred.rotation_multiple}};
    }
    return {{"presentation", format_presentation(p)},
            {"variable", "v"},
            {"variable_meaning", "v = exp(i*theta/n)"},
            {"n", r.twist.n},
            {"kind", d.kind == Kind::amalgam ? "amalgam" : "hnn"},
            {"sides", std::move(sides)},
            {"twist", to_json(r.twist.matrix)},
            {"form", to_json(d.form)},
            {"images", std::move(images)},
            {"relations", std::move(rel)},
            {"peripheral_predictions", std::move(crossings)}};
}

}  // namespace chdef::bending

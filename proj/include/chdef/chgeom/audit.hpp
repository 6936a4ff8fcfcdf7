#pragma once

// Finite audits of a cusp horoball H for a numeric representation rho:
//   (1) every cusp generator fixes the base of H and preserves its level;
//   (2) rho(g) H and H are disjoint for every tested word g outside the
//       cusp stabilizer.
// Passing both is a statement about the tested words only.

#include <json.hpp>

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "../parallel.hpp"
#include "../representation.hpp"
#include "classify.hpp"
#include "geometry.hpp"

namespace chdef::chgeom {

struct AuditOptions {
    Tolerances tol;
    std::size_t level_samples = 50;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

struct CuspCheck {
    std::string word;
    std::string isometry_class;
    double fixed_point_deviation = 0.0;
    double max_level_deviation = 0.0;
    bool pass = false;
};

struct WordMargin {
    std::string word;
    double margin = 0.0;
};

struct ParabolicCheck {
    std::string label;
    std::string original;
    std::string deformed;
    bool pass = false;
};

struct AuditReport {
    double level = 0.0;
    std::vector<CuspCheck> condition1;
    std::size_t words_total = 0;
    std::size_t words_excluded = 0;  ///< images fixing the base point
    std::size_t words_tested = 0;
    std::optional<WordMargin> min_margin;
    std::vector<double> spectrum;  ///< distinct orthogeodesic lengths, ascending
    std::vector<WordMargin> violations;
    std::vector<std::string> identity_words;
    std::vector<ParabolicCheck> parabolic_audit;
    std::optional<double> shadow_radius_estimate;

    bool condition1_pass() const {
        for (const auto& c : condition1)
            if (!c.pass) return false;
        return true;
    }
    bool condition2_pass() const { return violations.empty(); }
    bool parabolic_pass() const {
        for (const auto& p : parabolic_audit)
            if (!p.pass) return false;
        return true;
    }
    bool faithful_on_tested() const { return identity_words.empty(); }
    bool pass() const { return condition1_pass() && condition2_pass() && parabolic_pass(); }
    std::string certificate() const {
        return "certified on " + std::to_string(words_tested) + " words, not a discreteness proof";
    }
};

/// Boundary point fixed by every cusp generator; throws no_common_fixed_point_error otherwise.
inline BoundaryPoint common_fixed_boundary_point(const HermitianForm& form, const Representation<NumMatrix>& rep,
                                                 const std::vector<Word>& cusp_words, const Tolerances& tol = {}) {
    form.require_lorentzian();
    std::optional<BoundaryPoint> q;
    std::vector<NumMatrix> images;
    for (const auto& w : cusp_words) images.push_back(evaluate_word(w, rep));
    for (const auto& g : images) {
        const auto tag = classify_isometry(form, g, tol).tag;
        if (is_parabolic(tag) || tag == IsometryTag::elliptic_boundary) {
            q = fixed_boundary_point(form, g, tol);
            break;
        }
    }
    if (!q) throw no_common_fixed_point_error("no cusp generator is parabolic or boundary elliptic");
    for (std::size_t i = 0; i < images.size(); ++i)
        if (projective_deviation(q->lift, images[i] * q->lift) > tol.fixed)
            throw no_common_fixed_point_error("cusp generator " + format_word(cusp_words[i], rep.presentation()) +
                                              " does not fix the common boundary point");
    return *q;
}

/// Default origin: the negative direction of the form.
inline ProjPoint default_origin(const HermitianForm& form) { return {form.center()}; }

namespace detail {

struct WordImage {
    std::string text;
    NumMatrix image;
    bool peripheral = false;
    bool identity = false;  ///< nonempty word with scalar image
};

inline std::vector<WordImage> word_images(const HermitianForm& form, const Representation<NumMatrix>& rep,
                                          const std::vector<Word>& words, const BoundaryPoint& base,
                                          const AuditOptions& opt) {
    (void)form;
    return parallel_map(words.size(), opt.jobs, [&](std::size_t i) {
        WordImage wi;
        wi.text = format_word(words[i], rep.presentation());
        wi.image = evaluate_word(words[i], rep);
        wi.peripheral = projective_deviation(base.lift, wi.image * base.lift) <= opt.tol.fixed;
        const Complex s = wi.image.trace() / static_cast<double>(wi.image.rows());
        const NumMatrix scalar = s * NumMatrix::Identity(wi.image.rows(), wi.image.cols());
        wi.identity = !words[i].empty() && (wi.image - scalar).norm() <= opt.tol.rank * wi.image.norm();
        return wi;
    });
}

inline double min_margin(const HermitianForm& form, const std::vector<WordImage>& imgs, const Horoball& h) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& wi : imgs)
        if (!wi.peripheral) m = std::min(m, orthogeodesic_length(form, h, apply(wi.image, h)));
    return m;
}

}  // namespace detail

/**
 * Estimate of the radius of the shadow of h2 on h1, seen from the foot of
 * the orthogeodesic: along `directions` horosphere curves leaving the foot,
 * the shadow edge is located by bisection and the smallest distance kept.
 * Sampling based, so only an estimate.
 */
template <class Rng>
double estimate_shadow_radius(const HermitianForm& form, const Horoball& h1, const Horoball& h2, Rng& rng,
                              int directions = 32) {
    const Orthogeodesic og = orthogeodesic(form, h1, h2);
    if (og.length <= 0.0) throw geometry_error("shadow needs disjoint horoballs");
    const ProjPoint foot = og.foot1;
    const double ff = form.self(foot.lift);
    double best = std::numeric_limits<double>::infinity();
    for (int d = 0; d < directions; ++d) {
        ProjPoint far = project_to_horosphere(form, h1, random_interior_point(form, rng));
        const double fa = form.self(far.lift);
        // Geodesic from foot to far, projected back to the horosphere.
        const Complex phase = form.pair(far.lift, foot.lift);
        const NumVector a = foot.lift / std::sqrt(-ff);
        const NumVector b = far.lift * (-std::conj(phase) / std::abs(phase)) / std::sqrt(-fa);
        auto at = [&](double t) { return project_to_horosphere(form, h1, {(1.0 - t) * a + t * b}); };
        if (shadow_contains(form, h1, h2, at(1.0), 1e-7)) continue;
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (shadow_contains(form, h1, h2, at(mid), 1e-7) ? lo : hi) = mid;
        }
        best = std::min(best, distance(form, foot, at(lo)));
    }
    return best;
}

inline AuditReport consistency_audit(const HermitianForm& form, const Representation<NumMatrix>& rep,
                                     const std::vector<Word>& cusp_words, const std::vector<Word>& test_words,
                                     const Horoball& h, const AuditOptions& opt = {}) {
    form.require_lorentzian();
    AuditReport report;
    report.level = h.level;

    std::mt19937_64 rng(opt.seed);
    std::vector<ProjPoint> samples;
    for (std::size_t i = 0; i < opt.level_samples; ++i)
        samples.push_back(project_to_horosphere(form, h, random_interior_point(form, rng)));
    for (const auto& w : cusp_words) {
        CuspCheck c;
        c.word = format_word(w, rep.presentation());
        const NumMatrix g = evaluate_word(w, rep);
        try {
            c.isometry_class = to_string(classify_isometry(form, g, opt.tol).tag);
        } catch (const geometry_error& e) {
            c.isometry_class = std::string("error: ") + e.what();
        }
        c.fixed_point_deviation = projective_deviation(h.base.lift, g * h.base.lift);
        for (const auto& z : samples)
            c.max_level_deviation = std::max(c.max_level_deviation, std::abs(busemann(form, h, {g * z.lift}) - h.level));
        c.pass = c.fixed_point_deviation <= opt.tol.fixed && c.max_level_deviation <= opt.tol.level;
        report.condition1.push_back(std::move(c));
    }

    const auto imgs = detail::word_images(form, rep, test_words, h.base, opt);
    const auto margins = parallel_map(imgs.size(), opt.jobs, [&](std::size_t i) {
        return imgs[i].peripheral ? 0.0 : orthogeodesic_length(form, h, apply(imgs[i].image, h));
    });
    report.words_total = imgs.size();
    std::vector<double> lengths;
    for (std::size_t i = 0; i < imgs.size(); ++i) {
        if (imgs[i].identity) report.identity_words.push_back(imgs[i].text);
        if (imgs[i].peripheral) {
            ++report.words_excluded;
            continue;
        }
        ++report.words_tested;
        lengths.push_back(margins[i]);
        if (!report.min_margin || margins[i] < report.min_margin->margin) report.min_margin = WordMargin{imgs[i].text, margins[i]};
        if (!(margins[i] > 0.0)) report.violations.push_back({imgs[i].text, margins[i]});
    }
    std::sort(lengths.begin(), lengths.end());
    for (double x : lengths)
        if (report.spectrum.empty() || x - report.spectrum.back() > 1e-9) report.spectrum.push_back(x);

    if (report.min_margin && report.min_margin->margin > 0.0) {
        for (std::size_t i = 0; i < imgs.size(); ++i)
            if (imgs[i].text == report.min_margin->word) {
                std::mt19937_64 shadow_rng(opt.seed + 1);
                report.shadow_radius_estimate = estimate_shadow_radius(form, h, apply(imgs[i].image, h), shadow_rng, 16);
                break;
            }
    }
    return report;
}

struct Calibration {
    double tangency_level = 0.0;  ///< largest level with all tested translates disjoint
    double level = 0.0;           ///< tangency_level - backoff
    double margin_at_level = 0.0;
};

/**
 * Bisection for the level at which the closest translate of the horoball
 * becomes tangent; the returned working level sits `backoff` below it.
 */
inline Calibration calibrate_level(const HermitianForm& form, const Representation<NumMatrix>& rep,
                                   const std::vector<Word>& test_words, const BoundaryPoint& base, const ProjPoint& origin,
                                   double backoff = 0.5, const AuditOptions& opt = {}) {
    form.require_lorentzian();
    const auto imgs = detail::word_images(form, rep, test_words, base, opt);
    bool any = false;
    for (const auto& wi : imgs) any = any || !wi.peripheral;
    if (!any) throw geometry_error("no non-peripheral test words to calibrate against");
    auto margin = [&](double s) { return detail::min_margin(form, imgs, {base, origin, s}); };
    double lo = -1.0, hi = 1.0;
    while (margin(lo) <= 0.0) lo *= 2.0;
    while (margin(hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (margin(mid) > 0.0 ? lo : hi) = mid;
    }
    Calibration c;
    c.tangency_level = lo;
    c.level = lo - backoff;
    c.margin_at_level = margin(c.level);
    return c;
}

/// Parabolic elements must stay parabolic and boundary-elliptic ones boundary-elliptic.
inline std::vector<ParabolicCheck> parabolic_preserving_audit(
    const std::vector<std::pair<std::string, std::pair<NumMatrix, NumMatrix>>>& pairs, const HermitianForm& form_orig,
    const HermitianForm& form_def, const Tolerances& tol = {}) {
    std::vector<ParabolicCheck> out;
    for (const auto& [label, mats] : pairs) {
        ParabolicCheck pc;
        pc.label = label;
        try {
            const auto a = classify_isometry(form_orig, mats.first, tol).tag;
            pc.original = to_string(a);
            const auto b = classify_isometry(form_def, mats.second, tol).tag;
            pc.deformed = to_string(b);
            if (is_parabolic(a))
                pc.pass = is_parabolic(b);
            else if (a == IsometryTag::elliptic_boundary)
                pc.pass = b == IsometryTag::elliptic_boundary;
            else
                pc.pass = a != IsometryTag::indeterminate;
        } catch (const geometry_error& e) {
            if (pc.original.empty()) pc.original = std::string("error: ") + e.what();
            else pc.deformed = std::string("error: ") + e.what();
            pc.pass = false;
        }
        out.push_back(std::move(pc));
    }
    return out;
}

inline nlohmann::json finite_or_null(double x) {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

inline nlohmann::json to_json(const AuditReport& r) {
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& c : r.condition1)
        gens.push_back({{"word", c.word},
                        {"class", c.isometry_class},
                        {"fixed_point_deviation", c.fixed_point_deviation},
                        {"max_level_deviation", c.max_level_deviation},
                        {"pass", c.pass}});
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : r.violations) violations.push_back({{"word", v.word}, {"margin", finite_or_null(v.margin)}});
    nlohmann::json spectrum = nlohmann::json::array();
    for (double x : r.spectrum) spectrum.push_back(finite_or_null(x));
    nlohmann::json para = nlohmann::json::array();
    for (const auto& p : r.parabolic_audit)
        para.push_back({{"element", p.label}, {"original", p.original}, {"deformed", p.deformed}, {"pass", p.pass}});
    nlohmann::json cond2 = {{"pass", r.condition2_pass()},
                            {"min_margin", r.min_margin ? finite_or_null(r.min_margin->margin) : nlohmann::json(nullptr)},
                            {"min_margin_word", r.min_margin ? nlohmann::json(r.min_margin->word) : nlohmann::json(nullptr)},
                            {"spectrum", std::move(spectrum)},
                            {"violations", std::move(violations)},
                            {"excluded_peripheral", r.words_excluded}};
    return {{"condition1", {{"pass", r.condition1_pass()}, {"generators", std::move(gens)}}},
            {"condition2", std::move(cond2)},
            {"parabolic_audit", std::move(para)},
            {"parabolic_audit_pass", r.parabolic_pass()},
            {"words_tested", r.words_tested},
            {"words_total", r.words_total},
            {"level", r.level},
            {"faithful_on_tested", r.faithful_on_tested()},
            {"identity_words", r.identity_words},
            {"shadow_radius_estimate",
             r.shadow_radius_estimate ? finite_or_null(*r.shadow_radius_estimate) : nlohmann::json(nullptr)},
            {"pass", r.pass()},
            {"certificate", r.certificate()}};
}

}  // namespace chdef::chgeom

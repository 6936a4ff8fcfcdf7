#pragma once

// Command implementations behind the chdef executable.  Each returns the
// primary output (JSON or CSV text) and an exit status; the executable only
// parses arguments and routes output.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bending.hpp"
#include "chgeom/audit.hpp"
#include "figure8.hpp"
#include "io.hpp"

namespace chdef::commands {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int check_failed = 1;
inline constexpr int bad_input = 2;
inline constexpr int centralizer_failure = 3;  ///< bend
inline constexpr int relation_failure = 4;     ///< bend
inline constexpr int no_common_fixed_point = 3;  ///< audit
inline constexpr int degenerate_form = 4;        ///< audit, classify
inline constexpr int not_an_isometry = 5;        ///< classify
inline constexpr int io_failure = 6;
}  // namespace exit_code

struct CommandResult {
    int exit_code = exit_code::ok;
    std::string output;  ///< JSON or CSV
    std::string error;   ///< diagnostic for stderr, empty on success
};

inline nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline nlohmann::json vector_json(const NumVector& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
    return out;
}

/// Comma-separated word list, e.g. "m, l".
inline std::vector<Word> parse_word_list(const std::string& text, const Presentation& p) {
    std::vector<Word> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = detail::trim(item);
        if (t.empty()) throw parse_error("empty word in list '" + text + "'");
        out.push_back(parse_word(t, p));
    }
    if (out.empty()) throw parse_error("no words given");
    return out;
}

// ---------------------------------------------------------------- figure8

enum class Fault { none, meridian_entry, form_entry };

inline Fault parse_fault(const std::string& name) {
    if (name.empty() || name == "none") return Fault::none;
    if (name == "meridian-entry") return Fault::meridian_entry;
    if (name == "form-entry") return Fault::form_entry;
    throw parse_error("unknown fault '" + name + "' (expected meridian-entry or form-entry)");
}

struct Figure8VerifyConfig {
    Fault fault = Fault::none;
    std::uint64_t seed = 0;
};

inline CommandResult figure8_verify(const Figure8VerifyConfig& cfg) {
    RingMatrix m = figure8::meridian_matrix();
    RingMatrix form = figure8::form_matrix();
    if (cfg.fault == Fault::meridian_entry) m(0, 2) += StarLaurent(1L);
    if (cfg.fault == Fault::form_entry) form(0, 0) += StarLaurent(1L);
    const auto fam = figure8::assemble_family(std::move(m), figure8::n_matrix(), std::move(form), false);

    const bool relation = check_relations(fam.rep).all_hold();
    const auto inv = figure8::verify_form_invariance(fam);
    const bool form_ok = std::all_of(inv.begin(), inv.end(), [](bool b) { return b; });
    const StarLaurent det = mat_det(fam.form);
    const bool det_ok = det == figure8::det_expansion() && det == figure8::det_factored();
    const StarLaurent tr = figure8::trace_polynomial(fam);
    const bool trace_ok = tr == StarLaurent(6L) + StarLaurent::variable();
    const auto degree = figure8::unipotence_degree(fam.M());
    const bool unipotent = degree.has_value();
    const bool all = relation && form_ok && det_ok && trace_ok && unipotent;

    nlohmann::json j = {
        {"command", "figure8 verify"},
        {"seed", cfg.seed},
        {"relation_exact", relation},
        {"form_invariant_exact", form_ok},
        {"det_formula_exact", det_ok},
        {"trace_formula_exact", trace_ok},
        {"unipotent_exact", unipotent},
        {"details",
         {{"form_invariant_per_generator", inv},
          {"det_polynomial", det.to_string()},
          {"trace_polynomial", tr.to_string()},
          {"meridian_unipotence_degree", degree ? nlohmann::json(*degree) : nlohmann::json(nullptr)}}},
        {"pass", all}};
    return {all ? exit_code::ok : exit_code::check_failed, j.dump(2) + "\n", ""};
}

/// The figure-eight family as a representation file readable by audit/classify.
inline CommandResult figure8_export() {
    const auto fam = figure8::build_family();
    FormedRepresentation fr{fam.rep, fam.form, "u"};
    return {exit_code::ok, to_json(fr).dump(1) + "\n", ""};
}

struct SweepConfig {
    double start = 0.0;
    double end = kPi;
    int steps = 1;  ///< number of intervals; steps + 1 grid points
    bool audit = false;
    std::size_t ball_length = 6;
    double backoff = 0.5;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    Tolerances tol;
};

inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/**
 * Consistency margins along the sweep use one horoball family: the lift of
 * the cusp point and the constant K in |<Z,Q>|^2 <= K (-<Z,Z>) are fixed at
 * alpha = 0 by calibration, then reused at every alpha.
 */
struct SweepHoroball {
    double log_k = 0.0;
    std::vector<Word> cusp;
    std::vector<Word> words;
};

inline double level_for_log_k(const chgeom::HermitianForm& form, const chgeom::BoundaryPoint& q,
                              const chgeom::ProjPoint& o, double log_k) {
    const double h = std::norm(form.pair(o.lift, q.lift)) / -form.self(o.lift);
    return log_k - std::log(h);
}

inline CommandResult figure8_sweep(const SweepConfig& cfg) {
    if (cfg.steps < 1) return {exit_code::bad_input, "", "steps must be at least 1"};
    for (double a : {cfg.start, cfg.end})
        if (!(a > -kPi && a <= kPi)) return {exit_code::bad_input, "", "alpha range must lie in (-pi, pi]"};
    const auto fam = figure8::build_family();
    std::vector<double> grid;
    for (int k = 0; k <= cfg.steps; ++k) grid.push_back(cfg.start + (cfg.end - cfg.start) * k / cfg.steps);

    std::optional<SweepHoroball> hb;
    if (cfg.audit) {
        SweepHoroball s;
        s.cusp = {fam.meridian, fam.longitude};
        s.words = word_ball(fam.rep.presentation().rank(), cfg.ball_length);
        const chgeom::HermitianForm f0(figure8::form_at(fam, 0.0), cfg.tol);
        const auto rep0 = evaluate(fam.rep, 0.0);
        chgeom::AuditOptions opt{cfg.tol, 50, cfg.seed, cfg.jobs};
        const auto q0 = chgeom::common_fixed_boundary_point(f0, rep0, s.cusp, cfg.tol);
        const auto o0 = chgeom::default_origin(f0);
        const auto cal = chgeom::calibrate_level(f0, rep0, s.words, q0, o0, cfg.backoff, opt);
        const double h0 = std::norm(f0.pair(o0.lift, q0.lift)) / -f0.self(o0.lift);
        s.log_k = cal.level + std::log(h0);
        hb = std::move(s);
    }

    std::ostringstream out;
    out << "alpha,re_trace,im_trace,sig_p,sig_q,sig_z,det_J";
    for (int k = 0; k < 4; ++k) out << ",re_eig_L" << k << ",im_eig_L" << k;
    out << ",geo_mult_u";
    if (cfg.audit) out << ",consistency_margin";
    out << ",seed\n";
    for (double alpha : grid) {
        const auto row = figure8::sweep_row(fam, alpha, cfg.tol);
        auto ev = row.longitude_eigenvalues;
        std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) {
            return std::arg(a) != std::arg(b) ? std::arg(a) < std::arg(b) : std::abs(a) < std::abs(b);
        });
        out << format_double(alpha) << ',' << format_double(row.trace.real()) << ',' << format_double(row.trace.imag())
            << ',' << row.signature.positive << ',' << row.signature.negative << ',' << row.signature.zero << ','
            << format_double(row.det_form);
        for (std::size_t k = 0; k < 4; ++k) {
            const Complex z = k < ev.size() ? ev[k] : Complex(std::nan(""), std::nan(""));
            out << ',' << format_double(z.real()) << ',' << format_double(z.imag());
        }
        out << ',' << row.geometric_multiplicity_u;
        if (hb) {
            double margin = std::nan("");
            if (row.signature == Inertia{3, 1, 0}) {
                try {
                    const chgeom::HermitianForm f(figure8::form_at(fam, alpha), cfg.tol);
                    const auto rep = evaluate(fam.rep, alpha);
                    const auto q = chgeom::common_fixed_boundary_point(f, rep, hb->cusp, cfg.tol);
                    const auto o = chgeom::default_origin(f);
                    const double level = level_for_log_k(f, q, o, hb->log_k);
                    chgeom::AuditOptions opt{cfg.tol, 50, cfg.seed, cfg.jobs};
                    const auto r = chgeom::consistency_audit(f, rep, hb->cusp, hb->words, {q, o, level}, opt);
                    if (r.min_margin) margin = r.min_margin->margin;
                } catch (const geometry_error&) {
                    // Left as nan: no cusp point or classification failed at this alpha.
                }
            }
            out << ',' << format_double(margin);
        }
        out << ',' << cfg.seed << '\n';
    }
    return {exit_code::ok, out.str(), ""};
}

// ---------------------------------------------------------------- bend

struct BendConfig {
    std::string datum_path;
    std::uint64_t seed = 0;
};

inline CommandResult bend(const BendConfig& cfg) {
    try {
        const auto datum = bending::datum_from_json(parse_json_text(read_text_file(cfg.datum_path)));
        const auto result = bending::bend(datum);
        nlohmann::json j = bending::to_json(result, datum);
        j["seed"] = cfg.seed;
        return {exit_code::ok, j.dump(1) + "\n", ""};
    } catch (const centralizer_error& e) {
        return {exit_code::centralizer_failure, "", e.what()};
    } catch (const relation_error& e) {
        return {exit_code::relation_failure, "", e.what()};
    } catch (const std::invalid_argument& e) {
        return {exit_code::bad_input, "", e.what()};
    } catch (const std::runtime_error& e) {
        return {exit_code::bad_input, "", e.what()};
    }
}

// ---------------------------------------------------------------- audit

struct AuditConfig {
    std::string rep_path;
    double alpha = 0.0;
    std::string cusp = "m,l";
    std::size_t ball_length = 6;
    std::optional<double> level;  ///< calibrate when empty
    double backoff = 0.5;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    Tolerances tol;
};

inline CommandResult audit(const AuditConfig& cfg) {
    std::optional<FormedRepresentation> fr;
    std::vector<Word> cusp;
    try {
        fr = formed_representation_from_json(parse_json_text(read_text_file(cfg.rep_path)));
        cusp = parse_word_list(cfg.cusp, fr->rep.presentation());
    } catch (const std::exception& e) {
        return {exit_code::bad_input, "", e.what()};
    }
    try {
        const chgeom::HermitianForm form(evaluate(fr->form, cfg.alpha), cfg.tol);
        const chgeom::HermitianForm form0(evaluate(fr->form, 0.0), cfg.tol);
        const auto rep = evaluate(fr->rep, cfg.alpha);
        const auto rep0 = evaluate(fr->rep, 0.0);
        const auto words = word_ball(rep.presentation().rank(), cfg.ball_length);
        const auto q = chgeom::common_fixed_boundary_point(form, rep, cusp, cfg.tol);
        const auto o = chgeom::default_origin(form);
        chgeom::AuditOptions opt{cfg.tol, 50, cfg.seed, cfg.jobs};

        nlohmann::json calibration = nullptr;
        double level = 0.0;
        if (cfg.level) {
            level = *cfg.level;
        } else {
            const auto cal = chgeom::calibrate_level(form, rep, words, q, o, cfg.backoff, opt);
            level = cal.level;
            calibration = {{"tangency_level", cal.tangency_level}, {"backoff", cfg.backoff}, {"level", cal.level}};
        }
        auto report = chgeom::consistency_audit(form, rep, cusp, words, {q, o, level}, opt);

        std::vector<std::pair<std::string, std::pair<NumMatrix, NumMatrix>>> pairs;
        for (const auto& w : cusp)
            pairs.push_back({format_word(w, rep.presentation()), {evaluate_word(w, rep0), evaluate_word(w, rep)}});
        report.parabolic_audit = chgeom::parabolic_preserving_audit(pairs, form0, form, cfg.tol);

        nlohmann::json j = chgeom::to_json(report);
        j["command"] = "audit";
        j["alpha"] = cfg.alpha;
        j["seed"] = cfg.seed;
        j["ball_length"] = cfg.ball_length;
        j["cusp"] = nlohmann::json::array();
        for (const auto& w : cusp) j["cusp"].push_back(format_word(w, rep.presentation()));
        j["fixed_point"] = vector_json(q.lift);
        j["origin"] = "negative eigenvector of the form";
        j["calibration"] = calibration;
        if (report.shadow_radius_estimate) j["shadow_radius_note"] = "sampling estimate around the closest translate";
        return {report.pass() ? exit_code::ok : exit_code::check_failed, j.dump(1) + "\n", ""};
    } catch (const degenerate_form_error& e) {
        return {exit_code::degenerate_form, "", e.what()};
    } catch (const no_common_fixed_point_error& e) {
        return {exit_code::no_common_fixed_point, "", e.what()};
    } catch (const geometry_error& e) {
        return {exit_code::check_failed, "", e.what()};
    }
}

// ---------------------------------------------------------------- classify

struct ClassifyConfig {
    std::string rep_path;
    std::string word;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    Tolerances tol;
};

inline CommandResult classify(const ClassifyConfig& cfg) {
    std::optional<FormedRepresentation> fr;
    Word w;
    try {
        fr = formed_representation_from_json(parse_json_text(read_text_file(cfg.rep_path)));
        w = parse_word(cfg.word, fr->rep.presentation());
    } catch (const std::exception& e) {
        return {exit_code::bad_input, "", e.what()};
    }
    try {
        const chgeom::HermitianForm form(evaluate(fr->form, cfg.alpha), cfg.tol);
        const NumMatrix a = evaluate_word(w, evaluate(fr->rep, cfg.alpha));
        const auto c = chgeom::classify_isometry(form, a, cfg.tol);
        nlohmann::json clusters = nlohmann::json::array();
        for (const auto& ci : c.clusters)
            clusters.push_back({{"value", complex_json(ci.value)}, {"algebraic", ci.algebraic}, {"geometric", ci.geometric}});
        nlohmann::json j = {{"command", "classify"},
                            {"word", format_word(w, fr->rep.presentation())},
                            {"alpha", cfg.alpha},
                            {"seed", cfg.seed},
                            {"class", to_string(c.tag)},
                            {"clusters", std::move(clusters)},
                            {"rotation_angles", c.rotation_angles},
                            {"fixed_eigenvalue", c.fixed_eigenvalue ? complex_json(*c.fixed_eigenvalue) : nlohmann::json(nullptr)},
                            {"translation_length", c.tag == chgeom::IsometryTag::loxodromic ? nlohmann::json(c.translation_length) : nlohmann::json(nullptr)},
                            {"note", c.note}};
        if (chgeom::is_parabolic(c.tag) || c.tag == chgeom::IsometryTag::elliptic_boundary)
            j["fixed_point"] = vector_json(chgeom::fixed_boundary_point(form, a, cfg.tol).lift);
        return {exit_code::ok, j.dump(1) + "\n", ""};
    } catch (const degenerate_form_error& e) {
        return {exit_code::degenerate_form, "", e.what()};
    } catch (const geometry_error& e) {
        return {exit_code::not_an_isometry, "", e.what()};
    } catch (const dimension_error& e) {
        return {exit_code::bad_input, "", e.what()};
    }
}

}  // namespace chdef::commands

#include <CLI11.hpp>

#include <iostream>

#include "chdef/commands.hpp"

namespace cmd = chdef::commands;

namespace {

int emit(const cmd::CommandResult& r, const std::string& out_path) {
    if (!r.error.empty()) std::cerr << "chdef: " << r.error << "\n";
    if (r.output.empty()) return r.exit_code;
    if (out_path.empty() || out_path == "-") {
        std::cout << r.output;
        return r.exit_code;
    }
    try {
        chdef::write_text_file(out_path, r.output);
    } catch (const std::exception& e) {
        std::cerr << "chdef: " << e.what() << "\n";
        return cmd::exit_code::io_failure;
    }
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and numeric tools for deformations of complex hyperbolic lattices"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "chdef 0.1.0");

    chdef::Tolerances tol;
    try {
        tol = chdef::Tolerances::from_env();
    } catch (const std::exception& e) {
        std::cerr << "chdef: " << e.what() << "\n";
        return cmd::exit_code::bad_input;
    }

    std::string out_path;
    int status = cmd::exit_code::ok;

    // figure8 verify | sweep | export
    auto* fig = app.add_subcommand("figure8", "Figure-eight knot family rho_u");
    fig->require_subcommand(1);

    auto* verify = fig->add_subcommand("verify", "Exact checks of the relation, form, determinant, trace, unipotence");
    std::string json_path, fault;
    cmd::Figure8VerifyConfig vcfg;
    verify->add_option("--json", json_path, "Write the JSON report here (default: stdout)");
    verify->add_option("--seed", vcfg.seed, "Recorded in the report")->default_val(0);
    verify->add_option("--inject-fault", fault, "Test hook: meridian-entry or form-entry")->group("");
    verify->callback([&] {
        vcfg.fault = cmd::parse_fault(fault);
        status = emit(cmd::figure8_verify(vcfg), json_path);
    });

    auto* sweep = fig->add_subcommand("sweep", "CSV of trace, signature, determinant and longitude data over alpha");
    cmd::SweepConfig scfg;
    sweep->add_option("--start", scfg.start, "First alpha")->required();
    sweep->add_option("--end", scfg.end, "Last alpha")->required();
    sweep->add_option("--steps", scfg.steps, "Number of intervals (steps + 1 rows)")->required();
    sweep->add_option("--out", out_path, "CSV path (default: stdout)");
    sweep->add_flag("--audit", scfg.audit, "Append the consistency margin of a fixed horoball family");
    sweep->add_option("--ball-length", scfg.ball_length, "Word length for the margin audit")->default_val(6);
    sweep->add_option("--seed", scfg.seed, "Seed for sampled checks")->default_val(0);
    sweep->add_option("--jobs", scfg.jobs, "Worker threads for the audit")->default_val(1);
    sweep->callback([&] {
        scfg.tol = tol;
        status = emit(cmd::figure8_sweep(scfg), out_path);
    });

    auto* exp = fig->add_subcommand("export", "Write the family as a representation file");
    exp->add_option("--out", out_path, "JSON path (default: stdout)");
    exp->callback([&] { status = emit(cmd::figure8_export(), out_path); });

    // bend
    auto* bend = app.add_subcommand("bend", "Bend a representation along an amalgam or HNN splitting");
    cmd::BendConfig bcfg;
    bend->add_option("--datum", bcfg.datum_path, "Bending datum JSON")->required();
    bend->add_option("--out", out_path, "JSON path (default: stdout)");
    bend->add_option("--seed", bcfg.seed, "Recorded in the output")->default_val(0);
    bend->callback([&] { status = emit(cmd::bend(bcfg), out_path); });

    // audit
    auto* audit = app.add_subcommand("audit", "Finite cusp horoball consistency audit");
    cmd::AuditConfig acfg;
    double level = 0.0;
    audit->add_option("--rep", acfg.rep_path, "Representation JSON")->required();
    audit->add_option("--alpha", acfg.alpha, "Angle of the variable")->default_val(0.0);
    audit->add_option("--cusp", acfg.cusp, "Comma-separated cusp generator words")->default_val("m,l");
    audit->add_option("--ball-length", acfg.ball_length, "Test all reduced words up to this length")->default_val(6);
    auto* level_opt = audit->add_option("--level", level, "Horoball level");
    auto* cal_flag = audit->add_flag("--calibrate", "Calibrate the level (default)");
    level_opt->excludes(cal_flag);
    audit->add_option("--backoff", acfg.backoff, "Calibrated level = tangency level - backoff")->default_val(0.5);
    audit->add_option("--out", out_path, "JSON path (default: stdout)");
    audit->add_option("--seed", acfg.seed, "Seed for sampled checks")->default_val(0);
    audit->add_option("--jobs", acfg.jobs, "Worker threads")->default_val(1);
    audit->callback([&] {
        acfg.tol = tol;
        if (level_opt->count() > 0) acfg.level = level;
        status = emit(cmd::audit(acfg), out_path);
    });

    // classify
    auto* classify = app.add_subcommand("classify", "Classify the image of a word as an isometry");
    cmd::ClassifyConfig ccfg;
    classify->add_option("--rep", ccfg.rep_path, "Representation JSON")->required();
    classify->add_option("--word", ccfg.word, "Word in the generators")->required();
    classify->add_option("--alpha", ccfg.alpha, "Angle of the variable")->default_val(0.0);
    classify->add_option("--out", out_path, "JSON path (default: stdout)");
    classify->add_option("--seed", ccfg.seed, "Recorded in the output")->default_val(0);
    classify->callback([&] {
        ccfg.tol = tol;
        status = emit(cmd::classify(ccfg), out_path);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cmd::exit_code::bad_input;
    } catch (const std::exception& e) {
        std::cerr << "chdef: " << e.what() << "\n";
        return cmd::exit_code::bad_input;
    }
    return status;
}

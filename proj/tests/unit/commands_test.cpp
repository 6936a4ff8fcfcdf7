#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "chdef/commands.hpp"

using namespace chdef;
using namespace chdef::commands;

namespace {

std::string data(const std::string& name) { return std::string(CHDEF_TEST_DATA) + "/" + name; }

// Subset of JSON Schema used by the published schemas: type, required, properties.
bool type_matches(const nlohmann::json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    if (t == "null") return v.is_null();
    return false;
}

void validate(const nlohmann::json& v, const nlohmann::json& schema, const std::string& path, std::vector<std::string>& errs) {
    if (schema.contains("type")) {
        bool ok = false;
        if (schema["type"].is_array()) {
            for (const auto& t : schema["type"]) ok = ok || type_matches(v, t.get<std::string>());
        } else {
            ok = type_matches(v, schema["type"].get<std::string>());
        }
        if (!ok) errs.push_back(path + ": wrong type");
    }
    if (schema.contains("required") && v.is_object())
        for (const auto& k : schema["required"])
            if (!v.contains(k.get<std::string>())) errs.push_back(path + ": missing " + k.get<std::string>());
    if (schema.contains("properties") && v.is_object())
        for (const auto& [k, sub] : schema["properties"].items())
            if (v.contains(k)) validate(v[k], sub, path + "/" + k, errs);
}

// One directory per test so parallel ctest runs do not share files.
std::string temp_path(const std::string& name) {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    const auto dir = std::filesystem::temp_directory_path() / "chdef_commands_test" /
                     (std::string(info->test_suite_name()) + "." + info->name());
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

std::string export_figure8() {
    const std::string path = temp_path("figure8_rep.json");
    write_text_file(path, figure8_export().output);
    return path;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
}

}  // namespace

TEST(Figure8Verify, DefaultRunPasses) {
    const auto r = figure8_verify({});
    EXPECT_EQ(r.exit_code, 0);
    const auto j = nlohmann::json::parse(r.output);
    for (const char* key : {"relation_exact", "form_invariant_exact", "det_formula_exact", "trace_formula_exact", "unipotent_exact"})
        EXPECT_TRUE(j[key].get<bool>()) << key;
    EXPECT_EQ(j["details"]["trace_polynomial"], "6 + u");
    EXPECT_EQ(j["details"]["meridian_unipotence_degree"], 3);
}

TEST(Figure8Verify, InjectedFaultFails) {
    Figure8VerifyConfig cfg;
    cfg.fault = Fault::meridian_entry;
    const auto r = figure8_verify(cfg);
    EXPECT_NE(r.exit_code, 0);
    const auto j = nlohmann::json::parse(r.output);
    EXPECT_FALSE(j["relation_exact"].get<bool>());
    EXPECT_FALSE(j["pass"].get<bool>());

    cfg.fault = Fault::form_entry;
    const auto j2 = nlohmann::json::parse(figure8_verify(cfg).output);
    EXPECT_TRUE(j2["relation_exact"].get<bool>());
    EXPECT_FALSE(j2["form_invariant_exact"].get<bool>());
    EXPECT_THROW(parse_fault("bogus"), parse_error);
}

TEST(Figure8Verify, OutputMatchesSchema) {
    const auto schema = parse_json_text(read_text_file(std::string(CHDEF_SOURCE_DIR) + "/schemas/figure8_verify.schema.json"));
    for (Fault f : {Fault::none, Fault::meridian_entry}) {
        Figure8VerifyConfig cfg;
        cfg.fault = f;
        std::vector<std::string> errs;
        validate(nlohmann::json::parse(figure8_verify(cfg).output), schema, "", errs);
        EXPECT_TRUE(errs.empty()) << errs.front();
    }
    // The validator itself rejects a broken report.
    auto broken = nlohmann::json::parse(figure8_verify({}).output);
    broken.erase("relation_exact");
    broken["pass"] = "yes";
    std::vector<std::string> errs;
    validate(broken, schema, "", errs);
    EXPECT_EQ(errs.size(), 2u);
}

TEST(Sweep, SignatureChangeAfterTwoPiOverThree) {
    SweepConfig cfg;
    cfg.start = 0.0;
    cfg.end = kPi;
    cfg.steps = 7;
    const auto r = figure8_sweep(cfg);
    ASSERT_EQ(r.exit_code, 0);
    const auto rows = parse_csv(r.output);
    ASSERT_EQ(rows.size(), 9u);
    const auto& h = rows[0];
    const std::size_t p = column(h, "sig_p"), q = column(h, "sig_q"), a = column(h, "alpha");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double alpha = std::stod(rows[i][a]);
        const bool lorentzian = rows[i][p] == "3" && rows[i][q] == "1";
        EXPECT_EQ(lorentzian, alpha < 2.0 * kPi / 3.0) << alpha;
    }
    EXPECT_EQ(rows[1][column(h, "seed")], "0");
}

TEST(Sweep, SinglePointTraceRow) {
    SweepConfig cfg;
    cfg.start = cfg.end = 0.0;
    cfg.steps = 1;
    const auto rows = parse_csv(figure8_sweep(cfg).output);
    const auto& h = rows[0];
    EXPECT_EQ(rows[1][column(h, "re_trace")], "7");
    EXPECT_EQ(rows[1][column(h, "im_trace")], "0");
    EXPECT_EQ(rows[1][column(h, "det_J")], "-432");
}

TEST(Sweep, ColumnsAndFormat) {
    SweepConfig cfg;
    cfg.start = -0.5;
    cfg.end = 0.5;
    cfg.steps = 2;
    const auto out = figure8_sweep(cfg).output;
    EXPECT_EQ(out.find('\r'), std::string::npos);
    const auto rows = parse_csv(out);
    EXPECT_EQ(rows[0].front(), "alpha");
    EXPECT_EQ(rows[0].back(), "seed");
    EXPECT_EQ(column(rows[0], "consistency_margin"), rows[0].size());
    for (const auto& row : rows) EXPECT_EQ(row.size(), rows[0].size());
}

TEST(Sweep, ConsistencyMarginRecorded) {
    SweepConfig cfg;
    cfg.start = 0.0;
    cfg.end = 0.3;
    cfg.steps = 1;
    cfg.audit = true;
    const auto rows = parse_csv(figure8_sweep(cfg).output);
    const std::size_t c = column(rows[0], "consistency_margin");
    ASSERT_LT(c, rows[0].size());
    const double m0 = std::stod(rows[1][c]), m1 = std::stod(rows[2][c]);
    EXPECT_NEAR(m0, 1.0, 1e-8);  // calibrated at alpha = 0 with backoff 0.5
    EXPECT_TRUE(m0 > m1 || (m0 > 0 && m1 > 0));
}

TEST(Sweep, BadArguments) {
    SweepConfig cfg;
    cfg.steps = 0;
    EXPECT_EQ(figure8_sweep(cfg).exit_code, exit_code::bad_input);
    cfg.steps = 3;
    cfg.start = -4.0;
    EXPECT_EQ(figure8_sweep(cfg).exit_code, exit_code::bad_input);
    cfg.start = -kPi;  // open at -pi
    EXPECT_EQ(figure8_sweep(cfg).exit_code, exit_code::bad_input);
}

TEST(Bend, ExitCodes) {
    EXPECT_EQ(bend({data("amalgam_n3.json")}).exit_code, exit_code::ok);
    EXPECT_EQ(bend({data("hnn_n3.json")}).exit_code, exit_code::ok);
    EXPECT_EQ(bend({data("amalgam_bad_delta.json")}).exit_code, exit_code::centralizer_failure);
    EXPECT_EQ(bend({data("amalgam_bad_relator.json")}).exit_code, exit_code::relation_failure);
    EXPECT_EQ(bend({data("malformed.json")}).exit_code, exit_code::bad_input);
    EXPECT_EQ(bend({data("does_not_exist.json")}).exit_code, exit_code::bad_input);
}

TEST(Bend, HnnAtThetaZeroReturnsTheInput) {
    const auto r = bend({data("hnn_n3.json")});
    const auto out = formed_representation_from_json(nlohmann::json::parse(r.output));
    const auto datum = bending::datum_from_json(parse_json_text(read_text_file(data("hnn_n3.json"))));
    EXPECT_EQ(bending::at_theta_zero(out.rep).images(), bending::base_representation(datum).images());
    EXPECT_EQ(out.variable, "v");
    for (const auto& rel : nlohmann::json::parse(r.output)["relations"]) EXPECT_TRUE(rel["exact"].get<bool>());
}

TEST(Audit, FigureEightPasses) {
    const std::string rep = export_figure8();
    for (double alpha : {0.0, 0.05}) {
        AuditConfig cfg;
        cfg.rep_path = rep;
        cfg.alpha = alpha;
        const auto r = audit(cfg);
        EXPECT_EQ(r.exit_code, 0) << r.error;
        const auto j = nlohmann::json::parse(r.output);
        EXPECT_TRUE(j["pass"].get<bool>());
        EXPECT_GT(j["condition2"]["min_margin"].get<double>(), 0.0);
        EXPECT_EQ(j["parabolic_audit"].size(), 2u);
        EXPECT_TRUE(j["parabolic_audit_pass"].get<bool>());
        EXPECT_EQ(j["words_tested"], 1444);
        EXPECT_NE(j["certificate"].get<std::string>().find("not a discreteness proof"), std::string::npos);
    }
}

TEST(Audit, AbsurdLevelFails) {
    AuditConfig cfg;
    cfg.rep_path = export_figure8();
    cfg.level = 25.0;
    const auto r = audit(cfg);
    EXPECT_EQ(r.exit_code, exit_code::check_failed);
    const auto j = nlohmann::json::parse(r.output);
    EXPECT_FALSE(j["condition2"]["violations"].empty());
    EXPECT_TRUE(j["calibration"].is_null());
}

TEST(Audit, ErrorCodes) {
    AuditConfig cfg;
    cfg.rep_path = export_figure8();
    cfg.cusp = "m,n";
    EXPECT_EQ(audit(cfg).exit_code, exit_code::no_common_fixed_point);
    cfg.cusp = "m,l";
    cfg.alpha = 2.5;
    EXPECT_EQ(audit(cfg).exit_code, exit_code::degenerate_form);
    cfg.alpha = 0.0;
    cfg.cusp = "m,zz";
    EXPECT_EQ(audit(cfg).exit_code, exit_code::bad_input);
    cfg.rep_path = data("malformed.json");
    EXPECT_EQ(audit(cfg).exit_code, exit_code::bad_input);
}

TEST(Audit, BentRepresentationRoundTrip) {
    // The bend output is a valid representation file for audit/classify.
    const std::string path = temp_path("hnn_bent.json");
    write_text_file(path, bend({data("hnn_n3.json")}).output);
    ClassifyConfig c;
    c.rep_path = path;
    c.word = "t";
    c.alpha = 0.2;  // theta = 0.6 for n = 3
    const auto r = classify(c);
    ASSERT_EQ(r.exit_code, 0) << r.error;
    const auto j = nlohmann::json::parse(r.output);
    EXPECT_EQ(j["class"], "ellipto-parabolic");
    EXPECT_NEAR(wrap_angle(j["rotation_angles"][0].get<double>() - 0.8), 0.0, 1e-6);
}

TEST(Classify, FigureEightWords) {
    ClassifyConfig c;
    c.rep_path = export_figure8();
    c.alpha = 0.5;
    c.word = "m";
    EXPECT_EQ(nlohmann::json::parse(classify(c).output)["class"], "parabolic-unipotent");
    c.word = "l";
    const auto j = nlohmann::json::parse(classify(c).output);
    EXPECT_EQ(j["class"], "ellipto-parabolic");
    EXPECT_EQ(j["fixed_point"].size(), 4u);
    c.word = "m n";
    c.alpha = 0.0;
    EXPECT_EQ(nlohmann::json::parse(classify(c).output)["class"], "loxodromic");
    c.alpha = 2.5;
    EXPECT_EQ(classify(c).exit_code, exit_code::degenerate_form);
    c.word = "q";
    EXPECT_EQ(classify(c).exit_code, exit_code::bad_input);
}

TEST(Reproducibility, SameConfigSameBytes) {
    AuditConfig a;
    a.rep_path = export_figure8();
    a.alpha = 0.05;
    a.seed = 7;
    EXPECT_EQ(audit(a).output, audit(a).output);
    AuditConfig b = a;
    b.jobs = 3;
    EXPECT_EQ(audit(a).output, audit(b).output);
    SweepConfig s;
    s.start = 0.0;
    s.end = 0.2;
    s.steps = 2;
    s.audit = true;
    s.seed = 3;
    EXPECT_EQ(figure8_sweep(s).output, figure8_sweep(s).output);
}

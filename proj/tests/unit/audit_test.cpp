#include <gtest/gtest.h>

#include <random>

#include "../support/geometry_oracles.hpp"
#include "chdef/chgeom/audit.hpp"
#include "chdef/figure8.hpp"

using namespace chdef;
using namespace chdef::chgeom;

namespace {

const figure8::FigureEightFamily& family() {
    static const auto fam = figure8::build_family();
    return fam;
}

struct Setup {
    HermitianForm form;
    Representation<NumMatrix> rep;
    std::vector<Word> cusp;
    BoundaryPoint base;
    ProjPoint origin;
};

Setup setup(double alpha) {
    HermitianForm f(figure8::form_at(family(), alpha));
    auto rep = evaluate(family().rep, alpha);
    std::vector<Word> cusp = {family().meridian, family().longitude};
    const auto q = common_fixed_boundary_point(f, rep, cusp);
    return {f, rep, cusp, q, default_origin(f)};
}

const std::vector<Word>& ball6() {
    static const auto words = word_ball(2, 6);
    return words;
}

NumVector e1_plus_e2() {
    NumVector v = NumVector::Zero(4);
    v(0) = v(1) = 1.0;
    return v;
}

}  // namespace

TEST(CommonFixedPoint, FigureEightCusp) {
    for (double alpha : {0.0, 0.3, 1.0}) {
        const auto s = setup(alpha);
        EXPECT_LT(projective_deviation(e1_plus_e2(), s.base.lift), 1e-8);
    }
}

TEST(CommonFixedPoint, Errors) {
    const auto s = setup(0.2);
    const auto& p = s.rep.presentation();
    EXPECT_THROW(common_fixed_boundary_point(s.form, s.rep, {parse_word("m", p), parse_word("n", p)}),
                 no_common_fixed_point_error);
    EXPECT_THROW(common_fixed_boundary_point(s.form, s.rep, {parse_word("m n", p)}), no_common_fixed_point_error);
    HermitianForm split(figure8::form_at(family(), 2.5));
    EXPECT_THROW(common_fixed_boundary_point(split, evaluate(family().rep, 2.5), s.cusp), degenerate_form_error);
}

TEST(Calibration, TangencyAndBackoff) {
    const auto s = setup(0.0);
    const auto cal = calibrate_level(s.form, s.rep, ball6(), s.base, s.origin, 0.5);
    AuditOptions opt;
    const auto at_tangency = consistency_audit(s.form, s.rep, s.cusp, ball6(), {s.base, s.origin, cal.tangency_level}, opt);
    EXPECT_LT(std::abs(at_tangency.min_margin->margin), 1e-8);
    // Margins are linear in the common level with slope -2.
    EXPECT_NEAR(cal.margin_at_level, 1.0, 1e-8);
    EXPECT_NEAR(cal.level, cal.tangency_level - 0.5, 1e-15);
}

TEST(ConsistencyAudit, PassesAtTheHyperbolicPoint) {
    const auto s = setup(0.0);
    const auto cal = calibrate_level(s.form, s.rep, ball6(), s.base, s.origin);
    const Horoball h{s.base, s.origin, cal.level};
    const auto r = consistency_audit(s.form, s.rep, s.cusp, ball6(), h);
    EXPECT_TRUE(r.condition1_pass());
    EXPECT_TRUE(r.condition2_pass());
    EXPECT_TRUE(r.pass());
    ASSERT_TRUE(r.min_margin.has_value());
    EXPECT_GT(r.min_margin->margin, 0.0);
    EXPECT_EQ(r.words_total, ball6().size());
    EXPECT_EQ(r.words_tested + r.words_excluded, r.words_total);
    EXPECT_EQ(r.words_excluded, 12u);  // m^k, 1 <= |k| <= 6
    EXPECT_TRUE(r.faithful_on_tested());
    EXPECT_EQ(r.certificate(), "certified on " + std::to_string(r.words_tested) + " words, not a discreteness proof");
    ASSERT_TRUE(r.shadow_radius_estimate.has_value());
    EXPECT_GT(*r.shadow_radius_estimate, 0.0);
    for (double x : r.spectrum) EXPECT_GE(x, r.min_margin->margin);
    EXPECT_TRUE(std::is_sorted(r.spectrum.begin(), r.spectrum.end()));
}

TEST(ConsistencyAudit, MarginsMatchPairwiseOracle) {
    const auto s = setup(0.0);
    const auto cal = calibrate_level(s.form, s.rep, ball6(), s.base, s.origin);
    const Horoball h{s.base, s.origin, cal.level};
    const auto r = consistency_audit(s.form, s.rep, s.cusp, ball6(), h);
    double best = std::numeric_limits<double>::infinity();
    std::size_t tested = 0;
    for (const auto& w : ball6()) {
        const NumMatrix g = evaluate_word(w, s.rep);
        if (projective_deviation(s.base.lift, g * s.base.lift) <= 1e-8) continue;
        ++tested;
        best = std::min(best, oracle::geodesic_crossing_gap(s.form, h, apply(g, h)));
    }
    EXPECT_EQ(tested, r.words_tested);
    EXPECT_NEAR(best, r.min_margin->margin, 1e-6);
}

TEST(ConsistencyAudit, StillPassesNearby) {
    for (double alpha : {0.05, -0.05}) {
        const auto s = setup(alpha);
        const auto cal = calibrate_level(s.form, s.rep, ball6(), s.base, s.origin);
        const auto r = consistency_audit(s.form, s.rep, s.cusp, ball6(), {s.base, s.origin, cal.level});
        EXPECT_TRUE(r.pass()) << alpha;
        EXPECT_GT(r.min_margin->margin, 0.0);
    }
}

TEST(ConsistencyAudit, FailsAboveTangency) {
    const auto s = setup(0.0);
    const auto cal = calibrate_level(s.form, s.rep, ball6(), s.base, s.origin);
    const auto r = consistency_audit(s.form, s.rep, s.cusp, ball6(), {s.base, s.origin, cal.tangency_level + 0.25});
    EXPECT_TRUE(r.condition1_pass());
    EXPECT_FALSE(r.condition2_pass());
    EXPECT_FALSE(r.pass());
    ASSERT_FALSE(r.violations.empty());
    bool reported = false;
    for (const auto& v : r.violations) {
        EXPECT_LE(v.margin, 0.0);
        reported = reported || v.word == r.min_margin->word;
    }
    EXPECT_TRUE(reported);
    // Far above: many more violations.
    const auto absurd = consistency_audit(s.form, s.rep, s.cusp, ball6(), {s.base, s.origin, cal.tangency_level + 20.0});
    EXPECT_GT(absurd.violations.size(), r.violations.size());
}

TEST(ConsistencyAudit, IdentityOnlyWordsAreVacuous) {
    const auto s = setup(0.0);
    const auto r = consistency_audit(s.form, s.rep, s.cusp, {Word()}, {s.base, s.origin, 0.0});
    EXPECT_EQ(r.words_tested, 0u);
    EXPECT_TRUE(r.condition2_pass());
    EXPECT_TRUE(r.pass());
    EXPECT_FALSE(r.min_margin.has_value());
    EXPECT_TRUE(r.faithful_on_tested());
    EXPECT_TRUE(to_json(r)["condition2"]["min_margin"].is_null());
}

TEST(ConsistencyAudit, WrongBaseFailsConditionOne) {
    const auto s = setup(0.0);
    std::mt19937_64 rng(41);
    const auto other = random_boundary_point(s.form, rng);
    const auto r = consistency_audit(s.form, s.rep, s.cusp, ball6(), {other, s.origin, -1.0});
    EXPECT_FALSE(r.condition1_pass());
    EXPECT_FALSE(r.pass());
}

TEST(ConsistencyAudit, NonFaithfulWordIsFlagged) {
    // Both generators sent to the same matrix: m n^-1 maps to I.
    const auto s = setup(0.0);
    Representation<NumMatrix> collapsed(s.rep.presentation(), {s.rep.image(0), s.rep.image(0)});
    const auto& p = s.rep.presentation();
    const auto r = consistency_audit(s.form, collapsed, {parse_word("m", p)}, {parse_word("m n^-1", p)},
                                     {s.base, s.origin, 0.0});
    EXPECT_FALSE(r.faithful_on_tested());
    ASSERT_EQ(r.identity_words.size(), 1u);
    EXPECT_EQ(r.identity_words[0], "m n^-1");
}

TEST(ConsistencyAudit, DeterministicAcrossWorkerCounts) {
    const auto s = setup(0.05);
    const Horoball h{s.base, s.origin, 0.1};
    AuditOptions one, four;
    four.jobs = 4;
    EXPECT_EQ(to_json(consistency_audit(s.form, s.rep, s.cusp, ball6(), h, one)).dump(),
              to_json(consistency_audit(s.form, s.rep, s.cusp, ball6(), h, four)).dump());
}

TEST(ConsistencyAudit, JsonShape) {
    const auto s = setup(0.0);
    const auto j = to_json(consistency_audit(s.form, s.rep, s.cusp, ball6(), {s.base, s.origin, 0.1}));
    for (const char* key : {"condition1", "condition2", "parabolic_audit", "words_tested", "level", "certificate", "pass"})
        EXPECT_TRUE(j.contains(key)) << key;
    for (const char* key : {"min_margin", "spectrum", "violations"}) EXPECT_TRUE(j["condition2"].contains(key)) << key;
    EXPECT_EQ(j["condition1"]["generators"].size(), 2u);
}

TEST(CuspLevels, DeformedCuspGroupPreservesHorospheres) {
    // Whenever the cusp generators stay parabolic, they preserve every horosphere at their fixed point.
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> alpha_dist(-2.0, 2.0);
    for (int k = 0; k < 10; ++k) {
        const double alpha = alpha_dist(rng);
        const auto s = setup(alpha);
        const auto s0 = setup(0.0);
        const auto audit = parabolic_preserving_audit(
            {{"m", {s0.rep.image(0), s.rep.image(0)}}, {"l", {evaluate_word(s0.cusp[1], s0.rep), evaluate_word(s.cusp[1], s.rep)}}},
            s0.form, s.form);
        ASSERT_TRUE(audit[0].pass && audit[1].pass) << alpha;
        for (double level : {-2.0, 0.0, 1.5}) {
            AuditOptions opt;
            opt.seed = static_cast<std::uint64_t>(k);
            const auto r = consistency_audit(s.form, s.rep, s.cusp, {}, {s.base, s.origin, level}, opt);
            EXPECT_TRUE(r.condition1_pass()) << alpha << " " << level;
        }
    }
}

TEST(ParabolicAudit, Examples) {
    const auto s0 = setup(0.0), s = setup(0.4);
    const NumMatrix l0 = evaluate_word(s0.cusp[1], s0.rep), l = evaluate_word(s.cusp[1], s.rep);
    const auto a = parabolic_preserving_audit({{"m", {s0.rep.image(0), s.rep.image(0)}}, {"l", {l0, l}}}, s0.form, s.form);
    ASSERT_EQ(a.size(), 2u);
    EXPECT_TRUE(a[0].pass);
    EXPECT_EQ(a[0].deformed, "parabolic-unipotent");
    EXPECT_TRUE(a[1].pass);
    EXPECT_EQ(a[1].original, "parabolic-unipotent");
    EXPECT_EQ(a[1].deformed, "ellipto-parabolic");

    // Parabolic sent to loxodromic.
    const NumMatrix mn = s.rep.image(0) * s.rep.image(1);
    const auto bad = parabolic_preserving_audit({{"m", {s0.rep.image(0), mn}}}, s0.form, s.form);
    EXPECT_FALSE(bad[0].pass);
    EXPECT_EQ(bad[0].deformed, "loxodromic");

    // A deformed matrix that is not an isometry reports the failure instead of throwing.
    const auto broken = parabolic_preserving_audit({{"m", {s0.rep.image(0), 2.0 * s.rep.image(0)}}}, s0.form, s.form);
    EXPECT_FALSE(broken[0].pass);
    EXPECT_NE(broken[0].deformed.find("error"), std::string::npos);
}

TEST(ParabolicAudit, BoundaryEllipticMustStayBoundaryElliptic) {
    NumMatrix j = NumMatrix::Identity(4, 4);
    j(3, 3) = -1.0;
    const HermitianForm f(j);
    const Complex w = std::polar(1.0, 0.4), r = std::polar(1.0, 0.3);
    NumMatrix be = NumMatrix::Identity(4, 4), sp = NumMatrix::Identity(4, 4);
    be(0, 0) = w, be(1, 1) = std::conj(w);
    sp(0, 0) = r * r, sp(1, 1) = r, sp(2, 2) = r * r * r, sp(3, 3) = std::pow(r, -6.0);
    EXPECT_TRUE(parabolic_preserving_audit({{"x", {be, be}}}, f, f)[0].pass);
    EXPECT_FALSE(parabolic_preserving_audit({{"x", {be, sp}}}, f, f)[0].pass);
}

TEST(ShadowRadius, EstimateIsConsistentWithShadowMembership) {
    const auto s = setup(0.0);
    const auto cal = calibrate_level(s.form, s.rep, ball6(), s.base, s.origin);
    const Horoball h{s.base, s.origin, cal.level};
    const auto r = consistency_audit(s.form, s.rep, s.cusp, ball6(), h);
    const NumMatrix g = evaluate_word(parse_word(r.min_margin->word, s.rep.presentation()), s.rep);
    const Horoball gh = apply(g, h);
    const auto og = orthogeodesic(s.form, h, gh);
    // Points on the horosphere well inside the estimated radius lie in the shadow.
    std::mt19937_64 rng(43);
    std::normal_distribution<double> gauss;
    int checked = 0;
    for (int k = 0; k < 2000 && checked < 50; ++k) {
        NumVector v = og.foot1.lift;
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) += std::pow(10.0, -1.0 - 2.0 * (k % 10) / 10.0) * og.foot1.lift.norm() * Complex(gauss(rng), gauss(rng));
        if (!(s.form.self(v) < 0.0)) continue;
        const auto x = project_to_horosphere(s.form, h, {v});
        if (distance(s.form, x, og.foot1) > 0.5 * *r.shadow_radius_estimate) continue;
        ++checked;
        EXPECT_TRUE(shadow_contains(s.form, h, gh, x));
    }
    EXPECT_GT(checked, 10);
}

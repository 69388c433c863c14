#include "hurwitz/report.hpp"
#include "hurwitz/suites.hpp"

#include <gtest/gtest.h>

using namespace hurwitz;

namespace {

ReportEntry make_entry(double residual, double tol) {
    ReportEntry e;
    e.suite = "demo";
    e.identity = "identity";
    e.anchor = "an anchor";
    e.inputs = {{"tau", cplx(0.1, 1.2)}};
    e.computed = {{"value", cplx(-3.5, 0.25)}};
    e.expected = cplx(1.0, -1.0);
    e.residual = residual;
    e.tolerance = tol;
    return e;
}

} // namespace

TEST(Report, EmptyReportSchema) {
    const VerificationReport r;
    const auto j = nlohmann::json::parse(emit_report(r, ReportFormat::json));
    EXPECT_EQ(j.at("version"), report_version);
    EXPECT_TRUE(j.at("entries").is_array());
    EXPECT_TRUE(j.at("entries").empty());
    EXPECT_EQ(j.at("summary").at("total"), 0);
    EXPECT_EQ(j.at("summary").at("passed"), 0);
    EXPECT_TRUE(j.at("summary").at("wall_time_s").is_null());
    EXPECT_TRUE(j.contains("config"));
}

TEST(Report, PassFlagFollowsTolerance) {
    VerificationReport r;
    EXPECT_TRUE(r.add(make_entry(1e-9, 1e-8)).pass);
    EXPECT_TRUE(r.add(make_entry(1e-8, 1e-8)).pass);
    EXPECT_FALSE(r.add(make_entry(2e-8, 1e-8)).pass);
    ReportEntry forged = make_entry(1.0, 1e-8);
    forged.pass = true;
    EXPECT_FALSE(r.add(forged).pass);
    EXPECT_FALSE(r.add_error("demo", "broken", "an anchor", 1e-8, "did not converge").pass);
    EXPECT_FALSE(r.all_passed());
    const auto s = r.summary();
    EXPECT_EQ(s.total, 5);
    EXPECT_EQ(s.passed, 2);
}

TEST(Report, AnchorAndToleranceRequired) {
    VerificationReport r;
    ReportEntry e = make_entry(0.0, 1e-8);
    e.anchor.clear();
    EXPECT_THROW(r.add(e), DomainError);
    e = make_entry(0.0, 0.0);
    EXPECT_THROW(r.add(e), DomainError);
}

TEST(Report, JsonRoundTrip) {
    VerificationReport r;
    r.config = {{"suite", "demo"}, {"seed", 9}};
    r.add(make_entry(3e-12, 1e-10));
    r.add(make_entry(0.5, 1e-10));
    r.add_error("demo", "broken", "an anchor", 1e-8, "pole hit", {{"z", cplx(0.0, 0.5)}});
    r.wall_time = 1.25;
    const VerificationReport back = report_from_json(nlohmann::json::parse(emit_report(r, ReportFormat::json)));
    EXPECT_EQ(back.entries, r.entries);
    EXPECT_EQ(back.config, r.config);
    EXPECT_EQ(back.wall_time, r.wall_time);
    EXPECT_EQ(back.summary(), r.summary());
}

TEST(Report, ComplexValuesAsPairs) {
    VerificationReport r;
    r.add(make_entry(0.0, 1.0));
    const auto j = to_json(r);
    const auto& v = j.at("entries")[0].at("computed")[0].at("value");
    EXPECT_EQ(v.at("re"), -3.5);
    EXPECT_EQ(v.at("im"), 0.25);
}

TEST(Report, RejectsUnknownVersion) {
    auto j = to_json(VerificationReport{});
    j["version"] = "0.1";
    EXPECT_THROW(report_from_json(j), DomainError);
}

TEST(Report, TextTable) {
    VerificationReport r;
    r.add(make_entry(1e-12, 1e-10));
    r.add(make_entry(1.0, 1e-10));
    const std::string text = emit_report(r, ReportFormat::text);
    EXPECT_NE(text.find("PASS"), std::string::npos);
    EXPECT_NE(text.find("FAIL"), std::string::npos);
    EXPECT_NE(text.find("1/2 passed"), std::string::npos);
}

TEST(Suites, ConfigValidation) {
    SuiteConfig cfg;
    cfg.suite = "nonsense";
    EXPECT_THROW(run_suite(cfg), DomainError);
    cfg = {};
    cfg.tolerances["no-such-tolerance"] = 1e-3;
    EXPECT_THROW(cfg.validate(), DomainError);
    cfg = {};
    cfg.tolerances["heat"] = -1.0;
    EXPECT_THROW(cfg.validate(), DomainError);
    cfg = {};
    cfg.samples = 0;
    EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(Suites, SpecialFunctionsAllPass) {
    SuiteConfig cfg;
    cfg.suite = "special-functions";
    cfg.samples = 3;
    const auto r = run_suite(cfg);
    EXPECT_TRUE(r.all_passed());
    EXPECT_TRUE(r.passed("special-functions", "heat equation"));
    EXPECT_TRUE(r.passed("special-functions", "Legendre identity"));
    for (const auto& e : r.entries)
        EXPECT_FALSE(e.anchor.empty());
}

TEST(Suites, ToleranceOverrideTakesEffect) {
    SuiteConfig cfg;
    cfg.suite = "special-functions";
    cfg.samples = 1;
    cfg.tolerances["heat"] = 1e-30;
    const auto r = run_suite(cfg);
    EXPECT_FALSE(r.passed("special-functions", "heat equation"));
    EXPECT_TRUE(r.passed("special-functions", "Legendre identity"));
}

TEST(Suites, TheoremReportIsByteIdentical) {
    SuiteConfig cfg;
    cfg.suite = "theorem";
    cfg.samples = 1;
    cfg.seed = 5;
    const std::string a = emit_report(run_suite(cfg), ReportFormat::json);
    const std::string b = emit_report(run_suite(cfg), ReportFormat::json);
    EXPECT_EQ(a, b);
    cfg.seed = 6;
    EXPECT_NE(emit_report(run_suite(cfg), ReportFormat::json), a);
}

TEST(Suites, AllIsTheConcatenationOfSuites) {
    SuiteConfig cfg;
    cfg.samples = 1;
    cfg.parallel = true;
    const auto all = run_suite(cfg);
    int total = 0;
    for (const auto& name : suite_names()) {
        SuiteConfig one = cfg;
        one.suite = name;
        one.parallel = false;
        const auto r = run_suite(one);
        total += r.summary().total;
        for (const auto& e : r.entries) {
            const auto it = std::find(all.entries.begin(), all.entries.end(), e);
            EXPECT_NE(it, all.entries.end()) << name << ": " << e.identity;
        }
    }
    EXPECT_EQ(all.summary().total, total);
}

#include "hurwitz/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

std::pair<std::string, double> parse_tolerance(const std::string& s) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
        throw hurwitz::DomainError("tolerance must be given as name=value, got '" + s + "'");
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(s.substr(eq + 1), &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() - eq - 1)
        throw hurwitz::DomainError("tolerance value in '" + s + "' is not a number");
    return {s.substr(0, eq), value};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical verification of the restricted Hurwitz potential and the orbifold GW potential"};
    hurwitz::SuiteConfig cfg;
    std::vector<std::string> tolerances;
    std::string format = "text";
    int truncation = 0;

    std::string suites = "all";
    for (const auto& n : hurwitz::suite_names())
        suites += ", " + n;
    app.add_option("--suite", cfg.suite, "suite to run: " + suites)->capture_default_str();
    app.add_option("--samples", cfg.samples, "random points per identity")->capture_default_str();
    app.add_option("--seed", cfg.seed, "base seed")->capture_default_str();
    app.add_option("--tol", tolerances, "override a tolerance, name=value (repeatable)");
    app.add_option("--truncation", truncation, "cap on theta terms and lattice rows");
    app.add_option("--out", cfg.out, "write the report to this file instead of stdout");
    app.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    app.add_flag("--parallel", cfg.parallel, "run suites concurrently");
    app.add_flag("--timing", cfg.timing, "record wall time in the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    hurwitz::VerificationReport report;
    try {
        for (const auto& t : tolerances) {
            const auto [name, value] = parse_tolerance(t);
            cfg.tolerances[name] = value;
        }
        if (app.count("--truncation"))
            cfg.truncation = truncation;
        cfg.validate();
        if (!cfg.out.empty()) {
            std::ofstream probe(cfg.out, std::ios::app);
            if (!probe)
                throw hurwitz::DomainError("cannot write to '" + cfg.out + "'");
        }
        report = hurwitz::run_suite(cfg);
    } catch (const hurwitz::DomainError& e) {
        std::cerr << "hurwitz_verify: " << e.what() << "\n";
        return 2;
    }

    const auto text = hurwitz::emit_report(report, format == "json" ? hurwitz::ReportFormat::json
                                                                    : hurwitz::ReportFormat::text);
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(cfg.out, std::ios::trunc);
        out << text;
        if (!out) {
            std::cerr << "hurwitz_verify: failed writing '" << cfg.out << "'\n";
            return 2;
        }
    }
    return report.all_passed() ? 0 : 1;
}

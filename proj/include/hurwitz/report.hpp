#pragma once

#include "hurwitz/numeric.hpp"

#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace hurwitz {

inline constexpr const char* report_version = "1.0";

using NamedValue = std::pair<std::string, cplx>;

struct ReportEntry {
    std::string suite;
    std::string identity;
    std::string anchor;
    std::vector<NamedValue> inputs;
    std::vector<NamedValue> computed;
    cplx expected{};
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string error;  // nonempty when the computation threw

    bool operator==(const ReportEntry&) const = default;
};

struct ReportSummary {
    int total = 0;
    int passed = 0;
    double max_residual = 0.0;
    std::optional<double> wall_time;

    bool operator==(const ReportSummary&) const = default;
};

class VerificationReport {
public:
    nlohmann::json config = nlohmann::json::object();
    std::vector<ReportEntry> entries;
    std::optional<double> wall_time;

    /// Appends an entry; the pass flag is derived from residual <= tolerance.
    ReportEntry& add(ReportEntry e) {
        if (e.anchor.empty())
            throw DomainError("report entry '" + e.identity + "' needs an anchor");
        if (!(e.tolerance > 0.0))
            throw DomainError("report entry '" + e.identity + "' needs a positive tolerance");
        e.pass = e.error.empty() && e.residual <= e.tolerance;
        entries.push_back(std::move(e));
        return entries.back();
    }

    /// Records a failed computation as a failing entry.
    ReportEntry& add_error(std::string suite, std::string identity, std::string anchor, double tolerance,
                           std::string what, std::vector<NamedValue> inputs = {}) {
        ReportEntry e;
        e.suite = std::move(suite);
        e.identity = std::move(identity);
        e.anchor = std::move(anchor);
        e.inputs = std::move(inputs);
        e.residual = std::numeric_limits<double>::infinity();
        e.tolerance = tolerance;
        e.error = what.empty() ? "computation failed" : std::move(what);
        return add(std::move(e));
    }

    void append(const VerificationReport& other) {
        entries.insert(entries.end(), other.entries.begin(), other.entries.end());
    }

    ReportSummary summary() const {
        ReportSummary s;
        s.total = int(entries.size());
        for (const auto& e : entries) {
            s.passed += e.pass ? 1 : 0;
            s.max_residual = std::max(s.max_residual, e.residual);
        }
        s.wall_time = wall_time;
        return s;
    }

    bool all_passed() const {
        for (const auto& e : entries)
            if (!e.pass)
                return false;
        return true;
    }

    /// Worst residual among entries whose identity starts with prefix.
    double max_residual(const std::string& suite, const std::string& prefix = "") const {
        double m = 0.0;
        for (const auto& e : entries)
            if (e.suite == suite && e.identity.rfind(prefix, 0) == 0)
                m = std::max(m, e.residual);
        return m;
    }

    bool passed(const std::string& suite, const std::string& prefix = "") const {
        bool any = false;
        for (const auto& e : entries)
            if (e.suite == suite && e.identity.rfind(prefix, 0) == 0) {
                any = true;
                if (!e.pass)
                    return false;
            }
        return any;
    }
};

namespace detail {

inline nlohmann::json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

inline cplx complex_from_json(const nlohmann::json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }

inline nlohmann::json named_json(const std::vector<NamedValue>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& [name, z] : v)
        a.push_back({{"name", name}, {"value", complex_json(z)}});
    return a;
}

inline std::vector<NamedValue> named_from_json(const nlohmann::json& a) {
    std::vector<NamedValue> v;
    for (const auto& x : a)
        v.emplace_back(x.at("name").get<std::string>(), complex_from_json(x.at("value")));
    return v;
}

// JSON has no infinity; failed computations carry a null residual.
inline nlohmann::json real_json(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

inline double real_from_json(const nlohmann::json& j) {
    return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

} // namespace detail

inline nlohmann::json to_json(const ReportEntry& e) {
    nlohmann::json j{{"suite", e.suite},
                     {"identity", e.identity},
                     {"anchor", e.anchor},
                     {"inputs", detail::named_json(e.inputs)},
                     {"computed", detail::named_json(e.computed)},
                     {"expected", detail::complex_json(e.expected)},
                     {"residual", detail::real_json(e.residual)},
                     {"tolerance", e.tolerance},
                     {"pass", e.pass}};
    if (!e.error.empty())
        j["error"] = e.error;
    return j;
}

inline ReportEntry entry_from_json(const nlohmann::json& j) {
    ReportEntry e;
    e.suite = j.at("suite").get<std::string>();
    e.identity = j.at("identity").get<std::string>();
    e.anchor = j.at("anchor").get<std::string>();
    e.inputs = detail::named_from_json(j.at("inputs"));
    e.computed = detail::named_from_json(j.at("computed"));
    e.expected = detail::complex_from_json(j.at("expected"));
    e.residual = detail::real_from_json(j.at("residual"));
    e.tolerance = j.at("tolerance").get<double>();
    e.pass = j.at("pass").get<bool>();
    if (j.contains("error"))
        e.error = j.at("error").get<std::string>();
    return e;
}

inline nlohmann::json to_json(const VerificationReport& r) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : r.entries)
        entries.push_back(to_json(e));
    const auto s = r.summary();
    return {{"version", report_version},
            {"config", r.config},
            {"entries", entries},
            {"summary",
             {{"total", s.total},
              {"passed", s.passed},
              {"max_residual", detail::real_json(s.max_residual)},
              {"wall_time_s", s.wall_time ? nlohmann::json(*s.wall_time) : nlohmann::json(nullptr)}}}};
}

inline VerificationReport report_from_json(const nlohmann::json& j) {
    if (j.at("version").get<std::string>() != report_version)
        throw DomainError("unsupported report version " + j.at("version").get<std::string>());
    VerificationReport r;
    r.config = j.at("config");
    for (const auto& e : j.at("entries"))
        r.entries.push_back(entry_from_json(e));
    const auto& w = j.at("summary").at("wall_time_s");
    if (!w.is_null())
        r.wall_time = w.get<double>();
    return r;
}

enum class ReportFormat { json, text };

inline std::string emit_report(const VerificationReport& r, ReportFormat f) {
    if (f == ReportFormat::json)
        return to_json(r).dump(2) + "\n";
    std::ostringstream os;
    std::size_t wsuite = 5, wid = 8;
    for (const auto& e : r.entries) {
        wsuite = std::max(wsuite, e.suite.size());
        wid = std::max(wid, e.identity.size());
    }
    os << std::left << std::setw(int(wsuite)) << "suite" << "  " << std::setw(int(wid)) << "identity"
       << "  " << std::setw(11) << "residual" << "  " << std::setw(9) << "tolerance" << "  status\n";
    os << std::string(wsuite + wid + 37, '-') << "\n";
    for (const auto& e : r.entries) {
        os << std::left << std::setw(int(wsuite)) << e.suite << "  " << std::setw(int(wid)) << e.identity << "  ";
        std::ostringstream res;
        if (std::isfinite(e.residual))
            res << std::scientific << std::setprecision(3) << e.residual;
        else
            res << "error";
        std::ostringstream tol;
        tol << std::scientific << std::setprecision(1) << e.tolerance;
        os << std::setw(11) << res.str() << "  " << std::setw(9) << tol.str() << "  " << (e.pass ? "PASS" : "FAIL");
        if (!e.error.empty())
            os << "  (" << e.error << ")";
        os << "\n";
    }
    const auto s = r.summary();
    os << "\n" << s.passed << "/" << s.total << " passed";
    if (std::isfinite(s.max_residual))
        os << ", max residual " << std::scientific << std::setprecision(3) << s.max_residual;
    if (s.wall_time)
        os << ", " << std::fixed << std::setprecision(2) << *s.wall_time << " s";
    os << "\n";
    return os.str();
}

} // namespace hurwitz

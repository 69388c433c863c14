#pragma once

#include "hurwitz/covering.hpp"
#include "hurwitz/elliptic.hpp"
#include "hurwitz/gw_potential.hpp"
#include "hurwitz/report.hpp"
#include "hurwitz/restriction.hpp"
#include "hurwitz/sampling.hpp"
#include "hurwitz/theta.hpp"

#include <chrono>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hurwitz {

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"special-functions", "gw",          "hurwitz-metric",
                                                "structure-constants", "restriction", "theorem"};
    return names;
}

inline const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> t{
        {"heat", 1e-10},          {"legendre", 1e-10},        {"halphen", 1e-8},      {"theta-identity", 1e-9},
        {"wdvv", 1e-7},           {"euler", 1e-9},            {"gw-metric", 1e-9},    {"frames", 1e-10},
        {"metric-table", 1e-8},   {"metric-constancy", 1e-8}, {"strategy", 1e-8},     {"roundtrip", 1e-8},
        {"closed-form", 1e-7},    {"grading", 1e-9},          {"lemma", 1e-7},        {"vanishing", 1e-8},
        {"restricted", 1e-7},     {"pair-index", 1e-9},       {"theorem", 1e-6},
    };
    return t;
}

struct SuiteConfig {
    std::string suite = "all";
    int samples = 10;
    std::uint64_t seed = 42;
    std::map<std::string, double> tolerances;
    std::optional<int> truncation;
    std::string out;
    bool parallel = false;
    bool timing = false;

    void validate() const {
        if (suite != "all" && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
            throw DomainError("unknown suite '" + suite + "'");
        if (samples < 1)
            throw DomainError("sample count must be at least 1");
        for (const auto& [name, value] : tolerances) {
            if (!default_tolerances().count(name))
                throw DomainError("unknown tolerance '" + name + "'");
            if (!(value > 0.0))
                throw DomainError("tolerance '" + name + "' must be positive");
        }
        if (truncation && *truncation < 2)
            throw DomainError("truncation must be at least 2");
    }

    double tol(const std::string& name) const {
        const auto it = tolerances.find(name);
        return it != tolerances.end() ? it->second : default_tolerances().at(name);
    }

    int rows() const { return truncation.value_or(40); }

    ModularParameter modular(cplx tau) const {
        return truncation ? ModularParameter(tau, 1e-16, *truncation) : ModularParameter(tau);
    }

    CoveringConfig covering() const {
        CoveringConfig c;
        c.max_rows = rows();
        return c;
    }

    nlohmann::json to_json() const {
        nlohmann::json tol_json = nlohmann::json::object();
        for (const auto& [name, value] : default_tolerances())
            tol_json[name] = tol(name);
        return {{"suite", suite},
                {"samples", samples},
                {"seed", seed},
                {"tolerances", tol_json},
                {"truncation", truncation ? nlohmann::json(*truncation) : nlohmann::json(nullptr)}};
    }
};

namespace detail {

inline std::uint64_t suite_seed(const SuiteConfig& cfg, const std::string& suite) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : suite)
        h = (h ^ std::uint64_t(static_cast<unsigned char>(c))) * 1099511628211ull;
    return cfg.seed ^ h;
}

class SuiteWriter {
public:
    SuiteWriter(VerificationReport& r, const SuiteConfig& cfg, std::string suite)
        : r_(r), cfg_(cfg), suite_(std::move(suite)) {}

    void entry(const std::string& identity, const std::string& anchor, const std::string& tol_name,
               std::vector<NamedValue> inputs, std::vector<NamedValue> computed, cplx expected, double residual) {
        ReportEntry e;
        e.suite = suite_;
        e.identity = identity;
        e.anchor = anchor;
        e.inputs = std::move(inputs);
        e.computed = std::move(computed);
        e.expected = expected;
        e.residual = residual;
        e.tolerance = cfg_.tol(tol_name);
        r_.add(std::move(e));
    }

    /// Runs body; numerical and domain failures become failing entries.
    void guarded(const std::string& identity, const std::string& anchor, const std::string& tol_name,
                 const std::vector<NamedValue>& inputs, const std::function<void()>& body) {
        try {
            body();
        } catch (const NumericError& e) {
            r_.add_error(suite_, identity, anchor, cfg_.tol(tol_name), e.what(), inputs);
        } catch (const DomainError& e) {
            r_.add_error(suite_, identity, anchor, cfg_.tol(tol_name), e.what(), inputs);
        }
    }

private:
    VerificationReport& r_;
    const SuiteConfig& cfg_;
    std::string suite_;
};

inline std::vector<NamedValue> flat_inputs(const FlatCoords& x) {
    std::vector<NamedValue> v;
    for (int k = 0; k < flat_dim; ++k)
        v.emplace_back(coord_name(Coord(k)), x.get(Coord(k)));
    return v;
}

inline std::vector<NamedValue> restricted_inputs(const RestrictedPoint& p) {
    return {{"tau", p.tau}, {"t1", p.t[0]}, {"t2", p.t[1]}, {"t3", p.t[2]}, {"t4", p.t[3]}, {"C1", p.C1}};
}

inline std::vector<NamedValue> gw_inputs(const GWPoint& p) {
    return {{"t0", p.t0}, {"t1", p.ti[0]}, {"t2", p.ti[1]}, {"t3", p.ti[2]}, {"t4", p.ti[3]}, {"t", p.t}};
}

} // namespace detail

/// A point of the flat coordinate space away from the discriminant: the
/// poles are separated, the critical points are simple and their number
/// matches the argument principle. With zero_V the simple-pole
/// coefficients vanish; otherwise V4 = -V2 - V3.
inline Covering sample_generic_covering(Sampler& s, const CoveringConfig& cfg, bool zero_V = false) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        FlatCoords x;
        x.B1 = s.in_box(-0.4, 0.4, 0.9, 1.5);
        const Lattice L = Lattice::normalized(x.B1);
        for (auto& t : x.t)
            t = s.annulus(0.5, 1.2);
        std::vector<cplx> placed{0.0};
        while (placed.size() < 4) {
            const cplx p = s.uniform(0.0, 1.0) + s.uniform(0.0, 1.0) * x.B1;
            bool ok = true;
            for (const auto& q : placed)
                ok = ok && L.distance_to_lattice(p - q) > 0.2;
            if (ok)
                placed.push_back(p);
        }
        for (int k = 0; k < 3; ++k)
            x.v[std::size_t(k)] = placed[std::size_t(k + 1)];
        if (!zero_V) {
            x.V[0] = s.disk(0.3);
            x.V[1] = s.disk(0.3);
            x.V[2] = -x.V[0] - x.V[1];
        }
        x.C1 = s.disk(1.0);
        try {
            Covering cov(x, cfg);
            cov.critical_points();
            return cov;
        } catch (const NumericError&) {
        } catch (const DomainError&) {
        }
    }
    throw ZeroFindingError("no generic covering found after 100 draws");
}

inline RestrictedPoint sample_restricted_point(Sampler& s) {
    RestrictedPoint p;
    p.tau = s.in_box(-0.5, 0.5, 0.8, 2.0);
    for (auto& t : p.t)
        t = s.annulus(0.3, 1.0);
    p.C1 = s.disk(1.0);
    return p;
}

inline VerificationReport run_special_functions(const SuiteConfig& cfg) {
    VerificationReport r;
    detail::SuiteWriter w(r, cfg, "special-functions");
    Sampler s(detail::suite_seed(cfg, "special-functions"));

    for (int n = 0; n < 10 * cfg.samples; ++n) {
        const cplx tau = s.tau(0.5, 3.0);
        const cplx z = s.disk(1.0);
        w.guarded("heat equation", "heat equation for the theta functions", "heat", {{"z", z}, {"tau", tau}}, [&] {
            const auto mp = cfg.modular(tau);
            double worst = 0.0;
            std::vector<NamedValue> res;
            for (int j = 1; j <= 4; ++j) {
                const cplx d = theta_dz(j, 2, z, mp) - 4.0 * pi * I * theta_dtau(j, z, mp);
                res.emplace_back("theta" + std::to_string(j), d);
                worst = std::max(worst, std::abs(d));
            }
            w.entry("heat equation", "heat equation for the theta functions", "heat", {{"z", z}, {"tau", tau}}, res,
                    0.0, worst);
        });
    }
    for (int n = 0; n < cfg.samples; ++n) {
        const cplx w1 = s.annulus(0.3, 2.0);
        const cplx tau = s.tau(0.6, 2.5);
        w.guarded("Legendre identity", "Legendre identity", "legendre", {{"omega1", w1}, {"omega2", w1 * tau}}, [&] {
            Lattice L(w1, w1 * tau);
            L.max_rows = cfg.rows();
            const auto k = constants(L, {}, 1.0);
            const cplx lhs = k.eta1 * L.omega2 - k.eta2 * L.omega1;
            w.entry("Legendre identity", "Legendre identity", "legendre", {{"omega1", w1}, {"omega2", L.omega2}},
                    {{"eta1 omega2 - eta2 omega1", lhs}}, pi * I / 2.0, k.legendre_residual);
        });
    }
    for (int n = 0; n < cfg.samples; ++n) {
        const cplx tau = s.tau(0.8, 3.0);
        w.guarded("Halphen system", "Halphen system for X2, X3, X4", "halphen", {{"tau", tau}}, [&] {
            w.entry("Halphen system", "Halphen system for X2, X3, X4", "halphen", {{"tau", tau}}, {}, 0.0,
                    halphen_residual(tau));
        });
        const cplx t = s.in_box(-6.0, -1.6, -2.0, 2.0);
        w.guarded("Halphen system, rescaled triple", "rescaled Halphen solution (1/pi i) X(t/pi i)", "halphen",
                  {{"t", t}}, [&] {
                      w.entry("Halphen system, rescaled triple", "rescaled Halphen solution (1/pi i) X(t/pi i)",
                              "halphen", {{"t", t}}, {}, 0.0, halphen_residual(t, RescaledTriple{}));
                  });
    }
    for (int n = 0; n < cfg.samples; ++n) {
        const cplx tau = s.tau(0.6, 3.0);
        w.guarded("theta1'''/theta1' identity", "theta1'''/theta1' as a sum of theta_p''/theta_p", "theta-identity",
                  {{"tau", tau}}, [&] {
                      const auto mp = cfg.modular(tau);
                      const cplx lhs = theta_constant(1, mp, 3) / theta_constant(1, mp, 1);
                      cplx rhs{};
                      for (int p = 2; p <= 4; ++p)
                          rhs += theta_constant(p, mp, 2) / theta_constant(p, mp);
                      w.entry("theta1'''/theta1' identity", "theta1'''/theta1' as a sum of theta_p''/theta_p",
                              "theta-identity", {{"tau", tau}}, {{"lhs", lhs}, {"rhs", rhs}}, rhs,
                              std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
                  });
    }
    return r;
}

inline VerificationReport run_gw(const SuiteConfig& cfg) {
    VerificationReport r;
    detail::SuiteWriter w(r, cfg, "gw");
    Sampler s(detail::suite_seed(cfg, "gw"));
    auto point = [&](Frame f) {
        GWPoint p;
        p.frame = f;
        p.t0 = s.disk(1.0);
        for (auto& x : p.ti)
            x = s.disk(1.0);
        p.t = s.in_box(-0.5, 0.5, 0.8, 2.0);
        return p;
    };
    GWMetric table = GWMetric::Zero();
    table(0, gw_t_index) = table(gw_t_index, 0) = 1.0;
    for (int i = 1; i <= 4; ++i)
        table(i, i) = 1.0;

    for (int n = 0; n < 2 * cfg.samples; ++n) {
        const GWPoint p = point(Frame::tilde);
        const auto in = detail::gw_inputs(p);
        w.guarded("WDVV", "WDVV associativity of the GW potential", "wdvv", in, [&] {
            w.entry("WDVV", "WDVV associativity of the GW potential", "wdvv", in, {}, 0.0, wdvv_residual(p));
        });
        w.guarded("Euler homogeneity", "Euler vector field E F = 2 F", "euler", in, [&] {
            w.entry("Euler homogeneity", "Euler vector field E F = 2 F", "euler", in, {}, 0.0, euler_residual(p));
        });
        w.guarded("metric constancy", "flat metric of the GW potential", "gw-metric", in, [&] {
            w.entry("metric constancy", "flat metric of the GW potential", "gw-metric", in, {}, 0.0,
                    (metric(p) - table).cwiseAbs().maxCoeff());
        });
        w.guarded("frame equivalence", "linear change of variables between GW frames", "frames", in, [&] {
            const cplx a = potential(p), b = potential(to_original(p));
            w.entry("frame equivalence", "linear change of variables between GW frames", "frames", in,
                    {{"tilde", a}, {"original", b}}, a, std::abs(a - b));
        });
        w.guarded("f/X linear relations", "coefficients f0, f1, f2 in terms of X_p", "frames", {{"t", p.t}}, [&] {
            const auto [f0, f1, f2] = f_coeffs(p.t);
            const ModularParameter mp(p.t);
            const double worst = std::max({std::abs(f2 / 6.0 + f1 / 2.0 + gamma(mp) / 16.0),
                                           std::abs(2.0 / 3.0 * f2 - f0 + X(3, mp) / 4.0),
                                           std::abs(2.0 / 3.0 * f2 + f0 + X(4, mp) / 4.0),
                                           std::abs(3.0 * f1 - f2 / 3.0 + X(2, mp) / 4.0)});
            w.entry("f/X linear relations", "coefficients f0, f1, f2 in terms of X_p", "frames", {{"t", p.t}},
                    {{"f0", f0}, {"f1", f1}, {"f2", f2}}, 0.0, worst);
        });
    }
    return r;
}

inline VerificationReport run_hurwitz_metric(const SuiteConfig& cfg) {
    VerificationReport r;
    detail::SuiteWriter w(r, cfg, "hurwitz-metric");
    Sampler s(detail::suite_seed(cfg, "hurwitz-metric"));
    const std::string table_anchor = "only non-vanishing entries of the flat metric";
    std::vector<MetricMatrix> all;
    for (int n = 0; n < cfg.samples; ++n) {
        std::optional<Covering> cov;
        try {
            cov.emplace(sample_generic_covering(s, cfg.covering()));
        } catch (const NumericError& e) {
            r.add_error("hurwitz-metric", "generic point", table_anchor, cfg.tol("metric-table"), e.what());
            continue;
        }
        const auto in = detail::flat_inputs(cov->coords());
        w.entry("critical point count", "argument principle for the zeros of lambda'", "strategy", in,
                {{"found", double(cov->critical_points().size())}}, double(cov->expected_critical_count()),
                std::abs(double(cov->critical_points().size()) - double(cov->expected_critical_count())));
        w.guarded("metric table", table_anchor, "metric-table", in, [&] {
            const auto m = metric_matrix(*cov);
            all.push_back(m);
            // t block, v/V block and the (B1, C1) pairing are reported apart.
            auto block = [](int k) { return k < 4 ? 0 : (k < 10 ? 1 : 2); };
            double dev[3] = {0.0, 0.0, 0.0};
            cplx worst_value[3] = {}, worst_expected[3] = {};
            for (int a = 0; a < flat_dim; ++a)
                for (int b = 0; b < flat_dim; ++b) {
                    const int g = std::max(block(a), block(b)) == 1 ? 1 : std::max(block(a), block(b));
                    const cplx expected = metric_table(Coord(a), Coord(b));
                    const double d = std::abs(m.value[std::size_t(a)][std::size_t(b)] - expected);
                    if (d >= dev[g]) {
                        dev[g] = d;
                        worst_value[g] = m.value[std::size_t(a)][std::size_t(b)];
                        worst_expected[g] = expected;
                    }
                }
            const char* names[3] = {"metric table: t block", "metric table: v/V block", "metric table: B1/C1"};
            for (int g = 0; g < 3; ++g)
                w.entry(names[g], table_anchor, "metric-table", in, {{"worst entry", worst_value[g]}},
                        worst_expected[g], dev[g]);
            w.entry("residue strategies agree (metric)", "residue sum over the poles of an elliptic function",
                    "strategy", in, {}, 0.0, m.max_strategy_discrepancy);
        });
        w.guarded("Dubrovin coordinate round trip", "flat coordinates as residues and periods of lambda", "roundtrip",
                  in, [&] {
                      const auto back = recompute_flat(*cov);
                      w.entry("Dubrovin coordinate round trip", "flat coordinates as residues and periods of lambda",
                              "roundtrip", in, detail::flat_inputs(back), 0.0, flat_distance(back, cov->coords()));
                  });
    }
    if (all.size() > 1) {
        double dev = 0.0;
        for (const auto& m : all)
            for (int a = 0; a < flat_dim; ++a)
                for (int b = 0; b < flat_dim; ++b)
                    dev = std::max(dev, std::abs(m.value[std::size_t(a)][std::size_t(b)] -
                                                 all.front().value[std::size_t(a)][std::size_t(b)]));
        w.entry("metric constancy", "flatness of the residue metric", "metric-constancy",
                {{"points", double(all.size())}}, {}, 0.0, dev);
    }
    const RestrictedPoint rp = sample_restricted_point(s);
    w.guarded("C1 recovery on the restricted stratum", "flat coordinates as residues and periods of lambda",
              "roundtrip", detail::restricted_inputs(rp), [&] {
                  const Covering cov(restricted_point(rp), cfg.covering());
                  const auto back = recompute_flat(cov);
                  w.entry("C1 recovery on the restricted stratum",
                          "flat coordinates as residues and periods of lambda", "roundtrip",
                          detail::restricted_inputs(rp), {{"C1", back.C1}}, rp.C1, flat_distance(back, cov.coords()));
              });
    return r;
}

inline VerificationReport run_structure_constants(const SuiteConfig& cfg) {
    VerificationReport r;
    detail::SuiteWriter w(r, cfg, "structure-constants");
    Sampler s(detail::suite_seed(cfg, "structure-constants"));
    const std::string anchor = "structure constants c(tau,C1,C1), c(t_i,t_i,C1), c(t_i,t_i,t_j)";
    const std::string lemma = "structure constants along v_k";
    for (int n = 0; n < cfg.samples; ++n) {
        std::optional<Covering> cov;
        try {
            cov.emplace(sample_generic_covering(s, cfg.covering(), true));
        } catch (const NumericError& e) {
            r.add_error("structure-constants", "generic point", anchor, cfg.tol("closed-form"), e.what());
            continue;
        }
        const FlatCoords& x = cov->coords();
        const auto in = detail::flat_inputs(x);
        w.guarded("closed forms", anchor, "closed-form", in, [&] {
            std::vector<std::vector<Direction>> products{{Coord::B1, Coord::C1, Coord::C1}};
            for (int i = 1; i <= 4; ++i) {
                products.push_back({t_coord(i), t_coord(i), Coord::C1});
                for (int j = 1; j <= 4; ++j)
                    products.push_back({t_coord(i), t_coord(i), t_coord(j)});
                for (int k = 2; k <= 4; ++k)
                    products.push_back({t_coord(i), t_coord(i), v_coord(k)});
            }
            const auto res = cov->residues(products);
            const cplx e = cov->eta1_omega1();
            std::size_t q = 0;
            double strategy = 0.0;
            for (const auto& v : res)
                strategy = std::max(strategy, v.discrepancy);
            const cplx tcc = res[q++].value;
            w.entry("c(tau,C1,C1)", anchor, "closed-form", in, {{"residue", tcc}}, 1.0 / two_pi_i,
                    std::abs(tcc - 1.0 / two_pi_i));
            double d_ttc = 0.0, d_ttt = 0.0, d_tttj = 0.0, d_lemma = 0.0;
            double d_forms[3] = {0.0, 0.0, 0.0};
            for (int i = 1; i <= 4; ++i) {
                const cplx ti = x.t[std::size_t(i - 1)];
                d_ttc = std::max(d_ttc, std::abs(res[q++].value - 0.5));
                for (int j = 1; j <= 4; ++j) {
                    const cplx c = res[q++].value;
                    if (j == i) {
                        d_ttt = std::max(d_ttt, std::abs(c - 3.0 * ti * e));
                    } else {
                        const cplx tj = x.t[std::size_t(j - 1)];
                        const cplx expected = tj * (0.25 * wp(x.pole(i) - x.pole(j), cov->lattice()) + e);
                        d_tttj = std::max(d_tttj, std::abs(c - expected));
                    }
                }
                for (int k = 2; k <= 4; ++k) {
                    const cplx c = res[q++].value;
                    if (k == i)
                        continue;
                    const cplx tk = x.t[std::size_t(k - 1)];
                    const cplx forms[3] = {
                        0.5 * cov->dlambda(v_coord(k), x.pole(i)),
                        -0.5 * cov->dlambda(v_coord(k), x.pole(i) - x.pole(k)),
                        0.125 * wp_prime(x.pole(k) - x.pole(i), cov->lattice()) * ti * ti,
                    };
                    double best = std::numeric_limits<double>::infinity();
                    for (int f = 0; f < 3; ++f) {
                        const double d = std::abs(c - forms[f]);
                        d_forms[f] = std::max(d_forms[f], d);
                        best = std::min(best, d);
                    }
                    d_lemma = std::max(d_lemma, best);
                    (void)tk;
                }
            }
            w.entry("c(t_i,t_i,C1)", anchor, "closed-form", in, {}, 0.5, d_ttc);
            w.entry("c(t_i,t_i,t_i)", anchor, "closed-form", in, {}, 0.0, d_ttt);
            w.entry("c(t_i,t_i,t_j)", anchor, "closed-form", in, {}, 0.0, d_tttj);
            w.entry("residue strategies agree (structure constants)",
                    "residue sum over the poles of an elliptic function", "strategy", in, {}, 0.0, strategy);
            w.entry("lemma: c(t_i,t_i,v_k) matches a displayed form", lemma, "lemma", in,
                    {{"deviation, (1/2) d_vk lambda(v_i)", d_forms[0]},
                     {"deviation, -(1/2) d_vk lambda(v_i - v_k)", d_forms[1]},
                     {"deviation, (1/8) wp'(v_k - v_i) t_i^2", d_forms[2]}},
                    0.0, d_lemma);
        });
    }
    for (int n = 0; n < cfg.samples; ++n) {
        std::optional<Covering> cov;
        try {
            cov.emplace(sample_generic_covering(s, cfg.covering(), false));
        } catch (const NumericError& e) {
            r.add_error("structure-constants", "generic point", lemma, cfg.tol("lemma"), e.what());
            continue;
        }
        const FlatCoords& x = cov->coords();
        const auto in = detail::flat_inputs(x);
        w.guarded("grading", "Euler vector field of the Hurwitz space", "grading", in, [&] {
            const double sc = 1.3;
            FlatCoords y = x;
            for (auto& t : y.t)
                t *= std::sqrt(sc);
            for (auto& V : y.V)
                V *= sc;
            y.C1 *= sc;
            const Covering scaled(y, cfg.covering());
            const auto a = cov->residues({{Coord::t1, Coord::t1, Coord::t2}, {Coord::t1, Coord::t1, Coord::C1}});
            const auto b = scaled.residues({{Coord::t1, Coord::t1, Coord::t2}, {Coord::t1, Coord::t1, Coord::C1}});
            const double d = std::max(std::abs(b[0].value - std::sqrt(sc) * a[0].value) / (1.0 + std::abs(b[0].value)),
                                      std::abs(b[1].value - a[1].value));
            w.entry("grading", "Euler vector field of the Hurwitz space", "grading", in,
                    {{"c(t1,t1,t2)", a[0].value}, {"scaled", b[0].value}}, std::sqrt(sc) * a[0].value, d);
        });
        w.guarded("lemma: c(t_i,t_i,v_i) = 0 at generic points", lemma, "lemma", in, [&] {
            std::vector<std::vector<Direction>> products;
            for (int i = 2; i <= 4; ++i) {
                products.push_back({t_coord(i), t_coord(i), v_coord(i)});
                products.push_back({t_coord(i), v_coord(i), v_coord(i)});
            }
            const auto res = cov->residues(products);
            const auto k = constants(cov->lattice());
            double d0 = 0.0, d1 = 0.0;
            std::vector<NamedValue> tvv;
            for (int i = 2; i <= 4; ++i) {
                const cplx ttv = res[std::size_t(2 * (i - 2))].value;
                const cplx c = res[std::size_t(2 * (i - 2) + 1)].value;
                const cplx formula = k.g2 / 20.0 * x.t[std::size_t(i - 1)] / 2.0 * cov->eta1_omega1() * x.simple(i);
                d0 = std::max(d0, std::abs(ttv));
                d1 = std::max(d1, std::abs(c - formula));
                tvv.emplace_back("c(t" + std::to_string(i) + ",v" + std::to_string(i) + ",v" + std::to_string(i) + ")",
                                 c);
            }
            w.entry("lemma: c(t_i,t_i,v_i) = 0 at generic points", lemma, "lemma", in, {}, 0.0, d0);
            w.entry("lemma: c(t_i,v_i,v_i) = (g2/20)(t_i/2) eta1 omega1 V_i", lemma, "lemma", in, tvv, 0.0, d1);
        });
    }
    return r;
}

inline VerificationReport run_restriction(const SuiteConfig& cfg) {
    VerificationReport r;
    detail::SuiteWriter w(r, cfg, "restriction");
    Sampler s(detail::suite_seed(cfg, "restriction"));
    const std::string vanish = "v and V summands do not contribute to the restricted potential";
    for (int n = 0; n < cfg.samples; ++n) {
        const RestrictedPoint p = sample_restricted_point(s);
        const auto in = detail::restricted_inputs(p);
        w.guarded("vanishing constants", vanish, "vanishing", in, [&] {
            const auto v = vanishing_constants(p, cfg.covering());
            // families: c(t_i,v_i,v_i); c(t_i,t_i,v_k), k != i; c(t_i,t_i,v_i); c(C1,v_k,v_k)
            const char* families[4] = {"vanishing c(t_i,v_i,v_i)", "vanishing c(t_i,t_i,v_k), k != i",
                                       "vanishing c(t_i,t_i,v_i)", "vanishing c(C1,v_k,v_k)"};
            double worst[4] = {0, 0, 0, 0};
            std::vector<NamedValue> values[4];
            for (const auto& e : v) {
                int f = 3;
                if (e.name.rfind("c(C1", 0) == 0) {
                    f = 3;
                } else {
                    // c(tA,xB,yC): second slot decides between the t,v,v and t,t,v families
                    const char second = e.name[5];
                    const int i = e.name[3] - '0';
                    const int k = e.name[e.name.size() - 2] - '0';
                    f = second == 'v' ? 0 : (k == i ? 2 : 1);
                }
                worst[f] = std::max(worst[f], std::abs(e.value));
                values[f].emplace_back(e.name, e.value);
            }
            for (int f = 0; f < 4; ++f)
                w.entry(families[f], vanish, "vanishing", in, values[f], 0.0, worst[f]);
        });
        w.guarded("restricted constants", "restricted potential and its third derivatives", "restricted", in, [&] {
            const auto rc = restricted_constants(p, cfg.covering());
            double d = 0.0;
            for (int i = 0; i < restricted_dim; ++i)
                for (int j = 0; j < restricted_dim; ++j)
                    for (int k = 0; k < restricted_dim; ++k)
                        d = std::max(d, std::abs(rc.residue[std::size_t(i)][std::size_t(j)][std::size_t(k)] -
                                                 rc.closed_form[std::size_t(i)][std::size_t(j)][std::size_t(k)]));
            w.entry("restricted constants: residues vs closed forms", "restricted potential and its third derivatives",
                    "restricted", in,
                    {{"c(t1,t1,t3)", rc.residue[0][0][2]}, {"c(t1,t1,t1)", rc.residue[0][0][0]}},
                    rc.closed_form[0][0][2], d);
        });
        w.guarded("pair index", "e-values at the pairwise pole differences", "pair-index", in, [&] {
            const FlatCoords x = restricted_point(p);
            Lattice L = Lattice::normalized(p.tau);
            L.max_rows = cfg.rows();
            const auto k = constants(L);
            const cplx e[3] = {k.e1, k.e2, k.e3};
            const cplx g2q = eisenstein_g2(p.tau, cfg.rows());
            const auto mp = cfg.modular(p.tau);
            double d_e = 0.0, d_theta = 0.0;
            for (int i = 1; i <= 4; ++i)
                for (int j = i + 1; j <= 4; ++j) {
                    const cplx val = wp(x.pole(i) - x.pole(j), L);
                    d_e = std::max(d_e, std::abs(val - e[pair_index(i, j) - 1]));
                    const int q = pair_theta_label(i, j);
                    const cplx lhs = 0.25 * val + 0.25 * g2q;
                    const cplx rhs = -0.25 * theta_constant(q, mp, 2) / theta_constant(q, mp);
                    d_theta = std::max(d_theta, std::abs(lhs - rhs));
                }
            w.entry("pair index: wp(v_i - v_j) = e_{ij}", "e-values at the pairwise pole differences", "pair-index",
                    in, {}, 0.0, d_e);
            w.entry("theta constants: wp(v_i - v_j)/4 + eta1 omega1 = -theta''/(4 theta)",
                    "e-values as theta-constant ratios", "pair-index", in, {}, 0.0, d_theta);
        });
    }
    return r;
}

inline VerificationReport run_theorem(const SuiteConfig& cfg) {
    VerificationReport r;
    detail::SuiteWriter w(r, cfg, "theorem");
    Sampler s(detail::suite_seed(cfg, "theorem"));
    const std::string anchor = "restricted Hurwitz potential equals the orbifold GW potential after rescaling";
    for (int n = 0; n < cfg.samples; ++n) {
        const RestrictedPoint p = sample_restricted_point(s);
        const auto in = detail::restricted_inputs(p);
        w.guarded("theorem: third derivatives", anchor, "theorem", in, [&] {
            const auto th = theorem_check(p, cfg.covering());
            const TheoremEntry* worst = &th.entries.front();
            const TheoremEntry* pairing = nullptr;
            for (const auto& e : th.entries) {
                if (e.discrepancy > worst->discrepancy)
                    worst = &e;
                if (e.gw == std::array<int, 3>{0, 0, gw_t_index})
                    pairing = &e;
            }
            auto label = [](const std::array<int, 3>& g) {
                std::string out = "d^3F/";
                for (int k : g)
                    out += k == 0 ? "dt0" : (k == gw_t_index ? "dt" : "dt~" + std::to_string(k));
                return out;
            };
            w.entry("theorem: third derivatives", anchor, "theorem", in,
                    {{"worst triple hurwitz " + label(worst->gw), worst->hurwitz},
                     {"worst triple gw " + label(worst->gw), worst->gw_value},
                     {"triples", double(th.entries.size())}},
                    worst->gw_value, th.max_discrepancy);
            w.entry("theorem: pairing d^3F/dt0^2 dt", anchor, "theorem", in, {{"hurwitz", pairing->hurwitz}}, 1.0,
                    std::abs(pairing->hurwitz - 1.0));
            w.entry("residue strategies agree (restricted)", "residue sum over the poles of an elliptic function",
                    "strategy", in, {}, 0.0, th.max_strategy_discrepancy);
        });
    }
    return r;
}

inline VerificationReport run_named_suite(const std::string& name, const SuiteConfig& cfg) {
    if (name == "special-functions")
        return run_special_functions(cfg);
    if (name == "gw")
        return run_gw(cfg);
    if (name == "hurwitz-metric")
        return run_hurwitz_metric(cfg);
    if (name == "structure-constants")
        return run_structure_constants(cfg);
    if (name == "restriction")
        return run_restriction(cfg);
    if (name == "theorem")
        return run_theorem(cfg);
    throw DomainError("unknown suite '" + name + "'");
}

/// Runs the configured suite (or all of them). Wall time is recorded only
/// when cfg.timing is set, so reports are reproducible byte for byte.
inline VerificationReport run_suite(const SuiteConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    VerificationReport r;
    r.config = cfg.to_json();
    const std::vector<std::string> names = cfg.suite == "all" ? suite_names() : std::vector<std::string>{cfg.suite};
    if (cfg.parallel && names.size() > 1) {
        std::vector<std::future<VerificationReport>> jobs;
        for (const auto& n : names)
            jobs.push_back(std::async(std::launch::async, [&cfg, n] { return run_named_suite(n, cfg); }));
        for (auto& j : jobs)
            r.append(j.get());
    } else {
        for (const auto& n : names)
            r.append(run_named_suite(n, cfg));
    }
    if (cfg.timing)
        r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace hurwitz

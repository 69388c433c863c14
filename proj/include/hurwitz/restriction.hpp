#pragma once

// The submanifold where the poles sit at the four 2-torsion points and all
// simple-pole coefficients vanish, its structure constants, and the
// comparison with the orbifold GW potential.

#include "hurwitz/covering.hpp"
#include "hurwitz/gw_potential.hpp"
#include "hurwitz/theta.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace hurwitz {

struct RestrictedPoint {
    cplx tau{0.0, 1.0};
    std::array<cplx, 4> t{};
    cplx C1{};

    void validate() const {
        if (!(tau.imag() > 0.0))
            throw DomainError("tau must lie in the upper half-plane");
        for (std::size_t i = 0; i < 4; ++i)
            if (std::abs(t[i]) < 1e-12)
                throw DomainError("restricted points need t" + std::to_string(i + 1) + " != 0");
    }
};

inline FlatCoords restricted_point(const RestrictedPoint& p) {
    p.validate();
    FlatCoords x;
    x.t = p.t;
    x.v = {0.5 * (p.tau + 1.0), 0.5, 0.5 * p.tau};
    x.V = {};
    x.B1 = p.tau;
    x.C1 = p.C1;
    return x;
}

inline FlatCoords restricted_point(cplx tau, const std::array<cplx, 4>& t, cplx C1) {
    return restricted_point(RestrictedPoint{tau, t, C1});
}

/// {13} = {24} -> 1, {12} = {34} -> 2, {23} = {14} -> 3.
inline int pair_index(int i, int j) {
    if (i == j || i < 1 || j < 1 || i > 4 || j > 4)
        throw DomainError("pair_index needs two distinct labels in 1..4");
    const int lo = std::min(i, j), hi = std::max(i, j);
    if ((lo == 1 && hi == 3) || (lo == 2 && hi == 4))
        return 1;
    if ((lo == 1 && hi == 2) || (lo == 3 && hi == 4))
        return 2;
    return 3;
}

/// Theta constant matching e_k: e1 <-> theta_2, e2 <-> theta_3, e3 <-> theta_4.
inline int pair_theta_label(int i, int j) { return pair_index(i, j) + 1; }

/// Moving tau along the submanifold drags v2 and v4 with it.
inline Direction restricted_tau_direction() {
    return Direction(Coord::B1) + 0.5 * Direction(Coord::v2) + 0.5 * Direction(Coord::v4);
}

/// Directions t1..t4, C1, tau of the restricted potential.
inline constexpr int restricted_dim = 6;
inline const char* restricted_name(int k) {
    static const char* names[restricted_dim] = {"t1", "t2", "t3", "t4", "C1", "tau"};
    return names[k];
}
inline Direction restricted_direction(int k) {
    if (k < 4)
        return Direction(t_coord(k + 1));
    if (k == 4)
        return Direction(Coord::C1);
    return restricted_tau_direction();
}

/// C1^2 tau/(4 pi i) + C1 sum t_i^2 / 4 - (pi i/8) sum_{i<j} X_{ij} t_i^2 t_j^2 - (pi i/32) gamma sum t_i^4.
inline cplx restricted_potential(const RestrictedPoint& p) {
    p.validate();
    const ModularParameter mp(p.tau);
    cplx tsq{}, quartic{};
    for (const auto& t : p.t) {
        tsq += t * t;
        quartic += t * t * t * t;
    }
    cplx mixed{};
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j) {
            const cplx ti = p.t[std::size_t(i - 1)], tj = p.t[std::size_t(j - 1)];
            mixed += X(pair_theta_label(i, j), mp) * ti * ti * tj * tj;
        }
    return p.C1 * p.C1 * p.tau / (4.0 * pi * I) + 0.25 * p.C1 * tsq - (pi * I / 8.0) * mixed -
           (pi * I / 32.0) * gamma(mp) * quartic;
}

using RestrictedTensor = std::array<std::array<std::array<cplx, restricted_dim>, restricted_dim>, restricted_dim>;

struct RestrictedConstants {
    RestrictedTensor residue{};      // from the covering
    RestrictedTensor closed_form{};  // third derivatives of restricted_potential
    double max_strategy_discrepancy = 0.0;
};

/// Third derivatives of restricted_potential in t1..t4, C1, tau.
inline RestrictedTensor restricted_closed_form(const RestrictedPoint& p) {
    p.validate();
    const ModularParameter mp(p.tau);
    // xd[k][q]: k-th tau-derivative of X_q; gd[k] likewise for gamma.
    std::array<std::array<cplx, 5>, 4> xd{};
    std::array<cplx, 4> gd{};
    for (int k = 0; k <= 3; ++k) {
        for (int q = 2; q <= 4; ++q)
            xd[std::size_t(k)][std::size_t(q)] = X_derivative(q, k, mp);
        gd[std::size_t(k)] = gamma_derivative(k, mp);
    }
    auto xp = [&](int k, int i, int j) { return xd[std::size_t(k)][std::size_t(pair_theta_label(i + 1, j + 1))]; };
    const cplx a = pi * I;
    const auto& t = p.t;
    RestrictedTensor c{};
    auto set = [&](int i, int j, int k, cplx value) {
        const int perm[6][3] = {{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}};
        for (const auto& q : perm)
            c[std::size_t(q[0])][std::size_t(q[1])][std::size_t(q[2])] = value;
    };
    const int C = 4, T = 5;
    set(C, C, T, 1.0 / (2.0 * a));
    cplx ttt = -(a / 32.0) * gd[3] * (t[0] * t[0] * t[0] * t[0] + t[1] * t[1] * t[1] * t[1] +
                                      t[2] * t[2] * t[2] * t[2] + t[3] * t[3] * t[3] * t[3]);
    for (int i = 0; i < 4; ++i) {
        const cplx ti = t[std::size_t(i)];
        set(i, i, C, 0.5);
        set(i, i, i, -0.75 * a * gd[0] * ti);
        cplx iit = -0.375 * a * gd[1] * ti * ti;
        cplx itt = -(a / 8.0) * gd[2] * ti * ti * ti;
        for (int j = 0; j < 4; ++j) {
            if (j == i)
                continue;
            const cplx tj = t[std::size_t(j)];
            set(i, i, j, -0.5 * a * xp(0, i, j) * tj);
            iit += -0.25 * a * xp(1, i, j) * tj * tj;
            itt += -0.25 * a * xp(2, i, j) * ti * tj * tj;
            if (j > i) {
                set(i, j, T, -0.5 * a * xp(1, i, j) * ti * tj);
                ttt += -(a / 8.0) * xp(3, i, j) * ti * ti * tj * tj;
            }
        }
        set(i, i, T, iit);
        set(i, T, T, itt);
    }
    set(T, T, T, ttt);
    return c;
}

inline RestrictedConstants restricted_constants(const RestrictedPoint& p, const CoveringConfig& cfg = {}) {
    const Covering cov(restricted_point(p), cfg);
    std::vector<std::vector<Direction>> products;
    std::vector<std::array<int, 3>> index;
    for (int i = 0; i < restricted_dim; ++i)
        for (int j = i; j < restricted_dim; ++j)
            for (int k = j; k < restricted_dim; ++k) {
                products.push_back({restricted_direction(i), restricted_direction(j), restricted_direction(k)});
                index.push_back({i, j, k});
            }
    const auto r = cov.residues(products);
    RestrictedConstants out;
    out.closed_form = restricted_closed_form(p);
    for (std::size_t n = 0; n < r.size(); ++n) {
        const auto [i, j, k] = index[n];
        const int perm[6][3] = {{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}};
        for (const auto& q : perm)
            out.residue[std::size_t(q[0])][std::size_t(q[1])][std::size_t(q[2])] = r[n].value;
        out.max_strategy_discrepancy = std::max(out.max_strategy_discrepancy, r[n].discrepancy);
    }
    return out;
}

/// t0 = C1/sqrt2, t~ = t/2^(1/4) with Hurwitz t1, t2, t3, t4 placed at GW
/// t~1, t~3, t~2, t~4, and GW time t = tau/(pi i).
struct RescalingMap {
    static constexpr std::array<int, 4> gw_slot{1, 3, 2, 4};

    static GWPoint to_gw(const RestrictedPoint& p) {
        GWPoint g;
        g.frame = Frame::tilde;
        g.t0 = p.C1 / std::sqrt(2.0);
        const double s = std::pow(2.0, 0.25);
        for (int i = 0; i < 4; ++i)
            g.ti[std::size_t(gw_slot[std::size_t(i)] - 1)] = p.t[std::size_t(i)] / s;
        g.t = p.tau / (pi * I);
        return g;
    }

    static RestrictedPoint from_gw(const GWPoint& g) {
        if (g.frame != Frame::tilde)
            return from_gw(to_tilde(g));
        RestrictedPoint p;
        p.C1 = g.t0 * std::sqrt(2.0);
        const double s = std::pow(2.0, 0.25);
        for (int i = 0; i < 4; ++i)
            p.t[std::size_t(i)] = g.ti[std::size_t(gw_slot[std::size_t(i)] - 1)] * s;
        p.tau = g.t * (pi * I);
        return p;
    }

    /// Restricted direction index (0..3 t_i, 4 C1, 5 tau) for GW coordinate k.
    static int restricted_index(int gw_k) {
        if (gw_k == 0)
            return 4;
        if (gw_k == gw_t_index)
            return 5;
        for (int i = 0; i < 4; ++i)
            if (gw_slot[std::size_t(i)] == gw_k)
                return i;
        throw DomainError("GW coordinate index out of range");
    }

    /// d/d(GW coordinate k) = factor * d/d(restricted direction).
    static cplx jacobian(int gw_k) {
        if (gw_k == 0)
            return std::sqrt(2.0);
        if (gw_k == gw_t_index)
            return pi * I;
        return std::pow(2.0, 0.25);
    }
};

struct TheoremEntry {
    std::array<int, 3> gw{};
    cplx hurwitz;  // Jacobian-scaled residue value
    cplx gw_value;
    double discrepancy;
};

struct TheoremResult {
    std::vector<TheoremEntry> entries;
    double max_discrepancy = 0.0;
    double max_strategy_discrepancy = 0.0;
};

/// Compares every GW third derivative (56 index triples) with the
/// corresponding restricted Hurwitz structure constant.
inline TheoremResult theorem_check(const RestrictedPoint& p, const CoveringConfig& cfg = {}) {
    const auto rc = restricted_constants(p, cfg);
    const GWPoint g = RescalingMap::to_gw(p);
    const auto jet = TripleJet::at(SubstitutedTriple{}, g.t);
    TheoremResult out;
    out.max_strategy_discrepancy = rc.max_strategy_discrepancy;
    for (int a = 0; a < gw_dim; ++a)
        for (int b = a; b < gw_dim; ++b)
            for (int c = b; c < gw_dim; ++c) {
                const cplx h = RescalingMap::jacobian(a) * RescalingMap::jacobian(b) * RescalingMap::jacobian(c) *
                               rc.residue[std::size_t(RescalingMap::restricted_index(a))]
                                         [std::size_t(RescalingMap::restricted_index(b))]
                                         [std::size_t(RescalingMap::restricted_index(c))];
                const cplx w = third_derivative(g, a, b, c, jet);
                const double d = std::abs(h - w);
                out.entries.push_back({{a, b, c}, h, w, d});
                out.max_discrepancy = std::max(out.max_discrepancy, d);
            }
    return out;
}

struct VanishingEntry {
    std::string name;
    cplx value;
};

/// c(t_i, v_i, v_i), c(t_i, t_i, v_k), c(C1, v_k, v_k) on the submanifold.
inline std::vector<VanishingEntry> vanishing_constants(const RestrictedPoint& p, const CoveringConfig& cfg = {}) {
    const Covering cov(restricted_point(p), cfg);
    std::vector<std::vector<Direction>> products;
    std::vector<std::string> names;
    auto tn = [](int i) { return "t" + std::to_string(i); };
    auto vn = [](int k) { return "v" + std::to_string(k); };
    for (int i = 2; i <= 4; ++i) {
        products.push_back({Direction(t_coord(i)), Direction(v_coord(i)), Direction(v_coord(i))});
        names.push_back("c(" + tn(i) + "," + vn(i) + "," + vn(i) + ")");
    }
    for (int i = 1; i <= 4; ++i)
        for (int k = 2; k <= 4; ++k) {
            products.push_back({Direction(t_coord(i)), Direction(t_coord(i)), Direction(v_coord(k))});
            names.push_back("c(" + tn(i) + "," + tn(i) + "," + vn(k) + ")");
        }
    for (int k = 2; k <= 4; ++k) {
        products.push_back({Direction(Coord::C1), Direction(v_coord(k)), Direction(v_coord(k))});
        names.push_back("c(C1," + vn(k) + "," + vn(k) + ")");
    }
    const auto r = cov.residues(products);
    std::vector<VanishingEntry> out;
    for (std::size_t n = 0; n < r.size(); ++n)
        out.push_back({names[n], r[n].value});
    return out;
}

} // namespace hurwitz

#pragma once

// Genus-zero potential of P^1(2,2,2,2): quartic polynomial in (t0, t1..t4)
// with coefficients linear in t or in a Halphen triple X_2, X_3, X_4.

#include "hurwitz/numeric.hpp"
#include "hurwitz/theta.hpp"

#include <Eigen/Dense>

#include <array>
#include <concepts>
#include <sstream>
#include <vector>

namespace hurwitz {

enum class Frame { original, tilde };

inline const char* frame_name(Frame f) { return f == Frame::original ? "original" : "tilde"; }

/// Coordinates (t0, t1..t4, t). Index convention for derivatives: 0 = t0,
/// 1..4 = t_i, 5 = t.
struct GWPoint {
    cplx t0{};
    std::array<cplx, 4> ti{};
    cplx t{0.0, 1.0};
    Frame frame = Frame::tilde;

    cplx coordinate(int k) const {
        if (k == 0)
            return t0;
        if (k >= 1 && k <= 4)
            return ti[std::size_t(k - 1)];
        if (k == 5)
            return t;
        throw DomainError("GW coordinate index must be in 0..5");
    }
};

inline constexpr int gw_dim = 6;
inline constexpr int gw_t_index = 5;

/// t1 = s4 - s3, t2 = s4 + s3, t3 = s1 - s2, t4 = s1 + s2 with s the tilde coordinates.
inline GWPoint to_original(const GWPoint& p) {
    if (p.frame == Frame::original)
        return p;
    const auto& s = p.ti;
    return {p.t0, {s[3] - s[2], s[3] + s[2], s[0] - s[1], s[0] + s[1]}, p.t, Frame::original};
}

inline GWPoint to_tilde(const GWPoint& p) {
    if (p.frame == Frame::tilde)
        return p;
    const auto& t = p.ti;
    return {p.t0, {0.5 * (t[2] + t[3]), 0.5 * (t[3] - t[2]), 0.5 * (t[1] - t[0]), 0.5 * (t[0] + t[1])}, p.t, Frame::tilde};
}

/// A solution triple (X_2, X_3, X_4) of the Halphen system and its derivatives.
template <class T>
concept HalphenTriple = requires(const T& x, int p, int k, cplx t) {
    { x.derivative(p, k, t) } -> std::convertible_to<cplx>;
    { x.in_domain(t) } -> std::convertible_to<bool>;
};

/// X_p(t) = 2 d/dt log theta_p(0, t).
struct ThetaTriple {
    double tail_tolerance = 1e-16;
    int max_truncation = 64;

    cplx derivative(int p, int k, cplx t) const {
        return X_derivative(p, k, ModularParameter(t, tail_tolerance, max_truncation));
    }
    bool in_domain(cplx t) const { return t.imag() > 0.0; }
};

/// (1/(pi i)) X_p(t/(pi i)); defined where Re t < 0.
struct RescaledTriple {
    ThetaTriple base;

    cplx derivative(int p, int k, cplx t) const {
        const cplx s = 1.0 / (I * pi);
        return std::pow(s, k + 1) * base.derivative(p, k, s * t);
    }
    bool in_domain(cplx t) const { return t.real() < 0.0; }
};

/// pi i X_p(pi i t); defined where Re t > 0. Coefficients of the restricted
/// Hurwitz potential written in the variable t = tau/(pi i).
struct SubstitutedTriple {
    ThetaTriple base;

    cplx derivative(int p, int k, cplx t) const {
        const cplx s = I * pi;
        return std::pow(s, k + 1) * base.derivative(p, k, s * t);
    }
    bool in_domain(cplx t) const { return t.real() > 0.0; }
};

/// X_p^(k)(t) for p = 2..4, k = 0..3, evaluated once per point.
struct TripleJet {
    std::array<std::array<cplx, 4>, 3> x{};

    template <HalphenTriple T>
    static TripleJet at(const T& triple, cplx t, int max_order = 3) {
        if (!triple.in_domain(t)) {
            std::ostringstream os;
            os << "t = " << t << " is outside the domain of the coefficient triple";
            throw DomainError(os.str());
        }
        TripleJet j;
        for (int p = 2; p <= 4; ++p)
            for (int k = 0; k <= max_order; ++k)
                j.x[std::size_t(p - 2)][std::size_t(k)] = triple.derivative(p, k, t);
        return j;
    }

    cplx operator()(int p, int k) const { return x[std::size_t(p - 2)][std::size_t(k)]; }
};

/// Coefficient of a monomial: c0 + ct * t + sum_p xp * X_p(t).
struct GWCoefficient {
    cplx c0{};
    cplx ct{};
    std::array<cplx, 3> xp{};

    cplx derivative(int k, cplx t, const TripleJet& jet) const {
        cplx v{};
        if (k == 0)
            v += c0 + ct * t;
        else if (k == 1)
            v += ct;
        for (int p = 2; p <= 4; ++p)
            if (xp[std::size_t(p - 2)] != cplx{})
                v += xp[std::size_t(p - 2)] * jet(p, k);
        return v;
    }
};

struct GWMonomial {
    std::array<int, 5> power{}; // exponents of t0, t1..t4
    GWCoefficient coef;
};

namespace detail {

inline GWMonomial mono(std::array<int, 5> pw, GWCoefficient c) { return {pw, c}; }

inline std::array<int, 5> quartic(int i, int j) {
    std::array<int, 5> pw{};
    pw[std::size_t(i)] += 2;
    pw[std::size_t(j)] += 2;
    return pw;
}

inline std::vector<GWMonomial> original_monomials() {
    std::vector<GWMonomial> m;
    m.push_back(mono({2, 0, 0, 0, 0}, {0.0, 0.5, {}}));
    for (int i = 1; i <= 4; ++i) {
        std::array<int, 5> pw{};
        pw[0] = 1;
        pw[std::size_t(i)] = 2;
        m.push_back(mono(pw, {0.25, 0.0, {}}));
    }
    // f0 = X3/8 - X4/8
    m.push_back(mono({0, 1, 1, 1, 1}, {0.0, 0.0, {0.0, 1.0 / 8.0, -1.0 / 8.0}}));
    // (1/4) t_i^4 f1, f1 = -X2/12 - X3/48 - X4/48
    for (int i = 1; i <= 4; ++i) {
        std::array<int, 5> pw{};
        pw[std::size_t(i)] = 4;
        m.push_back(mono(pw, {0.0, 0.0, {-1.0 / 48.0, -1.0 / 192.0, -1.0 / 192.0}}));
    }
    // (1/6) t_i^2 t_j^2 f2, f2 = -3/16 (X3 + X4)
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j)
            m.push_back(mono(quartic(i, j), {0.0, 0.0, {0.0, -1.0 / 32.0, -1.0 / 32.0}}));
    return m;
}

inline std::vector<GWMonomial> tilde_monomials() {
    std::vector<GWMonomial> m;
    m.push_back(mono({2, 0, 0, 0, 0}, {0.0, 0.5, {}}));
    for (int i = 1; i <= 4; ++i) {
        std::array<int, 5> pw{};
        pw[0] = 1;
        pw[std::size_t(i)] = 2;
        m.push_back(mono(pw, {0.5, 0.0, {}}));
    }
    const GWCoefficient x2{0.0, 0.0, {-0.25, 0.0, 0.0}};
    const GWCoefficient x3{0.0, 0.0, {0.0, -0.25, 0.0}};
    const GWCoefficient x4{0.0, 0.0, {0.0, 0.0, -0.25}};
    m.push_back(mono(quartic(1, 3), x3));
    m.push_back(mono(quartic(2, 4), x3));
    m.push_back(mono(quartic(1, 4), x4));
    m.push_back(mono(quartic(2, 3), x4));
    m.push_back(mono(quartic(3, 4), x2));
    m.push_back(mono(quartic(1, 2), x2));
    // -(1/16) t_i^4 gamma, gamma = (2/3)(X2 + X3 + X4)
    for (int i = 1; i <= 4; ++i) {
        std::array<int, 5> pw{};
        pw[std::size_t(i)] = 4;
        m.push_back(mono(pw, {0.0, 0.0, {-1.0 / 24.0, -1.0 / 24.0, -1.0 / 24.0}}));
    }
    return m;
}

// d^{order} x^n / dx^{order} evaluated at x.
inline cplx power_derivative(cplx x, int n, int order) {
    if (order > n)
        return 0.0;
    double f = 1.0;
    for (int i = 0; i < order; ++i)
        f *= double(n - i);
    return f * std::pow(x, n - order);
}

} // namespace detail

inline const std::vector<GWMonomial>& gw_monomials(Frame f) {
    static const std::vector<GWMonomial> orig = detail::original_monomials();
    static const std::vector<GWMonomial> tild = detail::tilde_monomials();
    return f == Frame::original ? orig : tild;
}

/// Mixed partial derivative of the potential; counts[k] is the number of
/// derivatives in coordinate k (0..5).
inline cplx gw_partial(const GWPoint& p, const std::array<int, 6>& counts, const TripleJet& jet) {
    if (counts[5] > 3)
        throw DomainError("at most three t-derivatives are supported");
    cplx total{};
    for (const auto& m : gw_monomials(p.frame)) {
        cplx v = m.coef.derivative(counts[5], p.t, jet);
        if (v == cplx{})
            continue;
        for (int k = 0; k < 5 && v != cplx{}; ++k)
            v *= detail::power_derivative(p.coordinate(k), m.power[std::size_t(k)], counts[std::size_t(k)]);
        total += v;
    }
    return total;
}

template <HalphenTriple T = ThetaTriple>
std::array<cplx, 3> f_coeffs(cplx t, const T& triple = {}) {
    const cplx x2 = triple.derivative(2, 0, t), x3 = triple.derivative(3, 0, t), x4 = triple.derivative(4, 0, t);
    return {x3 / 8.0 - x4 / 8.0, -x2 / 12.0 - x3 / 48.0 - x4 / 48.0, -3.0 / 16.0 * (x3 + x4)};
}

template <HalphenTriple T = ThetaTriple>
cplx potential(const GWPoint& p, const T& triple = {}) {
    return gw_partial(p, {}, TripleJet::at(triple, p.t, 0));
}

template <HalphenTriple T = ThetaTriple>
std::array<cplx, 6> gradient(const GWPoint& p, const T& triple = {}) {
    const auto jet = TripleJet::at(triple, p.t, 1);
    std::array<cplx, 6> g{};
    for (int k = 0; k < gw_dim; ++k) {
        std::array<int, 6> c{};
        c[std::size_t(k)] = 1;
        g[std::size_t(k)] = gw_partial(p, c, jet);
    }
    return g;
}

inline cplx third_derivative(const GWPoint& p, int i, int j, int k, const TripleJet& jet) {
    std::array<int, 6> c{};
    for (int d : {i, j, k}) {
        if (d < 0 || d >= gw_dim)
            throw DomainError("GW direction index must be in 0..5");
        ++c[std::size_t(d)];
    }
    return gw_partial(p, c, jet);
}

template <HalphenTriple T = ThetaTriple>
cplx third_derivative(const GWPoint& p, int i, int j, int k, const T& triple = {}) {
    return third_derivative(p, i, j, k, TripleJet::at(triple, p.t));
}

using GWTensor = std::array<std::array<std::array<cplx, 6>, 6>, 6>;
using GWMetric = Eigen::Matrix<cplx, 6, 6>;

inline GWTensor structure_tensor(const GWPoint& p, const TripleJet& jet) {
    GWTensor c{};
    for (int i = 0; i < gw_dim; ++i)
        for (int j = i; j < gw_dim; ++j)
            for (int k = j; k < gw_dim; ++k) {
                const cplx v = third_derivative(p, i, j, k, jet);
                for (auto [a, b, d] : {std::array{i, j, k}, std::array{i, k, j}, std::array{j, i, k},
                                       std::array{j, k, i}, std::array{k, i, j}, std::array{k, j, i}})
                    c[std::size_t(a)][std::size_t(b)][std::size_t(d)] = v;
            }
    return c;
}

template <HalphenTriple T = ThetaTriple>
GWMetric metric(const GWPoint& p, const T& triple = {}) {
    const auto jet = TripleJet::at(triple, p.t, 1);
    GWMetric eta;
    for (int i = 0; i < gw_dim; ++i)
        for (int j = 0; j < gw_dim; ++j)
            eta(i, j) = third_derivative(p, 0, i, j, jet);
    return eta;
}

/// max |eta(p) - eta(q)| entrywise.
template <HalphenTriple T = ThetaTriple>
double metric_deviation(const GWPoint& p, const GWPoint& q, const T& triple = {}) {
    return (metric(p, triple) - metric(q, triple)).cwiseAbs().maxCoeff();
}

/// max over (i,j,k,l) of |c_ij^p eta_pq c^q_kl - c_ik^p eta_pq c^q_jl|.
/// Throws when the metric at p differs from the metric at a shifted point.
template <HalphenTriple T = ThetaTriple>
double wdvv_residual(const GWPoint& p, const T& triple = {}, double metric_tol = 1e-9) {
    GWPoint shifted = p;
    shifted.t0 += 0.37;
    for (auto& x : shifted.ti)
        x += cplx(0.11, -0.07);
    shifted.t += cplx(0.05, 0.03);
    if (!triple.in_domain(shifted.t))
        shifted.t = p.t;
    const double dev = metric_deviation(p, shifted, triple);
    if (dev > metric_tol) {
        std::ostringstream os;
        os << "GW metric is not constant: deviation " << dev;
        throw InconsistencyError(os.str());
    }
    const auto jet = TripleJet::at(triple, p.t);
    const auto c = structure_tensor(p, jet);
    GWMetric eta;
    for (int i = 0; i < gw_dim; ++i)
        for (int j = 0; j < gw_dim; ++j)
            eta(i, j) = c[0][std::size_t(i)][std::size_t(j)];
    const GWMetric inv = eta.inverse();

    // raised[i][j][q] = c_ijp eta^{pq}
    GWTensor raised{};
    for (int i = 0; i < gw_dim; ++i)
        for (int j = 0; j < gw_dim; ++j)
            for (int q = 0; q < gw_dim; ++q) {
                cplx s{};
                for (int r = 0; r < gw_dim; ++r)
                    s += c[std::size_t(i)][std::size_t(j)][std::size_t(r)] * inv(r, q);
                raised[std::size_t(i)][std::size_t(j)][std::size_t(q)] = s;
            }
    auto product = [&](int i, int j, int k, int l) {
        cplx s{};
        for (int q = 0; q < gw_dim; ++q)
            s += raised[std::size_t(i)][std::size_t(j)][std::size_t(q)] * c[std::size_t(q)][std::size_t(k)][std::size_t(l)];
        return s;
    };
    double worst = 0.0;
    for (int i = 0; i < gw_dim; ++i)
        for (int j = i; j < gw_dim; ++j)
            for (int k = 0; k < gw_dim; ++k)
                for (int l = k; l < gw_dim; ++l)
                    worst = std::max(worst, std::abs(product(i, j, k, l) - product(i, k, j, l)));
    return worst;
}

/// |E F - 2F| with E = t0 d/dt0 + (1/2) sum t_i d/dt_i.
template <HalphenTriple T = ThetaTriple>
double euler_residual(const GWPoint& p, const T& triple = {}) {
    const auto g = gradient(p, triple);
    cplx e = p.t0 * g[0];
    for (int i = 0; i < 4; ++i)
        e += 0.5 * p.ti[std::size_t(i)] * g[std::size_t(i + 1)];
    return std::abs(e - 2.0 * potential(p, triple));
}

/// max over the three pairs of |d/dt(X_a + X_b) - 2 X_a X_b|.
template <HalphenTriple T = ThetaTriple>
double halphen_residual(cplx t, const T& triple = {}) {
    const auto jet = TripleJet::at(triple, t, 1);
    double worst = 0.0;
    for (auto [a, b] : {std::array{2, 3}, std::array{3, 4}, std::array{4, 2}})
        worst = std::max(worst, std::abs(jet(a, 1) + jet(b, 1) - 2.0 * jet(a, 0) * jet(b, 0)));
    return worst;
}

} // namespace hurwitz

#pragma once

// Weierstrass functions on the lattice 2 omega1 Z + 2 omega2 Z. Every lattice
// row {z + 2 omega1 m + 2 omega2 n : m in Z} is summed in closed form
// (sum_m 1/(u+m)^2 = pi^2 csc^2(pi u), sum_m 1/(u+m) = pi cot(pi u) with
// Eisenstein ordering) and rows n, -n are added in pairs.

#include "hurwitz/numeric.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace hurwitz {

struct Lattice {
    cplx omega1{0.5, 0.0};
    cplx omega2{0.0, 0.5};
    int max_rows = 40;
    double pole_guard = 1e-9;

    Lattice() = default;
    Lattice(cplx w1, cplx w2) : omega1(w1), omega2(w2) { validate(); }

    static Lattice normalized(cplx tau) { return Lattice(0.5, 0.5 * tau); }

    void validate() const {
        if (!is_finite(omega1) || !is_finite(omega2) || omega1 == cplx{})
            throw DomainError("half-periods must be finite and nonzero");
        if (!((omega2 / omega1).imag() > 0.0))
            throw DomainError("lattice requires Im(omega2/omega1) > 0");
    }

    cplx tau() const { return omega2 / omega1; }
    bool is_normalized() const { return omega1 == cplx{0.5, 0.0}; }

    /// Distance from z to the nearest lattice point.
    double distance_to_lattice(cplx z) const {
        const cplx u = z / (2.0 * omega1);
        const cplx t = tau();
        const double n0 = std::round(u.imag() / t.imag());
        double best = std::numeric_limits<double>::infinity();
        for (double n = n0 - 1; n <= n0 + 1; n += 1.0) {
            const double m0 = std::round((u - n * t).real());
            for (double m = m0 - 1; m <= m0 + 1; m += 1.0)
                best = std::min(best, std::abs(u - m - n * t));
        }
        return best * std::abs(2.0 * omega1);
    }

    /// Representative of z in {x 2omega1 + y 2omega2 : x, y in [-1/2, 1/2)}.
    cplx reduce(cplx z) const {
        const cplx u = z / (2.0 * omega1);
        const cplx t = tau();
        const double n = std::floor(u.imag() / t.imag() + 0.5);
        const cplx w = u - n * t;
        const double m = std::floor(w.real() + 0.5);
        return (w - m) * 2.0 * omega1;
    }
};

namespace detail {

// csc^2 and cot of w, stable for large |Im w|.
struct TrigPair {
    cplx csc2;
    cplx cot;
};

inline TrigPair trig(cplx w) {
    if (std::abs(w.imag()) < 20.0) {
        const cplx s = std::sin(w);
        return {1.0 / (s * s), std::cos(w) / s};
    }
    if (w.imag() > 0.0) {
        const cplx e = std::exp(2.0 * I * w);
        return {-4.0 * e / ((1.0 - e) * (1.0 - e)), -I * (1.0 + e) / (1.0 - e)};
    }
    const cplx e = std::exp(-2.0 * I * w);
    return {-4.0 * e / ((1.0 - e) * (1.0 - e)), I * (1.0 + e) / (1.0 - e)};
}

// Derivatives in w of csc^2(w): orders 0..3.
inline std::array<cplx, 4> csc2_jet(cplx w) {
    const auto [c2, ct] = trig(w);
    return {c2, -2.0 * ct * c2, 6.0 * c2 * c2 - 4.0 * c2, ct * (-24.0 * c2 * c2 + 8.0 * c2)};
}

inline void row_truncation_error(cplx z, cplx tau, int rows) {
    std::ostringstream os;
    os << "lattice row sum at z = " << z << ", tau = " << tau << " not settled after " << rows << " rows";
    throw TruncationError(os.str());
}

struct RowControl {
    double im_z;
    double im_tau;
    int cap;
    int row = 0;
    int quiet = 0;

    // Rows below |Im z| are not yet in the decaying regime.
    bool done(double contribution, double scale) {
        ++row;
        if (double(row) * im_tau <= im_z + im_tau)
            return false;
        quiet = contribution <= 1e-18 * std::max(scale, 1.0) ? quiet + 1 : 0;
        return quiet >= 2;
    }
    int limit() const { return cap + int(std::ceil(im_z / im_tau)); }
};

// Normalized lattice Z + tau Z.
inline cplx g2_eisenstein_sum(cplx tau, int cap) {
    // G2 = pi^2/3 + sum_{n != 0} pi^2 csc^2(pi n tau)
    cplx s = pi * pi / 3.0;
    RowControl rc{0.0, tau.imag(), cap};
    for (int n = 1;; ++n) {
        const cplx c = 2.0 * pi * pi * trig(pi * double(n) * tau).csc2;
        s += c;
        if (rc.done(std::abs(c), std::abs(s)))
            break;
        if (n > rc.limit())
            row_truncation_error(0.0, tau, n);
    }
    return s;
}

inline cplx g2_eisenstein_dtau(cplx tau, int cap) {
    // d/dtau of the row sum: sum_{n != 0} n * pi^3 (d/dw csc^2)(pi n tau)
    cplx s{};
    RowControl rc{0.0, tau.imag(), cap};
    for (int n = 1;; ++n) {
        const cplx c = 2.0 * double(n) * pi * pi * pi * csc2_jet(pi * double(n) * tau)[1];
        s += c;
        if (rc.done(std::abs(c), std::abs(s)))
            break;
        if (n > rc.limit())
            row_truncation_error(0.0, tau, n);
    }
    return s;
}

// Row sums of pi^{2+k} (d/dw)^k csc^2(pi(u + n tau)); weight n^p for tau-derivatives.
inline std::array<cplx, 4> wp_rows(cplx u, cplx tau, int cap, int max_order, int weight_power) {
    std::array<cplx, 4> s{};
    auto add_row = [&](int n, double weight) -> double {
        const auto j = csc2_jet(pi * (u + double(n) * tau));
        double mag = 0.0;
        double pk = pi * pi;
        for (int k = 0; k <= max_order; ++k) {
            const cplx c = weight * pk * j[std::size_t(k)];
            s[std::size_t(k)] += c;
            mag = std::max(mag, std::abs(c));
            pk *= pi;
        }
        return mag;
    };
    if (weight_power == 0)
        add_row(0, 1.0);
    RowControl rc{std::abs(u.imag()), tau.imag(), cap};
    for (int n = 1;; ++n) {
        const double wpos = std::pow(double(n), weight_power);
        const double wneg = std::pow(-double(n), weight_power);
        const double mag = add_row(n, wpos) + add_row(-n, wneg);
        double scale = 0.0;
        for (int k = 0; k <= max_order; ++k)
            scale = std::max(scale, std::abs(s[std::size_t(k)]));
        if (rc.done(mag, scale))
            break;
        if (n > rc.limit())
            row_truncation_error(u, tau, n);
    }
    return s;
}

// wp^(k)(u), k = 0..3, and d/dtau of wp, wp' at fixed u on Z + tau Z, from a
// single pass over the rows. g2 and g2_dtau are the Eisenstein row sums.
struct NormalizedJet {
    std::array<cplx, 4> p;
    std::array<cplx, 2> dtau;
};

inline NormalizedJet wp_normalized_jet(cplx u, cplx tau, cplx g2, cplx g2_dtau, int cap, bool with_tau) {
    NormalizedJet out{};
    const double pk[4] = {pi * pi, pi * pi * pi, pi * pi * pi * pi, pi * pi * pi * pi * pi};
    auto add_row = [&](int n) -> double {
        const auto j = csc2_jet(pi * (u + double(n) * tau));
        double mag = 0.0;
        for (int k = 0; k < 4; ++k) {
            const cplx c = pk[k] * j[std::size_t(k)];
            out.p[std::size_t(k)] += c;
            mag = std::max(mag, std::abs(c));
        }
        if (with_tau && n != 0) {
            // d/dtau of the row at fixed u is n times the next u-derivative
            out.dtau[0] += double(n) * pk[1] * j[1];
            out.dtau[1] += double(n) * pk[2] * j[2];
            mag = std::max(mag, std::abs(double(n) * pk[2] * j[2]));
        }
        return mag;
    };
    add_row(0);
    RowControl rc{std::abs(u.imag()), tau.imag(), cap};
    for (int n = 1;; ++n) {
        const double mag = add_row(n) + add_row(-n);
        double scale = 0.0;
        for (const auto& v : out.p)
            scale = std::max(scale, std::abs(v));
        if (rc.done(mag, scale))
            break;
        if (n > rc.limit())
            row_truncation_error(u, tau, n);
    }
    out.p[0] -= g2;
    out.dtau[0] -= g2_dtau;
    return out;
}

inline void check_pole(const Lattice& L, cplx z) {
    if (!is_finite(z))
        throw DomainError("argument must be finite");
    if (L.distance_to_lattice(z) < L.pole_guard) {
        std::ostringstream os;
        os << "Weierstrass function evaluated within " << L.pole_guard << " of a lattice point (z = " << z << ")";
        throw PoleError(os.str());
    }
}

} // namespace detail

/// Values wp, wp', wp'', wp''' at z (entries above max_order are zero).
inline std::array<cplx, 4> wp_all(cplx z, const Lattice& L, int max_order = 3) {
    detail::check_pole(L, z);
    const cplx s = 2.0 * L.omega1;
    const cplx tau = L.tau();
    auto rows = detail::wp_rows(z / s, tau, L.max_rows, max_order, 0);
    rows[0] -= detail::g2_eisenstein_sum(tau, L.max_rows);
    cplx scale = s * s;
    for (int k = 0; k <= 3; ++k) {
        rows[std::size_t(k)] /= scale;
        scale *= s;
    }
    return rows;
}

inline cplx wp(cplx z, const Lattice& L) { return wp_all(z, L, 0)[0]; }
inline cplx wp_prime(cplx z, const Lattice& L) { return wp_all(z, L, 1)[1]; }
inline cplx wp_second(cplx z, const Lattice& L) { return wp_all(z, L, 2)[2]; }

/// k-th derivative of wp in z, 0 <= k <= 3.
inline cplx wp_derivative(cplx z, const Lattice& L, int order) {
    if (order < 0 || order > 3)
        throw DomainError("wp derivatives are provided up to order 3");
    return wp_all(z, L, order)[std::size_t(order)];
}

inline cplx zeta_w(cplx z, const Lattice& L) {
    detail::check_pole(L, z);
    const cplx s = 2.0 * L.omega1;
    const cplx u = z / s;
    const cplx tau = L.tau();
    cplx acc = detail::g2_eisenstein_sum(tau, L.max_rows) * u + pi * detail::trig(pi * u).cot;
    detail::RowControl rc{std::abs(u.imag()), tau.imag(), L.max_rows};
    for (int n = 1;; ++n) {
        const cplx c = pi * (detail::trig(pi * (u + double(n) * tau)).cot + detail::trig(pi * (u - double(n) * tau)).cot);
        acc += c;
        if (rc.done(std::abs(c), std::abs(acc)))
            break;
        if (n > rc.limit())
            detail::row_truncation_error(u, tau, n);
    }
    return acc / s;
}

/// Eisenstein-ordered G2(tau) = sum' 1/(m + n tau)^2 on Z + tau Z; equals 2 eta1 there.
inline cplx eisenstein_g2(cplx tau, int cap = 40) {
    if (!(tau.imag() > 0.0))
        throw DomainError("tau must lie in the upper half-plane");
    return detail::g2_eisenstein_sum(tau, cap);
}

inline cplx eisenstein_g2_dtau(cplx tau, int cap = 40) {
    if (!(tau.imag() > 0.0))
        throw DomainError("tau must lie in the upper half-plane");
    return detail::g2_eisenstein_dtau(tau, cap);
}

/// d/dtau at fixed v of wp^(k)(v; Z + tau Z), k = 0..2.
inline cplx wp_dtau(cplx v, cplx tau, int order = 0, int cap = 40) {
    if (order < 0 || order > 2)
        throw DomainError("wp_dtau supports orders 0..2");
    const Lattice L = Lattice::normalized(tau);
    detail::check_pole(L, v);
    const auto rows = detail::wp_rows(v, tau, cap, order + 1, 1);
    cplx r = rows[std::size_t(order + 1)];
    if (order == 0)
        r -= detail::g2_eisenstein_dtau(tau, cap);
    return r;
}

/// d/dtau at fixed v of zeta(v; Z + tau Z).
inline cplx zeta_dtau(cplx v, cplx tau, int cap = 40) {
    const Lattice L = Lattice::normalized(tau);
    detail::check_pole(L, v);
    const auto rows = detail::wp_rows(v, tau, cap, 0, 1);
    return detail::g2_eisenstein_dtau(tau, cap) * v - rows[0];
}

struct EllipticConstants {
    cplx eta1, eta2;
    cplx e1, e2, e3;
    cplx g2, g3;
    double legendre_residual;
};

inline constexpr cplx eta_probe{0.17, 0.13};

inline EllipticConstants constants(const Lattice& L, const NumericConfig& cfg = {}, double legendre_tol = 1e-8) {
    L.validate();
    EllipticConstants c{};
    const cplx p = eta_probe * (2.0 * L.omega1);
    c.eta1 = 0.5 * (zeta_w(p + 2.0 * L.omega1, L) - zeta_w(p, L));
    c.eta2 = 0.5 * (zeta_w(p + 2.0 * L.omega2, L) - zeta_w(p, L));
    c.e1 = wp(L.omega1, L);
    c.e2 = wp(L.omega1 + L.omega2, L);
    c.e3 = wp(L.omega2, L);

    double shortest = std::numeric_limits<double>::infinity();
    for (int m = -2; m <= 2; ++m)
        for (int n = -2; n <= 2; ++n)
            if (m != 0 || n != 0)
                shortest = std::min(shortest, std::abs(2.0 * (double(m) * L.omega1 + double(n) * L.omega2)));
    const ContourSpec around_zero{0.0, 0.3 * shortest, 64};
    auto f = [&](cplx z) { return wp(z, L); };
    c.g2 = 20.0 * laurent_coefficient(f, around_zero, 2, cfg);
    c.g3 = 28.0 * laurent_coefficient(f, around_zero, 4, cfg);

    c.legendre_residual = std::abs(c.eta1 * L.omega2 - c.eta2 * L.omega1 - I * (pi / 2.0));
    if (c.legendre_residual > legendre_tol) {
        std::ostringstream os;
        os << "Legendre identity violated by " << c.legendre_residual;
        throw InconsistencyError(os.str());
    }
    return c;
}

/// -2 pi i df/dtau + (zeta(v) - 2 eta1 v) df/dv on Z + tau Z. The linear
/// correction makes the result periodic in v whenever f is.
inline cplx fs_ellipticize(cplx df_dtau, cplx df_dv, cplx v, cplx tau, int cap = 40) {
    const Lattice L = Lattice::normalized(tau);
    const cplx eta1 = 0.5 * eisenstein_g2(tau, cap);
    return -two_pi_i * df_dtau + (zeta_w(v, L) - 2.0 * eta1 * v) * df_dv;
}

} // namespace hurwitz

#pragma once

// Jacobi theta functions with period 1 in z:
//   theta1 = i sum (-1)^n q^{(n-1/2)^2} e^{(2n-1) pi i z}
//   theta2 =   sum        q^{(n-1/2)^2} e^{(2n-1) pi i z}
//   theta3 =   sum        q^{n^2}       e^{2n pi i z}
//   theta4 =   sum (-1)^n q^{n^2}       e^{2n pi i z}
// with q = e^{pi i tau}. X_p = 2 d/dtau log theta_p(0, tau).

#include "hurwitz/numeric.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace hurwitz {

class ThetaIndex {
public:
    constexpr ThetaIndex(int j) : j_(j) {
        if (j < 1 || j > 4)
            throw DomainError("theta index must be in {1,2,3,4}");
    }
    constexpr int value() const { return j_; }
    constexpr operator int() const { return j_; }

private:
    int j_;
};

/// tau in the upper half-plane together with the Fourier truncation.
struct ModularParameter {
    cplx tau;
    int truncation = 0;
    double tail_tolerance = 1e-16;
    int max_truncation = 64;

    ModularParameter() = default;
    ModularParameter(cplx t) : ModularParameter(t, 1e-16, 64) {}
    ModularParameter(cplx t, double tail, int cap) : tau(t), tail_tolerance(tail), max_truncation(cap) {
        if (!is_finite(t) || !(t.imag() > 0.0))
            throw DomainError("tau must lie in the upper half-plane");
        if (!(tail > 0.0))
            throw DomainError("tail tolerance must be positive");
        // smallest N with |q|^{(N-1)^2} < tail
        const double need = -std::log(tail) / (pi * t.imag());
        const int n = 1 + int(std::ceil(std::sqrt(need)));
        if (n > cap) {
            std::ostringstream os;
            os << "theta truncation for Im tau = " << t.imag() << " needs N = " << n << " > cap " << cap;
            throw TruncationError(os.str());
        }
        truncation = std::max(n, 2);
    }
};

namespace detail {

struct ThetaTerm {
    double a;    // exponent of q
    double k;    // coefficient of pi i z
    double sign; // (-1)^n or 1
};

inline ThetaTerm theta_term(int j, int n) {
    const bool half = (j == 1 || j == 2);
    const double a = half ? (n - 0.5) * (n - 0.5) : double(n) * n;
    const double k = half ? 2.0 * n - 1.0 : 2.0 * n;
    const double s = (j == 1 || j == 4) ? ((n % 2 == 0) ? 1.0 : -1.0) : 1.0;
    return {a, k, s};
}

// log of the largest possible |term| at Fourier index magnitude m.
inline double theta_log_bound(double m, double im_tau, double abs_im_z, int dz, int dtau) {
    const double a = (m - 0.5) * (m - 0.5);
    const double k = 2.0 * m + 1.0;
    double lb = -pi * im_tau * a + pi * k * abs_im_z;
    if (dz > 0)
        lb += dz * std::log(pi * k);
    if (dtau > 0)
        lb += dtau * std::log(pi * std::max(a, 1.0) + pi * (2.0 * m + 1.0));
    return lb;
}

} // namespace detail

/// d^{dz}/dz^{dz} d^{dtau}/dtau^{dtau} theta_j(z, tau), summed termwise. The
/// cutoff grows with |Im z| and the derivative orders so that the omitted
/// tail stays below the tail tolerance relative to the largest term.
inline cplx theta_derivative(ThetaIndex j, cplx z, const ModularParameter& mp, int dz, int dtau) {
    if (dz < 0 || dtau < 0)
        throw DomainError("derivative orders must be non-negative");
    if (!is_finite(z))
        throw DomainError("z must be finite");
    const double it = mp.tau.imag();
    const double iz = std::abs(z.imag());
    double peak = -1e300;
    for (int m = 0; m <= mp.max_truncation + 1; ++m)
        peak = std::max(peak, detail::theta_log_bound(m, it, iz, dz, dtau));
    int n_cut = mp.truncation;
    const double threshold = peak + std::log(mp.tail_tolerance);
    // the bound is eventually decreasing; advance until both it and its successor fall below threshold
    while (n_cut <= mp.max_truncation &&
           (detail::theta_log_bound(n_cut + 1, it, iz, dz, dtau) > threshold ||
            detail::theta_log_bound(n_cut + 2, it, iz, dz, dtau) >
                detail::theta_log_bound(n_cut + 1, it, iz, dz, dtau)))
        ++n_cut;
    if (n_cut > mp.max_truncation) {
        std::ostringstream os;
        os << "theta series at z = " << z << ", tau = " << mp.tau << " needs more than "
           << mp.max_truncation << " terms";
        throw TruncationError(os.str());
    }

    const cplx pii = I * pi;
    cplx sum{};
    // index range covers n and 1-n symmetrically for the half-integer thetas
    const int lo = (j == 1 || j == 2) ? -n_cut + 1 : -n_cut;
    for (int n = lo; n <= n_cut; ++n) {
        const auto t = detail::theta_term(j, n);
        cplx term = t.sign * std::exp(pii * (t.a * mp.tau + t.k * z));
        if (dz > 0)
            term *= std::pow(pii * t.k, dz);
        if (dtau > 0)
            term *= std::pow(pii * t.a, dtau);
        sum += term;
    }
    return j == 1 ? I * sum : sum;
}

inline cplx theta(ThetaIndex j, cplx z, const ModularParameter& mp) { return theta_derivative(j, z, mp, 0, 0); }

inline cplx theta_dz(ThetaIndex j, int order, cplx z, const ModularParameter& mp) {
    if (order < 0 || order > 3)
        throw DomainError("theta_dz supports orders 0..3");
    return theta_derivative(j, z, mp, order, 0);
}

inline cplx theta_dtau(ThetaIndex j, cplx z, const ModularParameter& mp, int order = 1) {
    return theta_derivative(j, z, mp, 0, order);
}

inline cplx theta_constant(ThetaIndex j, const ModularParameter& mp, int dz = 0) {
    if (j == 1 && dz == 0)
        throw DomainError("theta1(0, tau) vanishes identically; theta constants use j = 2, 3, 4");
    return theta_derivative(j, cplx{}, mp, dz, 0);
}

namespace detail {

inline ThetaIndex x_index(int p) {
    if (p < 2 || p > 4)
        throw DomainError("X_p is defined for p in {2,3,4}");
    return ThetaIndex(p);
}

// Derivatives L^(1..m) of log f given r_k = f^(k)/f, from f^(m) = sum C(m-1,k) L^(k+1) f^(m-1-k).
template <std::size_t M>
std::array<cplx, M + 1> log_derivatives(const std::array<cplx, M + 1>& r) {
    std::array<cplx, M + 1> L{};
    for (std::size_t m = 1; m <= M; ++m) {
        cplx acc = r[m];
        double binom = 1.0; // C(m-1, k)
        for (std::size_t k = 0; k + 1 < m; ++k) {
            acc -= binom * L[k + 1] * r[m - 1 - k];
            binom = binom * double(m - 1 - k) / double(k + 1);
        }
        L[m] = acc;
    }
    return L;
}

} // namespace detail

/// k-th tau-derivative of X_p, 0 <= k <= 3.
inline cplx X_derivative(int p, int k, const ModularParameter& mp) {
    const ThetaIndex j = detail::x_index(p);
    if (k < 0 || k > 3)
        throw DomainError("X derivatives are provided up to order 3");
    std::array<cplx, 5> r{};
    const cplx th = theta_derivative(j, cplx{}, mp, 0, 0);
    r[0] = 1.0;
    for (int m = 1; m <= k + 1; ++m)
        r[std::size_t(m)] = theta_derivative(j, cplx{}, mp, 0, m) / th;
    const auto L = detail::log_derivatives<4>(r);
    return 2.0 * L[std::size_t(k + 1)];
}

inline cplx X(int p, const ModularParameter& mp) { return X_derivative(p, 0, mp); }

inline cplx gamma_derivative(int k, const ModularParameter& mp) {
    return (2.0 / 3.0) * (X_derivative(2, k, mp) + X_derivative(3, k, mp) + X_derivative(4, k, mp));
}

inline cplx gamma(const ModularParameter& mp) { return gamma_derivative(0, mp); }

} // namespace hurwitz

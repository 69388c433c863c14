#pragma once

// Complex-analytic primitives: contour quadrature, Laurent coefficients,
// zero and pole location, numerical differentiation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hurwitz {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};
inline constexpr cplx two_pi_i{0.0, 2.0 * std::numbers::pi};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Quadrature did not settle; usually a singularity on or near the contour.
class ConvergenceError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Evaluation requested at (or within the guard distance of) a pole.
class PoleError : public NumericError {
public:
    using NumericError::NumericError;
};

/// A series cannot be truncated to the requested tail tolerance.
class TruncationError : public NumericError {
public:
    using NumericError::NumericError;
};

class ZeroFindingError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Two independent routes to the same quantity disagree.
class InconsistencyError : public NumericError {
public:
    using NumericError::NumericError;
};

class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

struct NumericConfig {
    double contour_rel_tol = 1e-12;
    int contour_max_log2 = 20;
    int newton_grid = 32;
    int newton_max_iter = 60;
    double merge_radius = 1e-6;
    double diff_step = 1e-5;
    double diff_tol = 1e-6;
};

template <class F>
concept ComplexFunction = std::invocable<const F&, cplx> &&
                          std::convertible_to<std::invoke_result_t<const F&, cplx>, cplx>;

struct ContourSpec {
    cplx center{};
    double radius = 1.0;
    int samples = 32;

    void validate() const {
        if (!is_finite(center))
            throw DomainError("contour center is not finite");
        if (!(radius > 0.0) || !std::isfinite(radius))
            throw DomainError("contour radius must be positive");
        if (samples < 16 || (samples & (samples - 1)) != 0)
            throw DomainError("contour samples must be a power of two >= 16");
    }
};

/// Parallelogram corner + [0,1) x span1 + [0,1) x span2. When periodic, points
/// are identified modulo the spans (a fundamental domain of a lattice).
struct Region {
    cplx corner{};
    cplx span1{1.0, 0.0};
    cplx span2{0.0, 1.0};
    int grid = 32;
    bool periodic = false;

    void validate() const {
        if (std::abs((std::conj(span1) * span2).imag()) < 1e-14 * std::abs(span1) * std::abs(span2))
            throw DomainError("region spans are linearly dependent");
        if (grid < 1)
            throw DomainError("region grid density must be positive");
    }

    /// Real coordinates (x, y) with z = corner + x span1 + y span2.
    std::pair<double, double> coordinates(cplx z) const {
        const cplx d = z - corner;
        const double det = (std::conj(span1) * span2).imag();
        const double x = (std::conj(d) * span2).imag() / det;
        const double y = (std::conj(span1) * d).imag() / det;
        return {x, y};
    }

    cplx point(double x, double y) const { return corner + x * span1 + y * span2; }

    bool contains(cplx z) const {
        const auto [x, y] = coordinates(z);
        return x >= 0.0 && x < 1.0 && y >= 0.0 && y < 1.0;
    }

    /// Representative of z inside the parallelogram (periodic regions only).
    cplx reduce(cplx z) const {
        auto [x, y] = coordinates(z);
        x -= std::floor(x);
        y -= std::floor(y);
        return point(x, y);
    }

    /// Distance between two points; modulo the spans when periodic.
    double distance(cplx a, cplx b) const {
        if (!periodic)
            return std::abs(a - b);
        const cplx d = reduce(b - a + corner) - corner;
        double best = std::abs(d);
        for (int m = -2; m <= 2; ++m)
            for (int n = -2; n <= 2; ++n)
                best = std::min(best, std::abs(d + double(m) * span1 + double(n) * span2));
        return best;
    }
};

namespace detail {

inline cplx unit_root(std::size_t k, std::size_t n) {
    const double a = 2.0 * pi * double(k) / double(n);
    return {std::cos(a), std::sin(a)};
}

template <class F>
cplx sample(const F& f, cplx z) {
    cplx v;
    try {
        v = f(z);
    } catch (const PoleError& e) {
        std::ostringstream os;
        os << "pole on integration contour at " << z << ": " << e.what();
        throw ConvergenceError(os.str());
    }
    if (!is_finite(v)) {
        std::ostringstream os;
        os << "non-finite integrand on contour at " << z;
        throw ConvergenceError(os.str());
    }
    return v;
}

} // namespace detail

struct ContourResult {
    cplx value;
    double error_estimate;
    int samples;
};

/// (1/2 pi i) * closed integral of f over a circle, trapezoidal rule with
/// sample doubling until successive estimates agree to the relative tolerance.
template <ComplexFunction F>
ContourResult contour_integral_detailed(const F& f, const ContourSpec& c, const NumericConfig& cfg = {}) {
    c.validate();
    std::size_t n = std::size_t(c.samples);
    cplx sum{};
    double mag = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const cplx w = c.radius * detail::unit_root(k, n);
        const cplx term = detail::sample(f, c.center + w) * w;
        sum += term;
        mag += std::abs(term);
    }
    cplx estimate = sum / double(n);
    const std::size_t max_n = std::size_t(1) << cfg.contour_max_log2;
    while (n < max_n) {
        // New nodes sit at the midpoints of the current ones.
        cplx extra{};
        for (std::size_t k = 0; k < n; ++k) {
            const cplx w = c.radius * detail::unit_root(2 * k + 1, 2 * n);
            const cplx term = detail::sample(f, c.center + w) * w;
            extra += term;
            mag += std::abs(term);
        }
        sum += extra;
        n *= 2;
        const cplx refined = sum / double(n);
        const double scale = std::max(std::abs(refined), mag / double(n));
        const double diff = std::abs(refined - estimate);
        estimate = refined;
        if (diff <= cfg.contour_rel_tol * scale)
            return {estimate, diff, int(n)};
    }
    std::ostringstream os;
    os << "contour integral around " << c.center << " (radius " << c.radius
       << ") did not converge; suspected pole on or near the contour";
    throw ConvergenceError(os.str());
}

template <ComplexFunction F>
cplx contour_integral(const F& f, const ContourSpec& c, const NumericConfig& cfg = {}) {
    return contour_integral_detailed(f, c, cfg).value;
}

/// Componentwise contour_integral for f(z, out) filling n outputs; one
/// evaluation of f per node serves all components.
template <class F>
std::vector<cplx> contour_integral_vector(const F& f, std::size_t n_out, const ContourSpec& c,
                                          const NumericConfig& cfg = {}) {
    c.validate();
    std::vector<cplx> sum(n_out), estimate(n_out), values(n_out);
    std::vector<double> mag(n_out, 0.0);
    auto accumulate = [&](std::size_t k, std::size_t n, std::vector<cplx>& into) {
        const cplx w = c.radius * detail::unit_root(k, n);
        const cplx z = c.center + w;
        try {
            f(z, values);
        } catch (const PoleError& e) {
            std::ostringstream os;
            os << "pole on integration contour at " << z << ": " << e.what();
            throw ConvergenceError(os.str());
        }
        for (std::size_t i = 0; i < n_out; ++i) {
            if (!is_finite(values[i])) {
                std::ostringstream os;
                os << "non-finite integrand on contour at " << z;
                throw ConvergenceError(os.str());
            }
            const cplx term = values[i] * w;
            into[i] += term;
            mag[i] += std::abs(term);
        }
    };
    std::size_t n = std::size_t(c.samples);
    for (std::size_t k = 0; k < n; ++k)
        accumulate(k, n, sum);
    for (std::size_t i = 0; i < n_out; ++i)
        estimate[i] = sum[i] / double(n);
    const std::size_t max_n = std::size_t(1) << cfg.contour_max_log2;
    while (n < max_n) {
        for (std::size_t k = 0; k < n; ++k)
            accumulate(2 * k + 1, 2 * n, sum);
        n *= 2;
        bool settled = true;
        for (std::size_t i = 0; i < n_out; ++i) {
            const cplx refined = sum[i] / double(n);
            const double scale = std::max(std::abs(refined), mag[i] / double(n));
            if (std::abs(refined - estimate[i]) > cfg.contour_rel_tol * scale)
                settled = false;
            estimate[i] = refined;
        }
        if (settled)
            return estimate;
    }
    std::ostringstream os;
    os << "contour integral around " << c.center << " (radius " << c.radius
       << ") did not converge; suspected pole on or near the contour";
    throw ConvergenceError(os.str());
}

/// Coefficient a_k of the Laurent expansion sum a_k (z - center)^k, where the
/// contour is centered at the expansion point.
template <ComplexFunction F>
cplx laurent_coefficient(const F& f, const ContourSpec& around, int k, const NumericConfig& cfg = {}) {
    const cplx center = around.center;
    auto g = [&](cplx z) { return cplx(f(z)) * std::pow(z - center, -k - 1); };
    return contour_integral(g, around, cfg);
}

/// (1/2 pi i) closed integral of df/f: zeros minus poles inside the circle.
template <ComplexFunction F, ComplexFunction DF>
double winding_number(const F& f, const DF& df, const ContourSpec& c, const NumericConfig& cfg = {}) {
    auto g = [&](cplx z) { return cplx(df(z)) / cplx(f(z)); };
    return contour_integral(g, c, cfg).real();
}

struct Zero {
    cplx z;
    int multiplicity = 1;
};

namespace detail {

struct Candidate {
    cplx z;
    double residual;
};

inline void merge_candidate(std::vector<Candidate>& out, const Region& region, cplx z, double residual,
                            double merge_radius) {
    for (auto& c : out) {
        if (region.distance(c.z, z) < merge_radius) {
            if (residual < c.residual)
                c = {z, residual};
            return;
        }
    }
    out.push_back({z, residual});
}

template <class Fn>
bool safe_eval(const Fn& fn, cplx z, cplx& out) {
    try {
        out = fn(z);
    } catch (const PoleError&) {
        return false;
    }
    return is_finite(out);
}

inline double nearest_other(const std::vector<cplx>& pts, std::size_t i, const Region& region) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < pts.size(); ++j)
        if (j != i)
            d = std::min(d, region.distance(pts[i], pts[j]));
    return d;
}

inline double cell_size(const Region& r) {
    return std::max(std::abs(r.span1), std::abs(r.span2)) / double(r.grid);
}

} // namespace detail

/// Newton iterations seeded on the region grid. Returns deduplicated zeros
/// inside the region (reduced modulo the spans when periodic) with
/// multiplicities from the local winding number.
///
/// Throws ZeroFindingError when a grid cell encloses a zero (positive winding)
/// that no seed converged to.
template <ComplexFunction F, ComplexFunction DF>
std::vector<Zero> find_zeros(const F& f, const DF& df, const Region& region, double tol,
                             const NumericConfig& cfg = {}) {
    region.validate();
    const int g = region.grid;
    std::vector<detail::Candidate> found;
    std::vector<double> seed_abs(std::size_t(g) * std::size_t(g), std::numeric_limits<double>::infinity());

    for (int a = 0; a < g; ++a) {
        for (int b = 0; b < g; ++b) {
            cplx z = region.point((a + 0.5) / g, (b + 0.5) / g);
            cplx fz;
            if (!detail::safe_eval(f, z, fz))
                continue;
            seed_abs[std::size_t(a) * g + b] = std::abs(fz);
            bool converged = false;
            for (int it = 0; it < cfg.newton_max_iter; ++it) {
                cplx dz;
                if (!detail::safe_eval(df, z, dz) || dz == cplx{})
                    break;
                const cplx step = fz / dz;
                z -= step;
                if (!detail::safe_eval(f, z, fz))
                    break;
                if (std::abs(step) <= 1e-13 * (1.0 + std::abs(z))) {
                    converged = true;
                    break;
                }
            }
            if (!converged || std::abs(fz) > tol)
                continue;
            if (region.periodic)
                z = region.reduce(z);
            else if (!region.contains(z))
                continue;
            detail::merge_candidate(found, region, z, std::abs(fz), cfg.merge_radius);
        }
    }

    std::vector<cplx> pts;
    pts.reserve(found.size());
    for (const auto& c : found)
        pts.push_back(c.z);

    const double h = detail::cell_size(region);
    std::vector<Zero> zeros;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double radius = std::min(0.4 * detail::nearest_other(pts, i, region), 0.5 * h);
        const double w = winding_number(f, df, ContourSpec{pts[i], radius, 32}, cfg);
        const int m = int(std::lround(w));
        if (std::abs(w - m) > 0.1 || m < 1) {
            std::ostringstream os;
            os << "zero at " << pts[i] << " has non-integral or non-positive winding " << w;
            throw ZeroFindingError(os.str());
        }
        zeros.push_back({pts[i], m});
    }

    // Local minima of |f| on the seed grid without a nearby zero are checked
    // with the argument principle.
    auto at = [&](int a, int b) {
        if (region.periodic) {
            a = ((a % g) + g) % g;
            b = ((b % g) + g) % g;
        } else if (a < 0 || b < 0 || a >= g || b >= g) {
            return std::numeric_limits<double>::infinity();
        }
        return seed_abs[std::size_t(a) * g + b];
    };
    for (int a = 0; a < g; ++a) {
        for (int b = 0; b < g; ++b) {
            const double v = at(a, b);
            if (!std::isfinite(v))
                continue;
            bool local_min = true;
            for (int da = -1; da <= 1 && local_min; ++da)
                for (int db = -1; db <= 1; ++db)
                    if ((da != 0 || db != 0) && at(a + da, b + db) < v) {
                        local_min = false;
                        break;
                    }
            if (!local_min)
                continue;
            const cplx seed = region.point((a + 0.5) / g, (b + 0.5) / g);
            const double radius = 1.5 * h;
            bool covered = false;
            for (const auto& p : pts)
                if (region.distance(p, seed) < 2.0 * radius) {
                    covered = true;
                    break;
                }
            if (covered)
                continue;
            double w = 0.0;
            try {
                w = winding_number(f, df, ContourSpec{seed, radius, 64}, cfg);
            } catch (const ConvergenceError&) {
                continue;
            }
            if (w > 0.5) {
                std::ostringstream os;
                os << "Newton failed to converge near a zero in grid cell (" << a << ", " << b
                   << ") centered at " << seed;
                throw ZeroFindingError(os.str());
            }
        }
    }
    return zeros;
}

struct Pole {
    cplx z;
    int order = 1;
};

/// Poles of a meromorphic f located as simple zeros of u = -f/f' (Newton on
/// u with u' = -1 + f f''/f'^2), then refined by the first moment of f'/f on a
/// small circle. Zeros of f also zero u; they are discarded by the winding
/// sign.
template <ComplexFunction F, ComplexFunction DF, ComplexFunction D2F>
std::vector<Pole> find_poles(const F& f, const DF& df, const D2F& d2f, const Region& region,
                             const NumericConfig& cfg = {}) {
    region.validate();
    const int g = region.grid;
    const double h = detail::cell_size(region);
    std::vector<detail::Candidate> found;
    for (int a = 0; a < g; ++a) {
        for (int b = 0; b < g; ++b) {
            cplx z = region.point((a + 0.5) / g, (b + 0.5) / g);
            bool converged = false;
            for (int it = 0; it < cfg.newton_max_iter; ++it) {
                cplx fz, dz, d2z;
                if (!detail::safe_eval(f, z, fz) || !detail::safe_eval(df, z, dz) ||
                    !detail::safe_eval(d2f, z, d2z)) {
                    // Evaluation hit the pole guard: the iterate already sits on a pole.
                    converged = it > 0;
                    break;
                }
                if (dz == cplx{})
                    break;
                const cplx u = -fz / dz;
                const cplx du = -1.0 + fz * d2z / (dz * dz);
                if (du == cplx{})
                    break;
                const cplx step = u / du;
                z -= step;
                if (std::abs(step) <= 1e-12 * (1.0 + std::abs(z))) {
                    converged = true;
                    break;
                }
            }
            if (!converged)
                continue;
            if (region.periodic)
                z = region.reduce(z);
            else if (!region.contains(z))
                continue;
            detail::merge_candidate(found, region, z, 0.0, 1e-7);
        }
    }

    std::vector<cplx> pts;
    for (const auto& c : found)
        pts.push_back(c.z);
    std::vector<Pole> poles;
    auto log_derivative = [&](cplx z) { return cplx(df(z)) / cplx(f(z)); };
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double radius = std::min({0.4 * detail::nearest_other(pts, i, region), 0.5 * h, 1e-2});
        const ContourSpec circle{pts[i], radius, 32};
        const double w = contour_integral(log_derivative, circle, cfg).real();
        const int m = int(std::lround(w));
        if (std::abs(w - m) > 0.1)
            throw ZeroFindingError("pole candidate with non-integral winding");
        if (m >= 0)
            continue; // a zero of f, not a pole
        auto moment = [&](cplx z) { return (z - pts[i]) * log_derivative(z); };
        const cplx shift = contour_integral(moment, circle, cfg) / double(m);
        cplx z = pts[i] + shift;
        if (region.periodic)
            z = region.reduce(z);
        poles.push_back({z, -m});
    }
    return poles;
}

/// Mean of a 1-periodic function over [0, 1): trapezoidal rule with doubling.
template <class Fn>
cplx periodic_mean(const Fn& f, int samples = 32, const NumericConfig& cfg = {}) {
    std::size_t n = std::size_t(samples);
    cplx sum{};
    double mag = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const cplx v = detail::sample(f, double(k) / double(n));
        sum += v;
        mag += std::abs(v);
    }
    cplx estimate = sum / double(n);
    const std::size_t max_n = std::size_t(1) << cfg.contour_max_log2;
    while (n < max_n) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx v = detail::sample(f, (2.0 * double(k) + 1.0) / (2.0 * double(n)));
            sum += v;
            mag += std::abs(v);
        }
        n *= 2;
        const cplx refined = sum / double(n);
        const double diff = std::abs(refined - estimate);
        estimate = refined;
        if (diff <= cfg.contour_rel_tol * std::max(std::abs(refined), mag / double(n)))
            return estimate;
    }
    throw ConvergenceError("periodic quadrature did not converge; singularity near the path");
}

/// Central difference with one Richardson step over (h, h/2), h scaled by |at|+1.
template <ComplexFunction F>
cplx numeric_derivative(const F& f, cplx at, const NumericConfig& cfg = {}) {
    const double h = cfg.diff_step * (std::abs(at) + 1.0);
    auto central = [&](double s) { return (cplx(f(at + s)) - cplx(f(at - s))) / (2.0 * s); };
    const cplx coarse = central(h);
    const cplx fine = central(0.5 * h);
    const cplx extrapolated = (4.0 * fine - coarse) / 3.0;
    if (std::abs(extrapolated - fine) > cfg.diff_tol * (1.0 + std::abs(extrapolated))) {
        std::ostringstream os;
        os << "numeric derivative at " << at << " unstable: levels differ by " << std::abs(extrapolated - fine);
        throw ConvergenceError(os.str());
    }
    return extrapolated;
}

} // namespace hurwitz

#pragma once

// The covering map of the genus-one Hurwitz space with four double poles,
//   lambda(z) = sum_i ( wp(z - a_i) u_i + 1/2 (wp'/wp)(z - a_i) s_i ) + c,
// its Dubrovin flat coordinates and the residue formulas for the metric and
// the structure constants.

#include "hurwitz/elliptic.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hurwitz {

struct RawModuli {
    std::array<cplx, 4> a{};
    std::array<cplx, 4> u{};
    std::array<cplx, 4> s{};
    cplx c{};
    cplx omega1{0.5, 0.0};
    cplx omega2{0.0, 0.5};

    Lattice lattice() const { return Lattice(omega1, omega2); }

    void validate() const {
        const Lattice L = lattice();
        if (a[0] != cplx{})
            throw DomainError("a1 must be 0");
        if (s[0] != cplx{})
            throw DomainError("s1 must be 0");
        double scale = 0.0;
        for (const auto& x : s)
            scale = std::max(scale, std::abs(x));
        if (std::abs(s[1] + s[2] + s[3]) > 1e-12 * std::max(scale, 1.0))
            throw DomainError("simple-pole coefficients must sum to zero");
        for (std::size_t i = 0; i < 4; ++i) {
            if (u[i] == cplx{})
                throw DomainError("double-pole coefficient u" + std::to_string(i + 1) + " vanishes");
            for (std::size_t j = 0; j < i; ++j)
                if (L.distance_to_lattice(a[i] - a[j]) < 1e-9)
                    throw DomainError("pole positions must be distinct modulo the lattice");
        }
    }
};

enum class Coord { t1, t2, t3, t4, v2, v3, v4, V2, V3, V4, B1, C1 };
inline constexpr int flat_dim = 12;

inline const char* coord_name(Coord c) {
    static const char* names[flat_dim] = {"t1", "t2", "t3", "t4", "v2", "v3", "v4", "V2", "V3", "V4", "B1", "C1"};
    return names[int(c)];
}

inline Coord coord_from_name(const std::string& s) {
    for (int k = 0; k < flat_dim; ++k)
        if (s == coord_name(Coord(k)))
            return Coord(k);
    if (s == "tau")
        return Coord::B1;
    throw DomainError("unknown flat coordinate '" + s + "'");
}

inline Coord t_coord(int i) { return Coord(i - 1); }
inline Coord v_coord(int k) { return Coord(int(Coord::v2) + k - 2); }
inline Coord V_coord(int k) { return Coord(int(Coord::V2) + k - 2); }

struct FlatCoords {
    std::array<cplx, 4> t{};  // t1..t4
    std::array<cplx, 3> v{};  // v2..v4
    std::array<cplx, 3> V{};  // V2..V4
    cplx B1{0.0, 1.0};
    cplx C1{};

    cplx tau() const { return B1; }
    /// v_i, i = 1..4, with v_1 = 0.
    cplx pole(int i) const { return i == 1 ? cplx{} : v[std::size_t(i - 2)]; }
    /// V_i, i = 1..4, with V_1 = 0.
    cplx simple(int i) const { return i == 1 ? cplx{} : V[std::size_t(i - 2)]; }

    cplx get(Coord c) const {
        const int k = int(c);
        if (k < 4)
            return t[std::size_t(k)];
        if (k < 7)
            return v[std::size_t(k - 4)];
        if (k < 10)
            return V[std::size_t(k - 7)];
        return k == 10 ? B1 : C1;
    }
    void set(Coord c, cplx x) {
        const int k = int(c);
        if (k < 4)
            t[std::size_t(k)] = x;
        else if (k < 7)
            v[std::size_t(k - 4)] = x;
        else if (k < 10)
            V[std::size_t(k - 7)] = x;
        else if (k == 10)
            B1 = x;
        else
            C1 = x;
    }

    void validate() const {
        for (int k = 0; k < flat_dim; ++k)
            if (!is_finite(get(Coord(k))))
                throw DomainError(std::string("flat coordinate ") + coord_name(Coord(k)) + " is not finite");
        if (!(B1.imag() > 0.0))
            throw DomainError("B1 = tau must have positive imaginary part");
        const Lattice L = Lattice::normalized(B1);
        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j < i; ++j)
                if (L.distance_to_lattice(pole(i) - pole(j)) < 1e-9)
                    throw DomainError("v_i must be distinct modulo Z + tau Z");
    }

    /// Residue formulas divide by t_i^2.
    void require_nondegenerate() const {
        validate();
        for (int i = 0; i < 4; ++i)
            if (std::abs(t[std::size_t(i)]) < 1e-12)
                throw DomainError("t" + std::to_string(i + 1) + " = 0 is excluded from residue computations");
    }
};

/// Tangent vector sum_k c_k d/d(coord k).
struct Direction {
    std::array<cplx, flat_dim> c{};

    Direction() = default;
    Direction(Coord k) { c[std::size_t(int(k))] = 1.0; }

    Direction operator+(const Direction& o) const {
        Direction r;
        for (std::size_t k = 0; k < c.size(); ++k)
            r.c[k] = c[k] + o.c[k];
        return r;
    }
    friend Direction operator*(cplx s, const Direction& d) {
        Direction r;
        for (std::size_t k = 0; k < d.c.size(); ++k)
            r.c[k] = s * d.c[k];
        return r;
    }
    cplx operator[](Coord k) const { return c[std::size_t(int(k))]; }
};

inline cplx lambda_raw(cplx z, const RawModuli& raw) {
    raw.validate();
    const Lattice L = raw.lattice();
    cplx acc = raw.c;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto p = wp_all(z - raw.a[i], L, 1);
        acc += p[0] * raw.u[i];
        if (raw.s[i] != cplx{}) {
            if (std::abs(p[0]) < 1e-9 * std::abs(p[1])) {
                std::ostringstream os;
                os << "lambda evaluated at a zero of wp(z - a" << i + 1 << "), z = " << z;
                throw PoleError(os.str());
            }
            acc += 0.5 * raw.s[i] * p[1] / p[0];
        }
    }
    return acc;
}

inline FlatCoords raw_to_flat(const RawModuli& raw, const NumericConfig& cfg = {}) {
    raw.validate();
    const cplx two_w1 = 2.0 * raw.omega1;
    const auto k = constants(raw.lattice(), cfg);
    FlatCoords f;
    cplx usum{};
    for (std::size_t i = 0; i < 4; ++i) {
        f.t[i] = -std::sqrt(raw.u[i]) / raw.omega1;
        usum += raw.u[i];
    }
    for (std::size_t i = 1; i < 4; ++i) {
        f.v[i - 1] = raw.a[i] / two_w1;
        f.V[i - 1] = raw.s[i] / two_w1;
    }
    f.B1 = raw.omega2 / raw.omega1;
    f.C1 = raw.c - k.eta1 / raw.omega1 * usum;
    return f;
}

/// Inverse of raw_to_flat for a chosen omega1.
inline RawModuli flat_to_raw(const FlatCoords& f, cplx omega1 = 0.5, const NumericConfig& cfg = {}) {
    f.validate();
    RawModuli r;
    r.omega1 = omega1;
    r.omega2 = omega1 * f.B1;
    const cplx two_w1 = 2.0 * omega1;
    cplx usum{};
    for (std::size_t i = 0; i < 4; ++i) {
        r.u[i] = f.t[i] * f.t[i] * omega1 * omega1;
        usum += r.u[i];
    }
    for (std::size_t i = 1; i < 4; ++i) {
        r.a[i] = f.v[i - 1] * two_w1;
        r.s[i] = f.V[i - 1] * two_w1;
    }
    const auto k = constants(r.lattice(), cfg);
    r.c = f.C1 + k.eta1 / omega1 * usum;
    return r;
}

struct CoveringConfig {
    NumericConfig numeric{};
    int zero_grid = 32;
    double zero_tol = 1e-8;
    double radius_cap = 0.2;
    int max_rows = 40;
    /// Relative disagreement between the two residue strategies that is
    /// treated as an error.
    double strategy_tol = 1e-6;
};

struct Singularity {
    cplx z;
    int order;      // pole order of lambda' (critical points: 1 for a simple zero)
    double radius;  // contour radius
};

struct ResidueValue {
    cplx value;       // strategy A
    cplx strategy_b;
    double discrepancy;
};

struct LambdaValues {
    cplx value, d1, d2;
};

/// lambda in flat coordinates on Z + tau Z, its partial derivatives, and
/// residue sums over critical points (strategy A) or poles (strategy B).
class Covering {
public:
    explicit Covering(FlatCoords coords, CoveringConfig cfg = {})
        : x_(coords), cfg_(cfg), lattice_(Lattice::normalized(coords.B1)) {
        x_.validate();
        lattice_.max_rows = cfg_.max_rows;
        g2_ = eisenstein_g2(x_.B1, cfg_.max_rows);
        g2_dtau_ = eisenstein_g2_dtau(x_.B1, cfg_.max_rows);
        for (const auto& t : x_.t)
            tsq_ += t * t;
    }

    const FlatCoords& coords() const { return x_; }
    const CoveringConfig& config() const { return cfg_; }
    cplx tau() const { return x_.B1; }
    const Lattice& lattice() const { return lattice_; }
    /// eta1 omega1, equal to G2/4 on every lattice with this tau.
    cplx eta1_omega1() const { return 0.25 * g2_; }

    LambdaValues values(cplx v) const {
        const auto jets = pole_jets(v, false);
        LambdaValues r{x_.C1 + eta1_omega1() * tsq_, 0.0, 0.0};
        for (int i = 1; i <= 4; ++i) {
            const auto& p = jets[std::size_t(i - 1)].p;
            const cplx q = 0.25 * x_.t[std::size_t(i - 1)] * x_.t[std::size_t(i - 1)];
            r.value += q * p[0];
            r.d1 += q * p[1];
            r.d2 += q * p[2];
            const cplx V = x_.simple(i);
            if (V != cplx{}) {
                const auto lq = log_derivative_jet(p, v, i);
                r.value += 0.5 * V * lq[0];
                r.d1 += 0.5 * V * lq[1];
                r.d2 += 0.5 * V * lq[2];
            }
        }
        return r;
    }

    cplx lambda(cplx v) const { return values(v).value; }
    cplx dlambda_dv(cplx v) const { return values(v).d1; }

    /// All twelve partial derivatives of lambda at fixed v, followed by lambda'.
    std::array<cplx, flat_dim + 1> partials(cplx v) const {
        const auto jets = pole_jets(v, true);
        std::array<cplx, flat_dim + 1> out{};
        const cplx e = eta1_omega1();
        cplx dtau = 0.25 * g2_dtau_ * tsq_;
        cplx d1{};
        for (int i = 1; i <= 4; ++i) {
            const auto& jet = jets[std::size_t(i - 1)];
            const auto& p = jet.p;
            const cplx t = x_.t[std::size_t(i - 1)];
            const cplx V = x_.simple(i);
            out[std::size_t(int(t_coord(i)))] = 0.5 * p[0] * t + 2.0 * e * t;
            cplx dv = 0.25 * t * t * p[1];
            dtau += 0.25 * t * t * jet.dtau[0];
            if (i > 1) {
                const auto lq = log_derivative_jet(p, v, i);
                out[std::size_t(int(V_coord(i)))] = 0.5 * lq[0];
                dv += 0.5 * V * lq[1];
                if (V != cplx{})
                    dtau += 0.5 * V * (jet.dtau[1] * p[0] - p[1] * jet.dtau[0]) / (p[0] * p[0]);
            }
            d1 += dv;
            if (i > 1)
                out[std::size_t(int(v_coord(i)))] = -dv;
        }
        out[std::size_t(int(Coord::B1))] = dtau;
        out[std::size_t(int(Coord::C1))] = 1.0;
        out[flat_dim] = d1;
        return out;
    }

    cplx partial(const Direction& d, cplx v) const {
        const auto p = partials(v);
        cplx acc{};
        for (std::size_t k = 0; k < flat_dim; ++k)
            if (d.c[k] != cplx{})
                acc += d.c[k] * p[k];
        return acc;
    }

    /// One partial derivative; only the summand it depends on is evaluated,
    /// so d lambda/dv_k may be taken at the other poles.
    cplx dlambda(Coord c, cplx v) const {
        const int k = int(c);
        if (c == Coord::B1)
            return partials(v)[std::size_t(k)];
        if (c == Coord::C1)
            return 1.0;
        const int i = k < 4 ? k + 1 : (k < 7 ? k - 2 : k - 5);
        const cplx w = v - x_.pole(i);
        detail::check_pole(lattice_, w);
        const auto p = detail::wp_normalized_jet(w, x_.B1, g2_, g2_dtau_, lattice_.max_rows, false).p;
        const cplx t = x_.t[std::size_t(i - 1)];
        if (k < 4)
            return 0.5 * p[0] * t + 2.0 * eta1_omega1() * t;
        const auto lq = log_derivative_jet(p, v, i);
        if (k < 7)
            return -(0.25 * t * t * p[1] + 0.5 * x_.simple(i) * lq[1]);
        return 0.5 * lq[0];
    }

    /// Singular points of lambda' and of the partials in the fundamental
    /// domain: the v_i (order 3 in lambda') and the zeros of wp(v - v_j),
    /// j >= 2 (order 2 when V_j != 0, otherwise poles of d lambda/dV_j only).
    std::vector<Singularity> poles() const {
        std::vector<Singularity> out;
        for (int i = 1; i <= 4; ++i)
            out.push_back({x_.pole(i), 3, 0.0});
        const auto z0 = wp_zeros();
        for (int j = 2; j <= 4; ++j)
            for (const auto& z : z0)
                out.push_back({domain().reduce(x_.pole(j) + z), x_.simple(j) != cplx{} ? 2 : 0, 0.0});
        return out;
    }

    /// Simple zeros of lambda'; the count is checked against the total pole
    /// order by the argument principle.
    const std::vector<Singularity>& critical_points() const {
        analyse();
        return *critical_;
    }
    const std::vector<Singularity>& pole_contours() const {
        analyse();
        return *poles_;
    }

    int expected_critical_count() const {
        int n = 0;
        for (const auto& p : poles())
            n += p.order;
        return n;
    }

    /// Residue sums of prod_k d_k lambda / lambda' for each list of
    /// directions, both strategies.
    std::vector<ResidueValue> residues(const std::vector<std::vector<Direction>>& products) const {
        x_.require_nondegenerate();
        analyse();
        const std::size_t n = products.size();
        std::vector<cplx> a(n), b(n);

        for (const auto& cp : *critical_) {
            auto f = [&](cplx v, std::vector<cplx>& out) {
                const auto p = partials(v);
                for (std::size_t k = 0; k < n; ++k)
                    out[k] = product(products[k], p) / p[flat_dim];
            };
            const auto r = contour_integral_vector(f, n, ContourSpec{cp.z, cp.radius, 32}, cfg_.numeric);
            for (std::size_t k = 0; k < n; ++k)
                a[k] += r[k];
        }

        for (const auto& pole : *poles_) {
            auto f = [&](cplx v, std::vector<cplx>& out) {
                auto p = partials(v);
                // Replace the tau-partial by its elliptic part -h/(2 pi i).
                const cplx h = fs_ellipticize(p[std::size_t(int(Coord::B1))], p[flat_dim], v, x_.B1, lattice_.max_rows);
                p[std::size_t(int(Coord::B1))] = -h / two_pi_i;
                for (std::size_t k = 0; k < n; ++k)
                    out[k] = product(products[k], p) / p[flat_dim];
            };
            const auto r = contour_integral_vector(f, n, ContourSpec{pole.z, pole.radius, 64}, cfg_.numeric);
            for (std::size_t k = 0; k < n; ++k)
                b[k] -= r[k];
        }

        std::vector<ResidueValue> out(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double d = std::abs(a[k] - b[k]);
            out[k] = {a[k], b[k], d};
            if (d > cfg_.strategy_tol * (1.0 + std::abs(a[k]))) {
                std::ostringstream os;
                os << "residue strategies disagree by " << d << " (critical points " << a[k] << ", poles " << b[k]
                   << ")";
                throw InconsistencyError(os.str());
            }
        }
        return out;
    }

    ResidueValue metric(const Direction& x, const Direction& y) const { return residues({{x, y}})[0]; }

    ResidueValue structure_constant(const Direction& x, const Direction& y, const Direction& z) const {
        return residues({{x, y, z}})[0];
    }

    Region domain() const { return Region{0.0, 1.0, x_.B1, cfg_.zero_grid, true}; }

private:
    FlatCoords x_;
    CoveringConfig cfg_;
    Lattice lattice_;
    cplx g2_, g2_dtau_;
    cplx tsq_{};
    mutable std::optional<std::vector<cplx>> wp_zeros_;
    mutable std::optional<std::vector<Singularity>> critical_, poles_;

    std::array<detail::NormalizedJet, 4> pole_jets(cplx v, bool with_tau) const {
        std::array<detail::NormalizedJet, 4> out;
        for (int i = 1; i <= 4; ++i) {
            const cplx w = v - x_.pole(i);
            detail::check_pole(lattice_, w);
            out[std::size_t(i - 1)] = detail::wp_normalized_jet(w, x_.B1, g2_, g2_dtau_, lattice_.max_rows, with_tau);
        }
        return out;
    }

    // (wp'/wp) and its first two derivatives.
    std::array<cplx, 3> log_derivative_jet(const std::array<cplx, 4>& p, cplx v, int i) const {
        if (std::abs(p[0]) < 1e-9 * std::abs(p[1])) {
            std::ostringstream os;
            os << "lambda evaluated at a zero of wp(v - v" << i << "), v = " << v;
            throw PoleError(os.str());
        }
        const cplx r = p[1] / p[0];
        return {r, p[2] / p[0] - r * r, p[3] / p[0] - 3.0 * p[2] * p[1] / (p[0] * p[0]) + 2.0 * r * r * r};
    }

    static cplx product(const std::vector<Direction>& dirs, const std::array<cplx, flat_dim + 1>& p) {
        cplx acc = 1.0;
        for (const auto& d : dirs) {
            cplx s{};
            for (std::size_t k = 0; k < flat_dim; ++k)
                if (d.c[k] != cplx{})
                    s += d.c[k] * p[k];
            acc *= s;
        }
        return acc;
    }

    const std::vector<cplx>& wp_zeros() const {
        if (!wp_zeros_) {
            Region r = domain();
            r.grid = 8;
            auto f = [&](cplx z) { return wp(z, lattice_); };
            auto df = [&](cplx z) { return wp_prime(z, lattice_); };
            const auto zs = find_zeros(f, df, r, 1e-10, cfg_.numeric);
            int count = 0;
            std::vector<cplx> pts;
            for (const auto& z : zs) {
                count += z.multiplicity;
                pts.push_back(z.z);
            }
            if (count != 2)
                throw ZeroFindingError("wp must have two zeros in the fundamental domain, found " +
                                       std::to_string(count));
            wp_zeros_ = pts;
        }
        return *wp_zeros_;
    }

    void analyse() const {
        if (critical_)
            return;
        const Region region = domain();
        auto f = [&](cplx v) { return values(v).d1; };
        auto df = [&](cplx v) { return values(v).d2; };
        double scale = 0.0;
        for (const auto& t : x_.t)
            scale = std::max(scale, std::abs(t * t));
        for (const auto& V : x_.V)
            scale = std::max(scale, std::abs(V));
        const auto zeros = find_zeros(f, df, region, cfg_.zero_tol * std::max(scale, 1.0), cfg_.numeric);

        std::vector<Singularity> pl;
        for (const auto& p : poles()) {
            // A zero of wp(v - v_j) that lands on another singularity adds nothing new.
            bool merged = false;
            if (p.order == 0) {
                for (const auto& q : pl)
                    merged = merged || region.distance(p.z, q.z) < 1e-6;
                for (const auto& z : zeros)
                    merged = merged || region.distance(p.z, z.z) < 1e-6;
            }
            if (!merged)
                pl.push_back(p);
        }
        int count = 0;
        for (const auto& z : zeros) {
            if (z.multiplicity != 1) {
                std::ostringstream os;
                os << "degenerate critical point of lambda at " << z.z << " (multiplicity " << z.multiplicity << ")";
                throw ZeroFindingError(os.str());
            }
            count += 1;
        }
        const int expected = expected_critical_count();
        if (count != expected) {
            std::ostringstream os;
            os << "found " << count << " critical points of lambda, argument principle requires " << expected;
            throw ZeroFindingError(os.str());
        }

        std::vector<cplx> all;
        for (const auto& z : zeros)
            all.push_back(z.z);
        for (const auto& p : pl)
            all.push_back(p.z);
        auto radius = [&](std::size_t i) {
            const double d = detail::nearest_other(all, i, region);
            if (d < 1e-6)
                throw DomainError("singularities of lambda' coincide; coordinates are not generic");
            return std::min(0.5 * d, cfg_.radius_cap);
        };
        std::vector<Singularity> crit, pol;
        for (std::size_t i = 0; i < zeros.size(); ++i)
            crit.push_back({zeros[i].z, 1, radius(i)});
        for (std::size_t i = 0; i < pl.size(); ++i)
            pol.push_back({pl[i].z, pl[i].order, radius(zeros.size() + i)});
        critical_ = std::move(crit);
        poles_ = std::move(pol);
    }
};

inline cplx lambda_flat(cplx v, const FlatCoords& x) { return Covering(x).lambda(v); }
inline cplx dlambda(Coord c, cplx v, const FlatCoords& x) { return Covering(x).dlambda(c, v); }

/// The constant table of the flat metric: eta(t_i, t_i) = 1/2,
/// eta(v_k, V_k) = 1/2, eta(B1, C1) = 1/(2 pi i).
inline cplx metric_table(Coord a, Coord b) {
    const int i = std::min(int(a), int(b)), j = std::max(int(a), int(b));
    if (i == j && i < 4)
        return 0.5;
    if (i >= 4 && i < 7 && j == i + 3)
        return 0.5;
    if (i == int(Coord::B1) && j == int(Coord::C1))
        return 1.0 / two_pi_i;
    return 0.0;
}

struct MetricMatrix {
    std::array<std::array<cplx, flat_dim>, flat_dim> value{};
    double max_strategy_discrepancy = 0.0;
};

inline MetricMatrix metric_matrix(const Covering& cov) {
    std::vector<std::vector<Direction>> products;
    for (int a = 0; a < flat_dim; ++a)
        for (int b = a; b < flat_dim; ++b)
            products.push_back({Direction(Coord(a)), Direction(Coord(b))});
    const auto r = cov.residues(products);
    MetricMatrix m;
    std::size_t k = 0;
    for (int a = 0; a < flat_dim; ++a)
        for (int b = a; b < flat_dim; ++b, ++k) {
            m.value[std::size_t(a)][std::size_t(b)] = m.value[std::size_t(b)][std::size_t(a)] = r[k].value;
            m.max_strategy_discrepancy = std::max(m.max_strategy_discrepancy, r[k].discrepancy);
        }
    return m;
}

inline cplx metric(const FlatCoords& x, const Direction& a, const Direction& b) {
    return Covering(x).metric(a, b).value;
}

inline cplx structure_constant(const FlatCoords& x, const Direction& a, const Direction& b, const Direction& c) {
    return Covering(x).structure_constant(a, b, c).value;
}

/// Rebuilds every flat coordinate from lambda alone: pole positions,
/// Laurent coefficients at the poles and the period integral of lambda.
inline FlatCoords recompute_flat(const Covering& cov) {
    const FlatCoords& in = cov.coords();
    in.require_nondegenerate();
    const CoveringConfig& cfg = cov.config();
    const cplx tau = in.B1;
    const Lattice& L = cov.lattice();
    Region region = cov.domain();
    region.grid = std::max(region.grid, 24);

    auto f = [&](cplx v) { return cov.values(v).value; };
    auto df = [&](cplx v) { return cov.values(v).d1; };
    auto d2f = [&](cplx v) { return cov.values(v).d2; };
    const auto found = find_poles(f, df, d2f, region, cfg.numeric);

    std::vector<cplx> doubles, all;
    for (const auto& p : found) {
        all.push_back(p.z);
        if (p.order == 2)
            doubles.push_back(p.z);
        else if (p.order != 1)
            throw InconsistencyError("lambda has a pole of unexpected order " + std::to_string(p.order));
    }
    if (doubles.size() != 4)
        throw InconsistencyError("lambda must have four double poles, found " + std::to_string(doubles.size()));

    // Nearest representative of p to `near` modulo the lattice.
    auto nearest_rep = [&](cplx p, cplx near) { return near + L.reduce(p - near); };
    auto take = [&](cplx target) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < doubles.size(); ++k)
            if (L.distance_to_lattice(doubles[k] - target) < L.distance_to_lattice(doubles[best] - target))
                best = k;
        const cplx p = nearest_rep(doubles[best], target);
        doubles.erase(doubles.begin() + long(best));
        return p;
    };
    std::array<cplx, 4> pos{};
    const cplx origin = take(0.0);
    for (int i = 2; i <= 4; ++i)
        pos[std::size_t(i - 1)] = take(in.pole(i) + origin) - origin;

    FlatCoords out;
    out.B1 = tau;
    for (int i = 2; i <= 4; ++i)
        out.v[std::size_t(i - 2)] = pos[std::size_t(i - 1)];

    auto isolation = [&](cplx p) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& q : all) {
            const double r = region.distance(p, q);
            if (r > 1e-9)
                d = std::min(d, r);
        }
        return std::min(0.5 * d, cfg.radius_cap);
    };
    // A pole missed by the grid search would sit between two nested circles;
    // shrink until the coefficients on both agree.
    auto stable_contour = [&](cplx p) {
        double r = isolation(p);
        for (int k = 0; k < 12; ++k) {
            const ContourSpec outer{p, r, 64}, inner{p, 0.5 * r, 64};
            const cplx a = laurent_coefficient(f, outer, -2, cfg.numeric);
            const cplx b = laurent_coefficient(f, inner, -2, cfg.numeric);
            const cplx c = laurent_coefficient(f, outer, -1, cfg.numeric);
            const cplx d = laurent_coefficient(f, inner, -1, cfg.numeric);
            if (std::abs(a - b) <= 1e-10 * (1.0 + std::abs(a)) && std::abs(c - d) <= 1e-10 * (1.0 + std::abs(a)))
                return inner;
            r *= 0.5;
        }
        throw ConvergenceError("Laurent coefficients at a pole of lambda do not stabilise");
    };
    for (int i = 1; i <= 4; ++i) {
        const cplx p = pos[std::size_t(i - 1)] + origin;
        const ContourSpec around = stable_contour(p);
        const cplx a2 = laurent_coefficient(f, around, -2, cfg.numeric);
        const cplx t = std::sqrt(4.0 * a2);
        const cplx ref = in.t[std::size_t(i - 1)];
        if (std::abs(t) < 1e-8)
            throw InconsistencyError("t" + std::to_string(i) + " vanishes; branch cannot be matched");
        out.t[std::size_t(i - 1)] = std::abs(t - ref) <= std::abs(t + ref) ? t : -t;
        if (i > 1)
            out.V[std::size_t(i - 2)] = -laurent_coefficient(f, around, -1, cfg.numeric);
    }

    // C1: mean of lambda over a horizontal period, corrected by the integer
    // windings of the wp'/wp summands along the chosen path.
    double height = 0.0;
    for (int attempt = 0;; ++attempt) {
        bool clear = true;
        for (const auto& q : all) {
            for (double x = 0.0; x <= 1.0 && clear; x += 1.0 / 512.0)
                if (region.distance(cplx(x, height), q) < 0.05)
                    clear = false;
        }
        if (clear)
            break;
        if (attempt > 40)
            throw ConvergenceError("no pole-free horizontal period path for the C1 integral");
        height = 0.23 + 0.1 * attempt;
        height = std::fmod(height, tau.imag());
    }
    const cplx mean = periodic_mean([&](cplx x) { return f(cplx(x.real(), height)); }, 64, cfg.numeric);
    cplx correction{};
    for (int j = 2; j <= 4; ++j) {
        const cplx V = out.V[std::size_t(j - 2)];
        if (std::abs(V) < 1e-12)
            continue;
        const cplx vj = pos[std::size_t(j - 1)] + origin;
        auto logd = [&](cplx x) {
            const auto p = wp_all(cplx(x.real(), height) - vj, L, 1);
            return p[1] / p[0];
        };
        const cplx w = periodic_mean(logd, 64, cfg.numeric) / two_pi_i;
        correction += pi * I * V * std::round(w.real());
    }
    out.C1 = mean - correction;
    for (auto& V : out.V)
        if (std::abs(V) < 1e-13)
            V = 0.0;
    return out;
}

inline FlatCoords recompute_flat(const FlatCoords& x) { return recompute_flat(Covering(x)); }

/// Largest coordinate difference; v_k compared modulo the lattice.
inline double flat_distance(const FlatCoords& a, const FlatCoords& b) {
    const Lattice L = Lattice::normalized(a.B1);
    double d = 0.0;
    for (int k = 0; k < flat_dim; ++k) {
        const Coord c = Coord(k);
        const cplx diff = a.get(c) - b.get(c);
        d = std::max(d, (k >= 4 && k < 7) ? L.distance_to_lattice(diff) : std::abs(diff));
    }
    return d;
}

} // namespace hurwitz

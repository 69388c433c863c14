#include "hurwitz/restriction.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace hurwitz;

namespace {

RestrictedPoint sample_point(test_support::Sampler& s) {
    RestrictedPoint p;
    p.tau = s.in_box(-0.5, 0.5, 0.8, 2.0);
    for (auto& t : p.t)
        t = s.annulus(0.3, 1.0);
    p.C1 = s.disk(1.0);
    return p;
}

const RestrictedPoint& fixed_point() {
    static const RestrictedPoint p{cplx(0.2, 1.3), {cplx(0.7, 0.2), cplx(-0.4, 0.5), cplx(0.6, -0.6), cplx(0.35, 0.8)},
                                   cplx(0.3, -0.4)};
    return p;
}

} // namespace

TEST(RestrictedPoint, ValuesAtTauTwoI) {
    const FlatCoords x = restricted_point(cplx(0.0, 2.0), {1.0, 1.0, 1.0, 1.0}, 0.0);
    EXPECT_EQ(x.pole(1), cplx(0.0));
    EXPECT_LT(std::abs(x.pole(2) - cplx(0.5, 1.0)), 1e-15);
    EXPECT_LT(std::abs(x.pole(3) - 0.5), 1e-15);
    EXPECT_LT(std::abs(x.pole(4) - cplx(0.0, 1.0)), 1e-15);
    for (int k = 2; k <= 4; ++k)
        EXPECT_EQ(x.simple(k), cplx(0.0));
}

TEST(RestrictedPoint, DifferencesAreHalfPeriods) {
    const cplx tau{0.3, 1.1};
    const FlatCoords x = restricted_point(tau, {1.0, 1.0, 1.0, 1.0}, 0.0);
    const Lattice L = Lattice::normalized(tau);
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j) {
            const cplx d = x.pole(i) - x.pole(j);
            EXPECT_LT(L.distance_to_lattice(2.0 * d), 1e-14);
            EXPECT_GT(L.distance_to_lattice(d), 0.4);
            EXPECT_LT(std::abs(wp_prime(d, L)), 1e-8);
        }
}

TEST(RestrictedPoint, RejectsVanishingT) {
    EXPECT_THROW(restricted_point(cplx(0.0, 1.0), {1.0, 0.0, 1.0, 1.0}, 0.0), DomainError);
    EXPECT_THROW(restricted_point(cplx(0.0, -1.0), {1.0, 1.0, 1.0, 1.0}, 0.0), DomainError);
}

TEST(PairIndex, TableAndSymmetry) {
    EXPECT_EQ(pair_index(1, 3), 1);
    EXPECT_EQ(pair_index(2, 4), 1);
    EXPECT_EQ(pair_index(1, 2), 2);
    EXPECT_EQ(pair_index(3, 4), 2);
    EXPECT_EQ(pair_index(2, 3), 3);
    EXPECT_EQ(pair_index(1, 4), 3);
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j)
            if (i != j) {
                EXPECT_EQ(pair_index(i, j), pair_index(j, i));
            }
    EXPECT_THROW(pair_index(2, 2), DomainError);
    EXPECT_THROW(pair_index(0, 2), DomainError);
}

TEST(PairIndex, SelectsTheMatchingEValue) {
    test_support::Sampler s(5);
    for (int n = 0; n < 5; ++n) {
        const RestrictedPoint p = sample_point(s);
        const FlatCoords x = restricted_point(p);
        const Lattice L = Lattice::normalized(p.tau);
        const auto k = constants(L);
        const cplx e[3] = {k.e1, k.e2, k.e3};
        for (int i = 1; i <= 4; ++i)
            for (int j = i + 1; j <= 4; ++j)
                EXPECT_LT(std::abs(wp(x.pole(i) - x.pole(j), L) - e[pair_index(i, j) - 1]), 1e-9);
    }
}

TEST(PairIndex, ThetaConstantReduction) {
    // (1/4) wp(v_i - v_j) + eta1 omega1 = -(1/4) theta''/theta for the matching label.
    test_support::Sampler s(7);
    for (int n = 0; n < 5; ++n) {
        const RestrictedPoint p = sample_point(s);
        const FlatCoords x = restricted_point(p);
        const Covering cov(x);
        const ModularParameter mp(p.tau);
        for (int i = 1; i <= 4; ++i)
            for (int j = i + 1; j <= 4; ++j) {
                const int q = pair_theta_label(i, j);
                const cplx lhs = 0.25 * wp(x.pole(i) - x.pole(j), cov.lattice()) + cov.eta1_omega1();
                const cplx rhs = -0.25 * theta_constant(q, mp, 2) / theta_constant(q, mp);
                EXPECT_LT(std::abs(lhs - rhs), 1e-9);
                EXPECT_LT(std::abs(lhs - (-0.5 * pi * I * X(q, mp))), 1e-9);
            }
        EXPECT_LT(std::abs(cov.eta1_omega1() + pi * I / 4.0 * gamma(mp)), 1e-10);
    }
}

TEST(RestrictedPotential, ThirdDerivativesMatchFiniteDifferences) {
    const RestrictedPoint& p = fixed_point();
    const RestrictedTensor c = restricted_closed_form(p);
    // Shift along restricted direction k by e.
    auto shifted = [&](RestrictedPoint q, int k, cplx e) {
        if (k < 4)
            q.t[std::size_t(k)] += e;
        else if (k == 4)
            q.C1 += e;
        else
            q.tau += e;
        return q;
    };
    const double h = 2e-3;
    for (int i = 0; i < restricted_dim; ++i)
        for (int j = i; j < restricted_dim; ++j)
            for (int k = j; k < restricted_dim; ++k) {
                // Mixed third difference with step h in each of the three slots.
                cplx acc{};
                for (int a = -1; a <= 1; a += 2)
                    for (int b = -1; b <= 1; b += 2)
                        for (int d = -1; d <= 1; d += 2)
                            acc += double(a * b * d) *
                                   restricted_potential(shifted(shifted(shifted(p, i, a * h), j, b * h), k, d * h));
                const cplx fd = acc / (8.0 * h * h * h);
                const cplx exact = c[std::size_t(i)][std::size_t(j)][std::size_t(k)];
                EXPECT_LT(std::abs(fd - exact), 2e-4 * (1.0 + std::abs(exact)))
                    << restricted_name(i) << "," << restricted_name(j) << "," << restricted_name(k);
            }
}

TEST(RestrictedConstants, ResiduesMatchClosedForms) {
    test_support::Sampler s(11);
    for (int n = 0; n < 2; ++n) {
        const RestrictedPoint p = sample_point(s);
        const auto rc = restricted_constants(p);
        EXPECT_LT(rc.max_strategy_discrepancy, 1e-8);
        for (int i = 0; i < restricted_dim; ++i)
            for (int j = 0; j < restricted_dim; ++j)
                for (int k = 0; k < restricted_dim; ++k)
                    EXPECT_LT(std::abs(rc.residue[std::size_t(i)][std::size_t(j)][std::size_t(k)] -
                                       rc.closed_form[std::size_t(i)][std::size_t(j)][std::size_t(k)]),
                              1e-7)
                        << restricted_name(i) << "," << restricted_name(j) << "," << restricted_name(k);
    }
}

TEST(RestrictedConstants, DisplayedValues) {
    const RestrictedPoint& p = fixed_point();
    const RestrictedTensor c = restricted_closed_form(p);
    const ModularParameter mp(p.tau);
    for (int i = 0; i < 4; ++i) {
        const cplx ti = p.t[std::size_t(i)];
        EXPECT_LT(std::abs(c[std::size_t(i)][std::size_t(i)][4] - 0.5), 1e-14);
        EXPECT_LT(std::abs(c[std::size_t(i)][std::size_t(i)][std::size_t(i)] + 0.75 * pi * I * ti * gamma(mp)), 1e-12);
        for (int j = 0; j < 4; ++j) {
            if (j == i)
                continue;
            const cplx tj = p.t[std::size_t(j)];
            const cplx expected = -tj * (pi * I / 2.0) * X(pair_theta_label(i + 1, j + 1), mp);
            EXPECT_LT(std::abs(c[std::size_t(i)][std::size_t(i)][std::size_t(j)] - expected), 1e-12);
        }
    }
    EXPECT_LT(std::abs(c[4][4][5] - 1.0 / two_pi_i), 1e-15);
}

TEST(Vanishing, ListedConstantsOnTheSubmanifold) {
    test_support::Sampler s(13);
    for (int n = 0; n < 2; ++n) {
        const auto v = vanishing_constants(sample_point(s));
        ASSERT_EQ(v.size(), 18u);
        for (const auto& e : v) {
            const bool tvv = e.name.rfind("c(t", 0) == 0 && e.name[5] == 'v';
            if (tvv)
                continue;
            EXPECT_LT(std::abs(e.value), 1e-8) << e.name;
        }
    }
}

TEST(Vanishing, TVVDoesNotVanish) {
    // The claimed vanishing of c(t_i, v_i, v_i) fails for lambda as given.
    const auto v = vanishing_constants(fixed_point());
    double largest = 0.0;
    for (const auto& e : v)
        if (e.name.rfind("c(t", 0) == 0 && e.name[5] == 'v')
            largest = std::max(largest, std::abs(e.value));
    EXPECT_GT(largest, 1e-2);
}

TEST(Vanishing, TTVDiagonalVanishesOnTheSubmanifold) {
    const Covering cov(restricted_point(fixed_point()));
    for (int i = 2; i <= 4; ++i)
        EXPECT_LT(std::abs(cov.structure_constant(t_coord(i), t_coord(i), v_coord(i)).value), 1e-8);
}

TEST(Rescaling, InverseAndJacobians) {
    const RestrictedPoint& p = fixed_point();
    const GWPoint g = RescalingMap::to_gw(p);
    const RestrictedPoint back = RescalingMap::from_gw(g);
    EXPECT_LT(std::abs(back.tau - p.tau), 1e-15);
    EXPECT_LT(std::abs(back.C1 - p.C1), 1e-15);
    for (std::size_t i = 0; i < 4; ++i)
        EXPECT_LT(std::abs(back.t[i] - p.t[i]), 1e-15);
    const RestrictedPoint via_original = RescalingMap::from_gw(to_original(g));
    for (std::size_t i = 0; i < 4; ++i)
        EXPECT_LT(std::abs(via_original.t[i] - p.t[i]), 1e-14);
    EXPECT_LT(std::abs(g.ti[2] - p.t[1] / std::pow(2.0, 0.25)), 1e-15);
    EXPECT_EQ(RescalingMap::restricted_index(0), 4);
    EXPECT_EQ(RescalingMap::restricted_index(gw_t_index), 5);
    EXPECT_EQ(RescalingMap::restricted_index(3), 1);
    EXPECT_LT(std::abs(RescalingMap::jacobian(0) * RescalingMap::jacobian(0) * RescalingMap::jacobian(gw_t_index) /
                           two_pi_i -
                       1.0),
              1e-15);
}

TEST(Theorem, AllThirdDerivativesAgree) {
    test_support::Sampler s(17);
    for (int n = 0; n < 2; ++n) {
        const RestrictedPoint p = sample_point(s);
        const auto th = theorem_check(p);
        EXPECT_EQ(th.entries.size(), 56u);
        EXPECT_LT(th.max_discrepancy, 1e-6);
        EXPECT_LT(th.max_strategy_discrepancy, 1e-8);
        for (const auto& e : th.entries)
            if (e.gw == std::array<int, 3>{0, 0, gw_t_index}) {
                EXPECT_LT(std::abs(e.hurwitz - 1.0), 1e-8);
            }
    }
}

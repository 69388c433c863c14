#include "hurwitz/gw_potential.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace hurwitz;

namespace {

GWPoint random_point(test_support::Sampler& s, Frame f, double im_lo = 0.8, double im_hi = 2.0) {
    GWPoint p;
    p.frame = f;
    p.t0 = s.disk(1.0);
    for (auto& x : p.ti)
        x = s.disk(1.0);
    p.t = s.tau(im_lo, im_hi);
    return p;
}

// X label paired with {i, j} in the tilde frame.
int tilde_pair_label(int i, int j) {
    const int lo = std::min(i, j), hi = std::max(i, j);
    if ((lo == 1 && hi == 3) || (lo == 2 && hi == 4))
        return 3;
    if ((lo == 1 && hi == 4) || (lo == 2 && hi == 3))
        return 4;
    return 2;
}

} // namespace

TEST(FCoeffs, F0AtTwoI) {
    const cplx t{0.0, 2.0};
    const auto f = f_coeffs(t);
    const ModularParameter mp(t);
    EXPECT_LT(std::abs(f[0] - (X(3, mp) - X(4, mp)) / 8.0), 1e-15);
}

TEST(FCoeffs, LinearRelations) {
    test_support::Sampler s(101);
    for (int n = 0; n < 20; ++n) {
        const cplx t = s.tau(0.8, 2.0);
        const ModularParameter mp(t);
        const auto [f0, f1, f2] = f_coeffs(t);
        EXPECT_LT(std::abs(f2 / 6.0 + f1 / 2.0 + gamma(mp) / 16.0), 1e-10);
        EXPECT_LT(std::abs(2.0 / 3.0 * f2 - f0 + X(3, mp) / 4.0), 1e-10);
        EXPECT_LT(std::abs(2.0 / 3.0 * f2 + f0 + X(4, mp) / 4.0), 1e-10);
        EXPECT_LT(std::abs(3.0 * f1 - f2 / 3.0 + X(2, mp) / 4.0), 1e-10);
    }
}

TEST(Potential, OnlyLeadingMonomialAtZeroTwistedCoordinates) {
    for (Frame f : {Frame::original, Frame::tilde}) {
        const GWPoint p{cplx(0.4, -0.2), {}, cplx(0.1, 1.3), f};
        EXPECT_LT(std::abs(potential(p) - 0.5 * p.t0 * p.t0 * p.t), 1e-15);
    }
}

TEST(Potential, FramesAgree) {
    test_support::Sampler s(103);
    for (int n = 0; n < 20; ++n) {
        const GWPoint q = random_point(s, Frame::tilde);
        const GWPoint o = to_original(q);
        const cplx a = potential(q), b = potential(o);
        EXPECT_LT(std::abs(a - b), 1e-10) << n;
        const GWPoint back = to_tilde(o);
        for (int i = 0; i < 4; ++i)
            EXPECT_LT(std::abs(back.ti[std::size_t(i)] - q.ti[std::size_t(i)]), 1e-15);
    }
}

TEST(Potential, TildeCoefficientOfT1SquaredT3Squared) {
    const GWPoint p{0.0, {}, cplx(0.2, 1.1), Frame::tilde};
    const auto jet = TripleJet::at(ThetaTriple{}, p.t);
    // the fourth derivative d1^2 d3^2 of c t1^2 t3^2 is 4c
    const cplx c = gw_partial(p, {0, 2, 0, 2, 0, 0}, jet) / 4.0;
    EXPECT_LT(std::abs(c + X(3, ModularParameter(p.t)) / 4.0), 1e-14);
}

TEST(ThirdDerivative, PairingEntries) {
    const GWPoint p{cplx(0.3, 0.1), {0.2, 0.5, -0.4, 0.7}, cplx(0.0, 1.2), Frame::tilde};
    EXPECT_LT(std::abs(third_derivative(p, 0, 0, gw_t_index) - 1.0), 1e-15);
    for (int i = 1; i <= 4; ++i)
        EXPECT_LT(std::abs(third_derivative(p, 0, i, i) - 1.0), 1e-15);
    const GWPoint o = to_original(p);
    EXPECT_LT(std::abs(third_derivative(o, 0, 0, gw_t_index) - 1.0), 1e-15);
    for (int i = 1; i <= 4; ++i)
        EXPECT_LT(std::abs(third_derivative(o, 0, i, i) - 0.5), 1e-15);
}

TEST(ThirdDerivative, TwistedPairsInTildeFrame) {
    test_support::Sampler s(107);
    const GWPoint p = random_point(s, Frame::tilde);
    const ModularParameter mp(p.t);
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) {
            if (i == j)
                continue;
            const cplx expected = -p.ti[std::size_t(j - 1)] * X(tilde_pair_label(i, j), mp);
            EXPECT_LT(std::abs(third_derivative(p, i, i, j) - expected), 1e-13) << i << j;
        }
    for (int i = 1; i <= 4; ++i) {
        const cplx expected = -1.5 * p.ti[std::size_t(i - 1)] * gamma(mp);
        EXPECT_LT(std::abs(third_derivative(p, i, i, i) - expected), 1e-13);
    }
}

TEST(ThirdDerivative, MatchesNumericDerivativeOfPotential) {
    test_support::Sampler s(109);
    const GWPoint p = random_point(s, Frame::original);
    const auto g_exact = gradient(p);
    for (int k = 0; k < gw_dim; ++k) {
        auto f = [&](cplx x) {
            GWPoint q = p;
            if (k == 0)
                q.t0 = x;
            else if (k <= 4)
                q.ti[std::size_t(k - 1)] = x;
            else
                q.t = x;
            return potential(q);
        };
        const cplx d = numeric_derivative(f, p.coordinate(k));
        EXPECT_LT(std::abs(d - g_exact[std::size_t(k)]), 1e-8 * (1.0 + std::abs(d))) << k;
    }
    // a mixed third derivative involving t
    auto h = [&](cplx x) {
        GWPoint q = p;
        q.t = x;
        return third_derivative(q, 1, 2, 3);
    };
    EXPECT_LT(std::abs(numeric_derivative(h, p.t) - gw_partial(p, {0, 1, 1, 1, 0, 1}, TripleJet::at(ThetaTriple{}, p.t))),
              1e-7);
}

TEST(Wdvv, RandomTildePoints) {
    test_support::Sampler s(113);
    for (int n = 0; n < 20; ++n) {
        GWPoint p = random_point(s, Frame::tilde);
        p.t = {s.uniform(-1.0, 1.0), 1.2};
        EXPECT_LT(wdvv_residual(p), 1e-7) << n;
    }
}

TEST(Wdvv, ZeroTwistedCoordinates) {
    const GWPoint p{cplx(0.4, 0.3), {}, cplx(0.1, 1.0), Frame::tilde};
    EXPECT_LT(wdvv_residual(p), 1e-14);
}

TEST(Wdvv, FrameIndependent) {
    test_support::Sampler s(127);
    for (int n = 0; n < 5; ++n) {
        const GWPoint p = random_point(s, Frame::tilde);
        EXPECT_LT(std::abs(wdvv_residual(p) - wdvv_residual(to_original(p))), 1e-8);
        EXPECT_LT(wdvv_residual(to_original(p)), 1e-7);
    }
}

TEST(Wdvv, FailsForNonHalphenCoefficients) {
    // X_p replaced by p-dependent constants: not a Halphen solution, WDVV must break.
    struct Constant {
        cplx derivative(int p, int k, cplx) const { return k == 0 ? cplx(0.3 * p, 0.1) : cplx{}; }
        bool in_domain(cplx) const { return true; }
    };
    const GWPoint p{0.2, {0.5, 0.3, -0.2, 0.4}, cplx(0.0, 1.0), Frame::tilde};
    EXPECT_GT(wdvv_residual(p, Constant{}), 1e-3);
    EXPECT_GT(halphen_residual(p.t, Constant{}), 1e-3);
}

TEST(Metric, ConstantAcrossPoints) {
    test_support::Sampler s(131);
    GWMetric mean = GWMetric::Zero();
    std::vector<GWMetric> all;
    for (int n = 0; n < 20; ++n) {
        all.push_back(metric(random_point(s, Frame::tilde)));
        mean += all.back();
    }
    mean /= 20.0;
    for (const auto& m : all)
        EXPECT_LT((m - mean).cwiseAbs().maxCoeff(), 1e-9);
    GWMetric table = GWMetric::Zero();
    table(0, 5) = table(5, 0) = 1.0;
    for (int i = 1; i <= 4; ++i)
        table(i, i) = 1.0;
    EXPECT_LT((mean - table).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Euler, RandomPoints) {
    test_support::Sampler s(137);
    for (int n = 0; n < 20; ++n) {
        const GWPoint p = random_point(s, n % 2 ? Frame::tilde : Frame::original);
        EXPECT_LT(euler_residual(p), 1e-9);
    }
}

TEST(Euler, ScalingLaw) {
    test_support::Sampler s(139);
    const GWPoint p = random_point(s, Frame::original);
    const double sc = 1.7;
    GWPoint q = p;
    q.t0 *= sc;
    for (auto& x : q.ti)
        x *= std::sqrt(sc);
    EXPECT_LT(std::abs(potential(q) - sc * sc * potential(p)), 1e-12 * (1.0 + std::abs(potential(q))));
}

TEST(Euler, SameInBothFrames) {
    test_support::Sampler s(149);
    const GWPoint p = random_point(s, Frame::tilde);
    EXPECT_LT(std::abs(euler_residual(p) - euler_residual(to_original(p))), 1e-12);
}

TEST(Halphen, ThetaTripleAtTwoI) { EXPECT_LT(halphen_residual({0.0, 2.0}), 1e-8); }

TEST(Halphen, AsymptoticRegime) { EXPECT_LT(halphen_residual({0.0, 40.0}), 1e-12); }

TEST(Halphen, RescaledTriple) {
    test_support::Sampler s(151);
    for (int n = 0; n < 10; ++n) {
        // Re t in [-6, -1.6] keeps Im(t / (pi i)) >= 0.5
        const cplx t = s.in_box(-6.0, -1.6, -2.0, 2.0);
        EXPECT_LT(halphen_residual(t, RescaledTriple{}), 1e-8) << t;
    }
}

TEST(Halphen, SubstitutedTriple) {
    const cplx t{1.2, 0.3};
    EXPECT_LT(halphen_residual(t, SubstitutedTriple{}), 1e-8);
}

TEST(Halphen, DomainChecks) {
    EXPECT_THROW(halphen_residual({0.5, 1.0}, RescaledTriple{}), DomainError);
    EXPECT_THROW(halphen_residual({0.0, -1.0}), DomainError);
}

#include "hurwitz/elliptic.hpp"
#include "hurwitz/theta.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace hurwitz;

namespace {

// Direct summation of the defining series with an explicit index range.
cplx theta_reference(int j, cplx z, cplx tau, int N) {
    cplx s{};
    for (int n = -N; n <= N; ++n) {
        const bool half = j <= 2;
        const double a = half ? (n - 0.5) * (n - 0.5) : double(n) * n;
        const double k = half ? 2.0 * n - 1.0 : 2.0 * n;
        const double sg = (j == 1 || j == 4) ? (n % 2 == 0 ? 1.0 : -1.0) : 1.0;
        s += sg * std::exp(I * pi * (a * tau + k * z));
    }
    return j == 1 ? I * s : s;
}

} // namespace

TEST(Theta, Theta1VanishesAtOrigin) {
    test_support::Sampler s(11);
    for (int i = 0; i < 10; ++i) {
        const ModularParameter mp(s.tau());
        EXPECT_LT(std::abs(theta(1, 0.0, mp)), 1e-15);
    }
}

TEST(Theta, Theta3TendsToOne) {
    const ModularParameter mp({0.0, 40.0});
    EXPECT_LT(std::abs(theta(3, 0.0, mp) - 1.0), 1e-12);
}

TEST(Theta, Theta2AtIMatchesStabilizedSum) {
    const cplx tau = I;
    cplx prev = theta_reference(2, 0.0, tau, 4);
    int N = 8;
    for (;; N *= 2) {
        const cplx next = theta_reference(2, 0.0, tau, N);
        if (std::abs(next - prev) < 1e-14)
            break;
        prev = next;
    }
    EXPECT_LT(std::abs(theta(2, 0.0, ModularParameter(tau)) - prev), 1e-14);
}

TEST(Theta, AgreesWithReferenceAtRandomPoints) {
    test_support::Sampler s(3);
    for (int i = 0; i < 20; ++i) {
        const cplx tau = s.tau();
        const cplx z = s.disk(1.0);
        const ModularParameter mp(tau);
        for (int j = 1; j <= 4; ++j) {
            const cplx ref = theta_reference(j, z, tau, 60);
            EXPECT_LT(std::abs(theta(j, z, mp) - ref), 1e-13 * (1.0 + std::abs(ref)));
        }
    }
}

TEST(ThetaDz, OrderZeroIsTheta) {
    const ModularParameter mp({0.3, 0.8});
    const cplx z{0.21, -0.4};
    for (int j = 1; j <= 4; ++j)
        EXPECT_EQ(theta_dz(j, 0, z, mp), theta(j, z, mp));
}

TEST(ThetaDz, Theta1PrimeNonzero) {
    test_support::Sampler s(5);
    for (int i = 0; i < 10; ++i) {
        const ModularParameter mp(s.tau());
        EXPECT_GT(std::abs(theta_dz(1, 1, 0.0, mp)), 1e-10);
    }
}

TEST(ThetaDz, Theta2IsEven) {
    const ModularParameter mp({-0.4, 0.7});
    EXPECT_LT(std::abs(theta_dz(2, 1, 0.0, mp)), 1e-15);
}

TEST(ThetaDz, MatchesNumericDerivative) {
    const ModularParameter mp({0.15, 0.9});
    const cplx z{0.3, 0.1};
    for (int j = 1; j <= 4; ++j)
        for (int k = 0; k < 3; ++k) {
            auto f = [&](cplx w) { return theta_dz(j, k, w, mp); };
            const cplx d = numeric_derivative(f, z);
            EXPECT_LT(std::abs(d - theta_dz(j, k + 1, z, mp)), 1e-7 * (1.0 + std::abs(d)));
        }
}

TEST(ThetaDz, RejectsOrderFour) { EXPECT_THROW(theta_dz(3, 4, 0.0, ModularParameter(I)), DomainError); }

TEST(ThetaDtau, HeatEquation) {
    test_support::Sampler s(42);
    for (int i = 0; i < 100; ++i) {
        const cplx tau = s.tau(0.5, 3.0);
        const cplx z = s.disk(1.0);
        const ModularParameter mp(tau);
        for (int j = 1; j <= 4; ++j) {
            const cplx r = theta_dz(j, 2, z, mp) - 4.0 * pi * I * theta_dtau(j, z, mp);
            EXPECT_LT(std::abs(r), 1e-10);
        }
    }
}

TEST(ThetaDtau, Theta3LeadingTerms) {
    const cplx tau{0.0, 40.0};
    const cplx expected = 2.0 * pi * I * std::exp(two_pi_i * tau);
    EXPECT_LT(std::abs(theta_dtau(3, 0.0, ModularParameter(tau)) - expected), 1e-20);
}

TEST(ThetaDtau, Theta1AtOriginVanishes) {
    EXPECT_LT(std::abs(theta_dtau(1, 0.0, ModularParameter({0.2, 1.0}))), 1e-15);
}

TEST(Theta, QuasiPeriodicityOfTheta3) {
    test_support::Sampler s(9);
    for (int i = 0; i < 10; ++i) {
        const ModularParameter mp(s.tau());
        const cplx z = s.disk(0.5);
        EXPECT_LT(std::abs(theta(3, z + 1.0, mp) - theta(3, z, mp)), 1e-12);
    }
}

TEST(ModularParameterTest, TruncationFromTailBound) {
    const ModularParameter mp({0.0, 0.5});
    const double q = std::exp(-pi * 0.5);
    EXPECT_LT(std::pow(q, (mp.truncation - 1) * (mp.truncation - 1)), 1e-16);
    EXPECT_GE(std::pow(q, (mp.truncation - 2) * (mp.truncation - 2)), 1e-16);
}

TEST(ModularParameterTest, RejectsLowerHalfPlane) {
    EXPECT_THROW(ModularParameter({0.0, -1.0}), DomainError);
    EXPECT_THROW(ModularParameter({0.0, 0.0}), DomainError);
}

TEST(ModularParameterTest, TruncationCapExceeded) { EXPECT_THROW(ModularParameter({0.0, 1e-4}), TruncationError); }

TEST(ThetaIndexTest, RejectsOutOfRange) {
    EXPECT_THROW(ThetaIndex(0), DomainError);
    EXPECT_THROW(ThetaIndex(5), DomainError);
}

TEST(ThetaConstant, RejectsTheta1) { EXPECT_THROW(theta_constant(1, ModularParameter(I)), DomainError); }

TEST(XFunction, SecondZDerivativeRelation) {
    test_support::Sampler s(13);
    for (int i = 0; i < 10; ++i) {
        const ModularParameter mp(s.tau());
        for (int p = 2; p <= 4; ++p) {
            const cplx lhs = theta_dz(p, 2, 0.0, mp) / theta(p, 0.0, mp);
            EXPECT_LT(std::abs(lhs - 2.0 * pi * I * X(p, mp)), 1e-10 * (1.0 + std::abs(lhs)));
        }
    }
}

TEST(XFunction, LargeImaginaryLimits) {
    const ModularParameter mp({0.0, 40.0});
    EXPECT_LT(std::abs(X(3, mp)), 1e-12);
    EXPECT_LT(std::abs(X(4, mp)), 1e-12);
    EXPECT_LT(std::abs(X(2, mp) - I * pi / 2.0), 1e-12);
}

TEST(XFunction, RejectsP1) { EXPECT_THROW(X(1, ModularParameter(I)), DomainError); }

TEST(XFunction, DerivativesMatchNumeric) {
    const cplx tau{0.1, 1.1};
    for (int p = 2; p <= 4; ++p)
        for (int k = 0; k < 3; ++k) {
            auto f = [&](cplx t) { return X_derivative(p, k, ModularParameter(t)); };
            const cplx d = numeric_derivative(f, tau);
            EXPECT_LT(std::abs(d - X_derivative(p, k + 1, ModularParameter(tau))), 1e-6 * (1.0 + std::abs(d)))
                << "p=" << p << " k=" << k;
        }
}

TEST(Gamma, LargeImaginaryLimit) {
    EXPECT_LT(std::abs(gamma(ModularParameter({0.0, 40.0})) - I * pi / 3.0), 1e-10);
}

TEST(Gamma, QuasiPeriodProduct) {
    test_support::Sampler s(17);
    for (int i = 0; i < 10; ++i) {
        const cplx tau = s.tau();
        const Lattice L = Lattice::normalized(tau);
        const auto c = constants(L);
        const cplx lhs = c.eta1 * L.omega1;
        EXPECT_LT(std::abs(lhs + I * pi / 4.0 * gamma(ModularParameter(tau))), 1e-10 * (1.0 + std::abs(lhs)));
    }
}

TEST(Gamma, StableUnderStepHalving) {
    auto g = [](cplx t) { return gamma(ModularParameter(t)); };
    const cplx tau{0.25, 1.3};
    NumericConfig a, b;
    b.diff_step = a.diff_step / 2.0;
    EXPECT_LT(std::abs(numeric_derivative(g, tau, a) - numeric_derivative(g, tau, b)), 1e-8);
}

TEST(ThetaIdentity, Theta1TripleOverPrimeIsSumOfOthers) {
    test_support::Sampler s(19);
    for (int i = 0; i < 10; ++i) {
        const ModularParameter mp(s.tau());
        const cplx lhs = theta_dz(1, 3, 0.0, mp) / theta_dz(1, 1, 0.0, mp);
        cplx rhs{};
        for (int p = 2; p <= 4; ++p)
            rhs += theta_dz(p, 2, 0.0, mp) / theta(p, 0.0, mp);
        EXPECT_LT(std::abs(lhs - rhs), 1e-10 * (1.0 + std::abs(lhs)));
    }
}

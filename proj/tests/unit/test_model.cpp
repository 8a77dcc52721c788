/// @file test_model.cpp
/// @brief Coefficient functions, closed forms and analytic bounds

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "driftlab/model.hpp"
#include "oracles.hpp"

using namespace driftlab;

TEST(DriftF, Examples) {
    EXPECT_DOUBLE_EQ(drift_f(1.0, {DriftSign::deceleration, 0.7}), 1.0);
    EXPECT_EQ(drift_f(0.0, {DriftSign::deceleration, 0.5}), 0.0);
    EXPECT_DOUBLE_EQ(drift_f(0.25, {DriftSign::deceleration, 0.5}), 0.5);
    EXPECT_DOUBLE_EQ(drift_f(0.25, {DriftSign::acceleration, 0.5}), -0.5);
}

TEST(DriftF, GammaZeroAtOrigin) {
    EXPECT_EQ(drift_f(0.0, {DriftSign::deceleration, 0.0}), 1.0);
    EXPECT_EQ(drift_f(0.0, {DriftSign::acceleration, 0.0}), -1.0);
}

TEST(DriftF, NegativeAIsDomainError) {
    EXPECT_THROW(drift_f(-1e-3, {DriftSign::deceleration, 0.5}), std::domain_error);
}

TEST(DriftSpec, NegativeGammaRejected) {
    EXPECT_THROW((DriftSpec{DriftSign::deceleration, -0.1}).validate(), std::invalid_argument);
}

TEST(LogisticG, Branches) {
    const LogisticSpec s{1.0, 1.0};
    EXPECT_DOUBLE_EQ(logistic_g(0.5, s), 0.25);
    EXPECT_EQ(logistic_g(-1.0, s), 0.0);
    EXPECT_EQ(logistic_g(2.0, s), 0.0);
    // continuity at both ends
    EXPECT_NEAR(logistic_g(1e-12, s), 0.0, 1e-11);
    EXPECT_NEAR(logistic_g(1.0 - 1e-12, s), 0.0, 1e-11);
}

TEST(HFunction, Examples) {
    EXPECT_EQ(h_function(0.0, 4.0, 1.0, 0.5), 0.0);
    EXPECT_NEAR(h_function(0.5, 2.0, 1.0, 1.0), 0.0, 1e-15);
    EXPECT_NEAR(h_function(0.25, 4.0, 1.0, 0.5), 0.25, 1e-15);
    EXPECT_THROW(h_function(1.5, 4.0, 1.0, 0.5), std::domain_error);
    EXPECT_THROW(h_function(-0.1, 4.0, 1.0, 0.5), std::domain_error);
}

TEST(FindRootH, Examples) {
    const auto r1 = find_root_h(2.0, 1.0, 1.0);
    ASSERT_TRUE(r1);
    EXPECT_NEAR(*r1, 0.5, 1e-10);

    const auto r2 = find_root_h(4.0, 1.0, 0.5);
    ASSERT_TRUE(r2);
    const double ref = oracle::bisect([](double a) { return 4.0 * (1.0 - a) * a - std::sqrt(a); }, 0.01, 0.2);
    EXPECT_NEAR(*r2, ref, 1e-10);
    EXPECT_NEAR(*r2, 0.0727, 5e-4);
    EXPECT_LE(std::abs(h_function(*r2, 4.0, 1.0, 0.5)), 1e-10);

    EXPECT_FALSE(find_root_h(2.0, 1.0, 0.5));
}

TEST(FindRootH, ResidualAndMonotoneInLambda) {
    const double tol = 1e-12;
    for (double gamma : {0.3, 0.5, 0.8, 1.0, 1.5}) {
        bool seen = false;
        for (double lambda = 0.5; lambda <= 20.0; lambda += 0.5) {
            const auto r = find_root_h(lambda, 1.0, gamma, tol);
            if (r) {
                EXPECT_LE(std::abs(h_function(*r, lambda, 1.0, gamma)), tol * (1.0 + lambda)) << gamma << " " << lambda;
                seen = true;
            } else {
                EXPECT_FALSE(seen) << "root lost when lambda grew: gamma " << gamma << " lambda " << lambda;
            }
        }
    }
}

TEST(Characteristic, ClosedFormExamples) {
    EXPECT_NEAR(characteristic_a(1.0, 1.0, 0.5), 0.25, 1e-15);
    EXPECT_NEAR(vanishing_time(1.0, 0.5), 2.0, 1e-15);
    EXPECT_NEAR(characteristic_a(0.7, 1.0, 1.0), std::exp(-0.7), 1e-15);
    EXPECT_NEAR(characteristic_a(1.0, 1.0, 2.0), 0.5, 1e-15);
    EXPECT_THROW(characteristic_a(1.0, 0.0, 0.5), std::domain_error);
    EXPECT_THROW(characteristic_a(1.0, -1.0, 0.5), std::domain_error);
}

TEST(Characteristic, VanishesExactlyAtTStar) {
    for (double gamma : {0.0, 0.3, 0.5, 0.9})
        for (double a0 : {0.05, 0.5, 2.0}) {
            const double ts = vanishing_time(a0, gamma);
            EXPECT_NEAR(ts, std::pow(a0, 1.0 - gamma) / (1.0 - gamma), 1e-14 * ts);
            EXPECT_EQ(characteristic_a(ts, a0, gamma), 0.0);
            EXPECT_EQ(characteristic_a(2.0 * ts, a0, gamma), 0.0);
            EXPECT_GT(characteristic_a(0.999 * ts, a0, gamma), 0.0);
        }
}

TEST(Characteristic, PositiveForGammaAtLeastOne) {
    for (double gamma : {1.0, 1.5, 2.0, 3.0})
        for (double a0 : {1e-3, 0.5, 4.0})
            for (double t : {0.0, 1.0, 100.0, 1000.0}) EXPECT_GT(characteristic_a(t, a0, gamma), 0.0);
}

TEST(Characteristic, AgreesWithRk4) {
    for (double gamma : {0.3, 0.5, 1.0, 2.0}) {
        const double a0 = 1.0;
        const double horizon = gamma < 1.0 ? 0.99 * vanishing_time(a0, gamma) : 10.0;
        double a = a0, t = 0.0, worst = 0.0;
        const int chunks = 200;
        for (int c = 0; c < chunks; ++c) {
            const double t1 = horizon * (c + 1) / chunks;
            a = oracle::rk4([&](double, double y) { return -std::pow(y, gamma); }, a, t, t1, 200);
            t = t1;
            worst = std::max(worst, std::abs(a - characteristic_a(t, a0, gamma)));
        }
        EXPECT_LE(worst, 1e-8) << "gamma " << gamma;
    }
}

TEST(BlowupTimeTb, UniformDatumOnUnitInterval) {
    const int n = 4000;
    std::vector<double> c(n), w(n, 1.0 / n), d(n, 1.0);
    for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(j)] = (j + 0.5) / n;
    EXPECT_NEAR(blowup_time_Tb(c, w, d, 0.5), 4.0 / 3.0, 1e-6);
    EXPECT_NEAR(blowup_time_Tb(c, w, d, 0.0), 0.5, 1e-12);
    // Simpson cross-check of the numerator for a non-polynomial weight
    const double num = oracle::simpson([](double a) { return std::pow(a, 0.7); }, 0.0, 1.0, 20000);
    EXPECT_NEAR(blowup_time_Tb(c, w, d, 0.3), num / 0.7, 1e-5);
}

TEST(BlowupTimeTb, NarrowBumpLimit) {
    const double a0 = 0.3;
    for (double width : {1e-2, 1e-3, 1e-4}) {
        std::vector<double> c{a0 - 0.25 * width, a0 + 0.25 * width}, w{0.5 * width, 0.5 * width}, d{1.0, 1.0};
        EXPECT_NEAR(blowup_time_Tb(c, w, d, 0.5), 2.0 * std::sqrt(a0), 2.0 * width);
    }
}

TEST(BlowupTimeTb, HomogeneousOfDegreeZero) {
    std::vector<double> c{0.1, 0.3, 0.5, 0.7}, w{0.2, 0.2, 0.2, 0.2}, d{1.0, 3.0, 0.5, 2.0};
    const double base = blowup_time_Tb(c, w, d, 0.5);
    for (double s : {1e-6, 0.5, 7.0, 1e6}) {
        auto ds = d;
        for (auto& v : ds) v *= s;
        EXPECT_NEAR(blowup_time_Tb(c, w, ds, 0.5), base, 1e-14 * base);
    }
}

TEST(BlowupTimeTb, ZeroMassThrows) {
    EXPECT_THROW(blowup_time_Tb({0.5}, {1.0}, {0.0}, 0.5), std::invalid_argument);
}

TEST(Gronwall, Examples) {
    const auto b = gronwall_T_alpha(1.0, 1.0, 1.0, 2.0);
    EXPECT_DOUBLE_EQ(b.alpha, 3.0);
    ASSERT_TRUE(b.T_alpha);
    EXPECT_NEAR(*b.T_alpha, 1.0 / std::sqrt(3.0), 1e-14);
    EXPECT_DOUBLE_EQ(b.lower_bound(0.0), 2.0);
    // y' = y^2 - 1, y(0) = 2 blows up at atanh(1/2) = 0.5493
    const double tb = oracle::ode_blowup_time(1.0, 1.0, 1.0, 2.0, 1e12, 2.0, 1e-4);
    EXPECT_NEAR(tb, std::atanh(0.5), 1e-3);
    EXPECT_LE(tb, *b.T_alpha);

    const auto neg = gronwall_T_alpha(10.0, 1.0, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(neg.alpha, -9.0);
    EXPECT_FALSE(neg.T_alpha);
    EXPECT_THROW(neg.lower_bound(0.1), std::logic_error);
}

TEST(Gronwall, PreconditionErrors) {
    EXPECT_THROW(gronwall_T_alpha(0.0, 1.0, 1.0, 2.0), std::invalid_argument);
    EXPECT_THROW(gronwall_T_alpha(1.0, 0.0, 1.0, 2.0), std::invalid_argument);
    EXPECT_THROW(gronwall_T_alpha(1.0, 1.0, 0.0, 2.0), std::invalid_argument);
    EXPECT_THROW(gronwall_T_alpha(1.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST(Gronwall, LowerBoundMonotoneAndDivergent) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int k = 0; k < 50; ++k) {
        const double C1 = u(rng), C2 = u(rng), theta = u(rng), y0 = 1.0 + u(rng);
        const auto b = gronwall_T_alpha(C1, C2, theta, y0);
        if (!b.T_alpha) continue;
        const double pole = b.lower_bound_pole();
        EXPECT_NEAR(pole, y0 / (b.alpha * theta), 1e-12 * pole);
        double prev = b.lower_bound(0.0);
        for (int i = 1; i <= 100; ++i) {
            const double v = b.lower_bound(pole * (1.0 - std::pow(10.0, -i / 10.0)));
            EXPECT_GE(v, prev);
            prev = v;
        }
        for (double eps : {1e-3, 1e-6, 1e-9})
            EXPECT_NEAR(b.lower_bound(pole * (1.0 - eps)) / y0, std::pow(eps, -1.0 / theta),
                        1e-5 * std::pow(eps, -1.0 / theta));
        EXPECT_TRUE(std::isinf(b.lower_bound(pole * 1.01)));
    }
}

TEST(Localization, IntervalValueAndIntegral) {
    const auto psi = LocalizationSpec::interval(0.25);
    EXPECT_DOUBLE_EQ(psi(0.0), 2.0);
    EXPECT_DOUBLE_EQ(psi(0.25), 2.0);
    EXPECT_EQ(psi(0.3), 0.0);
    EXPECT_DOUBLE_EQ(psi.integral(-10.0, 10.0), 1.0);
    EXPECT_DOUBLE_EQ(psi.integral(0.0, 10.0), 0.5);
    EXPECT_THROW(LocalizationSpec::interval(0.0).validate(), std::invalid_argument);
}

TEST(Localization, SmoothBumpProperties) {
    const auto psi = LocalizationSpec::smooth_bump();
    EXPECT_NO_THROW(psi.validate());
    EXPECT_EQ(psi(-1.0), 0.0);
    EXPECT_EQ(psi(1.5), 0.0);
    double mx = 0.0;
    for (int k = 0; k <= 2000; ++k) {
        const double v = psi(-1.0 + k * 1e-3);
        EXPECT_GE(v, 0.0);
        mx = std::max(mx, v);
    }
    EXPECT_LE(mx, 1.0);
    EXPECT_NEAR(psi.integral(-2.0, 2.0), 1.0, 1e-10);
    // independent quadrature of the same interpolant
    EXPECT_NEAR(oracle::simpson([&](double x) { return psi(x); }, -1.0, 1.0, 400000), 1.0, 1e-6);
}

TEST(Localization, Ball2dIndicator) {
    const auto psi = LocalizationSpec::ball_2d();
    EXPECT_EQ(psi(0.0), 1.0);
    EXPECT_EQ(psi(0.999), 1.0);
    EXPECT_EQ(psi(1.0), 0.0);
    EXPECT_EQ(psi(2.0), 0.0);
}

TEST(ProblemSpec, PorousExponentWindow) {
    ProblemSpec s;
    s.drift.gamma = 0.5;
    s.diffusion_exponent = 2.9;
    EXPECT_NO_THROW(s.validate());
    s.diffusion_exponent = 3.0;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s.drift.gamma = 0.9;
    s.diffusion_exponent = 2.2;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    EXPECT_NEAR(porous_exponent_limit(0.9), 2.1111, 1e-4);
    EXPECT_NEAR(porous_exponent_limit(0.6), 2.6667, 1e-4);
}

TEST(InitialDataSpec, Validation) {
    InitialDataSpec d;
    d.a0 = 0.5;
    d.A0 = 0.5;
    EXPECT_THROW(d.validate(), std::invalid_argument);
    d.A0 = 1.0;
    d.total_mass = 0.0;
    EXPECT_THROW(d.validate(), std::invalid_argument);
    d.total_mass = 1.0;
    EXPECT_NO_THROW(d.validate());
    EXPECT_EQ(d.a_weight(0.4), 0.0);
    EXPECT_EQ(d.a_weight(1.1), 0.0);
    EXPECT_GT(d.a_weight(0.75), 0.0);
}

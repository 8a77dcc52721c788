/// @file test_diagnostics.cpp
/// @brief Functionals, blow-up detection and envelope checks

#include <gtest/gtest.h>

#include <random>

#include "driftlab/diagnostics.hpp"
#include "oracles.hpp"

using namespace driftlab;

namespace {

/// Puts `m` units of mass into the single cell (i, j).
void deposit(Field& f, const Grid& g, int i, int j, double m) {
    f.u[g.index(i, j)] += m / (g.cell_area() * g.a_widths()[static_cast<std::size_t>(j)]);
}

Field random_field(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Field f(g);
    for (double& v : f.u) v = u(rng);
    return f;
}

DiagnosticsSeries series_from(const std::vector<double>& t, const std::vector<double>& y,
                              const std::vector<double>& lp) {
    DiagnosticsSeries s;
    for (std::size_t k = 0; k < t.size(); ++k) {
        TracePoint tp;
        tp.t = t[k];
        tp.virial_y = y[k];
        tp.lp = lp[k];
        s.trace.push_back(tp);
    }
    return s;
}

}  // namespace

TEST(Mass, ZeroAndUnitBox) {
    const auto g = Grid::make_1d(20, 1.0, {10, 1.0});
    Field f(g);
    EXPECT_EQ(mass(f, g), 0.0);
    for (double& v : f.u) v = 1.0;
    EXPECT_NEAR(mass(f, g), 2.0, 1e-14);
}

TEST(LpNorm, Examples) {
    const auto g = Grid::make_1d(20, 1.0, {10, 1.0});
    const auto f = random_field(g, 1);
    EXPECT_NEAR(lp_norm(f, g, 1.0), mass(f, g), 1e-14);
    Field c(g);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 5; ++j) c.u[g.index(i, j)] = 3.0;
    const double S = 10 * g.dx() * 5 * 0.1;
    for (double p : {1.0, 1.5, 2.0, 4.0}) EXPECT_NEAR(lp_norm(c, g, p), 3.0 * std::pow(S, 1.0 / p), 1e-13);
    Field d = f;
    for (double& v : d.u) v *= 2.0;
    for (double p : {1.0, 2.0, 3.0}) EXPECT_NEAR(lp_norm(d, g, p), 2.0 * lp_norm(f, g, p), 1e-13);
    EXPECT_THROW(lp_norm(f, g, 0.5), std::domain_error);
}

TEST(MomentA, ZeroExponentIsMassExactly) {
    const auto g = Grid::make_1d(16, 1.0, {256, 1.0, 1.2, 1e-16});
    const auto f = random_field(g, 2);
    EXPECT_NEAR(moment_a(f, g, 0.0), mass(f, g), 1e-15 * mass(f, g));
}

TEST(MomentA, UniformDatumConvergesToTwoThirds) {
    double prev = 1.0;
    for (int na : {16, 64, 256}) {
        const auto g = Grid::make_1d(4, 1.0, {na, 1.0});
        Field f(g);
        for (double& v : f.u) v = 0.5;  // mass 1
        const double err = std::abs(moment_a(f, g, 0.5) - 2.0 / 3.0);
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 1e-3);
}

TEST(HalfMoment, Examples) {
    ProblemSpec s;
    s.localization = LocalizationSpec::interval(0.1);
    s.half_width = 2.0;
    const auto g = Grid::make_1d(21, 2.0, {4, 2.0});  // a-centers 0.25, 0.75, 1.25, 1.75
    Field f(g);
    deposit(f, g, 0, 1, 1.0);
    EXPECT_EQ(half_moment_psi(f, g, s), 0.0);

    ProblemSpec w;
    w.half_width = 2.0;
    // center cell of an odd grid sits at x = 0; choose a cell centered at a = 1
    const auto g4 = Grid::make_1d(21, 2.0, {1, 2.0});
    Field one(g4);
    deposit(one, g4, 10, 0, 1.0);
    EXPECT_NEAR(half_moment_psi(one, g4, w), 1.0, 1e-14);
}

TEST(VirialY, Examples) {
    const auto g = Grid::make_1d(21, 2.0, {2, 0.5});  // a-centers 0.125, 0.375
    const auto g2 = Grid::make_1d(21, 2.0, {1, 0.5});  // a-center 0.25
    Field f(g2);
    deposit(f, g2, 10, 0, 1.0);
    EXPECT_NEAR(virial_y(f, g2, 0.5), 2.0, 1e-13);
    Field out(g);
    deposit(out, g, 0, 0, 1.0);
    deposit(out, g, 20, 1, 1.0);
    EXPECT_EQ(virial_y(out, g, 0.5), 0.0);
    EXPECT_THROW(virial_y(f, g2, 0.0), std::domain_error);
    EXPECT_THROW(virial_y(f, g2, 1.0), std::domain_error);
}

TEST(VirialY, HomogeneousOfDegreeOne) {
    const auto g = Grid::make_1d(30, 1.5, {64, 1.0});
    const auto f = random_field(g, 4);
    const double base = virial_y(f, g, 0.3);
    for (double c : {1e-3, 0.5, 3.0, 1e4}) {
        Field s = f;
        for (double& v : s.u) v *= c;
        EXPECT_NEAR(virial_y(s, g, 0.3), c * base, 1e-13 * c * base);
    }
}

TEST(VirialY, TwoDimensionalWeightIsRadial) {
    const auto g = Grid::make_2d(21, 21, 2.0, {1, 0.5});
    Field f(g);
    f.u[g.index(10, 10, 0)] = 1.0 / (g.cell_area() * 0.5);
    EXPECT_NEAR(virial_y(f, g, 0.5), 2.0, 1e-13);
    Field r(g);
    r.u[g.index(15, 10, 0)] = 1.0;
    Field q(g);
    q.u[g.index(10, 15, 0)] = 1.0;
    EXPECT_NEAR(virial_y(r, g, 0.5), virial_y(q, g, 0.5), 1e-15);
    const double x = g.x(15);
    EXPECT_NEAR(virial_y(r, g, 0.5), (1 - x * x) * (1 - x * x) * g.cell_area() * 0.5 / std::sqrt(0.25), 1e-14);
}

TEST(SupportBounds, ExactSupportAndSentinel) {
    const auto g = Grid::make_1d(8, 1.0, {20, 1.0});
    Field f(g);
    for (int j = 10; j < 20; ++j)
        for (int i = 0; i < 8; ++i) f.u[g.index(i, j)] = 1.0;
    const auto b = support_bounds(f, g, 1e-12);
    EXPECT_FALSE(b.empty);
    EXPECT_NEAR(b.a_min, 0.5, 0.05);
    EXPECT_NEAR(b.a_max, 1.0, 0.05);
    const auto z = support_bounds(Field(g), g, 1e-12);
    EXPECT_TRUE(z.empty);
    EXPECT_EQ(z.a_min, 0.0);
    EXPECT_EQ(z.a_max, 1.0);
}

TEST(SupportBounds, BoundaryMassCountsAtZero) {
    const auto g = Grid::make_1d(8, 1.0, {20, 1.0});
    Field f(g);
    f.u[g.index(3, 15)] = 1.0;
    f.boundary_mass = 0.5;
    const auto b = support_bounds(f, g, 1e-12);
    EXPECT_EQ(b.a_min, 0.0);
    EXPECT_NEAR(b.a_max, 0.8, 1e-12);
}

TEST(SupWeighted, Examples) {
    const auto g = Grid::make_1d(8, 1.0, {4, 1.0});
    auto f = random_field(g, 9);
    EXPECT_DOUBLE_EQ(sup_weighted(f, g, 0.0), *std::max_element(f.u.begin(), f.u.end()));
    EXPECT_EQ(sup_weighted(Field(g), g, 0.5), 0.0);
    Field s(g);
    s.u[g.index(2, 3)] = 2.0;
    EXPECT_NEAR(sup_weighted(s, g, 0.5), 2.0 * std::sqrt(0.875), 1e-15);
}

TEST(ConcentratedFraction, FirstCellAndBoundary) {
    const auto g = Grid::make_1d(4, 1.0, {10, 1.0});
    Field f(g);
    deposit(f, g, 0, 0, 1.0);
    deposit(f, g, 1, 5, 1.0);
    f.boundary_mass = 2.0;
    EXPECT_NEAR(concentrated_fraction(f, g, 1e-6), 0.75, 1e-14);
    EXPECT_NEAR(concentrated_fraction(f, g, 0.6), 1.0, 1e-14);
}

TEST(DiagnosticsContext, TraceMatchesFullSample) {
    ProblemSpec s;
    s.localization = LocalizationSpec::interval(0.5);
    s.half_width = 2.0;
    const auto g = Grid::make_1d(40, 2.0, {32, 1.0});
    DiagnosticsConfig cfg;
    cfg.p = 3.0;
    DiagnosticsContext ctx(s, g, cfg);
    const auto f = random_field(g, 12);
    const auto d = ctx.sample(f, mass(f, g));
    const auto tp = ctx.trace(f, 0.1);
    EXPECT_NEAR(tp.total_mass, d.mass, 1e-13 * d.mass);
    EXPECT_NEAR(tp.virial_y, d.virial_y, 1e-12 * d.virial_y);
    EXPECT_NEAR(tp.lp, d.lp, 1e-12 * d.lp);
    EXPECT_NEAR(tp.sup_agamma, d.sup_agamma, 1e-15);
    EXPECT_NEAR(d.lp, lp_norm(f, g, 3.0), 1e-15);
    EXPECT_NEAR(d.l1, mass(f, g), 1e-13);
    EXPECT_DOUBLE_EQ(ctx.m(), default_virial_m(0.5));
}

TEST(DiagnosticsContext, RejectsBadExponents) {
    ProblemSpec s;
    const auto g = Grid::make_1d(4, 1.0, {4, 1.0});
    DiagnosticsConfig cfg;
    cfg.m = 1.5;
    EXPECT_THROW(DiagnosticsContext(s, g, cfg), std::domain_error);
    cfg.m = 0.5;
    cfg.p = 0.5;
    EXPECT_THROW(DiagnosticsContext(s, g, cfg), std::domain_error);
}

// ---------------------------------------------------------------------------
// Detection

TEST(DetectBlowup, FlatSeriesIsGlobal) {
    std::vector<double> t, y, lp;
    for (int k = 0; k <= 100; ++k) {
        t.push_back(0.1 * k);
        y.push_back(1.0);
        lp.push_back(2.0);
    }
    const auto r = detect_blowup(series_from(t, y, lp), {}, 1.0);
    EXPECT_EQ(r.verdict, Verdict::global_up_to_horizon);
    EXPECT_FALSE(r.t_detect);
    EXPECT_DOUBLE_EQ(r.horizon, 10.0);
    EXPECT_THROW(detect_blowup(DiagnosticsSeries{}, {}, 1.0), std::invalid_argument);
}

TEST(DetectBlowup, SyntheticPoleRecovered) {
    std::vector<double> t, y, lp;
    for (int k = 0; k <= 2000; ++k) {
        const double tk = 1.0 - std::pow(10.0, -5.0 * k / 2000.0);
        t.push_back(tk);
        y.push_back(1.0 / (1.0 - tk));
        lp.push_back(1.0 / (1.0 - tk));
    }
    const auto r = detect_blowup(series_from(t, y, lp), {}, 1.0);
    EXPECT_EQ(r.verdict, Verdict::blow_up);
    ASSERT_TRUE(r.t_detect);
    EXPECT_NEAR(*r.t_detect, 0.999, 1e-5);
    ASSERT_TRUE(r.t_star_estimate);
    EXPECT_NEAR(*r.t_star_estimate, 1.0, 0.02);
    EXPECT_EQ(r.t_star_method, "virial_fit");
}

TEST(DetectBlowup, RequiresBothConditions) {
    std::vector<double> t, y, lp;
    for (int k = 0; k <= 1000; ++k) {
        const double tk = 1e-3 * k * 0.9999;
        t.push_back(tk);
        y.push_back(1.0 / std::pow(1.0 - tk, 2.0));
        lp.push_back(1.0 + tk);
    }
    const auto r = detect_blowup(series_from(t, y, lp), {}, 1.0);
    EXPECT_TRUE(r.virial_fired);
    EXPECT_FALSE(r.lp_fired);
    EXPECT_EQ(r.verdict, Verdict::global_up_to_horizon);
    const auto c = detect_blowup(series_from(t, y, lp), {}, 1.0, true);
    EXPECT_EQ(c.verdict, Verdict::blow_up);
    EXPECT_TRUE(c.dt_collapse);
}

TEST(FitBlowupTime, ExactFamilyWithinTwoPercent) {
    for (double theta : {0.5, 1.0, 2.0})
        for (double T : {0.3, 1.0, 4.0}) {
            std::vector<double> t, y;
            const double y0 = 2.0;
            for (int k = 0; k < 2000; ++k) {
                const double tk = T * (1.0 - std::pow(10.0, -4.0 * k / 1999.0));
                t.push_back(tk);
                y.push_back(y0 * std::pow(1.0 - tk / T, -1.0 / theta));
            }
            const auto fit = fit_blowup_time(t, y, theta);
            EXPECT_NEAR(fit.t_star, T, 0.02 * T) << theta << " " << T;
        }
}

TEST(MeanConcentrationTime, LinearRamp) {
    std::vector<TracePoint> tr;
    for (int k = 0; k <= 200; ++k) {
        TracePoint p;
        p.t = 0.01 * k;
        p.concentrated = std::min(1.0, p.t);
        tr.push_back(p);
    }
    const auto mct = mean_concentration_time(tr);
    ASSERT_TRUE(mct);
    EXPECT_NEAR(*mct, 0.5, 1e-12);
    tr.resize(50);
    EXPECT_FALSE(mean_concentration_time(tr));
}

// ---------------------------------------------------------------------------
// Envelopes

TEST(Envelopes, RatesAndRegimeChecks) {
    ProblemSpec acc;
    acc.drift = {DriftSign::acceleration, 1.0};
    EXPECT_EQ(envelope_rate(EnvelopeKind::acceleration, acc, 2.0, 1.0), 0.0);
    EXPECT_THROW(envelope_rate(EnvelopeKind::uniform_in_delta, acc, 2.0, 1.0), std::invalid_argument);

    ProblemSpec sub;
    sub.drift = {DriftSign::deceleration, 2.0};
    EXPECT_NEAR(envelope_rate(EnvelopeKind::whole_line_subcritical, sub, 2.0, 0.5), -1.0, 1e-15);
    EXPECT_THROW(envelope_rate(EnvelopeKind::acceleration, sub, 2.0, 1.0), std::invalid_argument);
    EXPECT_THROW(envelope_rate(EnvelopeKind::interval_subcritical, sub, 2.0, 1.0), std::invalid_argument);

    sub.localization = LocalizationSpec::interval(0.25);
    EXPECT_NEAR(envelope_rate(EnvelopeKind::interval_subcritical, sub, 2.0, 1.0), 4.0, 1e-15);
    EXPECT_NEAR(envelope_rate(EnvelopeKind::uniform_in_delta, sub, 2.0, 1.0), 4.0, 1e-15);
    sub.drift.gamma = 1.2;
    EXPECT_THROW(envelope_rate(EnvelopeKind::uniform_in_delta, sub, 2.0, 1.0), std::invalid_argument);
}

TEST(Envelopes, FabricatedViolationFails) {
    std::vector<double> t, lp;
    for (int k = 0; k <= 10; ++k) {
        t.push_back(0.1 * k);
        lp.push_back(std::exp(0.2 * k));
    }
    const auto bad = check_envelope(t, lp, 2.0, 1.0);
    EXPECT_FALSE(bad.pass);
    EXPECT_LT(bad.worst_margin, 0.0);
    EXPECT_NEAR(bad.worst_time, 1.0, 1e-12);
    const auto ok = check_envelope(t, lp, 2.0, 4.0);
    EXPECT_TRUE(ok.pass);
    EXPECT_GE(ok.worst_margin, 0.0);
}

TEST(MaxRelativeIncrease, InteriorSkipsFirstCell) {
    std::vector<TracePoint> tr(3);
    tr[0].sup_agamma = 1.0;
    tr[1].sup_agamma = 2.0;
    tr[2].sup_agamma = 2.0;
    tr[0].sup_agamma_interior = 1.0;
    tr[1].sup_agamma_interior = 0.9;
    tr[2].sup_agamma_interior = 0.9;
    EXPECT_DOUBLE_EQ(max_relative_increase(tr, 0, 3), 1.0);
    EXPECT_DOUBLE_EQ(max_relative_increase(tr, 0, 3, true), 0.0);
}

/// @file test_grid.cpp
/// @brief a-meshes, grid indexing and the tridiagonal solver

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "driftlab/field.hpp"
#include "driftlab/grid.hpp"
#include "driftlab/tridiag.hpp"

using namespace driftlab;

namespace {

void expect_valid_faces(const std::vector<double>& f, double a_max, double max_ratio) {
    ASSERT_GE(f.size(), 2u);
    EXPECT_EQ(f.front(), 0.0);
    EXPECT_EQ(f.back(), a_max);
    for (std::size_t j = 0; j + 1 < f.size(); ++j) EXPECT_GT(f[j + 1] - f[j], 0.0);
    for (std::size_t j = 1; j + 1 < f.size(); ++j) {
        const double q = (f[j + 1] - f[j]) / (f[j] - f[j - 1]);
        EXPECT_GE(q, 1.0 - 1e-9) << "cell " << j;
        EXPECT_LE(q, max_ratio * (1.0 + 1e-9)) << "cell " << j;
    }
}

}  // namespace

TEST(AMesh, UniformWidthsSumToAmax) {
    const auto f = make_a_faces({64, 2.0, 1.0, 0.0});
    expect_valid_faces(f, 2.0, 1.0 + 1e-12);
    for (std::size_t j = 0; j + 1 < f.size(); ++j) EXPECT_NEAR(f[j + 1] - f[j], 2.0 / 64, 1e-15);
}

TEST(AMesh, GradedRatioWithinBound) {
    for (int na : {256, 384, 512}) {
        const auto f = make_a_faces({na, 1.0, 1.2, 1e-16});
        expect_valid_faces(f, 1.0, 1.2);
        EXPECT_NEAR(f[1], 1e-16, 1e-28);
    }
}

TEST(AMesh, GradedMeshThatCannotSpanThrows) {
    EXPECT_THROW(make_a_faces({128, 1.0, 1.2, 1e-16}), std::invalid_argument);
}

TEST(AMesh, CharacteristicMeshRatiosAndTransitTimes) {
    const double gamma = 0.5;
    const AMeshSpec s{256, 0.5, 1.2, 1e-16, AMeshKind::characteristic, gamma};
    const auto f = make_a_faces(s);
    expect_valid_faces(f, 0.5, 1.2);
    // the upper cells share one transit time under a' = -a^gamma
    std::vector<double> tau;
    for (std::size_t j = f.size() - 40; j + 1 < f.size(); ++j) {
        const double mid = 0.5 * (f[j] + f[j + 1]);
        tau.push_back((f[j + 1] - f[j]) / std::pow(mid, gamma));
    }
    for (double t : tau) EXPECT_NEAR(t, tau.front(), 1e-9 * tau.front());
}

TEST(AMesh, CharacteristicInfeasibleThrows) {
    EXPECT_THROW(make_a_faces({16, 1.0, 1.05, 1e-16, AMeshKind::characteristic, 0.5}), std::invalid_argument);
    EXPECT_THROW(make_a_faces({64, 1.0, 1.0, 1e-16, AMeshKind::characteristic, 0.5}), std::invalid_argument);
}

TEST(Grid, OneDimensionalGeometry) {
    const auto g = Grid::make_1d(10, 2.0, {8, 1.0});
    EXPECT_EQ(g.dimension(), 1);
    EXPECT_DOUBLE_EQ(g.dx(), 0.4);
    EXPECT_DOUBLE_EQ(g.cell_area(), 0.4);
    EXPECT_EQ(g.n_space(), 10u);
    EXPECT_EQ(g.size(), 80u);
    EXPECT_DOUBLE_EQ(g.x(0), -1.8);
    EXPECT_DOUBLE_EQ(g.x(9), 1.8);
    EXPECT_EQ(g.index(3, 2), 23u);
    EXPECT_NEAR(std::accumulate(g.a_widths().begin(), g.a_widths().end(), 0.0), 1.0, 1e-15);
}

TEST(Grid, TwoDimensionalIndexing) {
    const auto g = Grid::make_2d(4, 6, 1.0, {3, 1.0});
    EXPECT_EQ(g.n_space(), 24u);
    EXPECT_EQ(g.size(), 72u);
    EXPECT_DOUBLE_EQ(g.cell_area(), 0.5 * (2.0 / 6));
    std::vector<int> seen(g.size(), 0);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 6; ++k)
            for (int i = 0; i < 4; ++i) ++seen[g.index(i, k, j)];
    for (int v : seen) EXPECT_EQ(v, 1);
    EXPECT_EQ(g.index(1, 2, 1), 24u + 2u * 4u + 1u);
}

TEST(Grid, CellLookup) {
    const auto g = Grid::make_1d(10, 1.0, {4, 1.0});
    EXPECT_EQ(g.x_cell(-1.0), 0);
    EXPECT_EQ(g.x_cell(0.05), 5);
    EXPECT_EQ(g.x_cell(5.0), 9);
    EXPECT_EQ(g.a_cell(0.0), 0);
    EXPECT_EQ(g.a_cell(0.3), 1);
    EXPECT_EQ(g.a_cell(0.25), 1);
    EXPECT_EQ(g.a_cell(2.0), 3);
}

TEST(Grid, RejectsDegenerateSizes) {
    EXPECT_THROW(Grid::make_1d(1, 1.0, {4, 1.0}), std::invalid_argument);
    EXPECT_THROW(Grid::make_1d(8, 0.0, {4, 1.0}), std::invalid_argument);
    EXPECT_THROW(Grid::make_2d(8, 1, 1.0, {4, 1.0}), std::invalid_argument);
    EXPECT_THROW(Grid::make_1d(8, 1.0, {0, 1.0}), std::invalid_argument);
}

TEST(Field, ZeroInitialized) {
    const auto g = Grid::make_1d(5, 1.0, {3, 1.0});
    const Field f(g);
    EXPECT_EQ(f.u.size(), g.size());
    for (double v : f.u) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(f.boundary_mass, 0.0);
    EXPECT_EQ(f.time, 0.0);
}

TEST(Tridiagonal, MatchesDenseSolve) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = 12;
    std::vector<double> lo(n), di(n), up(n), x(n), rhs(n), scratch(n);
    for (std::size_t i = 0; i < n; ++i) {
        lo[i] = u(rng);
        up[i] = u(rng);
        di[i] = 3.0 + u(rng);
        x[i] = u(rng);
    }
    for (std::size_t i = 0; i < n; ++i) {
        rhs[i] = di[i] * x[i];
        if (i > 0) rhs[i] += lo[i] * x[i - 1];
        if (i + 1 < n) rhs[i] += up[i] * x[i + 1];
    }
    solve_tridiagonal(lo, di, up, rhs, scratch);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(rhs[i], x[i], 1e-13);
}

TEST(Tridiagonal, SizeMismatchAndZeroPivot) {
    std::vector<double> a(3, 0.0), b(3, 1.0), c(2, 0.0), r(3, 1.0), s(3);
    EXPECT_THROW(solve_tridiagonal(a, b, c, r, s), std::invalid_argument);
    std::vector<double> z(3, 0.0), c3(3, 0.0);
    EXPECT_THROW(solve_tridiagonal(a, z, c3, r, s), std::runtime_error);
}

#include <mazer/modes.hpp>
#include <mazer/observables.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace mazer;

TEST(EvaluateMode, Mesa)
{
    const auto mesa = ModeFunction::mesa(10.0);
    EXPECT_EQ(evaluate_mode(mesa, 5.0), 1.0);
    EXPECT_EQ(evaluate_mode(mesa, -1.0), 0.0);
    EXPECT_EQ(evaluate_mode(mesa, 0.0), 1.0);
    EXPECT_EQ(evaluate_mode(mesa, 10.0), 1.0);
    EXPECT_EQ(evaluate_mode(mesa, 10.0 + 1e-12), 0.0);
}

TEST(EvaluateMode, SinusoidalVanishesAtMirrors)
{
    const auto mode = ModeFunction::sinusoidal(10.0);
    EXPECT_EQ(evaluate_mode(mode, 0.0), 0.0);
    EXPECT_NEAR(evaluate_mode(mode, 10.0), 0.0, 1e-30);
    EXPECT_DOUBLE_EQ(evaluate_mode(mode, 5.0), 1.0);
    EXPECT_EQ(evaluate_mode(mode, 11.0), 0.0);
}

TEST(EvaluateMode, SechSquaredIsCenteredAndTruncated)
{
    const auto mode = ModeFunction::sech_squared(8.0);
    EXPECT_DOUBLE_EQ(mode(4.0), 1.0);
    EXPECT_DOUBLE_EQ(mode(4.0 + 1.5), mode(4.0 - 1.5));
    const auto [lo, hi] = mode.support();
    EXPECT_NEAR(mode(hi - 1e-9), sech2_cutoff, 1e-12);
    EXPECT_EQ(mode(hi + 1e-9), 0.0);
    EXPECT_EQ(mode(lo - 1e-9), 0.0);
    EXPECT_NEAR(0.5 * (lo + hi), 4.0, 1e-12);
}

TEST(EvaluateMode, NonNegativeEverywhere)
{
    for (const auto& mode : {ModeFunction::mesa(3.0), ModeFunction::sech_squared(3.0),
                             ModeFunction::sinusoidal(3.0)}) {
        for (double z = -50.0; z <= 50.0; z += 0.01) {
            EXPECT_GE(mode(z), 0.0);
        }
    }
}

TEST(DiscretizeMode, MesaIsExact)
{
    const auto profile = discretize_mode(ModeFunction::mesa(10.0), 4);
    ASSERT_EQ(profile.segments.size(), 4u);
    for (const auto& s : profile.segments) {
        EXPECT_DOUBLE_EQ(s.length, 2.5);
        EXPECT_EQ(s.u, 1.0);
    }
    for (std::size_t n : {1u, 7u, 1000u}) {
        for (const auto& s : discretize_mode(ModeFunction::mesa(3.3), n).segments) {
            EXPECT_EQ(s.u, 1.0);
        }
    }
}

TEST(DiscretizeMode, SinusoidalSingleSegmentTakesMidpoint)
{
    const auto mode = ModeFunction::sinusoidal(std::numbers::pi);
    const auto profile = discretize_mode(mode, 1);
    ASSERT_EQ(profile.segments.size(), 1u);
    // oracle: the mode evaluated at the midpoint of the support
    EXPECT_DOUBLE_EQ(profile.segments[0].u, mode(std::numbers::pi / 2.0));
    EXPECT_DOUBLE_EQ(profile.segments[0].u, 1.0);
}

TEST(DiscretizeMode, SupportIsConservedUnderRefinement)
{
    for (const auto& mode : {ModeFunction::mesa(7.0), ModeFunction::sech_squared(7.0),
                             ModeFunction::sinusoidal(7.0)}) {
        const double support = mode.support_length();
        for (std::size_t n = 1; n <= 4096; n *= 2) {
            const auto profile = discretize_mode(mode, n);
            EXPECT_NEAR(profile.total_length(), support, 1e-12 * support);
            for (const auto& s : profile.segments) {
                EXPECT_GT(s.length, 0.0);
            }
        }
    }
}

TEST(DiscretizeMode, RejectsZeroSegments)
{
    EXPECT_THROW(discretize_mode(ModeFunction::mesa(1.0), 0), InvalidParameter);
}

TEST(DiscretizeMode, ZeroLengthGivesEmptyProfile)
{
    EXPECT_TRUE(discretize_mode(ModeFunction::mesa(0.0), 5).segments.empty());
    EXPECT_TRUE(discretize_mode(ModeFunction::sech_squared(0.0), 5).segments.empty());
}

// Midpoint sampling is second order: the error in the amplitudes should drop
// by about 4 per halving of the segment length.
TEST(DiscretizeMode, SechSquaredAmplitudesConvergeQuadratically)
{
    const ModelParams params(0.3, -0.2, 1, 6.0, ModeKind::SechSquared);
    const auto mode = ModeFunction::from_params(params);
    auto amps = [&](std::size_t n) { return solve_piecewise(params, discretize_mode(mode, n)); };
    const auto a1 = amps(100);
    const auto a2 = amps(200);
    const auto a4 = amps(400);
    const auto a8 = amps(800);
    const double e1 = std::abs(a1.t_b - a2.t_b) + std::abs(a1.r_b - a2.r_b);
    const double e2 = std::abs(a2.t_b - a4.t_b) + std::abs(a2.r_b - a4.r_b);
    const double e3 = std::abs(a4.t_b - a8.t_b) + std::abs(a4.r_b - a8.r_b);
    EXPECT_GT(e1 / e2, 3.5);
    EXPECT_LT(e1 / e2, 4.5);
    EXPECT_GT(e2 / e3, 3.5);
    EXPECT_LT(e2 / e3, 4.5);
}

TEST(CustomMode, ReadsTableAndInterpolates)
{
    std::istringstream in("# z u\n0 0\n1 1\n\n2 0.5  # tail\n4 0\n");
    const auto table = read_mode_table(in);
    ASSERT_EQ(table.size(), 4u);
    const auto mode = ModeFunction::custom(table, 8.0);
    // table spans [0, 4], stretched onto [0, 8]
    EXPECT_DOUBLE_EQ(mode(1.0), 0.5);
    EXPECT_DOUBLE_EQ(mode(2.0), 1.0);
    EXPECT_DOUBLE_EQ(mode(3.0), 0.75);
    EXPECT_DOUBLE_EQ(mode(6.0), 0.25);
    EXPECT_EQ(mode(-0.5), 0.0);
    EXPECT_EQ(mode(8.5), 0.0);
}

TEST(CustomMode, RejectsBadTables)
{
    std::istringstream three_cols("0 1 2\n");
    EXPECT_THROW(read_mode_table(three_cols), InvalidParameter);
    std::istringstream one_col("0\n1 1\n");
    EXPECT_THROW(read_mode_table(one_col), InvalidParameter);
    EXPECT_THROW(ModeFunction::custom({{0, 1}, {0, 1}}, 1.0), InvalidParameter);
    EXPECT_THROW(ModeFunction::custom({{1, 1}, {0, 1}}, 1.0), InvalidParameter);
    EXPECT_THROW(ModeFunction::custom({{0, 1}, {1, -0.1}}, 1.0), InvalidParameter);
    EXPECT_THROW(ModeFunction::custom({{0, 1}}, 1.0), InvalidParameter);
    EXPECT_THROW(load_custom_mode("/nonexistent/mode.txt", 1.0), InvalidParameter);
}

TEST(CustomMode, TabulatedMesaMatchesMesa)
{
    const auto mode = ModeFunction::custom({{0, 1}, {1, 1}}, 5.0);
    const ModelParams params(0.2, 0.01, 0, 5.0, ModeKind::Custom);
    SolverOptions options;
    options.custom_mode = mode;
    const auto a = solve(params, options);
    const auto b = solve_mesa(params.with_mode(ModeKind::Mesa));
    EXPECT_NEAR(std::abs(a.t_a - b.t_a), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(a.r_b - b.r_b), 0.0, 1e-8);
}

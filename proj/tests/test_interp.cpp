#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ktfunc/interp.hpp"
#include "ktfunc/kt.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace ktfunc;
using testutil::rel_eq;
using testutil::rel_le;
using testutil::unit;
using testutil::unit_matrix;

TEST(OperatorKernel, ActionAndPairing) {
    const WeightedMatrix k(MeasureSpace({1, 2}), MeasureSpace({0.5, 3}), {1, -2, 0, 4});
    const OperatorKernel u(k);
    const auto g = u.apply(std::vector<double>{2, 1});
    EXPECT_DOUBLE_EQ(g[0], 1 * 2 * 0.5 - 2 * 1 * 3);
    EXPECT_DOUBLE_EQ(g[1], 4 * 1 * 3);
    EXPECT_DOUBLE_EQ(u.pairing(g, std::vector<double>{1, 1}), g[0] * 1 + g[1] * 2);
    EXPECT_THROW(u.apply(std::vector<double>{1}), InstanceError);
}

TEST(OperatorKernel, ModulusPairingIsRectangleMass) {
    std::mt19937_64 rng(127);
    for (std::size_t k = 0; k < 40; ++k) {
        const auto a = testutil::mixed_instance(rng, k, 4, 4);
        const OperatorKernel mod = OperatorKernel(a).modulus();
        for (std::uint64_t e = 1; e < (1u << a.rows()); ++e)
            for (std::uint64_t f = 1; f < (1u << a.cols()); ++f) {
                std::vector<double> ind_f(a.cols()), ind_e(a.rows());
                std::vector<std::size_t> rows, cols;
                for (std::size_t j = 0; j < a.cols(); ++j)
                    if (f >> j & 1U) ind_f[j] = 1.0, cols.push_back(j);
                for (std::size_t i = 0; i < a.rows(); ++i)
                    if (e >> i & 1U) ind_e[i] = 1.0, rows.push_back(i);
                EXPECT_TRUE(rel_eq(mod.pairing(mod.apply(ind_f), ind_e), rect_mass_sum(a, Rectangle(rows, cols)), 1e-12));
            }
    }
}

TEST(InterpSpec, Validation) {
    EXPECT_THROW(InterpSpec(0.0, 2), SpecError);
    EXPECT_THROW(InterpSpec(1.0, 2), SpecError);
    EXPECT_THROW(InterpSpec(0.5, 0.5), SpecError);
    EXPECT_DOUBLE_EQ(InterpSpec(0.25, kInf).p(), 4.0);
}

TEST(OpTripleNorm, Examples) {
    for (double t : {0.1, 1.0, 5.0})
        EXPECT_DOUBLE_EQ(op_triple_norm(OperatorKernel(unit_matrix({{1}})), t).value, std::min(1.0, t));
    EXPECT_EQ(op_triple_norm(OperatorKernel(unit_matrix({{0, 0}})), 1.0).value, 0.0);
    EXPECT_DOUBLE_EQ(op_triple_norm(OperatorKernel(unit_matrix({{2, 0}, {0, 2}})), 1.0).value, 2.0);
}

TEST(OpTripleNorm, MonotoneDualAndSandwiched) {
    std::mt19937_64 rng(131);
    for (std::size_t k = 0; k < 60; ++k) {
        const auto a = testutil::mixed_instance(rng, k, 4, 4);
        const OperatorKernel u(a);
        double prev = 0.0;
        for (double t = 0.05; t < 30; t *= 1.7) {
            const double v = op_triple_norm(u, t).value;
            EXPECT_TRUE(rel_le(prev, v, 1e-12));
            prev = v;
            EXPECT_TRUE(rel_eq(v, t * op_triple_norm(u.transpose(), 1.0 / t).value, 1e-12));
            const double kt = kt_exact_lp(a, t).value;
            EXPECT_TRUE(rel_le(0.5 * kt, v, 1e-9));
            EXPECT_TRUE(rel_le(v, kt, 1e-9));
        }
    }
}

TEST(BracketUp, Examples) {
    for (double theta : {0.2, 0.5, 0.9})
        EXPECT_DOUBLE_EQ(bracket_u_p(OperatorKernel(unit_matrix({{1}})), theta).value, 1.0);
    EXPECT_EQ(bracket_u_p(OperatorKernel(unit_matrix({{0, 0}})), 0.5).value, 0.0);
    const auto r = bracket_u_p(OperatorKernel(WeightedMatrix::filled(unit(2), unit(2), 1.0)), 0.5);
    EXPECT_NEAR(r.value, 2.0, 1e-12);
    EXPECT_EQ(r.witness, Rectangle({0, 1}, {0, 1}));
}

TEST(BracketUp, AgreesWithBruteForce) {
    std::mt19937_64 rng(137);
    for (std::size_t k = 0; k < 60; ++k) {
        const auto a = testutil::mixed_instance(rng, k, 4, 4);
        for (double theta : {0.3, 0.5, 0.8}) {
            double best = 0.0;
            for (std::uint64_t e = 1; e < (1u << a.rows()); ++e)
                for (std::uint64_t f = 1; f < (1u << a.cols()); ++f)
                    best = std::max(best, oracle::rect_lq(a, e, f, 1.0) *
                                              std::pow(oracle::mask_mass(a.col_space(), f), -theta) *
                                              std::pow(oracle::mask_mass(a.row_space(), e), theta - 1));
            EXPECT_TRUE(rel_eq(bracket_u_p(OperatorKernel(a), theta).value, best, 1e-12));
        }
    }
}

TEST(ThetaInfNorm, Examples) {
    const auto one = theta_inf_norm(OperatorKernel(unit_matrix({{1}})), 0.5);
    EXPECT_DOUBLE_EQ(one.value, 1.0);
    EXPECT_DOUBLE_EQ(one.t_star, 1.0);
    EXPECT_EQ(theta_inf_norm(OperatorKernel(unit_matrix({{0, 0}})), 0.5).value, 0.0);
    EXPECT_NEAR(theta_inf_norm(OperatorKernel(WeightedMatrix::filled(unit(2), unit(2), 1.0)), 0.5).value, 2.0, 1e-12);
}

TEST(ThetaInfNorm, EqualsBracketExactly) {
    std::mt19937_64 rng(139);
    for (std::size_t k = 0; k < 100; ++k) {
        const OperatorKernel u(testutil::mixed_instance(rng, k, 4, 4));
        for (double theta : {0.25, 0.5, 0.75})
            EXPECT_TRUE(rel_eq(theta_inf_norm(u, theta).value, bracket_u_p(u, theta).value, 1e-9));
    }
}

TEST(ThetaInfNorm, DenseScanNeverExceedsCandidateSet) {
    std::mt19937_64 rng(149);
    for (std::size_t k = 0; k < 20; ++k) {
        const OperatorKernel u(testutil::mixed_instance(rng, k, 3, 3));
        const double theta = 0.4;
        const double sup = theta_inf_norm(u, theta).value;
        for (double t = 1e-3; t < 1e3; t *= 1.05)
            EXPECT_TRUE(rel_le(std::pow(t, -theta) * op_triple_norm(u, t).value, sup, 1e-12));
    }
}

TEST(WeakTypeCheck, Examples) {
    EXPECT_DOUBLE_EQ(weak_type_check(OperatorKernel(unit_matrix({{1}})), 2).value, 1.0);
    EXPECT_EQ(weak_type_check(OperatorKernel(unit_matrix({{0, 0}})), 2).value, 0.0);
    EXPECT_NEAR(weak_type_check(OperatorKernel(unit_matrix({{2, 0}, {0, 2}})), 2).value, 2.0, 1e-12);
    EXPECT_THROW(weak_type_check(OperatorKernel(unit_matrix({{1}})), 1.0), SpecError);
}

TEST(WeakTypeCheck, OrderRelationsWithBracket) {
    // With p = 1/theta: weak_type <= [u]_p <= p* weak_type.
    std::mt19937_64 rng(151);
    for (std::size_t k = 0; k < 60; ++k) {
        const OperatorKernel u(testutil::mixed_instance(rng, k, 4, 4));
        for (double theta : {0.25, 0.5, 0.75}) {
            const double p = 1.0 / theta;
            const double w = weak_type_check(u, p).value;
            const double b = bracket_u_p(u, theta).value;
            EXPECT_TRUE(rel_le(w, b, 1e-12));
            EXPECT_TRUE(rel_le(b, p / (p - 1) * w, 1e-12));
        }
    }
}

TEST(ThetaQNorm, ZeroAndOneByOne) {
    const auto z = theta_q_norm(unit_matrix({{0, 0}}), InterpSpec(0.5, 2), kInf, 1);
    EXPECT_EQ(z.lo, 0.0);
    EXPECT_EQ(z.hi, 0.0);
    const auto iv = theta_q_norm(unit_matrix({{1}}), InterpSpec(0.5, kInf), kInf, 1);
    EXPECT_TRUE(iv.contains(1.0, 1e-12));
    EXPECT_LE(iv.width(), 1e-6);
}

TEST(ThetaQNorm, OneByOneFiniteQ) {
    // K_t = min(1, t): int (t^{-1/2} min(1,t))^2 dt/t = 1 + 1 = 2, norm sqrt(2).
    ThetaQOptions opt;
    opt.decades = 8;
    const auto iv = theta_q_norm(unit_matrix({{1}}), InterpSpec(0.5, 2), kInf, 1, opt);
    EXPECT_TRUE(iv.contains(std::sqrt(2.0), 1e-12));
    EXPECT_LE(iv.width(), 0.02 * iv.mid());
}

TEST(ThetaQNorm, LpGridWidth3x3) {
    std::mt19937_64 rng(157);
    for (int k = 0; k < 5; ++k) {
        const auto a = random_matrix(rng, 3, 3);
        ThetaQOptions opt;
        opt.ratio = 1.05;
        opt.source = KtSource::ExactLp;
        const auto iv = theta_q_norm(a, InterpSpec(0.5, 2), kInf, 1, opt);
        EXPECT_GT(iv.lo, 0.0);
        EXPECT_LE(iv.width(), 0.02 * iv.mid()) << "instance " << k;
    }
}

TEST(ThetaQNorm, InfinityIntervalAgainstCandidateSet) {
    // sup t^{-theta} K_t lies between the rectangle sup and twice it.
    std::mt19937_64 rng(163);
    for (int k = 0; k < 10; ++k) {
        const auto a = random_matrix(rng, 3, 3);
        ThetaQOptions opt;
        opt.source = KtSource::ExactLp;
        const auto iv = theta_q_norm(a, InterpSpec(0.5, kInf), kInf, 1, opt);
        const double cand = theta_inf_norm(OperatorKernel(a), 0.5).value;
        EXPECT_TRUE(rel_le(cand, iv.hi, 1e-9));
        EXPECT_TRUE(rel_le(iv.lo, 2.0 * cand, 1e-9));
        EXPECT_TRUE(rel_le(iv.lo, iv.hi, 1e-12));
    }
}

TEST(ThetaQNorm, BracketEnclosesLpEnclosure) {
    std::mt19937_64 rng(167);
    const auto a = random_matrix(rng, 3, 3);
    ThetaQOptions lp;
    lp.source = KtSource::ExactLp;
    const auto exact = theta_q_norm(a, InterpSpec(0.5, 2), kInf, 1, lp);
    const auto loose = theta_q_norm(a, InterpSpec(0.5, 2), kInf, 1);
    EXPECT_TRUE(rel_le(loose.lo, exact.lo, 1e-9));
    EXPECT_TRUE(rel_le(exact.hi, loose.hi, 1e-9));
}

TEST(ThetaQNorm, Misconfiguration) {
    ThetaQOptions bad;
    bad.ratio = 1.0;
    EXPECT_THROW(theta_q_norm(unit_matrix({{1}}), InterpSpec(0.5, 2), kInf, 1, bad), SpecError);
    ThetaQOptions lp;
    lp.source = KtSource::ExactLp;
    EXPECT_THROW(theta_q_norm(unit_matrix({{1}}), InterpSpec(0.5, 2), 4, 2, lp), SpecError);
}

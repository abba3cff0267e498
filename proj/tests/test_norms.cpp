#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ktfunc/norms.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace ktfunc;
using testutil::rel_eq;
using testutil::unit;
using testutil::unit_matrix;

TEST(CoupleSpec, DerivedQuantities) {
    const CoupleSpec s(2, 1, 0.5);
    EXPECT_DOUBLE_EQ(s.p_star(), 2.0);
    EXPECT_DOUBLE_EQ(s.alpha(), 0.5);
    EXPECT_DOUBLE_EQ(s.c_pq(), 0.5);
    const CoupleSpec g(4, 2, 1);
    EXPECT_DOUBLE_EQ(g.c_pq(), std::sqrt(0.5));
    EXPECT_DOUBLE_EQ(g.alpha(), 0.25);
    const CoupleSpec inf(kInf, 1, 1);
    EXPECT_EQ(inf.p_star(), 1.0);
    EXPECT_EQ(inf.inv_p(), 0.0);
    EXPECT_EQ(inf.alpha(), 1.0);
    EXPECT_EQ(inf.c_pq(), 1.0);
}

TEST(CoupleSpec, ConjugateAndRange) {
    for (double p : {1.5, 2.0, 3.0, 7.0, kInf}) {
        for (double q : {1.0, 1.25}) {
            if (!(q < p)) continue;
            const CoupleSpec s(p, q, 1.0);
            EXPECT_NEAR(s.inv_p() + 1.0 / s.p_star(), 1.0, 1e-15);
            EXPECT_GT(s.alpha(), 0.0);
            EXPECT_GT(s.c_pq(), 0.0);
            EXPECT_LE(s.c_pq(), 1.0);
            if (std::isfinite(p)) { EXPECT_LT(s.c_pq(), 1.0); }
        }
    }
}

TEST(CoupleSpec, Validation) {
    EXPECT_THROW(CoupleSpec(2, 2, 1), SpecError);
    EXPECT_THROW(CoupleSpec(2, 0.5, 1), SpecError);
    EXPECT_THROW(CoupleSpec(1, 1, 1), SpecError);
    EXPECT_THROW(CoupleSpec(3, kInf, 1), SpecError);
    EXPECT_THROW(CoupleSpec(2, 1, 0), SpecError);
    EXPECT_THROW(CoupleSpec(2, 1, -1), SpecError);
    const auto c = CoupleSpec(4, 2, 3).convexified();
    EXPECT_EQ(c, CoupleSpec(2, 1, 9));
    EXPECT_EQ(CoupleSpec(kInf, 2, 2).convexified(), CoupleSpec(kInf, 1, 4));
}

TEST(LqNorm, Examples) {
    EXPECT_DOUBLE_EQ(lq_norm(std::vector<double>{1, 1}, unit(2), 1), 2.0);
    EXPECT_DOUBLE_EQ(lq_norm(std::vector<double>{3, 4}, unit(2), 2), 5.0);
    EXPECT_DOUBLE_EQ(lq_norm(std::vector<double>{2, 1}, MeasureSpace({3, 1}), 1), 7.0);
    EXPECT_DOUBLE_EQ(lq_norm(std::vector<double>{2, -5}, MeasureSpace({3, 1}), kInf), 5.0);
    EXPECT_THROW(lq_norm(std::vector<double>{1}, unit(2), 1), InstanceError);
}

TEST(MixedInfOne, Examples) {
    const auto d = unit_matrix({{2, 0}, {0, 2}});
    EXPECT_DOUBLE_EQ(mixed_inf_one(d), 2.0);
    EXPECT_DOUBLE_EQ(mixed_inf_one_T(d), 2.0);
    EXPECT_DOUBLE_EQ(mixed_inf_one(unit_matrix({{0, 0}, {0, 0}})), 0.0);
    const auto b = unit_matrix({{1, 1}, {1, 0}});
    EXPECT_DOUBLE_EQ(mixed_inf_one(b), 2.0);
    EXPECT_DOUBLE_EQ(mixed_inf_one_T(b), 2.0);
}

TEST(WeakNorm, Examples) {
    EXPECT_DOUBLE_EQ(weak_lp_norm(std::vector<double>{3, 1}, unit(2), 2), 3.0);
    for (double p : {0.5, 1.0, 2.0, kInf}) EXPECT_DOUBLE_EQ(weak_lp_norm(std::vector<double>{-4}, unit(1), p), 4.0);
    EXPECT_DOUBLE_EQ(weak_lp_norm(std::vector<double>(16, 1.0), unit(16), 2), 4.0);
}

TEST(LorentzNorm, Examples) {
    EXPECT_NEAR(lorentz_pq_norm(std::vector<double>{1, 1}, unit(2), 2, 1), 2 * std::sqrt(2.0), 1e-15);
    for (double p : {1.0, 2.0, 3.0}) EXPECT_NEAR(lorentz_pq_norm(std::vector<double>{-2.5}, unit(1), p, p), 2.5, 1e-15);
    EXPECT_NEAR(lorentz_pq_norm(std::vector<double>{2, 1}, unit(2), 1, 1), 3.0, 1e-15);
    EXPECT_THROW(lorentz_pq_norm(std::vector<double>{1}, unit(1), kInf, 1), SpecError);
}

TEST(MixedWeakNorm, Examples) {
    const auto b = unit_matrix({{1, 1}, {1, 0}});
    EXPECT_DOUBLE_EQ(mixed_weak_norm(b, 2, 1), 2.0);
    EXPECT_DOUBLE_EQ(mixed_weak_norm(unit_matrix({{0, 0}}), 2, 1), 0.0);
    std::mt19937_64 rng(3);
    for (std::size_t k = 0; k < 50; ++k) {
        const auto a = testutil::mixed_instance(rng, k, 5, 5);
        EXPECT_DOUBLE_EQ(mixed_weak_norm(a, kInf, 1), mixed_inf_one(a));
        EXPECT_DOUBLE_EQ(mixed_weak_norm_T(a, kInf, 1), mixed_inf_one_T(a));
    }
}

// Frozen values from the level-set and piecewise log-quadrature oracles in oracle.hpp.
// The quadrature is accurate to about 1e-9 relative.
TEST(Norms, FrozenOracleValues) {
    const std::vector<double> f{1.5, -0.2, 0.0, 0.3, 2.0, -1.0};
    const MeasureSpace s({0.5, 2.0, 1.25, 1.0, 0.3, 4.0});
    EXPECT_NEAR(weak_lp_norm(f, s, 2.0), 2.1908902300206643, 1e-12);
    EXPECT_NEAR(weak_lp_norm(f, s, 3.0), 1.6868653306034984, 1e-12);
    EXPECT_NEAR(lorentz_pq_norm(f, s, 2.0, 1.0), 6.1081990514414342, 1e-8);
    EXPECT_NEAR(lorentz_pq_norm(f, s, 3.0, 2.0), 2.6747739495459362, 1e-8);
}

TEST(Norms, AgreeWithOracles) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> val(-1, 1), mass(0.1, 10);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 6;
        std::vector<double> f(n), m(n);
        for (auto& x : f) x = val(rng);
        for (auto& x : m) x = mass(rng);
        if (trial % 3 == 0) f[0] = f[n - 1];  // exercise merged steps
        const MeasureSpace s(m);
        for (double p : {1.5, 2.0, 4.0, kInf}) EXPECT_TRUE(rel_eq(weak_lp_norm(f, s, p), oracle::weak_norm(f, m, p), 1e-12));
        if (trial % 6 == 0) {
            for (auto [p, q] : {std::pair{2.0, 1.0}, {3.0, 2.0}, {1.5, 3.0}})
                EXPECT_TRUE(rel_eq(lorentz_pq_norm(f, s, p, q), oracle::lorentz_norm(f, m, p, q), 1e-7))
                    << "p=" << p << " q=" << q;
        }
    }
    for (std::size_t k = 0; k < 60; ++k) {
        const auto a = testutil::mixed_instance(rng, k, 5, 5);
        for (auto [p, q] : {std::pair{2.0, 1.0}, {4.0, 2.0}, {kInf, 2.0}}) {
            EXPECT_TRUE(rel_eq(mixed_weak_norm(a, p, q), oracle::mixed_weak(a, p, q), 1e-12));
            EXPECT_TRUE(rel_eq(mixed_weak_norm_T(a, p, q), oracle::mixed_weak(a.transpose(), p, q), 1e-12));
        }
    }
}

TEST(Norms, QConvexification) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> val(-1, 1), mass(0.1, 10);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 6;
        std::vector<double> f(n), fq(n), m(n);
        for (auto& x : m) x = mass(rng);
        for (auto [p, q] : {std::pair{2.0, 1.5}, {4.0, 2.0}, {kInf, 3.0}}) {
            for (std::size_t i = 0; i < n; ++i) {
                f[i] = val(rng);
                fq[i] = std::pow(std::abs(f[i]), q);
            }
            const MeasureSpace s(m);
            const double pq = std::isinf(p) ? kInf : p / q;
            EXPECT_TRUE(rel_eq(weak_lp_norm(fq, s, pq), std::pow(weak_lp_norm(f, s, p), q), 1e-12));
        }
    }
    for (std::size_t k = 0; k < 100; ++k) {
        const auto a = testutil::mixed_instance(rng, k, 5, 5);
        for (auto [p, q] : {std::pair{2.0, 1.5}, {4.0, 2.0}, {kInf, 2.0}}) {
            const CoupleSpec s(p, q, 1.0);
            const auto aq = a.abs_pow(q);
            EXPECT_TRUE(rel_eq(std::pow(mixed_weak_norm(a, s), q), mixed_weak_norm(aq, s.convexified()), 1e-12));
        }
    }
}

TEST(Norms, HolderTypeRectangleBound) {
    std::mt19937_64 rng(29);
    for (std::size_t k = 0; k < 60; ++k) {
        const auto a = testutil::mixed_instance(rng, k, 4, 4);
        for (double p : {1.5, 2.0, 5.0}) {
            const CoupleSpec s(p, 1, 1);
            const double w = mixed_weak_norm(a, p, 1), wt = mixed_weak_norm_T(a, p, 1);
            for (std::uint64_t e = 1; e < (1u << a.rows()); ++e)
                for (std::uint64_t f = 1; f < (1u << a.cols()); ++f) {
                    const double me = oracle::mask_mass(a.row_space(), e);
                    const double nf = oracle::mask_mass(a.col_space(), f);
                    const double lhs = oracle::rect_lq(a, e, f, 1.0);
                    const double rhs = s.p_star() * std::min(std::pow(me, 1 / s.p_star()) * w,
                                                             std::pow(nf, 1 / s.p_star()) * wt);
                    EXPECT_TRUE(testutil::rel_le(lhs, rhs, 1e-12));
                }
        }
    }
}

TEST(Norms, MonotoneUnderDomination) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> shrink(0, 1);
    for (std::size_t k = 0; k < 60; ++k) {
        const auto b = testutil::mixed_instance(rng, k, 5, 5);
        const auto a = b.map([&](double v) { return v * shrink(rng); });
        EXPECT_LE(mixed_inf_one(a), mixed_inf_one(b));
        EXPECT_LE(mixed_inf_one_T(a), mixed_inf_one_T(b));
        for (auto [p, q] : {std::pair{2.0, 1.0}, {4.0, 2.0}}) {
            EXPECT_LE(mixed_weak_norm(a, p, q), mixed_weak_norm(b, p, q) * (1 + 1e-12));
            EXPECT_LE(mixed_weak_norm_T(a, p, q), mixed_weak_norm_T(b, p, q) * (1 + 1e-12));
        }
        const std::span<const double> fa(a.entries()), fb(b.entries());
        const auto prod = MeasureSpace::uniform(fa.size(), 1.0);
        EXPECT_LE(weak_lp_norm(fa, prod, 2), weak_lp_norm(fb, prod, 2) * (1 + 1e-12));
        EXPECT_LE(lorentz_pq_norm(fa, prod, 2, 1), lorentz_pq_norm(fb, prod, 2, 1) * (1 + 1e-12));
        EXPECT_LE(lq_norm(fa, prod, 3), lq_norm(fb, prod, 3) * (1 + 1e-12));
    }
}

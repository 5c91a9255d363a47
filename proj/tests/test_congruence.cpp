#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"

using namespace polysieve;

namespace {

CongruenceInstance make(const char* poly, i64 a, u64 m, std::vector<i64> K, u64 H, i64 L, u64 R) {
    CongruenceInstance inst;
    inst.P = parse_polynomial(poly);
    inst.a = a;
    inst.m = m;
    inst.K = std::move(K);
    inst.H = H;
    inst.L = L;
    inst.R = R;
    return inst;
}

CongruenceInstance random_instance(std::mt19937_64& g) {
    for (;;) {
        const std::size_t ell = std::uniform_int_distribution<std::size_t>(1, 3)(g);
        const unsigned k = std::uniform_int_distribution<unsigned>(2, 3)(g);
        MvPoly p = oracle::random_poly(g, ell, k, 4, 9);
        std::vector<unsigned> top(ell, 0);
        top[0] = k;
        p.add_term(top, std::uniform_int_distribution<int>(1, 5)(g));
        if (p.total_degree() < 2) continue;
        CongruenceInstance inst;
        inst.P = p;
        inst.m = std::uniform_int_distribution<u64>(1, 200)(g);
        do inst.a = std::uniform_int_distribution<i64>(-50, 50)(g);
        while (std::gcd(static_cast<u64>(std::llabs(inst.a)), inst.m) != 1);
        inst.H = std::uniform_int_distribution<u64>(1, 20)(g);
        inst.K.resize(ell);
        for (auto& v : inst.K) v = std::uniform_int_distribution<i64>(-30, 30)(g);
        inst.L = std::uniform_int_distribution<i64>(-100, 100)(g);
        inst.R = std::uniform_int_distribution<u64>(1, 300)(g);
        return inst;
    }
}

u64 oracle_count(const CongruenceInstance& i) { return oracle::congruence_count(i.P, i.a, i.m, i.K, i.H, i.L, i.R); }

} // namespace

TEST(Congruence, Examples) {
    EXPECT_EQ(count_solutions(make("x1^2+x2^2", 1, 5, {0, 0}, 2, 0, 5)), 4u);
    const auto ex = make("x1^2+x2^2", 1, 3, {0, 0}, 3, 0, 1);
    EXPECT_EQ(count_solutions(ex), 4u);
    EXPECT_EQ(count_solutions_direct(ex), 4u);
    EXPECT_EQ(count_solutions_residue_table(ex), 4u);
    EXPECT_EQ(oracle_count(ex), 4u);
}

TEST(Congruence, FullWindowGivesOneYPerX) {
    std::mt19937_64 g(21);
    for (int i = 0; i < 30; ++i) {
        auto inst = random_instance(g);
        inst.R = inst.m;
        u64 size = 1;
        for (std::size_t j = 0; j < inst.K.size(); ++j) size *= inst.H;
        EXPECT_EQ(count_solutions(inst), size);
    }
}

TEST(Congruence, Validation) {
    EXPECT_THROW(count_solutions(make("x1^2+x2^2", 2, 4, {0, 0}, 3, 0, 1)), InputError);
    EXPECT_THROW(count_solutions(make("x1^2+x2^2", 1, 0, {0, 0}, 3, 0, 1)), InputError);
    EXPECT_THROW(count_solutions(make("x1^2+x2^2", 1, 5, {0}, 3, 0, 1)), InputError);
    EXPECT_THROW(count_solutions(make("x1^2+x2^2", 1, 5, {0, 0}, 0, 0, 1)), InputError);
    ExecOptions tight;
    tight.max_tuples = 10;
    EXPECT_THROW(count_solutions_direct(make("x1^2+x2^2", 1, 5, {0, 0}, 4, 0, 1), tight), ResourceError);
}

TEST(Congruence, StrategiesAgreeWithOracle) {
    std::mt19937_64 g(99);
    for (int i = 0; i < 50; ++i) {
        const auto inst = random_instance(g);
        const u64 expect = oracle_count(inst);
        ASSERT_EQ(count_solutions_direct(inst), expect) << i;
        ASSERT_EQ(count_solutions_residue_table(inst), expect) << i;
        ASSERT_EQ(count_solutions(inst), expect) << i;
    }
}

TEST(Congruence, AdditiveInWindow) {
    std::mt19937_64 g(7);
    for (int i = 0; i < 30; ++i) {
        auto inst = random_instance(g);
        if (inst.R < 2) inst.R = 2;
        const u64 full = count_solutions(inst);
        const u64 cut = std::uniform_int_distribution<u64>(1, inst.R - 1)(g);
        auto lo = inst, hi = inst;
        lo.R = cut;
        hi.L = inst.L + static_cast<i64>(cut);
        hi.R = inst.R - cut;
        EXPECT_EQ(count_solutions(lo) + count_solutions(hi), full);
    }
}

TEST(Congruence, PeriodicInCorner) {
    std::mt19937_64 g(8);
    for (int i = 0; i < 30; ++i) {
        auto inst = random_instance(g);
        const u64 base = count_solutions(inst);
        auto shifted = inst;
        const std::size_t j = std::uniform_int_distribution<std::size_t>(0, inst.K.size() - 1)(g);
        shifted.K[j] += static_cast<i64>(inst.m) * std::uniform_int_distribution<i64>(-3, 3)(g);
        EXPECT_EQ(count_solutions(shifted), base);
    }
}

TEST(Kerr, Parameter) {
    EXPECT_EQ(r_parameter(3, 2), 9u);
    EXPECT_EQ(r_parameter(2, 1), 2u);
    EXPECT_EQ(r_parameter(2, 2), 5u);
}

TEST(Kerr, BoundValues) {
    auto single = make("x1^2", 1, 7, {0}, 1, 0, 7);
    const auto r1 = kerr_bound(single);
    EXPECT_EQ(r1.count, 1u);
    EXPECT_GE(r1.bound, 1.0);

    const auto inst = make("x1^2+x2^2", 1, 101, {0, 0}, 10, 0, 10);
    const auto rep = kerr_bound(inst);
    const double expect = 100.0 * (std::pow(10.0 / 101.0, 1.0 / 15.0) + std::pow(10.0 / 100.0, 1.0 / 15.0));
    EXPECT_NEAR(rep.bound, expect, 1e-12 * expect);
    EXPECT_EQ(rep.r, 5u);
    EXPECT_EQ(rep.count, oracle_count(inst));
    EXPECT_NEAR(rep.ratio, static_cast<double>(rep.count) / expect, 1e-12);
    EXPECT_THROW(kerr_bound(make("x1+x2", 1, 5, {0, 0}, 2, 0, 1)), InputError);
}

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace polysieve;

namespace {

MvPoly P(const char* s) { return parse_polynomial(s); }

u64 brute_bad(const MvPoly& p, u64 Q, const Rational& eps) {
    const unsigned k = p.total_degree();
    const Rational bound = eps * Rational(boost::multiprecision::pow(BigInt(Q), k));
    u64 c = 0;
    BoxRange::dyadic(Q, p.num_vars()).for_each([&](std::span<const i64> q) {
        BigInt v = oracle::horner(p, std::vector<i64>(q.begin(), q.end()));
        if (v < 0) v = -v;
        if (Rational(v) <= bound) ++c;
    });
    return c;
}

} // namespace

TEST(Boxes, DyadicIterationOrderAndSize) {
    const auto box = BoxRange::dyadic(3, 2);
    ASSERT_EQ(box.size(), std::optional<u64>(9));
    std::vector<std::vector<i64>> seen;
    box.for_each([&](std::span<const i64> q) { seen.emplace_back(q.begin(), q.end()); });
    ASSERT_EQ(seen.size(), 9u);
    EXPECT_EQ(seen.front(), (std::vector<i64>{3, 3}));
    EXPECT_EQ(seen[1], (std::vector<i64>{3, 4}));
    EXPECT_EQ(seen.back(), (std::vector<i64>{5, 5}));
    EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
    EXPECT_EQ(BoxRange::dyadic(7, 3).size(), std::optional<u64>(343));
}

TEST(Boxes, BudgetIsEnforced) {
    ExecOptions opts;
    opts.max_tuples = 100;
    EXPECT_THROW(rep_max(P("x1^2+x2^2+x3^2"), 5, opts), ResourceError);
    EXPECT_NO_THROW(rep_max(P("x1^2+x2^2"), 5, opts));
}

TEST(RepCount, Examples) {
    const auto p = P("x1^2+x2^2");
    EXPECT_EQ(rep_count(p, 8, 2), 1u);
    EXPECT_EQ(rep_count(p, 13, 2), 2u);
    EXPECT_EQ(rep_count(p, 14, 2), 0u);
    EXPECT_EQ(rep_count(p, BigInt(1) << 80, 2), 0u);
}

TEST(RepMax, Examples) {
    EXPECT_EQ(rep_max(P("x1^2+x2^2"), 2), 2u);
    for (u64 Q : {1ULL, 5ULL, 37ULL}) EXPECT_EQ(rep_max(P("x1^2"), Q), 1u);
    EXPECT_EQ(rep_max(P("(x1*x2)^2"), 2), 2u);
}

TEST(RepCount, HistogramIsConsistent) {
    std::mt19937_64 g(4);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t nv = 1 + trial % 3;
        auto p = oracle::random_poly(g, nv, 3, 4, 3);
        if (p.is_zero()) continue;
        const u64 Q = 1 + trial % 4;
        const auto hist = value_histogram(p, Q);
        u64 total = 0;
        for (const auto& [v, c] : hist) {
            total += c;
            EXPECT_EQ(rep_count(p, v, Q), c);
        }
        u64 size = 1;
        for (std::size_t i = 0; i < nv; ++i) size *= Q;
        EXPECT_EQ(total, size);
        const u64 rmax = rep_max(p, Q);
        EXPECT_GE(rmax, 1u);
        EXPECT_LE(rmax, size);
    }
}

TEST(RepCount, WorkerCountDoesNotChangeResults) {
    const auto p = P("x1^2 + 3*x2^2 - x3^2");
    ExecOptions one, four;
    four.workers = 4;
    EXPECT_EQ(value_histogram(p, 6, one), value_histogram(p, 6, four));
    EXPECT_EQ(rep_max(p, 6, one), rep_max(p, 6, four));
}

TEST(BadModuli, Examples) {
    EXPECT_EQ(bad_moduli_count(P("x1^2+x2^2"), 3, 1).count, 0u);
    EXPECT_EQ(bad_moduli_count(P("x1^2-x2^2"), 4, 0).count, 4u);
    const auto rep = bad_moduli_count(P("x1^2-x2^2"), 8, Rational(1, 2));
    EXPECT_EQ(rep.count, brute_bad(P("x1^2-x2^2"), 8, Rational(1, 2)));
    EXPECT_EQ(rep.total, 64u);
    EXPECT_EQ(rep.threshold, 32);
    EXPECT_NEAR(rep.ratio, static_cast<double>(rep.count) / (std::sqrt(0.5) * 64.0), 1e-12);
}

TEST(BadModuli, MonotoneInEpsAndMatchesBruteForce) {
    const auto p = P("x1^3 - 2*x1*x2^2 + x2^3");
    u64 prev = 0;
    for (int num = 0; num <= 40; ++num) {
        const Rational eps(num, 8);
        const u64 c = bad_moduli_count(p, 5, eps).count;
        EXPECT_GE(c, prev);
        EXPECT_EQ(c, brute_bad(p, 5, eps));
        prev = c;
    }
    EXPECT_THROW(bad_moduli_count(p, 5, Rational(-1)), InputError);
}

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"

using namespace polysieve;

TEST(Characters, SmallModuli) {
    const auto one = enumerate_characters(1);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_NEAR(std::abs(one[0](0) - 1.0), 0.0, 1e-15);
    EXPECT_TRUE(one[0].is_primitive());

    const auto four = enumerate_characters(4);
    ASSERT_EQ(four.size(), 2u);
    const auto& nonprincipal = four[0].is_principal() ? four[1] : four[0];
    EXPECT_EQ(nonprincipal.conductor(), 4u);
    EXPECT_NEAR(nonprincipal(1).real(), 1.0, 1e-15);
    EXPECT_NEAR(nonprincipal(3).real(), -1.0, 1e-15);

    const auto five = enumerate_characters(5);
    ASSERT_EQ(five.size(), 4u);
    EXPECT_EQ(std::count_if(five.begin(), five.end(), [](const auto& c) { return c.is_primitive(); }), 3);
}

TEST(Characters, CapIsEnforced) {
    EXPECT_THROW(enumerate_characters(100001), ResourceError);
    EXPECT_THROW(enumerate_characters(0), InputError);
}

TEST(Characters, TypeInvariants) {
    for (u64 m : {2ULL, 8ULL, 9ULL, 12ULL, 16ULL, 24ULL, 45ULL, 64ULL, 105ULL, 128ULL, 180ULL, 200ULL}) {
        const auto chars = enumerate_characters(m);
        ASSERT_EQ(chars.size(), oracle::phi(m));
        std::size_t principal = 0;
        for (const auto& chi : chars) {
            EXPECT_EQ(chi.modulus(), m);
            EXPECT_EQ(chi.is_primitive(), chi.conductor() == m);
            EXPECT_EQ(m % chi.conductor(), 0u);
            principal += chi.is_principal();
            const auto t = chi.value_table();
            ASSERT_EQ(t.size(), m);
            for (u64 n = 0; n < m; ++n) {
                if (std::gcd(n, m) != 1) {
                    EXPECT_EQ(t[n], std::complex<double>(0.0, 0.0));
                    EXPECT_EQ(chi.exponent_at(static_cast<i64>(n)), -1);
                    continue;
                }
                EXPECT_NEAR(std::abs(t[n]), 1.0, 1e-12);
                for (u64 n2 = 1; n2 < m; ++n2) {
                    if (std::gcd(n2, m) != 1) continue;
                    EXPECT_LT(std::abs(t[n * n2 % m] - t[n] * t[n2]), 1e-9);
                }
            }
            // periodicity and negative arguments
            EXPECT_LT(std::abs(chi(-1) - t[m - 1]), 1e-12);
            EXPECT_LT(std::abs(chi(static_cast<i64>(m) + 1) - t[1 % m]), 1e-12);
        }
        EXPECT_EQ(principal, 1u);
    }
}

TEST(Characters, DistinctAndOrthogonal) {
    for (u64 m = 1; m <= 200; ++m) {
        const auto chars = enumerate_characters(m);
        ASSERT_EQ(chars.size(), oracle::phi(m)) << m;
        std::set<std::vector<long long>> seen;
        for (const auto& chi : chars) {
            const auto t = chi.value_table();
            seen.insert(oracle::value_key(t));
            if (chi.is_principal()) continue;
            std::complex<double> s = 0;
            for (const auto& v : t) s += v;
            ASSERT_LT(std::abs(s), 1e-9) << m;
        }
        EXPECT_EQ(seen.size(), chars.size()) << m;
    }
}

TEST(Characters, PrimitiveCountMatchesInduction) {
    for (u64 m = 1; m <= 200; ++m) {
        const auto chars = enumerate_characters(m);
        const u64 prim = static_cast<u64>(std::count_if(chars.begin(), chars.end(), [](const auto& c) { return c.is_primitive(); }));
        ASSERT_EQ(prim, oracle::primitive_count_by_induction(m)) << m;
    }
}

TEST(Characters, ConductorIsDefinitional) {
    // smallest d | m with chi trivial on units = 1 mod d
    for (u64 m : {12ULL, 16ULL, 36ULL, 40ULL, 63ULL, 72ULL, 100ULL}) {
        for (const auto& chi : enumerate_characters(m)) {
            u64 best = m;
            for (u64 d = 1; d <= m; ++d) {
                if (m % d) continue;
                bool trivial = true;
                for (u64 n = 1; n < m && trivial; ++n)
                    if (std::gcd(n, m) == 1 && n % d == 1 % d && chi.exponent_at(static_cast<i64>(n)) != 0) trivial = false;
                if (trivial) {
                    best = d;
                    break;
                }
            }
            EXPECT_EQ(chi.conductor(), best) << m;
        }
    }
}

TEST(PsiChi, Examples) {
    const auto two = enumerate_characters(2);
    ASSERT_EQ(two.size(), 1u);
    EXPECT_NEAR(psi_chi(10, two[0]).real(), std::log(315.0), 1e-12);
    EXPECT_NEAR(psi_chi(10, two[0]).real(), 5.7525726, 1e-7);
    for (const auto& chi : enumerate_characters(7)) EXPECT_EQ(psi_chi(1.9, chi), std::complex<double>(0.0, 0.0));
    const auto four = enumerate_characters(4);
    const auto& nonprincipal = four[0].is_principal() ? four[1] : four[0];
    EXPECT_NEAR(psi_chi(10, nonprincipal).real(), std::log(5.0 / 7.0), 1e-12);
    EXPECT_NEAR(psi_chi(10, nonprincipal).imag(), 0.0, 1e-12);
}

TEST(PsiChi, PrincipalCharacterRemovesPrimeDivisors) {
    for (u64 m = 1; m <= 50; ++m) {
        const auto chars = enumerate_characters(m);
        const auto& chi0 = *std::find_if(chars.begin(), chars.end(), [](const auto& c) { return c.is_principal(); });
        for (double y : {10.0, 500.0, 10000.0}) {
            double correction = 0.0;
            for (auto [p, e] : oracle::trial_factor(m))
                for (u64 pj = p; static_cast<double>(pj) <= y; pj *= p) correction += std::log(static_cast<double>(p));
            ASSERT_NEAR(psi_chi(y, chi0).real(), psi(y) - correction, 1e-9) << m;
        }
    }
}

#pragma once
// Brute-force reference implementations used only by the tests. None of these
// call into the library's evaluation or counting paths.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <polysieve/polysieve.hpp>

namespace oracle {

using polysieve::BigInt;
using polysieve::i64;
using polysieve::MvPoly;
using polysieve::u64;
using i128 = __int128;
using u128 = unsigned __int128;

/// Horner in the first variable, recursing on the rest.
inline BigInt horner(const MvPoly& P, const std::vector<i64>& x) {
    // group terms by the exponent of the first remaining variable
    std::function<BigInt(const std::vector<std::pair<std::vector<unsigned>, BigInt>>&, std::size_t)> rec =
        [&](const std::vector<std::pair<std::vector<unsigned>, BigInt>>& terms, std::size_t var) -> BigInt {
        if (terms.empty()) return 0;
        if (var == x.size()) {
            BigInt s = 0;
            for (const auto& t : terms) s += t.second;
            return s;
        }
        std::map<unsigned, std::vector<std::pair<std::vector<unsigned>, BigInt>>> by;
        unsigned top = 0;
        for (const auto& t : terms) {
            by[t.first[var]].push_back(t);
            top = std::max(top, t.first[var]);
        }
        BigInt acc = 0;
        for (int e = static_cast<int>(top); e >= 0; --e) {
            acc *= x[var];
            auto it = by.find(static_cast<unsigned>(e));
            if (it != by.end()) acc += rec(it->second, var + 1);
        }
        return acc;
    };
    std::vector<std::pair<std::vector<unsigned>, BigInt>> terms;
    for (const auto& [e, c] : P.terms()) terms.emplace_back(e, c);
    return rec(terms, 0);
}

inline bool trial_is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::pair<u64, unsigned>> trial_factor(u64 n) {
    std::vector<std::pair<u64, unsigned>> out;
    for (u64 d = 2; d * d <= n; ++d) {
        unsigned e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        if (e) out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline double lambda(u64 n) {
    if (n < 2) return 0.0;
    const auto f = trial_factor(n);
    return f.size() == 1 ? std::log(static_cast<double>(f[0].first)) : 0.0;
}

inline u64 phi(u64 n) {
    u64 r = n;
    for (auto [p, e] : trial_factor(n)) r = r / p * (p - 1);
    return r;
}

inline bool squarefree(u64 n) {
    for (auto [p, e] : trial_factor(n))
        if (e > 1) return false;
    return true;
}

/// Sum of a_n e(n a/m), each phase computed in long double from the exact residue.
inline std::complex<long double> exp_sum(const std::vector<std::complex<double>>& a, u64 M, i64 num, u64 m) {
    const long double two_pi = 6.283185307179586476925286766559L;
    std::complex<long double> s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const u64 n = M + 1 + i;
        const i128 r = ((static_cast<i128>(num) * static_cast<i128>(n)) % static_cast<i128>(m) + m) % m;
        const long double ang = two_pi * static_cast<long double>(r) / static_cast<long double>(m);
        s += std::complex<long double>(a[i].real(), a[i].imag()) * std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    return s;
}

/// Pairwise M(N,Q): for each distinct value, total multiplicity within distance < 1/(2N).
inline u64 quadratic_M(const polysieve::FareySystem& F, u64 N) {
    u64 best = 0;
    for (const auto& x : F.points) {
        u64 c = 0;
        for (const auto& y : F.points) {
            i128 d = static_cast<i128>(x.num) * y.den - static_cast<i128>(y.num) * x.den;
            if (d < 0) d = -d;
            const u128 den = static_cast<u128>(x.den) * static_cast<u128>(y.den);
            u128 num = static_cast<u128>(d);
            if (den - num < num) num = den - num;
            if (static_cast<u128>(2 * N) * num < den) c += y.multiplicity;
        }
        best = std::max(best, c);
    }
    return best;
}

/// Fraction-free Gaussian elimination.
inline BigInt bareiss(std::vector<std::vector<BigInt>> a) {
    const std::size_t n = a.size();
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && a[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

/// Sylvester resultant Res(g, f) with formal degrees dg = g.size()-1, df = f.size()-1 (coefficients low to high).
inline BigInt sylvester(const std::vector<BigInt>& g, const std::vector<BigInt>& f) {
    const std::size_t dg = g.size() - 1, df = f.size() - 1, n = dg + df;
    std::vector<std::vector<BigInt>> S(n, std::vector<BigInt>(n, 0));
    for (std::size_t r = 0; r < df; ++r)
        for (std::size_t i = 0; i <= dg; ++i) S[r][r + i] = g[dg - i];
    for (std::size_t r = 0; r < dg; ++r)
        for (std::size_t i = 0; i <= df; ++i) S[df + r][r + i] = f[df - i];
    return bareiss(S);
}

/// Naive polynomial reduction mod monic f: coordinates of t^j.
inline std::vector<BigInt> reduce_power(const std::vector<BigInt>& f, unsigned j) {
    const std::size_t n = f.size() - 1;
    std::vector<BigInt> v(n, 0);
    v[0] = 1;
    for (unsigned s = 0; s < j; ++s) {
        std::vector<BigInt> w(n, 0);
        for (std::size_t i = 1; i < n; ++i) w[i] = v[i - 1];
        for (std::size_t i = 0; i < n; ++i) w[i] -= v[n - 1] * f[i];
        v = w;
    }
    return v;
}

/// Norm of sum q_i t^{i-1} via the determinant of its multiplication matrix.
inline BigInt norm_at(const std::vector<BigInt>& f, const std::vector<i64>& q) {
    const std::size_t n = f.size() - 1;
    std::vector<std::vector<BigInt>> A(n, std::vector<BigInt>(n, 0));
    for (std::size_t col = 0; col < n; ++col)
        for (std::size_t i = 0; i < q.size(); ++i) {
            const auto p = reduce_power(f, static_cast<unsigned>(i + col));
            for (std::size_t r = 0; r < n; ++r) A[r][col] += p[r] * q[i];
        }
    return bareiss(A);
}

/// Count of (x, y) in the box with a*P(x) = y (mod m), y in [L+1, L+R], straight from the definition.
inline u64 congruence_count(const MvPoly& P, i64 a, u64 m, const std::vector<i64>& K, u64 H, i64 L, u64 R) {
    const std::size_t ell = K.size();
    std::vector<i64> x(ell);
    u64 total = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == ell) {
            const BigInt v = BigInt(a) * horner(P, x);
            BigInt r = v % m;
            if (r < 0) r += m;
            const i64 target = static_cast<i64>(r);
            const i64 mm = static_cast<i64>(m);
            for (i64 y = L + 1; y <= L + static_cast<i64>(R); ++y)
                if (((y % mm) + mm) % mm == target) ++total;
            return;
        }
        for (u64 h = 1; h <= H; ++h) {
            x[i] = K[i] + static_cast<i64>(h);
            rec(i + 1);
        }
    };
    rec(0);
    return total;
}

/// sup over y <= x of max over coprime a of |psi(y; m, a) - y/phi(m)|, probing every integer
/// and its left limit.
inline double discrepancy(u64 m, double x) {
    const double ph = static_cast<double>(phi(m));
    std::vector<long double> psi(m, 0.0L);
    double best = 0.0;
    const u64 top = static_cast<u64>(std::floor(x));
    for (u64 n = 1; n <= top; ++n) {
        const u64 c = n % m;
        const double l = lambda(n);
        if (std::gcd(c, m) == 1) {
            best = std::max(best, std::fabs(static_cast<double>(psi[c]) - n / ph));
            psi[c] += l;
            best = std::max(best, std::fabs(static_cast<double>(psi[c]) - n / ph));
        }
    }
    for (u64 a = 0; a < m; ++a)
        if (std::gcd(a, m) == 1) best = std::max(best, std::fabs(static_cast<double>(psi[a]) - x / ph));
    return best;
}

inline std::vector<long long> value_key(const std::vector<std::complex<double>>& v) {
    std::vector<long long> k;
    k.reserve(2 * v.size());
    for (const auto& z : v) {
        k.push_back(std::llround(z.real() * 1e6));
        k.push_back(std::llround(z.imag() * 1e6));
    }
    return k;
}

/// Number of primitive characters mod m, as phi(m) minus the number of distinct characters
/// induced from moduli d | m, d < m.
inline u64 primitive_count_by_induction(u64 m) {
    std::set<std::vector<long long>> induced;
    for (u64 d = 1; d < m; ++d) {
        if (m % d) continue;
        for (const auto& chi : polysieve::enumerate_characters(d)) {
            std::vector<std::complex<double>> v(m);
            for (u64 n = 0; n < m; ++n) v[n] = std::gcd(n, m) == 1 ? chi(static_cast<i64>(n % d)) : 0.0;
            induced.insert(value_key(v));
        }
    }
    return phi(m) - induced.size();
}

/// Random polynomial in `nv` variables with total degree <= deg and small coefficients.
inline MvPoly random_poly(std::mt19937_64& g, std::size_t nv, unsigned deg, int terms, int cmax) {
    MvPoly p(nv);
    std::uniform_int_distribution<int> cd(-cmax, cmax);
    for (int t = 0; t < terms; ++t) {
        std::vector<unsigned> e(nv, 0);
        unsigned budget = std::uniform_int_distribution<unsigned>(0, deg)(g);
        for (unsigned b = 0; b < budget; ++b) ++e[std::uniform_int_distribution<std::size_t>(0, nv - 1)(g)];
        p.add_term(e, cd(g));
    }
    return p;
}

} // namespace oracle

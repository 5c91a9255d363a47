#pragma once
// Elementary arithmetic: deterministic 64-bit primality and factorization,
// the classical multiplicative functions, and Chebyshev's psi on progressions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"

namespace polysieve {

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

inline u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }

/// Non-negative residue of a modulo m.
inline u64 mod_floor(i64 a, u64 m) {
    const i128 r = static_cast<i128>(a) % static_cast<i128>(m);
    return static_cast<u64>(r < 0 ? r + m : r);
}

namespace detail {

inline bool miller_rabin_witness(u64 n, u64 a, u64 d, unsigned s) {
    a %= n;
    if (a == 0) return false;
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (unsigned r = 1; r < s; ++r) {
        x = mulmod(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

inline const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        constexpr std::uint32_t limit = 1000000;
        std::vector<bool> composite(limit + 1, false);
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 2; i <= limit; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (u64 j = static_cast<u64>(i) * i; j <= limit; j += i) composite[j] = true;
        }
        return out;
    }();
    return primes;
}

} // namespace detail

/// Deterministic for every 64-bit input (seven-base Miller-Rabin set).
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    if (n < 41 * 41) return true;
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL})
        if (detail::miller_rabin_witness(n, a, d, s)) return false;
    return true;
}

namespace detail {

// Brent's variant of Pollard rho; n odd composite, not a prime power of a small prime.
inline u64 pollard_brent(u64 n) {
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        const u64 m = 128;
        u64 r = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void split_large(u64 n, std::vector<u64>& primes) {
    if (n == 1) return;
    if (is_prime(n)) {
        primes.push_back(n);
        return;
    }
    const u64 d = pollard_brent(n);
    split_large(d, primes);
    split_large(n / d, primes);
}

} // namespace detail

struct Factorization {
    u64 n = 1;
    std::vector<std::pair<u64, unsigned>> prime_powers;

    [[nodiscard]] u64 rebuild() const {
        u64 v = 1;
        for (auto [p, e] : prime_powers)
            for (unsigned i = 0; i < e; ++i) v *= p;
        return v;
    }
    [[nodiscard]] bool is_prime_power() const { return prime_powers.size() == 1; }
    [[nodiscard]] bool is_squarefree() const {
        return std::all_of(prime_powers.begin(), prime_powers.end(), [](auto pe) { return pe.second == 1; });
    }
};

/// Trial division by primes up to 10^6, then Pollard-Brent on the cofactor.
inline Factorization factorize(u64 n) {
    if (n == 0) throw InputError("cannot factorize 0");
    Factorization f;
    f.n = n;
    for (std::uint32_t p : detail::small_primes()) {
        if (static_cast<u64>(p) * p > n) break;
        if (n % p != 0) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.prime_powers.emplace_back(p, e);
    }
    if (n > 1) {
        std::vector<u64> big;
        detail::split_large(n, big);
        std::sort(big.begin(), big.end());
        for (u64 p : big) {
            if (!f.prime_powers.empty() && f.prime_powers.back().first == p)
                ++f.prime_powers.back().second;
            else
                f.prime_powers.emplace_back(p, 1);
        }
    }
    return f;
}

inline double von_mangoldt(u64 n) {
    if (n == 0) throw InputError("von Mangoldt function needs n >= 1");
    if (n == 1) return 0.0;
    const auto f = factorize(n);
    return f.is_prime_power() ? std::log(static_cast<double>(f.prime_powers.front().first)) : 0.0;
}

inline int moebius(u64 n) {
    if (n == 0) throw InputError("Moebius function needs n >= 1");
    const auto f = factorize(n);
    if (!f.is_squarefree()) return 0;
    return f.prime_powers.size() % 2 == 0 ? 1 : -1;
}

inline u64 euler_phi(const Factorization& f) {
    u64 phi = 1;
    for (auto [p, e] : f.prime_powers) {
        phi *= p - 1;
        for (unsigned i = 1; i < e; ++i) phi *= p;
    }
    return phi;
}

inline u64 euler_phi(u64 n) {
    if (n == 0) throw InputError("Euler phi needs n >= 1");
    return euler_phi(factorize(n));
}

inline u64 tau(u64 n) {
    if (n == 0) throw InputError("divisor function needs n >= 1");
    u64 t = 1;
    for (auto [p, e] : factorize(n).prime_powers) t *= e + 1;
    return t;
}

/// All positive divisors in increasing order.
inline std::vector<u64> divisors(u64 n) {
    std::vector<u64> ds{1};
    for (auto [p, e] : factorize(n).prime_powers) {
        const std::size_t base = ds.size();
        u64 pk = 1;
        for (unsigned i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) ds.push_back(ds[j] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

// ---------------------------------------------------------------------------
// Batch tables.

struct PrimePower {
    u64 n;
    u64 p;
    double log_p;
};

/// Prime powers up to a bound, in increasing order, from a sieve of Eratosthenes.
class PrimePowerTable {
public:
    static constexpr u64 kMaxLimit = 200'000'000;

    explicit PrimePowerTable(u64 limit) : limit_(limit) {
        if (limit > kMaxLimit) throw ResourceError("prime-power table limit " + std::to_string(limit) + " above cap");
        std::vector<bool> composite(limit + 1, false);
        for (u64 i = 2; i <= limit; ++i) {
            if (composite[i]) continue;
            primes_.push_back(i);
            for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
        }
        for (u64 p : primes_) {
            const double lp = std::log(static_cast<double>(p));
            for (u64 pk = p;; pk *= p) {
                powers_.push_back(PrimePower{pk, p, lp});
                if (pk > limit / p) break;
            }
        }
        std::sort(powers_.begin(), powers_.end(), [](const PrimePower& a, const PrimePower& b) { return a.n < b.n; });
    }

    [[nodiscard]] u64 limit() const { return limit_; }
    [[nodiscard]] const std::vector<u64>& primes() const { return primes_; }
    [[nodiscard]] const std::vector<PrimePower>& prime_powers() const { return powers_; }

    /// Prime powers n <= y, as a prefix of the full list.
    [[nodiscard]] std::span<const PrimePower> prime_powers_upto(u64 y) const {
        auto end = std::upper_bound(powers_.begin(), powers_.end(), y,
                                    [](u64 v, const PrimePower& pp) { return v < pp.n; });
        return {powers_.data(), static_cast<std::size_t>(end - powers_.begin())};
    }
    [[nodiscard]] std::span<const u64> primes_upto(u64 y) const {
        auto end = std::upper_bound(primes_.begin(), primes_.end(), y);
        return {primes_.data(), static_cast<std::size_t>(end - primes_.begin())};
    }

private:
    u64 limit_;
    std::vector<u64> primes_;
    std::vector<PrimePower> powers_;
};

/// Shared read-only table covering at least [1, limit]; grows on demand.
inline std::shared_ptr<const PrimePowerTable> prime_power_table(u64 limit) {
    static std::mutex mutex;
    static std::shared_ptr<const PrimePowerTable> cached;
    std::lock_guard lock(mutex);
    if (!cached || cached->limit() < limit) {
        u64 target = std::max<u64>(limit, cached ? std::min(cached->limit() * 2, PrimePowerTable::kMaxLimit) : 1024);
        cached = std::make_shared<const PrimePowerTable>(target);
    }
    return cached;
}

inline u64 floor_nonneg(double y) { return y < 0 ? 0 : static_cast<u64>(std::floor(y)); }

/// psi(y; m, a) = sum of Lambda(n) over n <= y with n = a (mod m), accumulated in increasing n.
inline double psi_progression(double y, u64 m, i64 a) {
    if (m == 0) throw InputError("modulus must be positive");
    if (y < 2) return 0.0;
    const u64 ymax = floor_nonneg(y);
    const u64 residue = mod_floor(a, m);
    const auto table = prime_power_table(ymax);
    CompensatedSum sum;
    for (const auto& pp : table->prime_powers_upto(ymax))
        if (pp.n % m == residue) sum += pp.log_p;
    return sum.value();
}

/// Same quantity via pointwise factorization of each n in the progression.
inline double psi_progression_pointwise(double y, u64 m, i64 a) {
    if (m == 0) throw InputError("modulus must be positive");
    if (y < 2) return 0.0;
    const u64 ymax = floor_nonneg(y);
    u64 n = mod_floor(a, m);
    if (n == 0) n = m;
    CompensatedSum sum;
    for (; n <= ymax; n += m) {
        const double l = von_mangoldt(n);
        if (l != 0.0) sum += l;
    }
    return sum.value();
}

inline double psi(double y) { return psi_progression(y, 1, 0); }

} // namespace polysieve

#pragma once
// Norm forms N_K(q_1, ..., q_{n-k}) = Norm(sum_i q_i w^{i-1}) for K = Q(w),
// w a root of a monic integer polynomial f of degree n, and the search for
// primes p whose p - 1 has a large prime divisor that is a norm-form value.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arith.hpp"
#include "boxes.hpp"
#include "bv.hpp"
#include "errors.hpp"
#include "mvpoly.hpp"
#include "numeric.hpp"
#include "parallel.hpp"

namespace polysieve {

class NumberFieldSpec {
public:
    static constexpr unsigned kMaxDegree = 8;

    /// `coeffs[i]` is the coefficient of t^i; the last entry must be 1.
    NumberFieldSpec(std::vector<BigInt> coeffs, unsigned truncation) : coeffs_(std::move(coeffs)), truncation_(truncation) {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
        if (coeffs_.size() < 3) throw InputError("f must have degree at least 2");
        if (coeffs_.back() != 1) throw InputError("f must be monic");
        if (degree() > kMaxDegree) throw ResourceError("degree above cap " + std::to_string(kMaxDegree));
        if (truncation_ >= degree()) throw InputError("truncation k must satisfy k < n");
        powers_.push_back(unit(0));
        for (unsigned j = 1; j <= 2 * degree(); ++j) powers_.push_back(times_root(powers_.back()));
    }

    static NumberFieldSpec from_polynomial(const MvPoly& f, unsigned truncation) {
        if (f.num_vars() != 1) throw InputError("f must be a polynomial in one variable");
        std::vector<BigInt> c;
        for (const auto& [e, a] : f.terms()) {
            if (c.size() <= e[0]) c.resize(e[0] + 1, 0);
            c[e[0]] = a;
        }
        return NumberFieldSpec(std::move(c), truncation);
    }

    [[nodiscard]] unsigned degree() const { return static_cast<unsigned>(coeffs_.size() - 1); }
    [[nodiscard]] unsigned truncation() const { return truncation_; }
    [[nodiscard]] unsigned num_vars() const { return degree() - truncation_; }
    [[nodiscard]] const std::vector<BigInt>& coeffs() const { return coeffs_; }

    /// Power-basis coordinates of w^j, 0 <= j <= 2n.
    [[nodiscard]] const std::vector<BigInt>& power(unsigned j) const { return powers_.at(j); }

    [[nodiscard]] MvPoly polynomial() const {
        MvPoly f(1);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) f.add_term({static_cast<unsigned>(i)}, coeffs_[i]);
        return f;
    }

private:
    [[nodiscard]] std::vector<BigInt> unit(unsigned i) const {
        std::vector<BigInt> v(degree(), 0);
        v[i] = 1;
        return v;
    }
    [[nodiscard]] std::vector<BigInt> times_root(const std::vector<BigInt>& v) const {
        const unsigned n = degree();
        std::vector<BigInt> out(n, 0);
        const BigInt top = v[n - 1];
        for (unsigned i = n - 1; i > 0; --i) out[i] = v[i - 1];
        for (unsigned i = 0; i < n; ++i) out[i] -= top * coeffs_[i];
        return out;
    }

    std::vector<BigInt> coeffs_;
    unsigned truncation_;
    std::vector<std::vector<BigInt>> powers_;
};

/// Coordinates of (sum u_i w^i)(sum v_i w^i) in the power basis.
inline std::vector<BigInt> field_multiply(const NumberFieldSpec& spec, std::span<const BigInt> u, std::span<const BigInt> v) {
    const unsigned n = spec.degree();
    if (u.size() != n || v.size() != n) throw InputError("field elements need exactly n coordinates");
    std::vector<BigInt> out(n, 0);
    for (unsigned i = 0; i < n; ++i) {
        if (u[i] == 0) continue;
        for (unsigned j = 0; j < n; ++j) {
            if (v[j] == 0) continue;
            const BigInt c = u[i] * v[j];
            const auto& p = spec.power(i + j);
            for (unsigned r = 0; r < n; ++r) out[r] += c * p[r];
        }
    }
    return out;
}

/// Symbolic determinant of the multiplication-by-alpha matrix, alpha = sum_{i <= n-k} q_i w^{i-1},
/// by cofactor expansion memoized over column subsets.
inline MvPoly norm_form(const NumberFieldSpec& spec) {
    const unsigned n = spec.degree();
    const unsigned ell = spec.num_vars();
    // entry(r, j): coordinate r of alpha * w^j, a linear form in q.
    std::vector<std::vector<MvPoly>> entry(n, std::vector<MvPoly>(n, MvPoly(ell)));
    for (unsigned j = 0; j < n; ++j)
        for (unsigned i = 0; i < ell; ++i) {
            const auto& p = spec.power(i + j);
            for (unsigned r = 0; r < n; ++r)
                if (p[r] != 0) entry[r][j] = entry[r][j] + p[r] * MvPoly::variable(ell, i);
        }
    const std::size_t full = std::size_t{1} << n;
    std::vector<std::optional<MvPoly>> minor(full);
    minor[0] = MvPoly::constant(ell, 1);
    for (std::size_t S = 1; S < full; ++S) {
        const unsigned t = static_cast<unsigned>(__builtin_popcountll(S));
        MvPoly acc(ell);
        unsigned pos = 0;
        for (unsigned j = 0; j < n; ++j) {
            if (!(S >> j & 1)) continue;
            const MvPoly& e = entry[t - 1][j];
            if (!e.is_zero() && !minor[S & ~(std::size_t{1} << j)]->is_zero()) {
                MvPoly term = e * *minor[S & ~(std::size_t{1} << j)];
                acc = ((t - 1 + pos) % 2 == 0) ? acc + term : acc - term;
            }
            ++pos;
        }
        minor[S] = std::move(acc);
    }
    return *minor[full - 1];
}

struct IrreducibilityBattery {
    bool no_rational_root = true;
    bool squarefree = true;
    [[nodiscard]] bool passed() const { return no_rational_root && squarefree; }
};

namespace detail {

using RatPoly = std::vector<Rational>; // coefficient of t^i at index i

inline void trim(RatPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline RatPoly rat_mod(RatPoly a, const RatPoly& b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        const Rational c = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= c * b[i];
        trim(a);
    }
    return a;
}

inline RatPoly rat_gcd(RatPoly a, RatPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        RatPoly r = rat_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

} // namespace detail

/// Necessary conditions only: no rational (hence integer) root and gcd(f, f') = 1.
inline IrreducibilityBattery irreducibility_battery(const NumberFieldSpec& spec) {
    IrreducibilityBattery b;
    const auto& c = spec.coeffs();
    auto value_at = [&](const BigInt& t) {
        BigInt acc = 0;
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
        return acc;
    };
    if (c[0] == 0) {
        b.no_rational_root = false;
    } else {
        const BigInt c0 = c[0] < 0 ? BigInt(-c[0]) : c[0];
        if (auto small = fit_i64(c0)) {
            for (u64 d : divisors(static_cast<u64>(*small)))
                if (value_at(BigInt(d)) == 0 || value_at(-BigInt(d)) == 0) b.no_rational_root = false;
        }
    }
    detail::RatPoly f, df;
    for (std::size_t i = 0; i < c.size(); ++i) f.push_back(Rational(c[i]));
    for (std::size_t i = 1; i < c.size(); ++i) df.push_back(Rational(c[i] * static_cast<unsigned>(i)));
    b.squarefree = detail::rat_gcd(f, df).size() == 1;
    return b;
}

struct PrimeValueReport {
    u64 Q = 0;
    unsigned ell = 0;
    u64 tuples = 0;
    u64 prime_tuples = 0;
    std::map<u64, std::vector<std::vector<i64>>> primes; // prime value -> tuples attaining it
    u64 max_multiplicity = 0;
    double density_ratio = std::numeric_limits<double>::quiet_NaN(); // prime_tuples / (Q^ell / log Q)
    bool maynard_condition = false;                                  // ell >= 3n/4
    bool ell_condition = false;                                      // ell >= (1 - 1/(2 rho)) n
};

/// All q ~ Q with N_K(q) a (positive) prime, grouped by value.
inline PrimeValueReport prime_value_sieve(const NumberFieldSpec& spec, u64 Q, const ExecOptions& opts = {}) {
    const MvPoly N = norm_form(spec);
    const auto box = BoxRange::dyadic(Q, N.num_vars());
    box.require_within(opts.max_tuples, "prime_value_sieve");
    const PolyEvaluator ev(N);
    using Hits = std::vector<std::pair<u64, std::vector<i64>>>;
    auto parts = accumulate_by_leading<Hits>(box, opts.workers, [&](Hits& acc, std::span<const i64> q) {
        const i64 v = ev.eval(q);
        if (v > 1 && is_prime(static_cast<u64>(v))) acc.emplace_back(static_cast<u64>(v), std::vector<i64>(q.begin(), q.end()));
    });
    PrimeValueReport rep;
    rep.Q = Q;
    rep.ell = spec.num_vars();
    rep.tuples = *box.size();
    for (auto& part : parts)
        for (auto& [p, q] : part) {
            rep.primes[p].push_back(std::move(q));
            ++rep.prime_tuples;
        }
    for (const auto& [p, qs] : rep.primes) rep.max_multiplicity = std::max<u64>(rep.max_multiplicity, qs.size());
    if (Q >= 2)
        rep.density_ratio = static_cast<double>(rep.prime_tuples) /
                            (static_cast<double>(rep.tuples) / std::log(static_cast<double>(Q)));
    const auto prof = exponent_profile(spec.degree(), rep.ell);
    rep.maynard_condition = prof.maynard_condition();
    rep.ell_condition = prof.ell_condition();
    return rep;
}

/// Largest B with B^n <= X.
inline u64 integer_root(u64 X, unsigned n) {
    u64 b = static_cast<u64>(std::pow(static_cast<double>(X), 1.0 / n));
    auto pow_le = [&](u64 base) { return boost::multiprecision::pow(BigInt(base), n) <= X; };
    while (b > 0 && !pow_le(b)) --b;
    while (pow_le(b + 1)) ++b;
    return b;
}

/// d >= p^theta, exactly.
inline bool at_least_power(u64 d, u64 p, const Rational& theta) {
    const BigInt num = boost::multiprecision::numerator(theta), den = boost::multiprecision::denominator(theta);
    const unsigned a = static_cast<unsigned>(num), b = static_cast<unsigned>(den);
    return boost::multiprecision::pow(BigInt(d), b) >= boost::multiprecision::pow(BigInt(p), a);
}

struct CorollaryWitness {
    u64 p = 0;
    u64 d = 0;              // the largest qualifying prime divisor of p - 1
    std::vector<i64> q;     // a tuple with N_K(q) = d
    std::vector<u64> all_d; // every qualifying prime divisor, increasing
};

struct CorollaryReport {
    u64 X = 0;
    Rational theta;
    u64 coordinate_bound = 0;   // q_i ranges over [1, floor(X^{1/n})]
    u64 divisor_set_size = 0;   // prime norm values in [2, X - 1]
    u64 primes_scanned = 0;     // pi(X)
    u64 count = 0;
    double density = 0.0;       // count / pi(X)
    std::vector<CorollaryWitness> witnesses;
};

/// Primes p <= X such that p - 1 has a prime divisor d = N_K(q) with d >= p^theta.
/// Norm values are sieved first, then the primes are scanned.
inline CorollaryReport corollary_search(const NumberFieldSpec& spec, u64 X, const Rational& theta,
                                        const ExecOptions& opts = {}) {
    if (theta <= 0 || theta >= 1) throw InputError("theta must lie in (0, 1)");
    if (X < 2) throw InputError("X must be at least 2");
    if (boost::multiprecision::numerator(theta) > 64 || boost::multiprecision::denominator(theta) > 64)
        throw InputError("theta must have numerator and denominator at most 64");
    CorollaryReport rep;
    rep.X = X;
    rep.theta = theta;
    const MvPoly N = norm_form(spec);
    rep.coordinate_bound = integer_root(X, spec.degree());
    std::map<u64, std::vector<i64>> values; // prime value -> first tuple in box order
    if (rep.coordinate_bound >= 1) {
        BoxRange box{std::vector<i64>(N.num_vars(), 1), std::vector<i64>(N.num_vars(), static_cast<i64>(rep.coordinate_bound))};
        box.require_within(opts.max_tuples, "corollary_search");
        const PolyEvaluator ev(N);
        using Hits = std::vector<std::pair<u64, std::vector<i64>>>;
        auto parts = accumulate_by_leading<Hits>(box, opts.workers, [&](Hits& acc, std::span<const i64> q) {
            const i64 v = ev.eval(q);
            if (v >= 2 && static_cast<u64>(v) < X && is_prime(static_cast<u64>(v)))
                acc.emplace_back(static_cast<u64>(v), std::vector<i64>(q.begin(), q.end()));
        });
        for (auto& part : parts)
            for (auto& [v, q] : part) values.try_emplace(v, std::move(q));
    }
    rep.divisor_set_size = values.size();

    const auto table = prime_power_table(X);
    const auto primes = table->primes_upto(X);
    rep.primes_scanned = primes.size();
    constexpr std::size_t kBlock = 4096;
    const std::size_t blocks = (primes.size() + kBlock - 1) / kBlock;
    auto parts = map_chunks<std::vector<CorollaryWitness>>(blocks, opts.workers, [&](std::size_t b) {
        std::vector<CorollaryWitness> out;
        const std::size_t end = std::min(primes.size(), (b + 1) * kBlock);
        for (std::size_t i = b * kBlock; i < end; ++i) {
            const u64 p = primes[i];
            if (p < 3) continue;
            CorollaryWitness w;
            for (auto [d, e] : factorize(p - 1).prime_powers)
                if (values.count(d) && at_least_power(d, p, theta)) w.all_d.push_back(d);
            if (w.all_d.empty()) continue;
            w.p = p;
            w.d = w.all_d.back();
            w.q = values.at(w.d);
            out.push_back(std::move(w));
        }
        return out;
    });
    for (auto& part : parts)
        for (auto& w : part) rep.witnesses.push_back(std::move(w));
    rep.count = rep.witnesses.size();
    rep.density = rep.primes_scanned ? static_cast<double>(rep.count) / static_cast<double>(rep.primes_scanned) : 0.0;
    return rep;
}

} // namespace polysieve

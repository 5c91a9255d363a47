#pragma once
// Integer boxes, the dyadic box q ~ Q, and representation counts over it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "mvpoly.hpp"
#include "numeric.hpp"
#include "parallel.hpp"

namespace polysieve {

/// Product of inclusive integer ranges [lo_i, hi_i]. Iteration is
/// lexicographic with the last coordinate fastest.
struct BoxRange {
    std::vector<i64> lo;
    std::vector<i64> hi;

    /// q ~ Q: every coordinate in [Q, 2Q).
    static BoxRange dyadic(u64 Q, std::size_t ell) {
        if (Q == 0) throw InputError("Q must be positive");
        return BoxRange{std::vector<i64>(ell, static_cast<i64>(Q)), std::vector<i64>(ell, static_cast<i64>(2 * Q - 1))};
    }
    /// [K_i + 1, K_i + H] per coordinate.
    static BoxRange shifted_cube(std::span<const i64> corner, u64 H) {
        BoxRange b;
        for (i64 k : corner) {
            b.lo.push_back(k + 1);
            b.hi.push_back(k + static_cast<i64>(H));
        }
        return b;
    }

    [[nodiscard]] std::size_t dims() const { return lo.size(); }
    [[nodiscard]] u64 side(std::size_t i) const { return hi[i] < lo[i] ? 0 : static_cast<u64>(hi[i] - lo[i] + 1); }

    /// Number of tuples, or nullopt if it exceeds 2^64.
    [[nodiscard]] std::optional<u64> size() const {
        u128 n = 1;
        for (std::size_t i = 0; i < dims(); ++i) {
            n *= side(i);
            if (n > std::numeric_limits<u64>::max()) return std::nullopt;
        }
        return static_cast<u64>(n);
    }

    void require_within(u64 budget, const char* what) const {
        auto n = size();
        if (!n || *n > budget)
            throw ResourceError(std::string(what) + ": box of " + (n ? std::to_string(*n) : std::string("> 2^64")) +
                                " tuples exceeds the enumeration budget of " + std::to_string(budget));
    }

    template <class Fn>
    void for_each(Fn&& fn) const {
        if (dims() == 0) return;
        for (std::size_t i = 0; i < dims(); ++i)
            if (side(i) == 0) return;
        std::vector<i64> q = lo;
        for (;;) {
            fn(std::span<const i64>(q));
            std::size_t i = dims();
            while (i > 0) {
                --i;
                if (q[i] < hi[i]) {
                    ++q[i];
                    break;
                }
                q[i] = lo[i];
                if (i == 0) return;
            }
        }
    }

    /// Sub-box with the leading coordinate fixed to lo[0] + offset.
    [[nodiscard]] BoxRange slice(u64 offset) const {
        BoxRange b = *this;
        b.lo[0] = b.hi[0] = lo[0] + static_cast<i64>(offset);
        return b;
    }
};

/// Runs `visit(acc, q)` over the box, one accumulator per leading-coordinate
/// value; the returned accumulators are in leading-coordinate order.
template <class Acc, class Visit>
std::vector<Acc> accumulate_by_leading(const BoxRange& box, unsigned workers, Visit&& visit) {
    if (box.dims() == 0) return {};
    return map_chunks<Acc>(box.side(0), workers, [&](std::size_t i) {
        Acc acc{};
        box.slice(i).for_each([&](std::span<const i64> q) { visit(acc, q); });
        return acc;
    });
}

/// Value counts of P over q ~ Q, keyed by value.
inline std::map<i64, u64> value_histogram(const MvPoly& P, u64 Q, const ExecOptions& opts = {}) {
    const auto box = BoxRange::dyadic(Q, P.num_vars());
    box.require_within(opts.max_tuples, "value histogram");
    const PolyEvaluator ev(P);
    using Local = std::unordered_map<i64, u64>;
    auto parts = accumulate_by_leading<Local>(box, opts.workers, [&](Local& acc, std::span<const i64> q) {
        ++acc[ev.eval(q)];
    });
    std::map<i64, u64> out;
    for (const auto& part : parts)
        for (auto [v, c] : part) out[v] += c;
    return out;
}

/// r_P(m, Q): number of q ~ Q with P(q) = m.
inline u64 rep_count(const MvPoly& P, const BigInt& m, u64 Q, const ExecOptions& opts = {}) {
    const auto box = BoxRange::dyadic(Q, P.num_vars());
    box.require_within(opts.max_tuples, "rep_count");
    const auto target = fit_i64(m);
    if (!target) return 0;
    const PolyEvaluator ev(P);
    auto parts = accumulate_by_leading<u64>(box, opts.workers, [&](u64& acc, std::span<const i64> q) {
        if (ev.eval(q) == *target) ++acc;
    });
    u64 total = 0;
    for (u64 c : parts) total += c;
    return total;
}

/// r_P^*(Q): the largest fibre of P over q ~ Q.
inline u64 rep_max(const MvPoly& P, u64 Q, const ExecOptions& opts = {}) {
    u64 best = 0;
    for (const auto& [v, c] : value_histogram(P, Q, opts)) best = std::max(best, c);
    return best;
}

struct BadModuliReport {
    u64 count = 0;
    u64 total = 0;
    BigInt threshold;     // floor(eps * Q^k); |P(q)| <= threshold is "bad"
    double ratio = 0.0;   // count / (eps^{1/k} Q^ell); NaN when eps = 0
};

/// Number of q ~ Q with |P(q)| <= eps * Q^k, k the total degree of P.
inline BadModuliReport bad_moduli_count(const MvPoly& P, u64 Q, const Rational& eps, const ExecOptions& opts = {}) {
    if (eps < 0) throw InputError("eps must be non-negative");
    const unsigned k = P.total_degree();
    const auto box = BoxRange::dyadic(Q, P.num_vars());
    box.require_within(opts.max_tuples, "bad_moduli_count");
    BadModuliReport r;
    const BigInt Qk = boost::multiprecision::pow(BigInt(Q), k);
    r.threshold = boost::multiprecision::numerator(eps) * Qk / boost::multiprecision::denominator(eps);
    r.total = *box.size();
    const PolyEvaluator ev(P);
    const bool all_bad = r.threshold >= BigInt(std::numeric_limits<i64>::max());
    const u64 thr = all_bad ? 0 : static_cast<u64>(r.threshold);
    auto parts = accumulate_by_leading<u64>(box, opts.workers, [&](u64& acc, std::span<const i64> q) {
        const i64 v = ev.eval(q);
        const u64 mag = v < 0 ? static_cast<u64>(-(v + 1)) + 1 : static_cast<u64>(v);
        if (all_bad || mag <= thr) ++acc;
    });
    for (u64 c : parts) r.count += c;
    const double e = to_double(eps);
    r.ratio = e > 0 ? static_cast<double>(r.count) / (std::pow(e, 1.0 / k) * static_cast<double>(r.total))
                    : std::numeric_limits<double>::quiet_NaN();
    return r;
}

} // namespace polysieve

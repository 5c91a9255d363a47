#pragma once
// The Farey system S(Q) = { a / P(q) : 1 <= a < P(q), gcd(a, P(q)) = 1, q ~ Q },
// kept with multiplicity, and its exact spacing statistics.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "arith.hpp"
#include "boxes.hpp"
#include "congruence.hpp"
#include "errors.hpp"
#include "mvpoly.hpp"
#include "numeric.hpp"
#include "parallel.hpp"

namespace polysieve {

/// Keeps a modulus d iff d >= threshold.
class ModulusFilter {
public:
    static ModulusFilter none() { return ModulusFilter(); }
    static ModulusFilter at_least(const Rational& t) { return ModulusFilter(t, "at_least " + to_string(t)); }
    /// c * Q^k.
    static ModulusFilter scaled(const Rational& c, u64 Q, unsigned k) {
        const Rational t = c * Rational(boost::multiprecision::pow(BigInt(Q), k));
        return ModulusFilter(t, "scaled " + to_string(c) + "*Q^" + std::to_string(k));
    }
    /// Q^k * (log(Q + 2))^{-k}: the default reading of "P(q) >> Q^{k+o(1)}".
    static ModulusFilter star_default(u64 Q, unsigned k) {
        const double c = std::pow(std::log(static_cast<double>(Q) + 2.0), -static_cast<double>(k));
        const Rational t = Rational(c) * Rational(boost::multiprecision::pow(BigInt(Q), k));
        return ModulusFilter(t, "Q^k*log(Q+2)^-k");
    }

    [[nodiscard]] bool active() const { return active_; }
    [[nodiscard]] const Rational& threshold() const { return threshold_; }
    [[nodiscard]] const std::string& description() const { return description_; }
    [[nodiscard]] bool keeps(u64 d) const { return !active_ || BigInt(d) >= min_modulus_; }

private:
    ModulusFilter() = default;
    ModulusFilter(const Rational& t, std::string desc) : active_(true), threshold_(t), description_(std::move(desc)) {
        const BigInt num = boost::multiprecision::numerator(t), den = boost::multiprecision::denominator(t);
        min_modulus_ = num / den;
        if (min_modulus_ * den < num) ++min_modulus_;
    }

    bool active_ = false;
    Rational threshold_ = 0;
    BigInt min_modulus_ = 0;
    std::string description_ = "none";
};

/// Moduli |P(q)| over q ~ Q that pass the filter, with counts of the tuples dropped.
struct ModulusScan {
    std::map<u64, u64> moduli; // modulus -> number of q giving it
    std::vector<u64> in_order; // retained moduli in box order
    u64 retained = 0;
    u64 skipped_small = 0;     // |P(q)| <= 1
    u64 skipped_filter = 0;
    u64 max_modulus = 0;
};

inline ModulusScan scan_moduli(const MvPoly& P, u64 Q, const ModulusFilter& filter, const ExecOptions& opts = {}) {
    const auto box = BoxRange::dyadic(Q, P.num_vars());
    box.require_within(opts.max_tuples, "modulus scan");
    const PolyEvaluator ev(P);
    struct Part {
        std::vector<u64> kept;
        u64 small = 0, filtered = 0;
    };
    auto parts = accumulate_by_leading<Part>(box, opts.workers, [&](Part& acc, std::span<const i64> q) {
        const i64 v = ev.eval(q);
        const u64 d = v < 0 ? static_cast<u64>(-(v + 1)) + 1 : static_cast<u64>(v);
        if (d <= 1)
            ++acc.small;
        else if (!filter.keeps(d))
            ++acc.filtered;
        else
            acc.kept.push_back(d);
    });
    ModulusScan s;
    for (const auto& p : parts) {
        s.skipped_small += p.small;
        s.skipped_filter += p.filtered;
        for (u64 d : p.kept) {
            ++s.moduli[d];
            s.in_order.push_back(d);
            s.max_modulus = std::max(s.max_modulus, d);
        }
    }
    s.retained = s.in_order.size();
    return s;
}

struct FareyPoint {
    i64 num;
    i64 den;
    u64 multiplicity;
};

inline bool value_less(const FareyPoint& x, const FareyPoint& y) {
    return static_cast<i128>(x.num) * y.den < static_cast<i128>(y.num) * x.den;
}

struct FareySystem {
    std::vector<FareyPoint> points; // distinct values, increasing
    u64 total_count = 0;            // with multiplicity
    u64 distinct_count = 0;
    ModulusScan scan;
    u64 Q = 0;
    std::string filter;
};

inline constexpr i64 kMaxFareyDenominator = (i64{1} << 31) - 1;

inline FareySystem build_farey(const MvPoly& P, u64 Q, const ModulusFilter& filter = ModulusFilter::none(),
                               const ExecOptions& opts = {}) {
    FareySystem F;
    F.Q = Q;
    F.filter = filter.description();
    F.scan = scan_moduli(P, Q, filter, opts);
    u64 distinct = 0;
    for (auto [d, c] : F.scan.moduli) {
        if (d > static_cast<u64>(kMaxFareyDenominator))
            throw ResourceError("Farey denominator " + std::to_string(d) + " exceeds 2^31");
        const u64 phi = euler_phi(d);
        distinct += phi;
        F.total_count += phi * c;
        if (distinct > opts.max_points)
            throw ResourceError("Farey system exceeds the point budget of " + std::to_string(opts.max_points));
    }
    F.points.reserve(distinct);
    for (auto [d, c] : F.scan.moduli)
        for (u64 a = 1; a < d; ++a)
            if (std::gcd(a, d) == 1) F.points.push_back({static_cast<i64>(a), static_cast<i64>(d), c});
    std::sort(F.points.begin(), F.points.end(), value_less);
    F.distinct_count = F.points.size();
    return F;
}

/// A nonnegative exact fraction num/den with den > 0.
struct Fraction {
    u128 num = 0;
    u128 den = 1;
    friend bool operator<(const Fraction& a, const Fraction& b) { return a.num * b.den < b.num * a.den; }
    friend bool operator==(const Fraction& a, const Fraction& b) { return a.num * b.den == b.num * a.den; }
    [[nodiscard]] Rational to_rational() const { return Rational(BigInt(num), BigInt(den)); }
};

/// Circular distance ||x - y|| of two points of [0, 1).
inline Fraction circular_distance(const FareyPoint& x, const FareyPoint& y) {
    i128 diff = static_cast<i128>(y.num) * x.den - static_cast<i128>(x.num) * y.den;
    if (diff < 0) diff = -diff;
    const u128 den = static_cast<u128>(x.den) * static_cast<u128>(y.den);
    u128 num = static_cast<u128>(diff);
    if (2 * num > den) num = den - num;
    return {num, den};
}

/// Smallest circular distance between distinct values.
inline Rational min_spacing(const FareySystem& F) {
    const auto& pts = F.points;
    if (pts.size() < 2) throw InputError("min_spacing needs at least two distinct points");
    Fraction best = circular_distance(pts.back(), pts.front());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) best = std::min(best, circular_distance(pts[i], pts[i + 1]));
    return best.to_rational();
}

/// M(N, Q): the largest number of points (with multiplicity, counting the
/// centre itself) strictly within circular distance 1/(2N) of a point.
inline u64 spacing_count_M(const FareySystem& F, u64 N) {
    if (N == 0) throw InputError("N must be positive");
    if (N > (u64{1} << 62)) throw InputError("N too large");
    const auto& pts = F.points;
    const std::size_t n = pts.size();
    if (n == 0) throw InputError("empty Farey system");
    const u64 twoN = 2 * N;
    // Extended circle: copies shifted by -1, 0, +1. Entry e is pts[e % n] + (e / n - 1).
    auto within = [&](std::size_t e, const FareyPoint& x, bool ahead) {
        const FareyPoint& y = pts[e % n];
        const i128 shift = static_cast<i128>(e / n) - 1;
        // signed numerator of (y + shift) - x over y.den * x.den
        i128 diff = (static_cast<i128>(y.num) + shift * y.den) * x.den - static_cast<i128>(x.num) * y.den;
        if (!ahead) diff = -diff;
        if (diff <= 0) return true;
        const u128 den = static_cast<u128>(y.den) * static_cast<u128>(x.den);
        return static_cast<u128>(diff) <= (den - 1) / twoN;
    };
    std::vector<u64> prefix(3 * n + 1, 0);
    for (std::size_t e = 0; e < 3 * n; ++e) prefix[e + 1] = prefix[e] + pts[e % n].multiplicity;
    u64 best = 0;
    std::size_t lo = 0, hi = n;
    for (std::size_t i = n; i < 2 * n; ++i) {
        const FareyPoint& x = pts[i - n];
        while (!within(lo, x, false)) ++lo;
        if (hi < i + 1) hi = i + 1;
        while (hi < 3 * n && within(hi, x, true)) ++hi;
        best = std::max(best, prefix[hi] - prefix[lo]);
    }
    return best;
}

/// Q^{ell + k/r(k+1)} N^{-1/r(k+1)}: the comparator for M(N, Q), constants set to 1.
inline double close_points_comparator(unsigned k, std::size_t ell, u64 Q, u64 N) {
    const double rk = static_cast<double>(r_parameter(k, static_cast<unsigned>(ell))) * (k + 1);
    return std::pow(static_cast<double>(Q), static_cast<double>(ell) + k / rk) *
           std::pow(static_cast<double>(N), -1.0 / rk);
}

} // namespace polysieve

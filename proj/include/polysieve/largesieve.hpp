#pragma once
// Exponential sums S(theta) = sum_{M < n <= M+N} a_n e(n theta), the sieve sum
//   sum_{q ~ Q} sum_{1 <= a < P(q), (a, P(q)) = 1} |S(a / P(q))|^2
// (optionally restricted by a modulus filter), and the Delta comparators.

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "arith.hpp"
#include "boxes.hpp"
#include "congruence.hpp"
#include "errors.hpp"
#include "farey.hpp"
#include "mvpoly.hpp"
#include "numeric.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace polysieve {

using Complex = std::complex<double>;

class SieveSequence {
public:
    SieveSequence(u64 M, std::vector<Complex> coeffs) : M_(M), coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw InputError("sequence length N must be positive");
        CompensatedSum s;
        for (const auto& c : coeffs_) s += std::norm(c);
        norm_sq_ = s.value();
    }

    static SieveSequence all_ones(u64 M, u64 N) { return {M, std::vector<Complex>(N, Complex(1.0, 0.0))}; }

    /// a_{M+1+pos} = 1, all others 0.
    static SieveSequence spike(u64 M, u64 N, u64 pos = 0) {
        if (pos >= N) throw InputError("spike position outside the sequence");
        std::vector<Complex> c(N, Complex(0.0, 0.0));
        c[pos] = Complex(1.0, 0.0);
        return {M, std::move(c)};
    }

    static SieveSequence random_sign(u64 M, u64 N, u64 seed) {
        auto g = stream_rng(seed, 1);
        std::vector<Complex> c(N);
        for (auto& v : c) v = Complex((g() >> 63) ? -1.0 : 1.0, 0.0);
        return {M, std::move(c)};
    }

    static SieveSequence random_unit(u64 M, u64 N, u64 seed) {
        auto g = stream_rng(seed, 2);
        std::vector<Complex> c(N);
        for (auto& v : c) v = std::polar(1.0, 2.0 * std::numbers::pi * unit_interval(g));
        return {M, std::move(c)};
    }

    /// Family by name: "ones", "spike", "sign", "unit".
    static SieveSequence family(const std::string& name, u64 M, u64 N, u64 seed) {
        if (name == "ones") return all_ones(M, N);
        if (name == "spike") return spike(M, N);
        if (name == "sign") return random_sign(M, N, seed);
        if (name == "unit") return random_unit(M, N, seed);
        throw InputError("unknown sequence family '" + name + "' (expected ones, spike, sign or unit)");
    }

    [[nodiscard]] u64 M() const { return M_; }
    [[nodiscard]] u64 N() const { return coeffs_.size(); }
    [[nodiscard]] const std::vector<Complex>& coeffs() const { return coeffs_; }
    [[nodiscard]] double norm_sq() const { return norm_sq_; }

private:
    u64 M_;
    std::vector<Complex> coeffs_;
    double norm_sq_ = 0.0;
};

/// S(a/m), with the phase reduced to (a n mod m)/m before the trigonometry.
inline Complex exp_sum(const SieveSequence& seq, i64 a, u64 m) {
    if (m == 0) throw InputError("denominator must be positive");
    const u64 ar = mod_floor(a, m);
    const double scale = 2.0 * std::numbers::pi / static_cast<double>(m);
    Complex s(0.0, 0.0);
    u64 nr = (seq.M() + 1) % m;
    for (const auto& c : seq.coeffs()) {
        const u64 r = mulmod(ar, nr, m);
        if (c != Complex(0.0, 0.0)) s += c * std::polar(1.0, scale * static_cast<double>(r));
        if (++nr == m) nr = 0;
    }
    return s;
}

namespace detail {

inline std::vector<Complex> fold_residues(const SieveSequence& seq, u64 m) {
    std::vector<Complex> b(m, Complex(0.0, 0.0));
    u64 nr = (seq.M() + 1) % m;
    for (const auto& c : seq.coeffs()) {
        b[nr] += c;
        if (++nr == m) nr = 0;
    }
    return b;
}

inline std::vector<Complex> twiddles(u64 m) {
    std::vector<Complex> w(m);
    const double scale = 2.0 * std::numbers::pi / static_cast<double>(m);
    for (u64 j = 0; j < m; ++j) w[j] = j == 0 ? Complex(1.0, 0.0) : std::polar(1.0, scale * static_cast<double>(j));
    return w;
}

// sum_r b_r e(a r / m) over the nonzero folded residues.
inline Complex dft_entry(const std::vector<std::pair<u64, Complex>>& folded, const std::vector<Complex>& w, u64 a, u64 m) {
    Complex s(0.0, 0.0);
    for (const auto& [r, b] : folded) s += b * w[mulmod(a, r, m)];
    return s;
}

inline std::vector<std::pair<u64, Complex>> nonzero_folded(const SieveSequence& seq, u64 m) {
    std::vector<std::pair<u64, Complex>> out;
    const auto b = fold_residues(seq, m);
    for (u64 r = 0; r < m; ++r)
        if (b[r] != Complex(0.0, 0.0)) out.emplace_back(r, b[r]);
    return out;
}

} // namespace detail

/// S(a/m) for a = 0, ..., m-1: fold n into residues mod m, then a length-m DFT.
inline std::vector<Complex> exp_sums_all_residues(const SieveSequence& seq, u64 m) {
    if (m == 0) throw InputError("modulus must be positive");
    const auto folded = detail::nonzero_folded(seq, m);
    const auto w = detail::twiddles(m);
    std::vector<Complex> out(m);
    for (u64 a = 0; a < m; ++a) out[a] = detail::dft_entry(folded, w, a, m);
    return out;
}

/// Work estimates (in complex multiply-adds) used to choose between the two evaluation paths.
struct PathCost {
    double pointwise;
    double bulk;
};
inline PathCost coprime_power_sum_cost(u64 N, u64 d, u64 phi) {
    constexpr double kTrig = 8.0; // a polar() call costs roughly this many multiply-adds
    const double n = static_cast<double>(N), dd = static_cast<double>(d), ph = static_cast<double>(phi);
    return {ph * n * kTrig, n + dd * kTrig + ph * std::min(dd, n)};
}

/// sum over 1 <= a < d, gcd(a, d) = 1 of |S(a/d)|^2, each S evaluated pointwise.
inline double coprime_power_sum_pointwise(const SieveSequence& seq, u64 d) {
    CompensatedSum s;
    for (u64 a = 1; a < d; ++a)
        if (std::gcd(a, d) == 1) s += std::norm(exp_sum(seq, static_cast<i64>(a), d));
    return s.value();
}

/// Same sum through the folded-residue transform.
inline double coprime_power_sum_bulk(const SieveSequence& seq, u64 d) {
    const auto folded = detail::nonzero_folded(seq, d);
    const auto w = detail::twiddles(d);
    CompensatedSum s;
    for (u64 a = 1; a < d; ++a)
        if (std::gcd(a, d) == 1) s += std::norm(detail::dft_entry(folded, w, a, d));
    return s.value();
}

inline double coprime_power_sum(const SieveSequence& seq, u64 d) {
    if (d <= 1) return 0.0;
    const auto cost = coprime_power_sum_cost(seq.N(), d, euler_phi(d));
    return cost.bulk < cost.pointwise ? coprime_power_sum_bulk(seq, d) : coprime_power_sum_pointwise(seq, d);
}

struct SieveSumReport {
    double value = 0.0;
    u64 retained = 0;
    u64 skipped_small = 0;
    u64 skipped_filter = 0;
    u64 max_modulus = 0;
};

/// Sigma_{N,Q,P} (or its starred form, through the filter). Per leading
/// coordinate partial sums are reduced in coordinate order.
inline SieveSumReport sieve_sum(const SieveSequence& seq, const MvPoly& P, u64 Q,
                                const ModulusFilter& filter = ModulusFilter::none(), const ExecOptions& opts = {}) {
    const auto box = BoxRange::dyadic(Q, P.num_vars());
    box.require_within(opts.max_tuples, "sieve sum");
    const PolyEvaluator ev(P);
    struct Part {
        CompensatedSum sum;
        u64 retained = 0, small = 0, filtered = 0, max_modulus = 0;
        std::unordered_map<u64, double> cache;
    };
    auto parts = accumulate_by_leading<Part>(box, opts.workers, [&](Part& acc, std::span<const i64> q) {
        const i64 v = ev.eval(q);
        const u64 d = v < 0 ? static_cast<u64>(-(v + 1)) + 1 : static_cast<u64>(v);
        if (d <= 1) {
            ++acc.small;
            return;
        }
        if (!filter.keeps(d)) {
            ++acc.filtered;
            return;
        }
        if (d > opts.max_points) throw ResourceError("modulus " + std::to_string(d) + " exceeds the evaluation budget");
        ++acc.retained;
        acc.max_modulus = std::max(acc.max_modulus, d);
        auto it = acc.cache.find(d);
        if (it == acc.cache.end()) it = acc.cache.emplace(d, coprime_power_sum(seq, d)).first;
        acc.sum += it->second;
    });
    SieveSumReport r;
    CompensatedSum total;
    for (const auto& p : parts) {
        total += p.sum.value();
        r.retained += p.retained;
        r.skipped_small += p.small;
        r.skipped_filter += p.filtered;
        r.max_modulus = std::max(r.max_modulus, p.max_modulus);
    }
    r.value = total.value();
    return r;
}

/// sum over the points of F of |S(point)|^2, each distinct value once or with its multiplicity.
inline double farey_power_sum(const SieveSequence& seq, const FareySystem& F, bool with_multiplicity) {
    CompensatedSum s;
    for (const auto& p : F.points) {
        const double v = std::norm(exp_sum(seq, p.num, static_cast<u64>(p.den)));
        s += with_multiplicity ? v * static_cast<double>(p.multiplicity) : v;
    }
    return s.value();
}

struct DeltaReport {
    unsigned k = 0;
    std::size_t ell = 0;
    u64 Q = 0, N = 0, r_star = 0;
    u64 r = 0;  // C(k+ell, ell) - 1
    u64 r0 = 0; // C(ell k + ell - 1, ell) - 1
    double empirical = std::numeric_limits<double>::quiet_NaN();
    double trivial_bound = 0.0;
    double zhao_conjecture = 0.0;
    double old_bound = 0.0;
    double new_bound = 0.0;
    bool new_bound_applicable = false; // Q^k <= N <= Q^{2k}
};

/// The four Delta comparators with every (QN)^{o(1)} factor and implied constant set to 1.
inline DeltaReport delta_bounds(unsigned k, std::size_t ell, u64 Q, u64 N, u64 r_star) {
    if (k < 2) throw InputError("Delta comparators need k >= 2");
    if (ell == 0 || Q == 0 || N == 0 || r_star == 0) throw InputError("ell, Q, N and r* must be positive");
    DeltaReport d;
    d.k = k;
    d.ell = ell;
    d.Q = Q;
    d.N = N;
    d.r_star = r_star;
    d.r = r_parameter(k, static_cast<unsigned>(ell));
    d.r0 = checked_i64(binomial(static_cast<unsigned>(ell * k + ell - 1), static_cast<unsigned>(ell)) - 1, "r0");
    const double q = static_cast<double>(Q), n = static_cast<double>(N), rs = static_cast<double>(r_star);
    const double l = static_cast<double>(ell), kk = k;
    d.trivial_bound = std::min(rs * (std::pow(q, 2 * kk) + n), std::pow(q, l) * (std::pow(q, kk) + n));
    d.zhao_conjecture = rs * (std::pow(q, l + kk) + n);
    const double r0 = static_cast<double>(d.r0);
    d.old_bound = std::pow(q, l * (kk + 1)) + std::pow(q, l - 1.0 / (2 * r0 * l * kk)) * n +
                  std::pow(q, l + 1.0 / (2 * r0)) * std::pow(n, 1.0 - 1.0 / (2 * r0 * l * kk));
    const double rk = static_cast<double>(d.r) * (kk + 1);
    d.new_bound = std::pow(q, l + kk / rk) * std::pow(n, 1.0 - 1.0 / rk);
    const BigInt Qk = boost::multiprecision::pow(BigInt(Q), k);
    d.new_bound_applicable = Qk <= N && BigInt(N) <= Qk * Qk;
    return d;
}

/// sieve_sum / norm_sq.
inline double empirical_delta(const SieveSequence& seq, const MvPoly& P, u64 Q,
                              const ModulusFilter& filter = ModulusFilter::none(), const ExecOptions& opts = {}) {
    if (seq.norm_sq() <= 0.0) throw InputError("sequence has zero norm");
    return sieve_sum(seq, P, Q, filter, opts).value / seq.norm_sq();
}

} // namespace polysieve

#pragma once
// Level-of-distribution exponents and desk-scale evaluation of the
// Bombieri-Vinogradov sum with polynomial moduli and of the mean-value
// sum over primitive characters.

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "arith.hpp"
#include "boxes.hpp"
#include "characters.hpp"
#include "congruence.hpp"
#include "errors.hpp"
#include "mvpoly.hpp"
#include "numeric.hpp"
#include "parallel.hpp"

namespace polysieve {

struct ExponentProfile {
    unsigned k = 0;
    unsigned ell = 0;
    u64 r = 0;                          // C(k+ell, ell) - 1
    Rational rho;                       // r(k+1) / (r(k+1) - 1)
    Rational level_exponent;            // 1 / (2k + k/(2 rho))
    Rational ellcond_rhs;               // (1 - 1/(2 rho)) k
    Rational conjectural_level_exponent; // 1 / (2k)
    Rational maynard_rhs;               // 3k/4

    [[nodiscard]] bool ell_condition() const { return Rational(ell) >= ellcond_rhs; }
    [[nodiscard]] bool maynard_condition() const { return Rational(ell) >= maynard_rhs; }
};

inline ExponentProfile exponent_profile(unsigned k, unsigned ell) {
    if (k == 0 || ell == 0) throw InputError("exponent profile needs k >= 1 and ell >= 1");
    ExponentProfile p;
    p.k = k;
    p.ell = ell;
    p.r = r_parameter(k, ell);
    const Rational R(BigInt(p.r) * (k + 1));
    p.rho = R / (R - 1);
    const Rational kk(k);
    p.level_exponent = 1 / (2 * kk + kk / (2 * p.rho));
    p.ellcond_rhs = (1 - 1 / (2 * p.rho)) * kk;
    p.conjectural_level_exponent = 1 / (2 * kk);
    p.maynard_rhs = Rational(3 * k, 4);
    return p;
}

/// 1/(2k + k/(2 rho)) simplified: 2R / (k (5R - 1)) with R = r(k+1).
inline Rational level_exponent_closed_form(unsigned k, unsigned ell) {
    const BigInt R = BigInt(r_parameter(k, ell)) * (k + 1);
    return Rational(2 * R, BigInt(k) * (5 * R - 1));
}

struct FactorSetting {
    unsigned k = 0;
    unsigned ell = 0;
    ExponentProfile profile;
    bool ell_condition = false;
    BigInt h;
    std::vector<std::size_t> variables;
};

struct DivisorSetting {
    std::vector<std::size_t> factor_indices;
    unsigned k = 0;
    unsigned ell = 0;
    Rational level_exponent;
    bool level_monotone = false; // level(P) <= level(divisor)
    bool ell_condition = false;
};

struct SettingReport {
    unsigned k = 0;
    unsigned ell = 0;
    BigInt h;
    ExponentProfile profile;
    bool disjoint = true;
    std::vector<FactorSetting> factors;
    std::vector<DivisorSetting> divisors;

    [[nodiscard]] bool all_ell_conditions() const {
        for (const auto& f : factors)
            if (!f.ell_condition) return false;
        return true;
    }
    [[nodiscard]] bool all_monotone() const {
        for (const auto& d : divisors)
            if (!d.level_monotone) return false;
        return true;
    }
};

/// Structural checks for a product of factors in disjoint variables. The
/// hypothesis r_P^*(Q) = Q^{o(1)} is asymptotic and is not decided here.
inline SettingReport check_setting(const FactoredPoly& F) {
    SettingReport rep;
    const MvPoly& P = F.product();
    rep.k = P.total_degree();
    rep.ell = static_cast<unsigned>(P.num_vars());
    rep.h = min_leading_coefficient(P);
    rep.profile = exponent_profile(rep.k, rep.ell);
    for (const auto& f : F.factors()) {
        FactorSetting s;
        s.k = f.poly.total_degree();
        s.ell = static_cast<unsigned>(f.variables.size());
        s.profile = exponent_profile(s.k, s.ell);
        s.ell_condition = s.profile.ell_condition();
        s.h = min_leading_coefficient(f.poly);
        s.variables = f.variables;
        rep.factors.push_back(std::move(s));
    }
    for (const auto& d : divisor_polynomials(F)) {
        DivisorSetting s;
        s.factor_indices = d.factor_indices;
        s.k = d.poly.total_degree();
        s.ell = static_cast<unsigned>(d.variables.size());
        const auto prof = exponent_profile(s.k, s.ell);
        s.level_exponent = prof.level_exponent;
        s.level_monotone = rep.profile.level_exponent <= prof.level_exponent;
        s.ell_condition = prof.ell_condition();
        rep.divisors.push_back(std::move(s));
    }
    return rep;
}

struct GqWeight {
    double weight = 0.0;
    bool nonpositive = false; // some H_j(q) < 1: weight defined as 0
};

/// G_q = mu^2(P(q)) * prod_j Lambda(H_j(q)).
inline GqWeight gq_weight(const FactoredPoly& F, std::span<const i64> q) {
    GqWeight g;
    std::vector<u64> primes;
    double w = 1.0;
    for (const auto& f : F.factors()) {
        const BigInt v = f.poly.eval(q);
        if (v < 1) {
            g.nonpositive = true;
            return g;
        }
        const auto hv = fit_i64(v);
        if (!hv) throw ResourceError("factor value " + v.str() + " exceeds the 64-bit range");
        const u64 h = static_cast<u64>(*hv);
        if (h == 1) return g; // Lambda(1) = 0
        const auto fac = factorize(h);
        if (!fac.is_prime_power()) return g;
        const auto [p, e] = fac.prime_powers.front();
        // P(q) = prod H_j(q) is squarefree iff every H_j(q) is a prime and the primes differ.
        if (e != 1) return g;
        for (u64 other : primes)
            if (other == p) return g;
        primes.push_back(p);
        w *= std::log(static_cast<double>(p));
    }
    g.weight = w;
    return g;
}

struct Discrepancy {
    double value = 0.0;
    double y = 0.0;          // where the sup is attained
    bool left_limit = false; // attained as y -> y^-
    u64 residue = 0;
};

/// sup_{y <= x} max_{(a, m) = 1} |psi(y; m, a) - y/phi(m)|. Between jumps the
/// expression is linear in y, so the sup is taken over x and both one-sided
/// limits at every prime power n <= x.
inline Discrepancy discrepancy(u64 m, double x) {
    if (m < 2) throw InputError("discrepancy needs modulus >= 2");
    if (x < 1) throw InputError("discrepancy needs x >= 1");
    if (m > 100'000'000) throw ResourceError("discrepancy modulus above cap");
    const double phi = static_cast<double>(euler_phi(m));
    const u64 xmax = floor_nonneg(x);
    const auto table = prime_power_table(xmax);
    std::vector<CompensatedSum> acc(m);
    Discrepancy best;
    auto consider = [&](double value, double y, bool left, u64 a) {
        if (value > best.value) best = Discrepancy{value, y, left, a};
    };
    for (const auto& pp : table->prime_powers_upto(xmax)) {
        const u64 c = pp.n % m;
        if (std::gcd(c, m) != 1) continue;
        const double y = static_cast<double>(pp.n);
        consider(std::fabs(acc[c].value() - y / phi), y, true, c);
        acc[c] += pp.log_p;
        consider(std::fabs(acc[c].value() - y / phi), y, false, c);
    }
    for (u64 a = 1; a < m; ++a)
        if (std::gcd(a, m) == 1) consider(std::fabs(acc[a].value() - x / phi), x, false, a);
    return best;
}

inline Rational default_eps_bad(u64 Q, unsigned k, double A, std::size_t factor_count) {
    const double e = std::pow(std::log(static_cast<double>(Q) + 2.0), -static_cast<double>(k) * (A + factor_count + 1));
    return Rational(e);
}

struct BvReport {
    double value = 0.0;
    u64 tuples = 0;
    u64 excluded_bad = 0;   // |P(q)| <= eps Q^k
    u64 nonpositive = 0;    // some H_j(q) < 1
    u64 nonzero_weight = 0; // tuples with G_q != 0 that entered the sum
    Rational eps_bad;
    double A = 2.0;
    double comparator = 0.0; // x / (log x)^A
};

/// sum_{q ~ Q, |P(q)| > eps Q^k} G_q phi(P(q)) / Q^ell * discrepancy(P(q), x).
inline BvReport bv_sum(const FactoredPoly& F, u64 Q, double x, std::optional<Rational> eps_bad = std::nullopt,
                       double A = 2.0, const ExecOptions& opts = {}) {
    const MvPoly& P = F.product();
    const unsigned k = P.total_degree();
    const auto box = BoxRange::dyadic(Q, P.num_vars());
    box.require_within(opts.max_tuples, "bv_sum");
    BvReport rep;
    rep.A = A;
    rep.eps_bad = eps_bad ? *eps_bad : default_eps_bad(Q, k, A, F.size());
    rep.tuples = *box.size();
    rep.comparator = x / std::pow(std::log(x), A);
    const BigInt Qk = boost::multiprecision::pow(BigInt(Q), k);
    const BigInt thr_num = boost::multiprecision::numerator(rep.eps_bad) * Qk;
    const BigInt thr_den = boost::multiprecision::denominator(rep.eps_bad);
    const double q_ell = std::pow(static_cast<double>(Q), static_cast<double>(P.num_vars()));
    const PolyEvaluator ev(P);
    struct Part {
        CompensatedSum sum;
        u64 bad = 0, nonpositive = 0, nonzero = 0;
        std::unordered_map<u64, double> cache;
    };
    auto parts = accumulate_by_leading<Part>(box, opts.workers, [&](Part& acc, std::span<const i64> q) {
        const i64 v = ev.eval(q);
        const BigInt mag = v < 0 ? -BigInt(v) : BigInt(v);
        if (mag * thr_den <= thr_num) {
            ++acc.bad;
            return;
        }
        const auto g = gq_weight(F, q);
        if (g.nonpositive) {
            ++acc.nonpositive;
            return;
        }
        if (g.weight == 0.0) return;
        ++acc.nonzero;
        const u64 d = static_cast<u64>(v);
        auto it = acc.cache.find(d);
        if (it == acc.cache.end()) it = acc.cache.emplace(d, discrepancy(d, x).value).first;
        acc.sum += g.weight * static_cast<double>(euler_phi(d)) / q_ell * it->second;
    });
    CompensatedSum total;
    for (const auto& p : parts) {
        total += p.sum.value();
        rep.excluded_bad += p.bad;
        rep.nonpositive += p.nonpositive;
        rep.nonzero_weight += p.nonzero;
    }
    rep.value = total.value();
    return rep;
}

/// sup_{y <= x} |psi(y, chi)|; psi(., chi) is a step function, so the sup is a max over partial sums.
inline double sup_abs_psi_chi(double x, const DirichletCharacter& chi) {
    if (x < 2) return 0.0;
    const u64 xmax = floor_nonneg(x);
    const auto table = prime_power_table(xmax);
    CompensatedSum re, im;
    double best = 0.0;
    for (const auto& pp : table->prime_powers_upto(xmax)) {
        const auto e = chi.exponent_at(static_cast<i64>(pp.n));
        if (e < 0) continue;
        const auto v = chi.group().root(static_cast<u64>(e));
        re += v.real() * pp.log_p;
        im += v.imag() * pp.log_p;
        best = std::max(best, std::abs(std::complex<double>(re.value(), im.value())));
    }
    return best;
}

struct MeanValueReport {
    double value = 0.0;
    u64 tuples = 0;
    u64 skipped_unit = 0;   // |P(q)| <= 1
    u64 negative_moduli = 0; // P(q) < 0, used as |P(q)|
    u64 primitive_characters = 0;
};

/// sum_{q ~ Q} P(q)/phi(P(q)) sum^*_{chi mod P(q)} sup_{y <= x} |psi(y, chi)|, primitive chi only.
inline MeanValueReport meanvalue_sum(const MvPoly& P, u64 Q, double x, const ExecOptions& opts = {}) {
    const auto box = BoxRange::dyadic(Q, P.num_vars());
    box.require_within(opts.max_tuples, "meanvalue_sum");
    MeanValueReport rep;
    rep.tuples = *box.size();
    const PolyEvaluator ev(P);
    struct Part {
        CompensatedSum sum;
        u64 unit = 0, negative = 0, prim = 0;
        std::unordered_map<u64, std::pair<double, u64>> cache;
    };
    auto parts = accumulate_by_leading<Part>(box, opts.workers, [&](Part& acc, std::span<const i64> q) {
        const i64 v = ev.eval(q);
        if (v < 0) ++acc.negative;
        const u64 d = v < 0 ? static_cast<u64>(-(v + 1)) + 1 : static_cast<u64>(v);
        if (d <= 1) {
            ++acc.unit;
            return;
        }
        auto it = acc.cache.find(d);
        if (it == acc.cache.end()) {
            CompensatedSum inner;
            u64 prim = 0;
            for (const auto& chi : enumerate_characters(d)) {
                if (!chi.is_primitive()) continue;
                ++prim;
                inner += sup_abs_psi_chi(x, chi);
            }
            const double w = static_cast<double>(d) / static_cast<double>(euler_phi(d));
            it = acc.cache.emplace(d, std::make_pair(w * inner.value(), prim)).first;
        }
        acc.sum += it->second.first;
        acc.prim += it->second.second;
    });
    CompensatedSum total;
    for (const auto& p : parts) {
        total += p.sum.value();
        rep.skipped_unit += p.unit;
        rep.negative_moduli += p.negative;
        rep.primitive_characters += p.prim;
    }
    rep.value = total.value();
    return rep;
}

} // namespace polysieve

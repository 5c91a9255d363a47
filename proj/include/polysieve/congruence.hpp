#pragma once
// Solutions of a*P(x) = y (mod m) with x in a shifted cube and y in a window,
// counted exactly, next to the Kerr-type bound
//   H^ell ((R/m)^{1/r(k+1)} + (R/H^k)^{1/r(k+1)}),  r = C(k+ell, ell) - 1,
// with the m^{o(1)} factor and implied constant set to 1.

#include <cmath>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "boxes.hpp"
#include "errors.hpp"
#include "mvpoly.hpp"
#include "numeric.hpp"
#include "parallel.hpp"

namespace polysieve {

struct CongruenceInstance {
    MvPoly P{1};
    i64 a = 1;
    u64 m = 1;
    std::vector<i64> K; // box corner: x_i in [K_i + 1, K_i + H]
    u64 H = 1;
    i64 L = 0;          // y in [L + 1, L + R]
    u64 R = 1;

    void validate() const {
        if (m == 0) throw InputError("modulus m must be positive");
        if (H == 0 || R == 0) throw InputError("H and R must be at least 1");
        if (K.size() != P.num_vars())
            throw InputError("corner K has " + std::to_string(K.size()) + " entries, polynomial has " +
                             std::to_string(P.num_vars()) + " variables");
        if (std::gcd(mod_floor(a, m), m) != 1) throw InputError("gcd(a, m) must be 1");
    }
};

/// #{y in [L+1, L+R] : y = v (mod m)}.
inline u64 window_hits(i64 L, u64 R, u64 v, u64 m) {
    auto floor_div = [](i128 num, i128 den) {
        i128 q = num / den;
        if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
        return q;
    };
    const i128 hi = floor_div(static_cast<i128>(L) + R - v, m);
    const i128 lo = floor_div(static_cast<i128>(L) - v, m);
    return static_cast<u64>(hi - lo);
}

/// Count by walking every x in the box.
inline u64 count_solutions_direct(const CongruenceInstance& inst, const ExecOptions& opts = {}) {
    inst.validate();
    const auto box = BoxRange::shifted_cube(inst.K, inst.H);
    box.require_within(opts.max_tuples, "congruence count");
    const PolyEvaluator ev(inst.P);
    const u64 am = mod_floor(inst.a, inst.m);
    auto parts = accumulate_by_leading<u64>(box, opts.workers, [&](u64& acc, std::span<const i64> x) {
        const u64 v = mulmod(am, ev.eval_mod(x, inst.m), inst.m);
        acc += window_hits(inst.L, inst.R, v, inst.m);
    });
    u64 total = 0;
    for (u64 c : parts) total += c;
    return total;
}

/// Count by grouping each coordinate into residue classes mod m with multiplicities.
inline u64 count_solutions_residue_table(const CongruenceInstance& inst, const ExecOptions& opts = {}) {
    inst.validate();
    const std::size_t ell = inst.P.num_vars();
    const u64 m = inst.m;
    std::vector<std::vector<std::pair<i64, u64>>> classes(ell);
    for (std::size_t i = 0; i < ell; ++i) {
        const u64 full = inst.H / m, extra = inst.H % m;
        const u64 start = mod_floor(inst.K[i] + 1, m);
        std::vector<u64> mult(m, full);
        for (u64 t = 0; t < extra; ++t) ++mult[(start + t) % m];
        for (u64 c = 0; c < m; ++c)
            if (mult[c] > 0) classes[i].emplace_back(static_cast<i64>(c), mult[c]);
    }
    BoxRange idx;
    for (std::size_t i = 0; i < ell; ++i) {
        idx.lo.push_back(0);
        idx.hi.push_back(static_cast<i64>(classes[i].size()) - 1);
    }
    idx.require_within(opts.max_tuples, "congruence residue table");
    const PolyEvaluator ev(inst.P);
    const u64 am = mod_floor(inst.a, m);
    auto parts = accumulate_by_leading<u64>(idx, opts.workers, [&](u64& acc, std::span<const i64> sel) {
        std::vector<i64> x(ell);
        u64 weight = 1;
        for (std::size_t i = 0; i < ell; ++i) {
            const auto& [c, w] = classes[i][static_cast<std::size_t>(sel[i])];
            x[i] = c;
            weight *= w;
        }
        const u64 v = mulmod(am, ev.eval_mod(x, m), m);
        acc += weight * window_hits(inst.L, inst.R, v, m);
    });
    u64 total = 0;
    for (u64 c : parts) total += c;
    return total;
}

/// N(H, R; K, L). Uses the residue table when the box is at least as wide as m.
inline u64 count_solutions(const CongruenceInstance& inst, const ExecOptions& opts = {}) {
    return inst.H >= inst.m ? count_solutions_residue_table(inst, opts) : count_solutions_direct(inst, opts);
}

/// r = C(k + ell, ell) - 1.
inline u64 r_parameter(unsigned k, unsigned ell) {
    return checked_i64(binomial(k + ell, ell) - 1, "r parameter");
}

struct KerrReport {
    unsigned k = 0;
    u64 r = 0;
    double bound = 0.0;
    u64 count = 0;
    double ratio = 0.0; // count / bound
};

inline double kerr_bound_value(unsigned k, std::size_t ell, u64 H, u64 R, u64 m) {
    const double e = 1.0 / (static_cast<double>(r_parameter(k, static_cast<unsigned>(ell))) * (k + 1));
    const double h = static_cast<double>(H);
    return std::pow(h, static_cast<double>(ell)) *
           (std::pow(static_cast<double>(R) / static_cast<double>(m), e) +
            std::pow(static_cast<double>(R) / std::pow(h, static_cast<double>(k)), e));
}

inline KerrReport kerr_bound(const CongruenceInstance& inst, const ExecOptions& opts = {}) {
    inst.validate();
    KerrReport rep;
    rep.k = inst.P.total_degree();
    if (rep.k < 2) throw InputError("the bound needs total degree k >= 2");
    const std::size_t ell = inst.P.num_vars();
    rep.r = r_parameter(rep.k, static_cast<unsigned>(ell));
    rep.bound = kerr_bound_value(rep.k, ell, inst.H, inst.R, inst.m);
    rep.count = count_solutions(inst, opts);
    rep.ratio = static_cast<double>(rep.count) / rep.bound;
    return rep;
}

} // namespace polysieve

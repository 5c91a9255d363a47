#pragma once
// Dirichlet characters modulo m.
//
// (Z/m)^* is decomposed by CRT into cyclic components: one per odd prime
// power (least primitive root), none for 2, one for 4 (generator -1) and two
// for 2^e, e >= 3 (generators -1 and 5). A character is an index vector on
// those generators; its values are stored as exponents k of e(k/E), where E
// is the group exponent, and turned into complex numbers only on request.

#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "numeric.hpp"

namespace polysieve {

class CharacterGroup {
public:
    static constexpr u64 kMaxModulus = 100000;

    struct Component {
        u64 prime;
        u64 prime_power;          // the CRT modulus this generator lives in
        u64 order;                // order of the generator
        u64 generator;            // residue mod prime_power
        std::vector<std::int64_t> log; // discrete log of each residue mod prime_power, -1 for non-units
    };

    explicit CharacterGroup(u64 m) : modulus_(m) {
        if (m == 0) throw InputError("character modulus must be positive");
        if (m > kMaxModulus)
            throw ResourceError("character modulus " + std::to_string(m) + " above cap " + std::to_string(kMaxModulus));
        for (auto [p, e] : factorize(m).prime_powers) {
            u64 pe = 1;
            for (unsigned i = 0; i < e; ++i) pe *= p;
            if (p == 2)
                add_two_power(e, pe);
            else
                add_odd_prime_power(p, e, pe);
        }
        exponent_ = 1;
        for (const auto& c : comps_) exponent_ = std::lcm(exponent_, c.order);
        roots_.resize(exponent_);
        for (u64 k = 0; k < exponent_; ++k) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(exponent_);
            roots_[k] = k == 0 ? std::complex<double>(1.0, 0.0) : std::polar(1.0, angle);
        }
    }

    [[nodiscard]] u64 modulus() const { return modulus_; }
    [[nodiscard]] u64 exponent() const { return exponent_; }
    [[nodiscard]] const std::vector<Component>& components() const { return comps_; }
    [[nodiscard]] const std::complex<double>& root(u64 k) const { return roots_[k]; }

    [[nodiscard]] u64 order() const {
        u64 o = 1;
        for (const auto& c : comps_) o *= c.order;
        return o;
    }

private:
    void add_odd_prime_power(u64 p, unsigned e, u64 pe) {
        const u64 phi = pe / p * (p - 1);
        const auto phi_primes = factorize(phi).prime_powers;
        u64 g = 2;
        for (;; ++g) {
            if (g % p == 0) continue;
            bool primitive = true;
            for (auto [q, unused] : phi_primes)
                if (powmod(g, phi / q, pe) == 1) {
                    primitive = false;
                    break;
                }
            if (primitive) break;
        }
        Component c{p, pe, phi, g, std::vector<std::int64_t>(pe, -1)};
        u64 v = 1;
        for (u64 k = 0; k < phi; ++k) {
            c.log[v] = static_cast<std::int64_t>(k);
            v = mulmod(v, g, pe);
        }
        (void)e;
        comps_.push_back(std::move(c));
    }

    void add_two_power(unsigned e, u64 pe) {
        if (e == 1) return;
        if (e == 2) {
            Component c{2, 4, 2, 3, {-1, 0, -1, 1}};
            comps_.push_back(std::move(c));
            return;
        }
        const u64 ord5 = pe / 4;
        Component sign{2, pe, 2, pe - 1, std::vector<std::int64_t>(pe, -1)};
        Component five{2, pe, ord5, 5, std::vector<std::int64_t>(pe, -1)};
        u64 v = 1;
        for (u64 t = 0; t < ord5; ++t) {
            sign.log[v] = 0;
            five.log[v] = static_cast<std::int64_t>(t);
            sign.log[pe - v] = 1;
            five.log[pe - v] = static_cast<std::int64_t>(t);
            v = v * 5 % pe;
        }
        comps_.push_back(std::move(sign));
        comps_.push_back(std::move(five));
    }

    u64 modulus_;
    u64 exponent_ = 1;
    std::vector<Component> comps_;
    std::vector<std::complex<double>> roots_;
};

class DirichletCharacter {
public:
    DirichletCharacter(std::shared_ptr<const CharacterGroup> group, std::vector<u64> index, u64 conductor)
        : group_(std::move(group)), index_(std::move(index)), conductor_(conductor) {}

    [[nodiscard]] u64 modulus() const { return group_->modulus(); }
    [[nodiscard]] u64 conductor() const { return conductor_; }
    [[nodiscard]] bool is_primitive() const { return conductor_ == group_->modulus(); }
    [[nodiscard]] const std::vector<u64>& index() const { return index_; }
    [[nodiscard]] const CharacterGroup& group() const { return *group_; }
    [[nodiscard]] bool is_principal() const {
        return std::all_of(index_.begin(), index_.end(), [](u64 j) { return j == 0; });
    }

    /// chi(n) = e(k / group().exponent()); returns k, or -1 when gcd(n, m) > 1.
    [[nodiscard]] std::int64_t exponent_at(i64 n) const {
        const u64 m = group_->modulus();
        const u64 r = mod_floor(n, m);
        if (std::gcd(r, m) != 1 && m != 1) return -1;
        const u64 E = group_->exponent();
        u64 k = 0;
        const auto& comps = group_->components();
        for (std::size_t i = 0; i < comps.size(); ++i) {
            if (index_[i] == 0) continue;
            const auto l = static_cast<u64>(comps[i].log[r % comps[i].prime_power]);
            k = (k + static_cast<u64>(static_cast<u128>(index_[i]) * l % comps[i].order) * (E / comps[i].order)) % E;
        }
        return static_cast<std::int64_t>(k);
    }

    [[nodiscard]] std::complex<double> operator()(i64 n) const {
        const auto k = exponent_at(n);
        return k < 0 ? std::complex<double>(0.0, 0.0) : group_->root(static_cast<u64>(k));
    }

    /// Values at 0, 1, ..., m-1.
    [[nodiscard]] std::vector<std::complex<double>> value_table() const {
        std::vector<std::complex<double>> out(modulus());
        for (u64 n = 0; n < modulus(); ++n) out[n] = (*this)(static_cast<i64>(n));
        return out;
    }

private:
    std::shared_ptr<const CharacterGroup> group_;
    std::vector<u64> index_;
    u64 conductor_;
};

namespace detail {

// Smallest p^f such that the local character (components [first, last) of one
// prime) is trivial on the units congruent to 1 mod p^f.
inline u64 local_conductor(const CharacterGroup& g, std::size_t first, std::size_t last, std::span<const u64> index) {
    const auto& comps = g.components();
    const u64 p = comps[first].prime;
    const u64 pe = comps[first].prime_power;
    u64 local_exp = 1;
    for (std::size_t i = first; i < last; ++i) local_exp = std::lcm(local_exp, comps[i].order);
    auto trivial_at = [&](u64 n) {
        u64 k = 0;
        for (std::size_t i = first; i < last; ++i) {
            const auto l = static_cast<u64>(comps[i].log[n]);
            k = (k + index[i] * l % comps[i].order * (local_exp / comps[i].order)) % local_exp;
        }
        return k == 0;
    };
    for (u64 pf = 1; pf < pe; pf *= p) {
        bool trivial = true;
        for (u64 n = 1; n < pe && trivial; n += pf)
            if (std::gcd(n, p) == 1 && !trivial_at(n)) trivial = false;
        if (trivial) return pf;
    }
    return pe;
}

} // namespace detail

/// All phi(m) characters mod m, ordered lexicographically by generator index
/// vector (first generator slowest).
inline std::vector<DirichletCharacter> enumerate_characters(u64 m) {
    auto group = std::make_shared<const CharacterGroup>(m);
    const auto& comps = group->components();

    // Group components by prime and tabulate local conductors per local index.
    struct Block {
        std::size_t first, last;
        std::vector<u64> conductor; // indexed by mixed-radix local index
    };
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < comps.size();) {
        std::size_t j = i;
        while (j < comps.size() && comps[j].prime == comps[i].prime) ++j;
        Block b{i, j, {}};
        u64 count = 1;
        for (std::size_t c = i; c < j; ++c) count *= comps[c].order;
        std::vector<u64> idx(comps.size(), 0);
        b.conductor.resize(count);
        for (u64 code = 0; code < count; ++code) {
            u64 rest = code;
            for (std::size_t c = j; c-- > i;) {
                idx[c] = rest % comps[c].order;
                rest /= comps[c].order;
            }
            b.conductor[code] = detail::local_conductor(*group, i, j, idx);
        }
        blocks.push_back(std::move(b));
        i = j;
    }

    std::vector<DirichletCharacter> out;
    out.reserve(group->order());
    std::vector<u64> idx(comps.size(), 0);
    for (;;) {
        u64 conductor = 1;
        for (const auto& b : blocks) {
            u64 code = 0;
            for (std::size_t c = b.first; c < b.last; ++c) code = code * comps[c].order + idx[c];
            conductor *= b.conductor[code];
        }
        out.emplace_back(group, idx, conductor);
        std::size_t c = comps.size();
        while (c > 0) {
            --c;
            if (++idx[c] < comps[c].order) break;
            idx[c] = 0;
            if (c == 0) return out;
        }
        if (comps.empty()) return out;
    }
}

/// psi(y, chi) = sum over n <= y of chi(n) Lambda(n), accumulated in increasing n.
inline std::complex<double> psi_chi(double y, const DirichletCharacter& chi) {
    if (y < 2) return {0.0, 0.0};
    const u64 ymax = floor_nonneg(y);
    const auto table = prime_power_table(ymax);
    CompensatedSum re, im;
    for (const auto& pp : table->prime_powers_upto(ymax)) {
        const auto v = chi(static_cast<i64>(pp.n));
        if (v == std::complex<double>(0.0, 0.0)) continue;
        re += v.real() * pp.log_p;
        im += v.imag() * pp.log_p;
    }
    return {re.value(), im.value()};
}

} // namespace polysieve

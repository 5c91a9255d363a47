#pragma once
// Exact sparse multivariate integer polynomials.
//
// Terms live in a map keyed by exponent vector under graded lexicographic
// order (higher total degree first, then lexicographically larger vectors
// first), which fixes the serialization and printing order.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "numeric.hpp"

namespace polysieve {

using Exponents = std::vector<unsigned>;

inline unsigned degree_of(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0u); }

struct GrlexOrder {
    bool operator()(const Exponents& a, const Exponents& b) const {
        const unsigned da = degree_of(a), db = degree_of(b);
        if (da != db) return da > db;
        return a > b;
    }
};

class MvPoly {
public:
    using TermMap = std::map<Exponents, BigInt, GrlexOrder>;

    explicit MvPoly(std::size_t num_vars = 1) : num_vars_(num_vars) {
        if (num_vars == 0) throw InputError("polynomial needs at least one variable");
    }

    static MvPoly constant(std::size_t num_vars, const BigInt& c) {
        MvPoly p(num_vars);
        p.add_term(Exponents(num_vars, 0), c);
        return p;
    }

    /// The monomial x_{index+1} (index is 0-based).
    static MvPoly variable(std::size_t num_vars, std::size_t index) {
        if (index >= num_vars) throw InputError("variable index out of range");
        MvPoly p(num_vars);
        Exponents e(num_vars, 0);
        e[index] = 1;
        p.add_term(e, 1);
        return p;
    }

    void add_term(const Exponents& exps, const BigInt& coef) {
        if (exps.size() != num_vars_) throw InputError("exponent vector length does not match num_vars");
        if (coef == 0) return;
        auto [it, inserted] = terms_.try_emplace(exps, coef);
        if (!inserted) {
            it->second += coef;
            if (it->second == 0) terms_.erase(it);
        }
    }

    [[nodiscard]] std::size_t num_vars() const { return num_vars_; }
    [[nodiscard]] const TermMap& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] std::size_t term_count() const { return terms_.size(); }

    [[nodiscard]] unsigned total_degree() const {
        if (is_zero()) throw InputError("total degree of the zero polynomial is undefined");
        return degree_of(terms_.begin()->first);
    }

    /// 0-based indices of the variables that occur with a positive exponent.
    [[nodiscard]] std::vector<std::size_t> variables_used() const {
        std::vector<std::size_t> out;
        for (std::size_t v = 0; v < num_vars_; ++v)
            for (const auto& [e, c] : terms_)
                if (e[v] > 0) {
                    out.push_back(v);
                    break;
                }
        return out;
    }

    template <class Int>
    [[nodiscard]] BigInt eval(std::span<const Int> x) const {
        if (x.size() != num_vars_)
            throw InputError("evaluation point has " + std::to_string(x.size()) + " coordinates, polynomial has " +
                             std::to_string(num_vars_) + " variables");
        BigInt acc = 0;
        for (const auto& [e, c] : terms_) {
            BigInt t = c;
            for (std::size_t i = 0; i < num_vars_; ++i)
                if (e[i] > 0) t *= boost::multiprecision::pow(BigInt(x[i]), e[i]);
            acc += t;
        }
        return acc;
    }
    [[nodiscard]] BigInt eval(const std::vector<i64>& x) const { return eval(std::span<const i64>(x)); }
    [[nodiscard]] BigInt eval(const std::vector<BigInt>& x) const { return eval(std::span<const BigInt>(x)); }
    [[nodiscard]] BigInt eval(std::initializer_list<i64> x) const { return eval(std::span<const i64>(x.begin(), x.size())); }

    friend MvPoly operator+(const MvPoly& a, const MvPoly& b) {
        require_same_vars(a, b);
        MvPoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }
    friend MvPoly operator-(const MvPoly& a) {
        MvPoly r(a.num_vars_);
        for (const auto& [e, c] : a.terms_) r.terms_.emplace(e, -c);
        return r;
    }
    friend MvPoly operator-(const MvPoly& a, const MvPoly& b) { return a + (-b); }
    friend MvPoly operator*(const MvPoly& a, const MvPoly& b) {
        require_same_vars(a, b);
        MvPoly r(a.num_vars_);
        Exponents e(a.num_vars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }
    friend MvPoly operator*(const BigInt& s, const MvPoly& a) {
        MvPoly r(a.num_vars_);
        for (const auto& [e, c] : a.terms_) r.add_term(e, s * c);
        return r;
    }
    friend bool operator==(const MvPoly& a, const MvPoly& b) {
        return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
    }

    /// Re-indexes into `new_num_vars` variables; variable i goes to slot `placement[i]`.
    [[nodiscard]] MvPoly embed(std::size_t new_num_vars, std::span<const std::size_t> placement) const {
        if (placement.size() != num_vars_) throw InputError("placement must name a slot for every variable");
        MvPoly r(new_num_vars);
        for (const auto& [e, c] : terms_) {
            Exponents ne(new_num_vars, 0);
            for (std::size_t i = 0; i < num_vars_; ++i) {
                if (placement[i] >= new_num_vars) throw InputError("placement slot out of range");
                ne[placement[i]] += e[i];
            }
            r.add_term(ne, c);
        }
        return r;
    }

    /// Canonical text, e.g. "3*x1^2*x2 - x3^3 + 7". The zero polynomial prints as "0".
    [[nodiscard]] std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            BigInt mag = c < 0 ? BigInt(-c) : c;
            if (first)
                out += c < 0 ? "-" : "";
            else
                out += c < 0 ? " - " : " + ";
            first = false;
            std::string mono;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += "x" + std::to_string(i + 1);
                if (e[i] > 1) mono += "^" + std::to_string(e[i]);
            }
            if (mono.empty())
                out += mag.str();
            else if (mag == 1)
                out += mono;
            else
                out += mag.str() + "*" + mono;
        }
        return out;
    }

    [[nodiscard]] nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json terms = nlohmann::ordered_json::array();
        for (const auto& [e, c] : terms_) {
            nlohmann::ordered_json t;
            t["exps"] = e;
            t["coef"] = c.str();
            terms.push_back(std::move(t));
        }
        nlohmann::ordered_json j;
        j["num_vars"] = num_vars_;
        j["terms"] = std::move(terms);
        return j;
    }

    static MvPoly from_json(const nlohmann::json& j) {
        try {
            MvPoly p(j.at("num_vars").get<std::size_t>());
            for (const auto& t : j.at("terms")) p.add_term(t.at("exps").get<Exponents>(), BigInt(t.at("coef").get<std::string>()));
            return p;
        } catch (const nlohmann::json::exception& ex) {
            throw InputError(std::string("malformed polynomial JSON: ") + ex.what());
        }
    }

private:
    static void require_same_vars(const MvPoly& a, const MvPoly& b) {
        if (a.num_vars_ != b.num_vars_) throw InputError("polynomials have different variable counts; embed first");
    }

    std::size_t num_vars_;
    TermMap terms_;
};

inline BigInt eval(const MvPoly& p, const std::vector<i64>& x) { return p.eval(x); }
inline unsigned total_degree(const MvPoly& p) { return p.total_degree(); }
inline MvPoly multiply(const MvPoly& a, const MvPoly& b) { return a * b; }

/// h_P: the smallest |coefficient| among the terms of top total degree.
inline BigInt min_leading_coefficient(const MvPoly& p) {
    const unsigned k = p.total_degree();
    BigInt best = -1;
    for (const auto& [e, c] : p.terms()) {
        if (degree_of(e) != k) break;
        BigInt a = c < 0 ? BigInt(-c) : c;
        if (best < 0 || a < best) best = a;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Fast evaluation for box enumeration.

/// Flattened copy of a polynomial for repeated evaluation at small integer points.
/// Immutable and safe to share between threads.
class PolyEvaluator {
public:
    explicit PolyEvaluator(const MvPoly& p) : poly_(&p), num_vars_(p.num_vars()) {
        for (const auto& [e, c] : p.terms()) {
            Term t;
            t.exps = e;
            t.big_coef = c;
            auto small = fit_i64(c);
            if (!small) fast_ok_ = false;
            t.coef = small.value_or(0);
            terms_.push_back(std::move(t));
        }
    }

    [[nodiscard]] std::size_t num_vars() const { return num_vars_; }

    /// Exact value if every intermediate fits in 128 bits and the result fits in 64 bits.
    [[nodiscard]] std::optional<i64> try_eval(std::span<const i64> x) const {
        if (!fast_ok_) return std::nullopt;
        i128 acc = 0;
        for (const auto& t : terms_) {
            i128 v = t.coef;
            for (std::size_t i = 0; i < num_vars_; ++i)
                for (unsigned j = 0; j < t.exps[i]; ++j)
                    if (__builtin_mul_overflow(v, static_cast<i128>(x[i]), &v)) return std::nullopt;
            if (__builtin_add_overflow(acc, v, &acc)) return std::nullopt;
        }
        if (acc > std::numeric_limits<i64>::max() || acc < std::numeric_limits<i64>::min()) return std::nullopt;
        return static_cast<i64>(acc);
    }

    /// Exact value; throws ResourceError when it does not fit in 64 bits.
    [[nodiscard]] i64 eval(std::span<const i64> x) const {
        if (auto v = try_eval(x)) return *v;
        return checked_i64(poly_->eval(x), "polynomial value");
    }

    /// P(x) mod m in [0, m).
    [[nodiscard]] u64 eval_mod(std::span<const i64> x, u64 m) const {
        if (m == 1) return 0;
        u128 acc = 0;
        for (const auto& t : terms_) {
            BigInt cm = t.big_coef % m;
            if (cm < 0) cm += m;
            u128 v = static_cast<u64>(cm);
            for (std::size_t i = 0; i < num_vars_; ++i) {
                if (t.exps[i] == 0) continue;
                i64 r = x[i] % static_cast<i64>(m);
                if (r < 0) r += static_cast<i64>(m);
                for (unsigned j = 0; j < t.exps[i]; ++j) v = v * static_cast<u64>(r) % m;
            }
            acc = (acc + v) % m;
        }
        return static_cast<u64>(acc);
    }

private:
    struct Term {
        Exponents exps;
        i64 coef = 0;
        BigInt big_coef;
    };
    const MvPoly* poly_;
    std::size_t num_vars_;
    std::vector<Term> terms_;
    bool fast_ok_ = true;
};

// ---------------------------------------------------------------------------
// Text grammar: sums of products of integers, variables x1..xN and
// parenthesized subexpressions, with non-negative integer powers.
// Whitespace is ignored.

namespace detail {

class PolyParser {
public:
    // univariate: a bare "t" or "x" also names x1.
    PolyParser(std::string_view text, bool univariate) : univariate_(univariate) {
        for (char ch : text)
            if (!std::isspace(static_cast<unsigned char>(ch))) src_.push_back(ch);
    }

    MvPoly parse(std::size_t num_vars) {
        if (src_.empty()) throw InputError("empty polynomial");
        scan_variables();
        std::size_t nv = num_vars == 0 ? std::max<std::size_t>(max_var_, 1) : num_vars;
        if (max_var_ > nv)
            throw InputError("polynomial uses x" + std::to_string(max_var_) + " but only " + std::to_string(nv) +
                             " variables are declared");
        nv_ = nv;
        pos_ = 0;
        MvPoly p = expr();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw InputError("polynomial parse error at offset " + std::to_string(pos_) + ": " + why);
    }
    bool peek(char c) const { return pos_ < src_.size() && src_[pos_] == c; }

    void scan_variables() {
        for (std::size_t i = 0; i < src_.size(); ++i) {
            if (src_[i] == 'x' && i + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i + 1]))) {
                std::size_t j = i + 1;
                std::size_t v = 0;
                while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) {
                    v = v * 10 + static_cast<std::size_t>(src_[j] - '0');
                    if (v > 64) throw InputError("variable index too large");
                    ++j;
                }
                if (v == 0) throw InputError("variables are numbered from x1");
                max_var_ = std::max(max_var_, v);
            }
        }
        if (univariate_) max_var_ = std::max<std::size_t>(max_var_, 1);
    }

    MvPoly expr() {
        bool neg = false;
        if (peek('+') || peek('-')) {
            neg = src_[pos_] == '-';
            ++pos_;
        }
        MvPoly acc = term();
        if (neg) acc = -acc;
        while (peek('+') || peek('-')) {
            const bool minus = src_[pos_] == '-';
            ++pos_;
            MvPoly t = term();
            acc = minus ? acc - t : acc + t;
        }
        return acc;
    }

    MvPoly term() {
        MvPoly acc = power();
        while (peek('*')) {
            ++pos_;
            acc = acc * power();
        }
        return acc;
    }

    MvPoly power() {
        MvPoly base = primary();
        if (peek('^')) {
            ++pos_;
            unsigned e = static_cast<unsigned>(integer_literal());
            MvPoly r = MvPoly::constant(nv_, 1);
            for (unsigned i = 0; i < e; ++i) r = r * base;
            return r;
        }
        return base;
    }

    MvPoly primary() {
        if (pos_ >= src_.size()) fail("unexpected end of input");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            MvPoly inner = expr();
            if (!peek(')')) fail("expected ')'");
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            return MvPoly::constant(nv_, BigInt(src_.substr(start, pos_ - start)));
        }
        if (c == 'x' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
            ++pos_;
            std::size_t v = static_cast<std::size_t>(integer_literal());
            return MvPoly::variable(nv_, v - 1);
        }
        if (univariate_ && (c == 't' || c == 'x')) {
            ++pos_;
            return MvPoly::variable(nv_, 0);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    unsigned long long integer_literal() {
        std::size_t start = pos_;
        unsigned long long v = 0;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            v = v * 10 + static_cast<unsigned>(src_[pos_] - '0');
            if (v > 1000000) fail("integer literal too large here");
            ++pos_;
        }
        if (pos_ == start) fail("expected an integer");
        return v;
    }

    std::string src_;
    std::size_t pos_ = 0;
    std::size_t max_var_ = 0;
    std::size_t nv_ = 1;
    bool univariate_;
};

} // namespace detail

/// Parses e.g. "3*x1^2*x2 - x3^3 + 7". With num_vars == 0 the variable count
/// is the largest index that occurs (at least 1).
inline MvPoly parse_polynomial(std::string_view text, std::size_t num_vars = 0) {
    return detail::PolyParser(text, false).parse(num_vars);
}

/// One-variable polynomial; the variable may be written t, x or x1.
inline MvPoly parse_univariate(std::string_view text) {
    MvPoly p = detail::PolyParser(text, true).parse(1);
    return p;
}

// ---------------------------------------------------------------------------

/// A polynomial given as a product of factors over pairwise disjoint variable
/// sets, all expressed over the full variable list. Irreducibility of the
/// factors is taken on trust.
class FactoredPoly {
public:
    struct Factor {
        MvPoly poly;
        std::vector<std::size_t> variables; // 0-based, sorted
    };

    explicit FactoredPoly(std::vector<MvPoly> factors) {
        if (factors.empty()) throw StructureError("a factored polynomial needs at least one factor");
        const std::size_t nv = factors.front().num_vars();
        std::vector<int> owner(nv, -1);
        for (std::size_t j = 0; j < factors.size(); ++j) {
            auto& f = factors[j];
            if (f.num_vars() != nv) throw StructureError("factors must share one variable list");
            if (f.is_zero() || f.total_degree() == 0)
                throw StructureError("factor " + std::to_string(j + 1) + " is constant");
            auto vars = f.variables_used();
            for (std::size_t v : vars) {
                if (owner[v] >= 0)
                    throw StructureError("factors " + std::to_string(owner[v] + 1) + " and " + std::to_string(j + 1) +
                                         " share variable x" + std::to_string(v + 1));
                owner[v] = static_cast<int>(j);
            }
            factors_.push_back(Factor{std::move(f), std::move(vars)});
        }
        product_ = MvPoly::constant(nv, 1);
        for (const auto& f : factors_) product_ = product_ * f.poly;
    }

    [[nodiscard]] const std::vector<Factor>& factors() const { return factors_; }
    [[nodiscard]] const MvPoly& product() const { return product_; }
    [[nodiscard]] std::size_t num_vars() const { return product_.num_vars(); }
    [[nodiscard]] std::size_t size() const { return factors_.size(); }

private:
    std::vector<Factor> factors_;
    MvPoly product_{1};
};

struct DivisorPoly {
    MvPoly poly;
    std::vector<std::size_t> factor_indices;
    std::vector<std::size_t> variables;
};

/// The 2^m - 1 products over nonempty subsets of factors, in subset-bitmask order.
inline std::vector<DivisorPoly> divisor_polynomials(const FactoredPoly& f) {
    const std::size_t m = f.size();
    if (m > 20) throw ResourceError("too many factors to enumerate divisor polynomials");
    std::vector<DivisorPoly> out;
    out.reserve((std::size_t{1} << m) - 1);
    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
        DivisorPoly d{MvPoly::constant(f.num_vars(), 1), {}, {}};
        for (std::size_t j = 0; j < m; ++j) {
            if (!(mask >> j & 1)) continue;
            d.poly = d.poly * f.factors()[j].poly;
            d.factor_indices.push_back(j);
            const auto& vs = f.factors()[j].variables;
            d.variables.insert(d.variables.end(), vs.begin(), vs.end());
        }
        std::sort(d.variables.begin(), d.variables.end());
        out.push_back(std::move(d));
    }
    return out;
}

} // namespace polysieve

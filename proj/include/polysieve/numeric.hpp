#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "errors.hpp"

namespace polysieve {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

inline std::string to_string(const BigInt& v) { return v.str(); }

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& v) {
    const BigInt num = boost::multiprecision::numerator(v);
    const BigInt den = boost::multiprecision::denominator(v);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline std::optional<i64> fit_i64(const BigInt& v) {
    if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min()) return std::nullopt;
    return static_cast<i64>(v);
}

inline i64 checked_i64(const BigInt& v, const char* what) {
    auto r = fit_i64(v);
    if (!r) throw ResourceError(std::string(what) + ": value " + v.str() + " exceeds the 64-bit range");
    return *r;
}

inline double to_double(const Rational& v) { return static_cast<double>(v); }

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double v) {
        add(v);
        return *this;
    }
    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Exact rational parsed from "p/q", "p" or a finite decimal such as "0.25".
inline Rational parse_rational(const std::string& text) {
    auto fail = [&] { return InputError("cannot parse rational '" + text + "'"); };
    if (text.empty()) throw fail();
    try {
        auto slash = text.find('/');
        if (slash != std::string::npos) {
            BigInt num(text.substr(0, slash));
            BigInt den(text.substr(slash + 1));
            if (den == 0) throw fail();
            return Rational(num, den);
        }
        auto dot = text.find('.');
        if (dot == std::string::npos) return Rational(BigInt(text));
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        if (digits.empty() || digits == "-" || digits == "+") throw fail();
        BigInt den = 1;
        for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
        return Rational(BigInt(digits), den);
    } catch (const InputError&) {
        throw;
    } catch (const std::exception&) {
        throw fail();
    }
}

inline BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace polysieve

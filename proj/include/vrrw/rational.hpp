#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace vrrw {

// Arbitrary-precision rational, used wherever the toolkit promises exact
// arithmetic (oracle path masses, gamma sequences with rational inputs).
using Rational = mpq_class;

// Conversion from double is exact: every finite double is p/2^e.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::domain_error("rational_from_double: non-finite input");
    Rational q(x);
    q.canonicalize();
    return q;
}

inline Rational rational_pow_int(const Rational& base, long exp) {
    if (exp < 0) {
        if (base == 0) throw std::domain_error("rational_pow_int: 0^negative");
        Rational inv(base.get_den(), base.get_num());
        inv.canonicalize();
        return rational_pow_int(inv, -exp);
    }
    Rational num, den;
    mpz_pow_ui(num.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exp));
    mpz_pow_ui(num.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exp));
    num.canonicalize();
    return num;
}

inline double to_double(const Rational& q) { return q.get_d(); }

inline std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Parses "p/q", "p", or a plain decimal literal ("0.25" -> 1/4, exactly as
// written, not as the nearest double).
inline std::optional<Rational> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            mpz_class num(text.substr(0, slash));
            mpz_class den(text.substr(slash + 1));
            if (den == 0) return std::nullopt;
            Rational q(num, den);
            q.canonicalize();
            return q;
        }
        auto dot = text.find('.');
        if (dot == std::string::npos) {
            return Rational(mpz_class(text));
        }
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        std::size_t frac_len = text.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+") return std::nullopt;
        mpz_class num(digits);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
        Rational q(num, den);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

}  // namespace vrrw

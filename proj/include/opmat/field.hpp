#pragma once

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace opmat {

/// Arbitrary-precision rational used for exact runs.
using Rational = mpq_class;

inline Rational make_rational(long long num, long long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rational r{mpz_class(std::to_string(num)), mpz_class(std::to_string(den))};
    r.canonicalize();
    return r;
}

/// A family parameter (Jacobi alpha/beta, Gegenbauer lambda).
///
/// Keeps the double value and, when known, the exact rational it came from.
/// Only parameters built from integers, integer ratios or decimal literals
/// carry an exact value; a parameter built from an arbitrary double does not
/// (unless that double is an integer).
class Parameter {
public:
    Parameter() = default;

    Parameter(double value) : value_(value) {
        if (std::isfinite(value) && value == std::trunc(value) && std::fabs(value) < 9.0e15) {
            exact_ = make_rational(static_cast<long long>(value));
        }
    }

    Parameter(int value) : Parameter(static_cast<double>(value)) {}

    explicit Parameter(const Rational& exact) : value_(exact.get_d()), exact_(exact) {}

    static Parameter ratio(long long num, long long den) { return Parameter(make_rational(num, den)); }

    [[nodiscard]] double value() const { return value_; }
    [[nodiscard]] bool is_exact() const { return exact_.has_value(); }
    [[nodiscard]] const std::optional<Rational>& exact() const { return exact_; }

    [[nodiscard]] std::string str() const;

private:
    double value_ = 0.0;
    std::optional<Rational> exact_;
};

class inexact_parameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operations a scalar type must supply for the builders.
template <class F>
struct field_traits;

template <>
struct field_traits<double> {
    static constexpr bool exact = false;
    static double from_ratio(long long num, long long den = 1) {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    static double from_param(const Parameter& p) { return p.value(); }
    static double from_rational(const Rational& r) { return r.get_d(); }
    static double to_double(double x) { return x; }
    static double abs(double x) { return std::fabs(x); }
    static bool is_zero(double x) { return x == 0.0; }
};

template <>
struct field_traits<Rational> {
    static constexpr bool exact = true;
    static Rational from_ratio(long long num, long long den = 1) { return make_rational(num, den); }
    static Rational from_param(const Parameter& p) {
        if (!p.is_exact()) {
            throw inexact_parameter("parameter " + std::to_string(p.value()) +
                                    " has no exact rational value; use an integer or p/q literal");
        }
        return *p.exact();
    }
    static Rational from_rational(const Rational& r) { return r; }
    static double to_double(const Rational& x) { return x.get_d(); }
    static Rational abs(const Rational& x) { return Rational(::abs(x)); }
    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
};

template <class F>
concept Field = std::regular<F> && requires(const F& a, const F& b, long long n) {
    { a + b } -> std::convertible_to<F>;
    { a - b } -> std::convertible_to<F>;
    { a * b } -> std::convertible_to<F>;
    { a / b } -> std::convertible_to<F>;
    { -a } -> std::convertible_to<F>;
    { field_traits<F>::from_ratio(n, n) } -> std::same_as<F>;
    { field_traits<F>::is_zero(a) } -> std::same_as<bool>;
    { field_traits<F>::to_double(a) } -> std::same_as<double>;
};

template <Field F>
F ratio(long long num, long long den = 1) {
    return field_traits<F>::from_ratio(num, den);
}

template <Field F>
bool is_zero(const F& x) {
    return field_traits<F>::is_zero(x);
}

template <Field F>
double to_double(const F& x) {
    return field_traits<F>::to_double(x);
}

/// Shortest round-trip decimal for doubles, `p/q` for rationals.
inline std::string format_number(double x) {
    if (x == 0.0) return "0";  // folds -0
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return {buf, end};
}

inline std::string format_number(const Rational& x) { return x.get_str(); }

/// Parses `p/q`, an integer, or a decimal literal (with optional exponent)
/// into an exact rational. Returns nullopt for anything else.
inline std::optional<Rational> parse_rational(std::string_view text) {
    static const std::regex ratio_re(R"(^\s*([+-]?\d+)\s*/\s*([+-]?\d+)\s*$)");
    static const std::regex decimal_re(R"(^\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*$)");
    const std::string s(text);
    std::smatch m;
    if (std::regex_match(s, m, ratio_re)) {
        mpz_class num(m[1].str()[0] == '+' ? m[1].str().substr(1) : m[1].str(), 10);
        mpz_class den(m[2].str()[0] == '+' ? m[2].str().substr(1) : m[2].str(), 10);
        if (den == 0) return std::nullopt;
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    if (std::regex_match(s, m, decimal_re)) {
        const std::string int_part = m[2].str();
        const std::string frac_part = m[3].str();
        if (int_part.empty() && frac_part.empty()) return std::nullopt;
        long exponent = 0;
        if (m[4].matched) {
            try {
                exponent = std::stol(m[4].str());
            } catch (const std::exception&) {
                return std::nullopt;
            }
            if (std::labs(exponent) > 4000) return std::nullopt;
        }
        mpz_class digits(int_part + frac_part == "" ? "0" : int_part + frac_part, 10);
        exponent -= static_cast<long>(frac_part.size());
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
        Rational r = exponent >= 0 ? Rational(digits * scale) : Rational(digits, scale);
        r.canonicalize();
        if (m[1].str() == "-") r = -r;
        return r;
    }
    return std::nullopt;
}

/// Parses a parameter literal; throws std::invalid_argument on malformed text.
inline Parameter parse_parameter(std::string_view text) {
    auto r = parse_rational(text);
    if (!r) throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    return Parameter(*r);
}

inline std::string Parameter::str() const {
    return exact_ ? exact_->get_str() : format_number(value_);
}

/// Converts a parsed literal into the working field.
template <Field F>
F from_parameter(const Parameter& p) {
    return field_traits<F>::from_param(p);
}

}  // namespace opmat

#pragma once

#include "opmat/field.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace opmat {

class invalid_family : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class FamilyKind {
    Jacobi,
    Gegenbauer,
    ChebyshevFirst,
    ChebyshevSecond,
    ChebyshevThird,
    ChebyshevFourth,
    Legendre,
    Laguerre,
    Hermite,
    Bessel,
};

/// An orthogonal polynomial family, normalised so that P_{-1} = 0, P_0 = 1.
///
/// Jacobi carries (alpha, beta) with alpha, beta > -1; Gegenbauer carries
/// lambda > -1/2, lambda != 0. The other families are parameterless.
class Family {
public:
    static Family jacobi(Parameter alpha, Parameter beta) {
        if (!(alpha.value() > -1.0) || !(beta.value() > -1.0)) {
            throw invalid_family("jacobi requires alpha > -1 and beta > -1");
        }
        return Family(FamilyKind::Jacobi, alpha, beta);
    }
    static Family gegenbauer(Parameter lambda) {
        const bool zero = lambda.is_exact() ? sgn(*lambda.exact()) == 0 : lambda.value() == 0.0;
        if (!(lambda.value() > -0.5) || zero) {
            throw invalid_family("gegenbauer requires lambda > -1/2 and lambda != 0");
        }
        return Family(FamilyKind::Gegenbauer, lambda, {});
    }
    static Family chebyshev_first() { return Family(FamilyKind::ChebyshevFirst); }
    static Family chebyshev_second() { return Family(FamilyKind::ChebyshevSecond); }
    static Family chebyshev_third() { return Family(FamilyKind::ChebyshevThird); }
    static Family chebyshev_fourth() { return Family(FamilyKind::ChebyshevFourth); }
    static Family legendre() { return Family(FamilyKind::Legendre); }
    static Family laguerre() { return Family(FamilyKind::Laguerre); }
    static Family hermite() { return Family(FamilyKind::Hermite); }
    static Family bessel() { return Family(FamilyKind::Bessel); }

    [[nodiscard]] FamilyKind kind() const { return kind_; }

    /// Jacobi alpha.
    [[nodiscard]] const Parameter& alpha() const { return require(FamilyKind::Jacobi, first_); }
    /// Jacobi beta.
    [[nodiscard]] const Parameter& beta() const { return require(FamilyKind::Jacobi, second_); }
    /// Gegenbauer lambda.
    [[nodiscard]] const Parameter& lambda() const { return require(FamilyKind::Gegenbauer, first_); }

    /// True when every parameter has an exact rational value.
    [[nodiscard]] bool is_rational() const {
        switch (kind_) {
        case FamilyKind::Jacobi: return first_.is_exact() && second_.is_exact();
        case FamilyKind::Gegenbauer: return first_.is_exact();
        default: return true;
        }
    }

    /// All beta_j vanish.
    [[nodiscard]] bool is_symmetric() const {
        switch (kind_) {
        case FamilyKind::Gegenbauer:
        case FamilyKind::ChebyshevFirst:
        case FamilyKind::ChebyshevSecond:
        case FamilyKind::Legendre:
        case FamilyKind::Hermite: return true;
        case FamilyKind::Jacobi:
            return first_.is_exact() && second_.is_exact() ? *first_.exact() == *second_.exact()
                                                           : first_.value() == second_.value();
        default: return false;
        }
    }

    [[nodiscard]] std::string name() const;
    /// `alpha=2;beta=3`, `lambda=12` or empty.
    [[nodiscard]] std::string params() const;

private:
    explicit Family(FamilyKind k, Parameter a = {}, Parameter b = {}) : kind_(k), first_(a), second_(b) {}

    const Parameter& require(FamilyKind k, const Parameter& p) const {
        if (kind_ != k) throw invalid_family("parameter not defined for family " + name());
        return p;
    }

    FamilyKind kind_;
    Parameter first_;
    Parameter second_;
};

inline std::string Family::name() const {
    switch (kind_) {
    case FamilyKind::Jacobi: return "jacobi";
    case FamilyKind::Gegenbauer: return "gegenbauer";
    case FamilyKind::ChebyshevFirst: return "chebyshev1";
    case FamilyKind::ChebyshevSecond: return "chebyshev2";
    case FamilyKind::ChebyshevThird: return "chebyshev3";
    case FamilyKind::ChebyshevFourth: return "chebyshev4";
    case FamilyKind::Legendre: return "legendre";
    case FamilyKind::Laguerre: return "laguerre";
    case FamilyKind::Hermite: return "hermite";
    case FamilyKind::Bessel: return "bessel";
    }
    return "unknown";
}

inline std::string Family::params() const {
    switch (kind_) {
    case FamilyKind::Jacobi: return "alpha=" + first_.str() + ";beta=" + second_.str();
    case FamilyKind::Gegenbauer: return "lambda=" + first_.str();
    default: return {};
    }
}

/// Builds a family from its CLI token and optional parameters.
inline Family make_family(std::string_view name, std::optional<Parameter> alpha = {},
                          std::optional<Parameter> beta = {}, std::optional<Parameter> lambda = {}) {
    auto no_params = [&](FamilyKind k) {
        if (alpha || beta || lambda) {
            throw invalid_family("family '" + std::string(name) + "' takes no parameters");
        }
        switch (k) {
        case FamilyKind::ChebyshevFirst: return Family::chebyshev_first();
        case FamilyKind::ChebyshevSecond: return Family::chebyshev_second();
        case FamilyKind::ChebyshevThird: return Family::chebyshev_third();
        case FamilyKind::ChebyshevFourth: return Family::chebyshev_fourth();
        case FamilyKind::Legendre: return Family::legendre();
        case FamilyKind::Laguerre: return Family::laguerre();
        case FamilyKind::Hermite: return Family::hermite();
        default: return Family::bessel();
        }
    };
    if (name == "jacobi") {
        if (!alpha || !beta || lambda) throw invalid_family("jacobi needs --alpha and --beta");
        return Family::jacobi(*alpha, *beta);
    }
    if (name == "gegenbauer") {
        if (!lambda || alpha || beta) throw invalid_family("gegenbauer needs --lambda");
        return Family::gegenbauer(*lambda);
    }
    if (name == "chebyshev1") return no_params(FamilyKind::ChebyshevFirst);
    if (name == "chebyshev2") return no_params(FamilyKind::ChebyshevSecond);
    if (name == "chebyshev3") return no_params(FamilyKind::ChebyshevThird);
    if (name == "chebyshev4") return no_params(FamilyKind::ChebyshevFourth);
    if (name == "legendre") return no_params(FamilyKind::Legendre);
    if (name == "laguerre") return no_params(FamilyKind::Laguerre);
    if (name == "hermite") return no_params(FamilyKind::Hermite);
    if (name == "bessel") return no_params(FamilyKind::Bessel);
    throw invalid_family("unknown family '" + std::string(name) + "'");
}

/// x P_j = alpha P_{j+1} + beta P_j + gamma P_{j-1}.
template <Field F>
struct RecurrenceCoeffs {
    std::size_t j = 0;
    F alpha{};
    F beta{};
    F gamma{};
};

namespace detail {

inline long long as_ll(std::size_t j) { return static_cast<long long>(j); }

}  // namespace detail

/// Recurrence coefficients at index j. gamma_0 is stored as 0.
template <Field F>
RecurrenceCoeffs<F> recurrence_coeffs(const Family& family, std::size_t j) {
    using detail::as_ll;
    const long long jj = as_ll(j);
    const F one = ratio<F>(1);
    const F half = ratio<F>(1, 2);
    RecurrenceCoeffs<F> r{j, F{}, ratio<F>(0), ratio<F>(0)};
    switch (family.kind()) {
    case FamilyKind::Jacobi: {
        const F a = from_parameter<F>(family.alpha());
        const F b = from_parameter<F>(family.beta());
        const F g = a + b;
        const F two = ratio<F>(2);
        if (j == 0) {
            r.alpha = two / (g + two);
            r.beta = (b - a) / (g + two);
            break;
        }
        const F jf = ratio<F>(jj);
        const F s = two * jf + g;
        r.alpha = two * (jf + one) * (jf + g + one) / ((s + one) * (s + two));
        r.beta = (b * b - a * a) / (s * (s + two));
        r.gamma = two * (jf + a) * (jf + b) / (s * (s + one));
        break;
    }
    case FamilyKind::Gegenbauer: {
        const F l = from_parameter<F>(family.lambda());
        const F jf = ratio<F>(jj);
        const F den = ratio<F>(2) * (jf + l);
        r.alpha = (jf + one) / den;
        if (j > 0) r.gamma = (jf + ratio<F>(2) * l - one) / den;
        break;
    }
    case FamilyKind::ChebyshevFirst:
        r.alpha = j == 0 ? one : half;
        if (j > 0) r.gamma = half;
        break;
    case FamilyKind::ChebyshevSecond:
        r.alpha = half;
        if (j > 0) r.gamma = half;
        break;
    case FamilyKind::ChebyshevThird:
        r.alpha = half;
        if (j == 0) r.beta = half;
        if (j > 0) r.gamma = half;
        break;
    case FamilyKind::ChebyshevFourth:
        r.alpha = half;
        if (j == 0) r.beta = -half;
        if (j > 0) r.gamma = half;
        break;
    case FamilyKind::Legendre:
        r.alpha = ratio<F>(jj + 1, 2 * jj + 1);
        r.gamma = ratio<F>(jj, 2 * jj + 1);
        break;
    case FamilyKind::Laguerre:
        r.alpha = ratio<F>(-(jj + 1));
        r.beta = ratio<F>(2 * jj + 1);
        r.gamma = ratio<F>(-jj);
        break;
    case FamilyKind::Hermite:
        r.alpha = half;
        r.gamma = ratio<F>(jj);
        break;
    case FamilyKind::Bessel:
        r.alpha = ratio<F>(1, 2 * jj + 1);
        if (j == 0) r.beta = -one;
        if (j > 0) r.gamma = ratio<F>(-1, 2 * jj + 1);
        break;
    }
    return r;
}

/// Recurrence coefficients for indices 0..count-1, stored as three columns.
/// Builders accept a table directly, so arbitrary recurrences work too.
template <Field F>
struct RecurrenceTable {
    std::vector<F> alpha;
    std::vector<F> beta;
    std::vector<F> gamma;

    [[nodiscard]] std::size_t size() const { return alpha.size(); }

    /// Checks table shape and alpha_j != 0.
    void validate() const {
        if (beta.size() != alpha.size() || gamma.size() != alpha.size()) {
            throw std::invalid_argument("recurrence table columns differ in length");
        }
        for (std::size_t j = 0; j < alpha.size(); ++j) {
            if (is_zero(alpha[j])) throw std::invalid_argument("alpha_" + std::to_string(j) + " is zero");
        }
    }
};

template <Field F>
RecurrenceTable<F> recurrence_table(const Family& family, std::size_t count) {
    RecurrenceTable<F> t;
    t.alpha.reserve(count);
    t.beta.reserve(count);
    t.gamma.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        auto r = recurrence_coeffs<F>(family, j);
        t.alpha.push_back(std::move(r.alpha));
        t.beta.push_back(std::move(r.beta));
        t.gamma.push_back(std::move(r.gamma));
    }
    return t;
}

/// [P_0(x), ..., P_{n-1}(x)] from a recurrence table (needs n-1 rows).
template <Field F>
std::vector<F> eval_basis(const RecurrenceTable<F>& rec, std::size_t n, const F& x) {
    if (n == 0) throw std::invalid_argument("eval_basis needs n >= 1");
    std::vector<F> p(n);
    p[0] = ratio<F>(1);
    if (n > 1) p[1] = (x - rec.beta[0]) / rec.alpha[0];
    for (std::size_t j = 1; j + 1 < n; ++j) {
        p[j + 1] = ((x - rec.beta[j]) * p[j] - rec.gamma[j] * p[j - 1]) / rec.alpha[j];
    }
    return p;
}

template <Field F>
std::vector<F> eval_basis(const Family& family, std::size_t n, const F& x) {
    if (n == 0) throw std::invalid_argument("eval_basis needs n >= 1");
    return eval_basis(recurrence_table<F>(family, n), n, x);
}

/// [P_0(0), ..., P_{n-1}(0)] for Legendre via P_{k+1}(0) = -(k/(k+1)) P_{k-1}(0).
template <Field F>
std::vector<F> legendre_zero_column(std::size_t n) {
    if (n == 0) throw std::invalid_argument("legendre_zero_column needs n >= 1");
    std::vector<F> p(n, ratio<F>(0));
    p[0] = ratio<F>(1);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const auto kk = detail::as_ll(k);
        p[k + 1] = -ratio<F>(kk, kk + 1) * p[k - 1];
    }
    return p;
}

}  // namespace opmat

#pragma once

// Matrix representation of linear integro-differential operators with
// polynomial coefficients:
//   D = sum_i p_i(x) d^i/dx^i       ->  Pi    = sum_i p_i(M) N^i
//   S = sum_i p_i(x) I^i            ->  Sigma = sum_i p_i(M) Theta_i
// with Theta_i = O_{a_ii} ... O_{a_i1} (rightmost factor is the innermost
// integral).

#include "opmat/family.hpp"
#include "opmat/matrix.hpp"
#include "opmat/opmatrix.hpp"

#include <algorithm>
#include <cstddef>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace opmat {

/// Polynomial coefficients in the monomial basis, lowest degree first.
/// Trailing zeros are dropped, so the zero polynomial is empty.
template <Field F>
class PolyCoeffs {
public:
    PolyCoeffs() = default;
    PolyCoeffs(std::initializer_list<F> c) : c_(c) { trim(); }
    explicit PolyCoeffs(std::vector<F> c) : c_(std::move(c)) { trim(); }

    [[nodiscard]] const std::vector<F>& coeffs() const { return c_; }
    [[nodiscard]] bool is_zero() const { return c_.empty(); }
    /// 0 for constants and for the zero polynomial.
    [[nodiscard]] std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }

    friend bool operator==(const PolyCoeffs&, const PolyCoeffs&) = default;

private:
    void trim() {
        while (!c_.empty() && opmat::is_zero(c_.back())) c_.pop_back();
    }
    std::vector<F> c_;
};

template <Field F>
struct DifferentialTerm {
    std::size_t order = 0;
    PolyCoeffs<F> coeff;
};

template <Field F>
struct IntegralTerm {
    std::size_t depth = 1;
    PolyCoeffs<F> coeff;
    std::vector<F> lower_limits;  // a_{i,1} (innermost) .. a_{i,depth}
};

template <Field F>
struct DifferentialOperatorSpec {
    std::vector<DifferentialTerm<F>> terms;

    void validate() const {
        if (terms.empty()) throw std::invalid_argument("differential operator has no terms");
        std::set<std::size_t> seen;
        for (const auto& t : terms) {
            if (!seen.insert(t.order).second) {
                throw std::invalid_argument("differential order " + std::to_string(t.order) + " repeated");
            }
        }
    }
    [[nodiscard]] std::size_t max_order() const {
        std::size_t m = 0;
        for (const auto& t : terms) m = std::max(m, t.order);
        return m;
    }
};

template <Field F>
struct IntegralOperatorSpec {
    std::vector<IntegralTerm<F>> terms;

    void validate() const {
        if (terms.empty()) throw std::invalid_argument("integral operator has no terms");
        for (const auto& t : terms) {
            if (t.depth < 1) throw std::invalid_argument("integral depth must be >= 1");
            if (t.lower_limits.size() != t.depth) {
                throw std::invalid_argument("integral of depth " + std::to_string(t.depth) + " needs " +
                                            std::to_string(t.depth) + " lower limits");
            }
        }
    }
};

/// A differential and an integral part read from one spec file. Either
/// part may be empty.
template <Field F>
struct OperatorSpec {
    DifferentialOperatorSpec<F> differential;
    IntegralOperatorSpec<F> integral;
};

/// Assembled operator matrix with its last exact column (nullopt when no
/// column is free of truncation effects).
template <Field F>
struct Assembly {
    OperationalMatrix<F> matrix;
    std::optional<std::size_t> last_valid_column;
};

// ---------------------------------------------------------------------------

/// p(A) = sum_k p_k A^k by Horner's scheme.
template <Field F>
OperationalMatrix<F> matrix_polynomial(const PolyCoeffs<F>& p, const OperationalMatrix<F>& a) {
    const std::size_t n = a.size();
    const auto& c = p.coeffs();
    if (c.empty()) return OperationalMatrix<F>(n, Structure::General);
    OperationalMatrix<F> r = add_identity(OperationalMatrix<F>(n, Structure::General), c.back());
    for (std::size_t k = c.size() - 1; k-- > 0;) r = add_identity(r * a, c[k]);
    r.set_structure(Structure::General);
    return r;
}

/// p(A) X by Horner's scheme on X, never forming p(A).
template <Field F>
OperationalMatrix<F> polynomial_times(const PolyCoeffs<F>& p, const OperationalMatrix<F>& a,
                                      const OperationalMatrix<F>& x) {
    const auto& c = p.coeffs();
    if (c.empty()) return OperationalMatrix<F>(x.size(), Structure::General);
    OperationalMatrix<F> r = c.back() * x;
    for (std::size_t k = c.size() - 1; k-- > 0;) r = a * r + c[k] * x;
    return r;
}

/// Same as polynomial_times for a vector.
template <Field F>
std::vector<F> polynomial_apply(const PolyCoeffs<F>& p, const OperationalMatrix<F>& a, const std::vector<F>& v) {
    const auto& c = p.coeffs();
    std::vector<F> r(v.size(), ratio<F>(0));
    if (c.empty()) return r;
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = c.back() * v[i];
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        r = opmat::apply(a, r);
        for (std::size_t i = 0; i < v.size(); ++i) r[i] += c[k] * v[i];
    }
    return r;
}

/// Rows a term can push a column past its index. Each N, O or M factor
/// counts one; a derivative term with a nonconstant coefficient counts one
/// less, since N lowers the degree that M raises.
inline std::size_t differential_term_reach(std::size_t order, std::size_t degree) {
    return order + degree - (order > 0 && degree > 0 ? 1 : 0);
}

inline std::size_t integral_term_reach(std::size_t depth, std::size_t degree) { return depth + degree; }

/// Last column j with j + reach <= n - 1.
inline std::optional<std::size_t> last_column_within(std::size_t reach, std::size_t n) {
    if (reach + 1 > n) return std::nullopt;
    return n - 1 - reach;
}

namespace detail {

inline std::optional<std::size_t> min_valid(std::optional<std::size_t> a, std::optional<std::size_t> b) {
    if (!a || !b) return std::nullopt;
    return std::min(*a, *b);
}

}  // namespace detail

template <Field F>
std::optional<std::size_t> valid_block(const DifferentialOperatorSpec<F>& spec, std::size_t n) {
    std::optional<std::size_t> v = n == 0 ? std::nullopt : std::optional<std::size_t>(n - 1);
    for (const auto& t : spec.terms) v = detail::min_valid(v, last_column_within(differential_term_reach(t.order, t.coeff.degree()), n));
    return v;
}

template <Field F>
std::optional<std::size_t> valid_block(const IntegralOperatorSpec<F>& spec, std::size_t n) {
    std::optional<std::size_t> v = n == 0 ? std::nullopt : std::optional<std::size_t>(n - 1);
    for (const auto& t : spec.terms) v = detail::min_valid(v, last_column_within(integral_term_reach(t.depth, t.coeff.degree()), n));
    return v;
}

template <Field F>
std::optional<std::size_t> valid_block(const OperatorSpec<F>& spec, std::size_t n) {
    std::optional<std::size_t> v = n == 0 ? std::nullopt : std::optional<std::size_t>(n - 1);
    if (!spec.differential.terms.empty()) v = detail::min_valid(v, valid_block(spec.differential, n));
    if (!spec.integral.terms.empty()) v = detail::min_valid(v, valid_block(spec.integral, n));
    return v;
}

/// Pi = sum_i p_i(M) N^i.
template <Field F>
Assembly<F> assemble_differential(const DifferentialOperatorSpec<F>& spec, const Family& family, std::size_t n,
                                  Route route = Route::Automatic) {
    spec.validate();
    if (n == 0) throw std::invalid_argument("assemble_differential needs n >= 1");
    const auto m = shift_matrix<F>(family, n);
    const auto d = derivative_matrix<F>(family, n, route);

    auto terms = spec.terms;
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.order < b.order; });
    OperationalMatrix<F> total(n, Structure::General);
    OperationalMatrix<F> power = OperationalMatrix<F>::identity(n);
    std::size_t current = 0;
    for (const auto& t : terms) {
        for (; current < t.order; ++current) power = power * d;
        total = total + polynomial_times(t.coeff, m, power);
    }
    total.set_structure(Structure::General);
    return {std::move(total), valid_block(spec, n)};
}

/// Theta = O_{a_depth} ... O_{a_1}.
template <Field F>
OperationalMatrix<F> iterated_integral(const Family& family, std::size_t n, const std::vector<F>& lower_limits,
                                       Route route = Route::Automatic) {
    if (lower_limits.empty()) throw std::invalid_argument("iterated integral needs at least one lower limit");
    OperationalMatrix<F> theta = definite_integral_matrix<F>(family, n, lower_limits.front(), route);
    for (std::size_t k = 1; k < lower_limits.size(); ++k) {
        theta = definite_integral_matrix<F>(family, n, lower_limits[k], route) * theta;
    }
    return theta;
}

/// Sigma = sum_i p_i(M) Theta_i.
template <Field F>
Assembly<F> assemble_integral(const IntegralOperatorSpec<F>& spec, const Family& family, std::size_t n,
                              Route route = Route::Automatic) {
    spec.validate();
    if (n == 0) throw std::invalid_argument("assemble_integral needs n >= 1");
    const auto m = shift_matrix<F>(family, n);
    OperationalMatrix<F> total(n, Structure::General);
    for (const auto& t : spec.terms) {
        total = total + polynomial_times(t.coeff, m, iterated_integral<F>(family, n, t.lower_limits, route));
    }
    total.set_structure(Structure::General);
    return {std::move(total), valid_block(spec, n)};
}

/// Pi + Sigma for a spec that may carry both parts.
template <Field F>
Assembly<F> assemble(const OperatorSpec<F>& spec, const Family& family, std::size_t n,
                     Route route = Route::Automatic) {
    if (spec.differential.terms.empty() && spec.integral.terms.empty()) {
        throw std::invalid_argument("operator spec has no terms");
    }
    OperationalMatrix<F> total(n, Structure::General);
    if (!spec.differential.terms.empty()) total = total + assemble_differential(spec.differential, family, n, route).matrix;
    if (!spec.integral.terms.empty()) total = total + assemble_integral(spec.integral, family, n, route).matrix;
    total.set_structure(Structure::General);
    return {std::move(total), valid_block(spec, n)};
}

// ---------------------------------------------------------------------------
// Spec file:
//   d <order> <c0> <c1> ...
//   i <depth> <a1> ... <ad> <c0> <c1> ...
// Blank lines and text after '#' are ignored. Numbers may be p/q.

template <Field F>
OperatorSpec<F> parse_operator_spec(std::istream& in) {
    OperatorSpec<F> spec;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("operator spec line " + std::to_string(lineno) + ": " + what);
    };
    auto number = [&](const std::string& tok) {
        auto r = parse_rational(tok);
        if (!r) fail("malformed number '" + tok + "'");
        return field_traits<F>::from_rational(*r);
    };
    auto count = [&](const std::string& tok) {
        auto r = parse_rational(tok);
        if (!r || r->get_den() != 1 || sgn(*r) < 0) fail("expected a nonnegative integer, got '" + tok + "'");
        return static_cast<std::size_t>(r->get_num().get_ui());
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok[0] == "d") {
            if (tok.size() < 3) fail("differential term needs an order and at least one coefficient");
            std::vector<F> c;
            for (std::size_t k = 2; k < tok.size(); ++k) c.push_back(number(tok[k]));
            spec.differential.terms.push_back({count(tok[1]), PolyCoeffs<F>(std::move(c))});
        } else if (tok[0] == "i") {
            if (tok.size() < 2) fail("integral term needs a depth");
            const std::size_t depth = count(tok[1]);
            if (depth < 1) fail("integral depth must be >= 1");
            if (tok.size() < 2 + depth + 1) fail("integral term needs " + std::to_string(depth) +
                                                 " lower limits and at least one coefficient");
            IntegralTerm<F> t;
            t.depth = depth;
            for (std::size_t k = 0; k < depth; ++k) t.lower_limits.push_back(number(tok[2 + k]));
            std::vector<F> c;
            for (std::size_t k = 2 + depth; k < tok.size(); ++k) c.push_back(number(tok[k]));
            t.coeff = PolyCoeffs<F>(std::move(c));
            spec.integral.terms.push_back(std::move(t));
        } else {
            fail("unknown term kind '" + tok[0] + "' (expected d or i)");
        }
    }
    if (spec.differential.terms.empty() && spec.integral.terms.empty()) {
        throw std::invalid_argument("operator spec has no terms");
    }
    if (!spec.differential.terms.empty()) spec.differential.validate();
    if (!spec.integral.terms.empty()) spec.integral.validate();
    return spec;
}

}  // namespace opmat

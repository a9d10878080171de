#pragma once

// Truncated operational matrices of an orthogonal basis:
//   M      multiplication by x       x P = P M
//   N      differentiation           P' = P N
//   O      primitive (P_0 coeff 0)   int P = P O
//   O_a^x  definite integral from a
// All of them follow from the three-term recurrence alone.

#include "opmat/family.hpp"
#include "opmat/matrix.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace opmat {

class unsupported_explicit : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Which construction a builder uses.
///
/// The recursive route divides by alpha_j at every column, so rounding errors
/// in doubles grow with n when alpha_j is small (Bessel: factorially;
/// Gegenbauer with large lambda: geometrically). Automatic avoids it wherever
/// closed forms exist.
enum class Route {
    Recursive,  ///< general recursions driven by the recurrence table
    Explicit,   ///< closed forms of the classical families
    Automatic,  ///< explicit where available, recursive otherwise
};

/// How row 0 of O_a^x is obtained.
enum class Row0Method {
    Summation,   ///< -sum_i theta_ij P_i(a)
    ClosedForm,  ///< closed-form values at the family's canonical endpoint
    Automatic,   ///< closed form when a is the canonical endpoint
};

namespace detail {

template <Field F>
F sign_power(long long e) {
    return (e % 2 == 0) ? ratio<F>(1) : ratio<F>(-1);
}

/// varsigma_m = delta_m - 1, i.e. 0 at m = 0 and -1 elsewhere.
inline int varsigma(long long m) { return m == 0 ? 0 : -1; }

/// base^e for e in {0, -1}.
template <Field F>
F pow01(const F& base, int e) {
    return e == 0 ? ratio<F>(1) : ratio<F>(1) / base;
}

inline void require_size(std::size_t n, std::size_t min, const char* what) {
    if (n < min) throw std::invalid_argument(std::string(what) + " needs n >= " + std::to_string(min));
}

template <Field F>
void require_table(const RecurrenceTable<F>& rec, std::size_t rows, const char* what) {
    if (rec.size() < rows) {
        throw std::invalid_argument(std::string(what) + " needs " + std::to_string(rows) + " recurrence rows");
    }
}

}  // namespace detail

/// True for the families with closed-form N and O (all but general Jacobi).
inline bool has_explicit_formulas(const Family& family) { return family.kind() != FamilyKind::Jacobi; }

// ---------------------------------------------------------------------------
// M

template <Field F>
OperationalMatrix<F> shift_matrix(const RecurrenceTable<F>& rec, std::size_t n) {
    detail::require_size(n, 1, "shift_matrix");
    detail::require_table(rec, n, "shift_matrix");
    OperationalMatrix<F> m(n, Structure::Tridiagonal);
    for (std::size_t j = 0; j < n; ++j) {
        if (j > 0) m(j - 1, j) = rec.gamma[j];
        m(j, j) = rec.beta[j];
        if (j + 1 < n) m(j + 1, j) = rec.alpha[j];
    }
    return m;
}

template <Field F>
OperationalMatrix<F> shift_matrix(const Family& family, std::size_t n) {
    detail::require_size(n, 1, "shift_matrix");
    return shift_matrix(recurrence_table<F>(family, n), n);
}

// ---------------------------------------------------------------------------
// N

/// Column j+1 of N from columns j and j-1:
///   alpha_j eta_{i,j+1} = [i == j] + alpha_{i-1} eta_{i-1,j} + (beta_i - beta_j) eta_{i,j}
///                         + gamma_{i+1} eta_{i+1,j} - gamma_j eta_{i,j-1}
/// Entries with i >= j are never touched.
template <Field F>
OperationalMatrix<F> derivative_matrix_recursive(const RecurrenceTable<F>& rec, std::size_t n) {
    detail::require_size(n, 1, "derivative_matrix_recursive");
    detail::require_table(rec, n, "derivative_matrix_recursive");
    OperationalMatrix<F> d(n, Structure::StrictlyUpperTriangular);
    if (n < 2) return d;
    d(0, 1) = ratio<F>(1) / rec.alpha[0];
    for (std::size_t j = 1; j + 1 < n; ++j) {
        auto next = d.column(j + 1);
        auto cur = d.column(j);
        auto prev = d.column(j - 1);
        for (std::size_t i = 0; i <= j; ++i) {
            F s = i == j ? ratio<F>(1) : ratio<F>(0);
            if (i >= 1) s += rec.alpha[i - 1] * cur[i - 1];
            if (i < j) {
                s += (rec.beta[i] - rec.beta[j]) * cur[i];
                if (i + 1 < j) s += rec.gamma[i + 1] * cur[i + 1];
                if (i + 1 < j) s -= rec.gamma[j] * prev[i];
            }
            next[i] = s / rec.alpha[j];
        }
    }
    return d;
}

template <Field F>
OperationalMatrix<F> derivative_matrix_recursive(const Family& family, std::size_t n) {
    detail::require_size(n, 1, "derivative_matrix_recursive");
    return derivative_matrix_recursive(recurrence_table<F>(family, n), n);
}

/// Closed form eta_{i,j} (i < j) for the classical families.
template <Field F>
F eta_explicit(const Family& family, std::size_t i, std::size_t j) {
    if (i >= j) return ratio<F>(0);
    const long long ii = static_cast<long long>(i);
    const long long jj = static_cast<long long>(j);
    const F alt = detail::sign_power<F>(ii + jj);  // (-1)^{i+j}
    const F two_ij = ratio<F>(1) - alt;              // 1 - (-1)^{i+j}
    const F half = ratio<F>(1, 2);
    switch (family.kind()) {
    case FamilyKind::Gegenbauer: return two_ij * (ratio<F>(ii) + from_parameter<F>(family.lambda()));
    case FamilyKind::ChebyshevFirst: return two_ij * ratio<F>(jj, i == 0 ? 2 : 1);
    case FamilyKind::ChebyshevSecond: return two_ij * ratio<F>(ii + 1);
    case FamilyKind::ChebyshevThird: return two_ij * (ratio<F>(ii) + half) + ratio<F>(jj - ii);
    case FamilyKind::ChebyshevFourth:
        return (two_ij * (ratio<F>(ii) + half) + ratio<F>(jj - ii)) * detail::sign_power<F>(ii + jj + 1);
    case FamilyKind::Legendre: return two_ij * (ratio<F>(ii) + half);
    case FamilyKind::Laguerre: return ratio<F>(-1);
    case FamilyKind::Hermite: return i + 1 == j ? ratio<F>(2 * jj) : ratio<F>(0);
    case FamilyKind::Bessel: return ratio<F>((ii - jj) * (ii + jj + 1)) * (ratio<F>(ii) + half) * alt;
    case FamilyKind::Jacobi: break;
    }
    throw unsupported_explicit("no closed-form differentiation matrix for " + family.name() +
                               "; use the recursive builder");
}

template <Field F>
OperationalMatrix<F> derivative_matrix_explicit(const Family& family, std::size_t n) {
    detail::require_size(n, 1, "derivative_matrix_explicit");
    if (!has_explicit_formulas(family)) {
        throw unsupported_explicit("no closed-form differentiation matrix for " + family.name() +
                                   "; use the recursive builder");
    }
    OperationalMatrix<F> d(n, Structure::StrictlyUpperTriangular);
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = 0; i < j; ++i) d(i, j) = eta_explicit<F>(family, i, j);
    return d;
}

template <Field F>
OperationalMatrix<F> derivative_matrix(const Family& family, std::size_t n, Route route = Route::Automatic) {
    if (route == Route::Explicit || (route == Route::Automatic && has_explicit_formulas(family))) {
        return derivative_matrix_explicit<F>(family, n);
    }
    return derivative_matrix_recursive<F>(family, n);
}

// ---------------------------------------------------------------------------
// Closed-form subdiagonals of N and diagonals of O

/// eta_{j,j+1} = (2j+g+1)(2j+g+2) / (2(j+g+1)) for Jacobi, g = alpha + beta.
template <Field F>
F jacobi_eta_first(const Family& family, std::size_t j) {
    const F g = from_parameter<F>(family.alpha()) + from_parameter<F>(family.beta());
    const F jf = ratio<F>(static_cast<long long>(j));
    const F den = ratio<F>(2) * (jf + g + ratio<F>(1));
    if (is_zero(den)) {
        return ratio<F>(static_cast<long long>(j) + 1) / recurrence_coeffs<F>(family, j).alpha;
    }
    const F s = ratio<F>(2) * jf + g;
    return (s + ratio<F>(1)) * (s + ratio<F>(2)) / den;
}

/// eta_{j-1,j+1} = ((2j+g)^2 - 1) / (2(j+g)(j+g+1)) (beta - alpha) for Jacobi, j >= 1.
template <Field F>
F jacobi_eta_second(const Family& family, std::size_t j);

/// theta_{j,j} = 2(alpha - beta) / ((2j+g)(2j+g+2)) for Jacobi, j >= 1.
template <Field F>
F jacobi_theta_diagonal(const Family& family, std::size_t j) {
    if (j == 0) throw std::invalid_argument("jacobi_theta_diagonal needs j >= 1");
    const F a = from_parameter<F>(family.alpha());
    const F b = from_parameter<F>(family.beta());
    const F s = ratio<F>(2 * static_cast<long long>(j)) + a + b;
    return ratio<F>(2) * (a - b) / (s * (s + ratio<F>(2)));
}

/// theta_{j+1,j} = 1 / eta_{j,j+1} for Jacobi.
template <Field F>
F jacobi_theta_subdiagonal(const Family& family, std::size_t j) {
    return ratio<F>(1) / jacobi_eta_first<F>(family, j);
}

/// eta_{j,j+m} for m in {1, 2, 3} from the recurrence alone:
///   m = 1: (j+1)/alpha_j
///   m = 2: sum_{i<=j} (beta_i - beta_{j+1}) / (alpha_j alpha_{j+1})
///   m = 3: sum_{i<=j} [(beta_i - beta_{j+2})(beta_i - beta_{j+1}) + 2 alpha_i gamma_{i+1}
///                      - alpha_{j+1} gamma_{j+2}] / (alpha_j alpha_{j+1} alpha_{j+2})
/// Jacobi uses its simplified forms for m = 1, 2.
template <Field F>
F eta_subdiagonal(const Family& family, std::size_t j, int m) {
    if (m < 1 || m > 3) throw std::invalid_argument("eta_subdiagonal supports m = 1, 2, 3");
    if (family.kind() == FamilyKind::Jacobi && m == 1) return jacobi_eta_first<F>(family, j);
    if (family.kind() == FamilyKind::Jacobi && m == 2) return jacobi_eta_second<F>(family, j + 1);
    const auto rec = recurrence_table<F>(family, j + static_cast<std::size_t>(m) + 1);
    const auto& al = rec.alpha;
    const auto& be = rec.beta;
    const auto& ga = rec.gamma;
    if (m == 1) return ratio<F>(static_cast<long long>(j) + 1) / al[j];
    F sum = ratio<F>(0);
    if (m == 2) {
        for (std::size_t i = 0; i <= j; ++i) sum += be[i] - be[j + 1];
        return sum / (al[j] * al[j + 1]);
    }
    for (std::size_t i = 0; i <= j; ++i) {
        sum += (be[i] - be[j + 2]) * (be[i] - be[j + 1]) + ratio<F>(2) * al[i] * ga[i + 1] - al[j + 1] * ga[j + 2];
    }
    return sum / (al[j] * al[j + 1] * al[j + 2]);
}

template <Field F>
F jacobi_eta_second(const Family& family, std::size_t j) {
    if (j == 0) throw std::invalid_argument("jacobi_eta_second needs j >= 1");
    const F a = from_parameter<F>(family.alpha());
    const F b = from_parameter<F>(family.beta());
    if (a == b) return ratio<F>(0);
    const F g = a + b;
    const F jf = ratio<F>(static_cast<long long>(j));
    const F den = ratio<F>(2) * (jf + g) * (jf + g + ratio<F>(1));
    if (is_zero(den)) {
        // (j+g)(j+g+1) = 0 only for j = 1, g in {-1, -2}: fall back to the general sum.
        auto rec = recurrence_table<F>(family, j + 2);
        F sum = ratio<F>(0);
        for (std::size_t i = 0; i < j; ++i) sum += rec.beta[i] - rec.beta[j];
        return sum / (rec.alpha[j - 1] * rec.alpha[j]);
    }
    const F s = ratio<F>(2) * jf + g;
    return (s * s - ratio<F>(1)) / den * (b - a);
}

namespace detail {

template <Field F>
struct Means {
    F beta_bar;  // (1/j) sum_{i<j} beta_i
    F sigma;     // (1/j) sum_{i<j} beta_i^2
    F xi;        // (1/j) sum_{i<j} alpha_i gamma_{i+1}
};

template <Field F>
Means<F> recurrence_means(const RecurrenceTable<F>& rec, std::size_t j) {
    Means<F> m{ratio<F>(0), ratio<F>(0), ratio<F>(0)};
    for (std::size_t i = 0; i < j; ++i) {
        m.beta_bar += rec.beta[i];
        m.sigma += rec.beta[i] * rec.beta[i];
        m.xi += rec.alpha[i] * rec.gamma[i + 1];
    }
    const F jf = ratio<F>(static_cast<long long>(j));
    m.beta_bar /= jf;
    m.sigma /= jf;
    m.xi /= jf;
    return m;
}

}  // namespace detail

/// theta_{j,j} = (beta_j - beta_bar_j) / (j+1), j >= 1.
template <Field F>
F theta_diagonal(const Family& family, std::size_t j) {
    if (j == 0) throw std::invalid_argument("theta_diagonal needs j >= 1");
    const auto rec = recurrence_table<F>(family, j + 2);
    const auto m = detail::recurrence_means(rec, j);
    return (rec.beta[j] - m.beta_bar) / ratio<F>(static_cast<long long>(j) + 1);
}

/// theta_{j,j+1} (row j, column j+1), j >= 1:
///   [alpha_j gamma_{j+1} - sigma_j - 2 xi_j - (beta_j - beta_bar_j) beta_bar_{j+1} + beta_j beta_bar_j]
///   / ((j+2) alpha_j)
template <Field F>
F theta_superdiagonal(const Family& family, std::size_t j) {
    if (j == 0) throw std::invalid_argument("theta_superdiagonal needs j >= 1");
    const auto rec = recurrence_table<F>(family, j + 3);
    const auto m = detail::recurrence_means(rec, j);
    const auto m1 = detail::recurrence_means(rec, j + 1);
    const F bracket = rec.alpha[j] * rec.gamma[j + 1] - m.sigma - ratio<F>(2) * m.xi -
                      (rec.beta[j] - m.beta_bar) * m1.beta_bar + rec.beta[j] * m.beta_bar;
    return bracket / (ratio<F>(static_cast<long long>(j) + 2) * rec.alpha[j]);
}

/// Uncorrected superdiagonal expression,
///   [((j+2)/(j+1)) beta_bar_j beta_bar_{j+2} + alpha_j gamma_{j+1} - sigma_j - 2 xi_j] / ((j+2) alpha_j).
/// It agrees with theta_superdiagonal only when the beta_bar products vanish
/// or cancel; kept so the discrepancy can be reported.
template <Field F>
F theta_superdiagonal_uncorrected(const Family& family, std::size_t j) {
    if (j == 0) throw std::invalid_argument("theta_superdiagonal_uncorrected needs j >= 1");
    const auto rec = recurrence_table<F>(family, j + 3);
    const auto m = detail::recurrence_means(rec, j);
    const auto m2 = detail::recurrence_means(rec, j + 2);
    const long long jj = static_cast<long long>(j);
    const F bracket = ratio<F>(jj + 2, jj + 1) * m.beta_bar * m2.beta_bar + rec.alpha[j] * rec.gamma[j + 1] -
                      m.sigma - ratio<F>(2) * m.xi;
    return bracket / (ratio<F>(jj + 2) * rec.alpha[j]);
}

// ---------------------------------------------------------------------------
// O

namespace detail {

/// Zeroes entries outside the sub-tridiagonal band if they are negligible
/// (exact zero for rationals, <= 1e-13 * column max for doubles) and tags
/// the matrix accordingly; otherwise leaves it General.
template <Field F>
void settle_primitive_structure(OperationalMatrix<F>& o) {
    const std::size_t n = o.size();
    bool banded = true;
    for (std::size_t j = 0; j < n && banded; ++j) {
        double colmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) colmax = std::max(colmax, std::fabs(to_double(o(i, j))));
        for (std::size_t i = 0; i < n; ++i) {
            if (in_pattern(Structure::SubTridiagonal, n, i, j) || is_zero(o(i, j))) continue;
            if constexpr (field_traits<F>::exact) {
                banded = false;
            } else if (std::fabs(o(i, j)) > 1e-13 * colmax) {
                banded = false;
            }
            if (!banded) break;
        }
    }
    if (!banded) {
        o.set_structure(Structure::General);
        return;
    }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (!in_pattern(Structure::SubTridiagonal, n, i, j)) o(i, j) = ratio<F>(0);
    o.set_structure(Structure::SubTridiagonal);
}

/// Primitive matrix of size n computed against a derivative matrix of size n+1.
template <Field F>
OperationalMatrix<F> primitive_from_derivative(const RecurrenceTable<F>& rec, const OperationalMatrix<F>& d,
                                               std::size_t n) {
    OperationalMatrix<F> o(n, Structure::General);
    std::vector<F> t(n + 1);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(t.begin(), t.end(), ratio<F>(0));
        t[j + 1] = rec.alpha[j] / ratio<F>(static_cast<long long>(j) + 1);
        for (std::size_t i = j; i-- > 0;) {
            F s = ratio<F>(0);
            for (std::size_t k = i + 2; k <= j + 1; ++k) s += d(i, k) * t[k];
            t[i + 1] = -(rec.alpha[i] / ratio<F>(static_cast<long long>(i) + 1)) * s;
        }
        auto col = o.column(j);
        for (std::size_t i = 0; i < n; ++i) col[i] = t[i];
    }
    return o;
}

}  // namespace detail

/// O by back-substitution against N:
///   theta_{j+1,j} = alpha_j / (j+1)
///   theta_{i+1,j} = -(alpha_i / (i+1)) sum_{k=i+2}^{j+1} eta_{ik} theta_{kj},  i = j-1..0
/// Nothing about the band is assumed; the structure tag is assigned afterwards.
template <Field F>
OperationalMatrix<F> primitive_matrix_recursive(const RecurrenceTable<F>& rec, std::size_t n) {
    detail::require_size(n, 1, "primitive_matrix_recursive");
    detail::require_table(rec, n + 1, "primitive_matrix_recursive");
    const auto d = derivative_matrix_recursive(rec, n + 1);
    auto o = detail::primitive_from_derivative(rec, d, n);
    detail::settle_primitive_structure(o);
    return o;
}

template <Field F>
OperationalMatrix<F> primitive_matrix_recursive(const Family& family, std::size_t n, Route eta_route = Route::Recursive) {
    detail::require_size(n, 1, "primitive_matrix_recursive");
    const auto rec = recurrence_table<F>(family, n + 1);
    if (eta_route == Route::Recursive) return primitive_matrix_recursive(rec, n);
    const auto d = derivative_matrix<F>(family, n + 1, eta_route);
    auto o = detail::primitive_from_derivative(rec, d, n);
    detail::settle_primitive_structure(o);
    return o;
}

/// Closed-form theta_{i,j} for j >= 2 and i in {j-1, j, j+1}.
template <Field F>
F theta_explicit(const Family& family, std::size_t i, std::size_t j) {
    if (j < 2) throw std::invalid_argument("theta_explicit covers columns j >= 2");
    if (i + 1 < j || i > j + 1) return ratio<F>(0);
    const long long ii = static_cast<long long>(i);
    const long long jj = static_cast<long long>(j);
    const int up = ii == jj + 1 ? 1 : (ii == jj ? 0 : -1);  // i - j
    auto pm = [&](const F& mag) -> F { return up == 1 ? mag : (up == -1 ? -mag : ratio<F>(0)); };
    using detail::pow01;
    using detail::varsigma;
    switch (family.kind()) {
    case FamilyKind::Gegenbauer: {
        const F l = from_parameter<F>(family.lambda());
        return pm(ratio<F>(1) / (ratio<F>(2 * jj) + ratio<F>(2) * l));
    }
    case FamilyKind::ChebyshevFirst:
        // +-(2i)^{-1}: the denominator follows the row index.
        return up == 0 ? ratio<F>(0) : pm(ratio<F>(1, 2 * ii));
    case FamilyKind::ChebyshevSecond: return pm(ratio<F>(1, 2 * jj + 2));
    case FamilyKind::ChebyshevThird:
        return ratio<F>(1, 2) * pow01(ratio<F>(jj + 1), varsigma(jj - 1 - ii)) *
               pow01(ratio<F>(-jj), varsigma(jj + 1 - ii));
    case FamilyKind::ChebyshevFourth:
        return ratio<F>(-1, 2) * pow01(ratio<F>(-jj - 1), varsigma(jj - 1 - ii)) *
               pow01(ratio<F>(jj), varsigma(jj + 1 - ii));
    case FamilyKind::Legendre: return pm(ratio<F>(1, 2 * jj + 1));
    case FamilyKind::Laguerre: return up == -1 ? ratio<F>(0) : detail::sign_power<F>(jj - ii);
    case FamilyKind::Hermite: return up == 1 ? ratio<F>(1, 2 * jj + 2) : ratio<F>(0);
    case FamilyKind::Bessel:
        return pow01(ratio<F>(jj + 1), varsigma(jj - 1 - ii)) * pow01(ratio<F>(2 * jj + 1), varsigma(jj - ii)) *
               pow01(ratio<F>(jj), varsigma(jj + 1 - ii));
    case FamilyKind::Jacobi: break;
    }
    throw unsupported_explicit("no closed-form primitive matrix for " + family.name() + "; use the recursive builder");
}

/// O from closed forms. Columns 0 and 1 use int P_0 = alpha_0 P_1 and
/// int P_1 = (alpha_1/2) P_2 + ((beta_1 - beta_0)/2) P_1.
template <Field F>
OperationalMatrix<F> primitive_matrix_explicit(const Family& family, std::size_t n) {
    detail::require_size(n, 1, "primitive_matrix_explicit");
    if (!has_explicit_formulas(family)) {
        throw unsupported_explicit("no closed-form primitive matrix for " + family.name() +
                                   "; use the recursive builder");
    }
    OperationalMatrix<F> o(n, Structure::SubTridiagonal);
    const auto rec = recurrence_table<F>(family, 2);
    if (n > 1) o(1, 0) = rec.alpha[0];
    if (n > 1) o(1, 1) = (rec.beta[1] - rec.beta[0]) / ratio<F>(2);
    if (n > 2) o(2, 1) = rec.alpha[1] / ratio<F>(2);
    for (std::size_t j = 2; j < n; ++j) {
        for (std::size_t i = j - 1; i <= j + 1 && i < n; ++i) o(i, j) = theta_explicit<F>(family, i, j);
    }
    return o;
}

template <Field F>
OperationalMatrix<F> primitive_matrix(const Family& family, std::size_t n, Route route = Route::Automatic) {
    if (route == Route::Explicit || (route == Route::Automatic && has_explicit_formulas(family))) {
        return primitive_matrix_explicit<F>(family, n);
    }
    return primitive_matrix_recursive<F>(family, n);
}

// ---------------------------------------------------------------------------
// O_a^x

/// The lower limit for which row 0 of O_a^x has closed forms: -1 for the
/// families on [-1, 1], 0 for Laguerre, none otherwise.
inline std::optional<long long> canonical_lower_limit(const Family& family) {
    switch (family.kind()) {
    case FamilyKind::Gegenbauer:
    case FamilyKind::ChebyshevFirst:
    case FamilyKind::ChebyshevSecond:
    case FamilyKind::ChebyshevThird:
    case FamilyKind::ChebyshevFourth:
    case FamilyKind::Legendre: return -1;
    case FamilyKind::Laguerre: return 0;
    default: return std::nullopt;
    }
}

namespace detail {

/// Generalised binomial C(x, j) = prod_{m=1}^{j} (x - j + m) / m.
template <Field F>
F binomial(const F& x, std::size_t j) {
    F r = ratio<F>(1);
    const long long jj = static_cast<long long>(j);
    for (long long m = 1; m <= jj; ++m) r *= (x - ratio<F>(jj - m)) / ratio<F>(m);
    return r;
}

enum class Row0Table { Validated, Uncorrected };

template <Field F>
F row0_closed_form(const Family& family, std::size_t j, Row0Table table) {
    if (!canonical_lower_limit(family)) {
        throw unsupported_explicit("no closed-form definite-integral row for " + family.name());
    }
    const long long jj = static_cast<long long>(j);
    const bool uncorrected = table == Row0Table::Uncorrected;
    switch (family.kind()) {
    case FamilyKind::Gegenbauer: {
        const F l = from_parameter<F>(family.lambda());
        if (j == 0) return ratio<F>(1);
        if (j == 1) return -l * (ratio<F>(2) * l + ratio<F>(1)) / (ratio<F>(2) * l + ratio<F>(2));
        return sign_power<F>(jj) / ratio<F>(jj + 1) * binomial<F>(ratio<F>(jj - 2) + ratio<F>(2) * l, j);
    }
    case FamilyKind::ChebyshevFirst:
        if (j == 0) return ratio<F>(1);
        if (j == 1) return ratio<F>(-1, 4);
        return sign_power<F>(jj + 1) / ratio<F>(jj * jj - 1);
    case FamilyKind::ChebyshevSecond:
        if (j == 0) return ratio<F>(1);
        if (j == 1) return ratio<F>(-3, 4);
        return sign_power<F>(jj) / ratio<F>(jj + 1);
    case FamilyKind::ChebyshevThird:
        if (uncorrected) {
            if (j == 0) return ratio<F>(1, 2);
            if (j == 1) return ratio<F>(0);
            return ratio<F>(2 * jj + 1) * sign_power<F>(jj + 1) / ratio<F>(jj * (jj + 1));
        }
        if (j == 0) return ratio<F>(3, 2);
        if (j == 1) return ratio<F>(-2);
        return ratio<F>(2 * jj + 1) * sign_power<F>(jj) / ratio<F>(jj * (jj + 1));
    case FamilyKind::ChebyshevFourth:
        if (uncorrected) {
            if (j == 0) return ratio<F>(-1, 2);
            if (j == 1) return ratio<F>(0);
            return sign_power<F>(jj) / ratio<F>(jj * (jj + 1));
        }
        if (j == 0) return ratio<F>(1, 2);
        if (j == 1) return ratio<F>(0);
        return sign_power<F>(jj + 1) / ratio<F>(jj * (jj + 1));
    case FamilyKind::Legendre:
        if (j == 0) return uncorrected ? ratio<F>(0) : ratio<F>(1);
        if (j == 1) return uncorrected ? ratio<F>(1, 6) : ratio<F>(-1, 3);
        return ratio<F>(0);
    case FamilyKind::Laguerre: return j == 0 ? ratio<F>(1) : ratio<F>(0);
    default: break;
    }
    throw unsupported_explicit("no closed-form definite-integral row for " + family.name());
}

}  // namespace detail

/// Row-0 entry of O_a^x at the canonical endpoint, oracle-validated values.
template <Field F>
F definite_integral_row0_closed_form(const Family& family, std::size_t j) {
    return detail::row0_closed_form<F>(family, j, detail::Row0Table::Validated);
}

/// Uncorrected row-0 closed form; differs from the validated
/// values for Chebyshev 3rd/4th kind and for Legendre columns 0 and 1.
template <Field F>
F row0_closed_form_uncorrected(const Family& family, std::size_t j) {
    return detail::row0_closed_form<F>(family, j, detail::Row0Table::Uncorrected);
}

/// O_a^x: rows >= 1 equal O, row 0 makes every column's primitive vanish at a:
///   vartheta_{0j} = -sum_{i=1}^{j+1} theta_{ij} P_i(a)
template <Field F>
OperationalMatrix<F> definite_integral_matrix(const Family& family, std::size_t n, const F& a,
                                              Route route = Route::Automatic,
                                              Row0Method method = Row0Method::Summation) {
    detail::require_size(n, 1, "definite_integral_matrix");
    const auto limit = canonical_lower_limit(family);
    const bool at_limit = limit && a == ratio<F>(*limit);
    if (method == Row0Method::ClosedForm && !at_limit) {
        throw unsupported_explicit("closed-form row 0 needs a at the canonical endpoint of " + family.name());
    }
    const bool closed = method == Row0Method::ClosedForm || (method == Row0Method::Automatic && at_limit);

    // Column n-1 needs theta_{n,n-1}, so work one size up.
    const auto big = primitive_matrix<F>(family, n + 1, route);
    OperationalMatrix<F> out(n, big.structure() == Structure::SubTridiagonal ? Structure::Row0DenseSubTridiagonal
                                                                             : Structure::General);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 1; i < n; ++i) out(i, j) = big(i, j);

    if (closed) {
        for (std::size_t j = 0; j < n; ++j) out(0, j) = definite_integral_row0_closed_form<F>(family, j);
        return out;
    }
    const auto p = eval_basis<F>(family, n + 1, a);
    for (std::size_t j = 0; j < n; ++j) {
        F s = ratio<F>(0);
        big.for_each_row(j, [&](std::size_t i) {
            if (i >= 1) s += big(i, j) * p[i];
        });
        out(0, j) = -s;
    }
    return out;
}

}  // namespace opmat

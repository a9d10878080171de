#pragma once

// Numerical experiments: differential-equation residuals, Legendre moments
// on [0, 1] and generating-function residuals, plus grid sweeps and CSV.

#include "opmat/family.hpp"
#include "opmat/matrix.hpp"
#include "opmat/operators.hpp"
#include "opmat/opmatrix.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace opmat {

/// Max-norm residuals: over the valid block and over the whole matrix.
struct Residual {
    double restricted = 0.0;
    double unrestricted = 0.0;
};

// ---------------------------------------------------------------------------
// Differential equations g2(x) y'' + g1(x) y' + a_n y = 0 satisfied by P_n.

template <Field F>
struct DiffEqData {
    PolyCoeffs<F> g2;
    PolyCoeffs<F> g1;
    std::function<F(std::size_t)> a_of;
};

inline bool has_diffeq(const Family& family) {
    switch (family.kind()) {
    case FamilyKind::ChebyshevThird:
    case FamilyKind::ChebyshevFourth:
    case FamilyKind::Bessel: return false;
    default: return true;
    }
}

template <Field F>
DiffEqData<F> diffeq_data(const Family& family) {
    const F one = ratio<F>(1);
    const F zero = ratio<F>(0);
    const PolyCoeffs<F> one_minus_x2{one, zero, -one};
    auto sq = [](F c) { return [c](std::size_t n) -> F { const F nn = ratio<F>(static_cast<long long>(n)); return nn * (nn + c); }; };
    switch (family.kind()) {
    case FamilyKind::Jacobi: {
        const F a = from_parameter<F>(family.alpha());
        const F b = from_parameter<F>(family.beta());
        return {one_minus_x2, PolyCoeffs<F>{b - a, -(a + b + ratio<F>(2))}, sq(a + b + one)};
    }
    case FamilyKind::Gegenbauer: {
        const F l = from_parameter<F>(family.lambda());
        return {one_minus_x2, PolyCoeffs<F>{zero, -(ratio<F>(2) * l + one)}, sq(ratio<F>(2) * l)};
    }
    case FamilyKind::ChebyshevFirst: return {one_minus_x2, PolyCoeffs<F>{zero, -one}, sq(zero)};
    case FamilyKind::ChebyshevSecond: return {one_minus_x2, PolyCoeffs<F>{zero, ratio<F>(-3)}, sq(ratio<F>(2))};
    case FamilyKind::Legendre: return {one_minus_x2, PolyCoeffs<F>{zero, ratio<F>(-2)}, sq(one)};
    case FamilyKind::Laguerre:
        return {PolyCoeffs<F>{zero, one}, PolyCoeffs<F>{one, -one},
                [](std::size_t n) { return ratio<F>(static_cast<long long>(n)); }};
    case FamilyKind::Hermite:
        return {PolyCoeffs<F>{one}, PolyCoeffs<F>{zero, ratio<F>(-2)},
                [](std::size_t n) { return ratio<F>(2 * static_cast<long long>(n)); }};
    default: break;
    }
    throw invalid_family("no differential-equation test for " + family.name());
}

/// T = g2(M) N^2 + g1(M) N + diag(a_0, ..., a_{n-1}).
template <Field F>
OperationalMatrix<F> diffeq_matrix(const Family& family, std::size_t n, Route route = Route::Automatic) {
    if (n == 0) throw std::invalid_argument("diffeq_matrix needs n >= 1");
    const auto data = diffeq_data<F>(family);
    const auto m = shift_matrix<F>(family, n);
    const auto d = derivative_matrix<F>(family, n, route);
    auto t = polynomial_times(data.g2, m, d * d) + polynomial_times(data.g1, m, d);
    for (std::size_t j = 0; j < n; ++j) t(j, j) += data.a_of(j);
    t.set_structure(Structure::General);
    return t;
}

/// Columns of T free of truncation: j <= n - 4.
inline std::optional<std::size_t> diffeq_last_valid_column(std::size_t n) {
    return last_column_within(differential_term_reach(2, 2), n);
}

template <Field F>
Residual diffeq_residual(const Family& family, std::size_t n, Route route = Route::Automatic) {
    const auto t = diffeq_matrix<F>(family, n, route);
    const auto last = diffeq_last_valid_column(n);
    Residual r;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const double v = std::fabs(to_double(t(i, j)));
            r.unrestricted = std::max(r.unrestricted, v);
            if (last && j <= *last) r.restricted = std::max(r.restricted, v);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Legendre moments I_j = int_0^1 x^k P_j(x) dx.

/// Row vector (P(1) - P(0)) O M^k: entry j is int_0^1 x^k P_j.
template <Field F>
std::vector<F> legendre_moments(std::size_t k, std::size_t n) {
    if (n == 0) throw std::invalid_argument("legendre_moments needs n >= 1");
    const auto family = Family::legendre();
    const auto m = shift_matrix<F>(family, n);
    const auto o = primitive_matrix<F>(family, n);
    auto w = legendre_zero_column<F>(n);
    for (auto& x : w) x = ratio<F>(1) - x;
    w = apply_left(w, o);
    for (std::size_t p = 0; p < k; ++p) w = apply_left(w, m);
    return w;
}

/// Row vector (P(1) - P(0)) M^k O, with the operator order swapped. Equals
/// the moments only for k = 0.
template <Field F>
std::vector<F> legendre_moments_swapped_order(std::size_t k, std::size_t n) {
    if (n == 0) throw std::invalid_argument("legendre_moments needs n >= 1");
    const auto family = Family::legendre();
    const auto m = shift_matrix<F>(family, n);
    const auto o = primitive_matrix<F>(family, n);
    auto w = legendre_zero_column<F>(n);
    for (auto& x : w) x = ratio<F>(1) - x;
    for (std::size_t p = 0; p < k; ++p) w = apply_left(w, m);
    return apply_left(w, o);
}

namespace detail {

/// sign and log|.| of the Pochhammer symbol (x)_m; nullopt when it is zero.
inline std::optional<std::pair<int, double>> log_pochhammer(double x, std::size_t m) {
    int sign = 1;
    double log_abs = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        const double f = x + static_cast<double>(t);
        if (f == 0.0) return std::nullopt;
        if (f < 0.0) sign = -sign;
        log_abs += std::log(std::fabs(f));
    }
    return std::pair{sign, log_abs};
}

}  // namespace detail

/// Closed form of int_0^1 x^k P_j(x) dx via Gamma ratios, k > -1.
///   I_{2m}   = (-1)^m (-k/2)_m     Gamma((1+k)/2) / (2 Gamma(m + (k+3)/2))
///   I_{2m+1} = (-1)^m ((1-k)/2)_m  Gamma(1+k/2)   / (2 Gamma(m + 2 + k/2))
inline double legendre_moment_reference(double k, std::size_t j) {
    if (!(k > -1.0)) throw std::invalid_argument("legendre moments need k > -1");
    const std::size_t m = j / 2;
    const double md = static_cast<double>(m);
    const bool even = j % 2 == 0;
    const auto poch = detail::log_pochhammer(even ? -k / 2.0 : (1.0 - k) / 2.0, m);
    if (!poch) return 0.0;
    const double lg = even ? std::lgamma((1.0 + k) / 2.0) - std::lgamma(md + (k + 3.0) / 2.0)
                           : std::lgamma(1.0 + k / 2.0) - std::lgamma(md + 2.0 + k / 2.0);
    const double sign = (m % 2 == 0 ? 1.0 : -1.0) * poch->first;
    return sign * std::exp(poch->second + lg) / 2.0;
}

/// Last moment index free of truncation: n - max(k + 2, 4) - 1.
inline std::optional<std::size_t> moments_last_valid(std::size_t k, std::size_t n) {
    const std::size_t cut = std::max<std::size_t>(k + 2, 4);
    if (cut + 1 > n) return std::nullopt;
    return n - cut - 1;
}

/// Euclidean norm of T_n - I_n, over the valid indices and over all.
inline Residual legendre_moment_error(std::size_t k, std::size_t n) {
    const auto t = legendre_moments<double>(k, n);
    const auto last = moments_last_valid(k, n);
    double all = 0.0;
    double valid = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = t[j] - legendre_moment_reference(static_cast<double>(k), j);
        all += d * d;
        if (last && j <= *last) valid += d * d;
    }
    return {std::sqrt(valid), std::sqrt(all)};
}

// ---------------------------------------------------------------------------
// Generating functions g = sum_i g_i z^i P_i(x).

inline bool has_genfun(const Family& family) {
    switch (family.kind()) {
    case FamilyKind::Gegenbauer:
    case FamilyKind::ChebyshevFirst:
    case FamilyKind::ChebyshevSecond:
    case FamilyKind::Legendre:
    case FamilyKind::Laguerre:
    case FamilyKind::Hermite: return true;
    default: return false;
    }
}

/// S(k) is defined for every generating-function family except Chebyshev
/// first and second kind.
inline bool has_genfun_integral(const Family& family) {
    return has_genfun(family) && family.kind() != FamilyKind::ChebyshevFirst &&
           family.kind() != FamilyKind::ChebyshevSecond;
}

namespace detail {

inline void require_genfun(const Family& family) {
    if (!has_genfun(family)) throw invalid_family("no generating-function test for " + family.name());
}

template <Field F>
F power(F base, std::size_t e) {
    F r = ratio<F>(1);
    for (std::size_t i = 0; i < e; ++i) r *= base;
    return r;
}

/// (2k-1)!! with (-1)!! = 1.
template <Field F>
F double_factorial_odd(std::size_t k) {
    F r = ratio<F>(1);
    for (long long m = 1; m <= 2 * static_cast<long long>(k) - 1; m += 2) r *= ratio<F>(m);
    return r;
}

template <Field F>
F pochhammer(const F& x, std::size_t m) {
    F r = ratio<F>(1);
    for (std::size_t t = 0; t < m; ++t) r *= x + ratio<F>(static_cast<long long>(t));
    return r;
}

template <Field F>
std::vector<F> axpby(const F& a, const std::vector<F>& x, const F& b, const std::vector<F>& y) {
    std::vector<F> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i] + b * y[i];
    return r;
}

template <Field F>
std::vector<F> apply_times(const OperationalMatrix<F>& a, std::vector<F> v, std::size_t times) {
    for (std::size_t t = 0; t < times; ++t) v = opmat::apply(a, v);
    return v;
}

/// R v = (1 + z^2) v - 2 z M v.
template <Field F>
std::vector<F> apply_r(const OperationalMatrix<F>& m, const F& z, const std::vector<F>& v) {
    return axpby<F>(ratio<F>(1) + z * z, v, -ratio<F>(2) * z, opmat::apply(m, v));
}

}  // namespace detail

/// a_n = (g_0, g_1 z, ..., g_{n-1} z^{n-1}).
template <Field F>
std::vector<F> genfun_coefficients(const Family& family, const F& z, std::size_t n) {
    detail::require_genfun(family);
    std::vector<F> a(n);
    F zi = ratio<F>(1);
    F fact = ratio<F>(1);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<long long>(i);
        if (i > 0) fact *= ratio<F>(ii);
        switch (family.kind()) {
        case FamilyKind::ChebyshevFirst: a[i] = i == 0 ? zi : zi / ratio<F>(ii); break;
        case FamilyKind::Hermite: a[i] = zi / fact; break;
        default: a[i] = zi; break;
        }
        zi *= z;
    }
    return a;
}

/// D(k) a and, where defined, S(k) a, evaluated as chains of
/// matrix-vector products.
template <Field F>
struct GenFunVectors {
    std::vector<F> d;
    std::optional<std::vector<F>> s;
};

template <Field F>
GenFunVectors<F> genfun_vectors(const Family& family, std::size_t k, const F& z, std::size_t n,
                                Route route = Route::Automatic) {
    detail::require_genfun(family);
    if (k < 1) throw std::invalid_argument("generating-function tests need k >= 1");
    if (n < 2) throw std::invalid_argument("generating-function tests need n >= 2");
    const auto a = genfun_coefficients<F>(family, z, n);
    const auto m = shift_matrix<F>(family, n);
    const auto d = derivative_matrix<F>(family, n, route);
    const F two = ratio<F>(2);
    const F kk = ratio<F>(static_cast<long long>(k));
    GenFunVectors<F> out;

    auto rn = [&](const F& c) {
        const auto nk = detail::apply_times(d, a, k);
        return detail::axpby<F>(ratio<F>(1), detail::apply_r(m, z, opmat::apply(d, nk)), -c * z, nk);
    };
    auto ok = [&] { return detail::apply_times(primitive_matrix<F>(family, n, route), a, k); };
    auto rk = [&](bool negate) {
        auto v = a;
        for (std::size_t t = 0; t < k; ++t) {
            v = detail::apply_r(m, z, v);
            if (negate) for (auto& x : v) x = -x;
        }
        return v;
    };

    switch (family.kind()) {
    case FamilyKind::Gegenbauer: {
        const F l = from_parameter<F>(family.lambda());
        out.d = rn(two * (l + kk));
        const F c = detail::power<F>(two * z, k) * detail::pochhammer<F>(l - kk, k);
        out.s = detail::axpby<F>(c, ok(), ratio<F>(-1), rk(false));
        break;
    }
    case FamilyKind::ChebyshevFirst: out.d = rn(two * kk); break;
    case FamilyKind::ChebyshevSecond: out.d = rn(two * (kk + ratio<F>(1))); break;
    case FamilyKind::Legendre: {
        out.d = rn(two * kk + ratio<F>(1));
        const F c = detail::double_factorial_odd<F>(k) * detail::power<F>(z, k);
        out.s = detail::axpby<F>(c, ok(), ratio<F>(-1), rk(true));
        break;
    }
    case FamilyKind::Laguerre: {
        const F zm1 = detail::power<F>(z - ratio<F>(1), k);
        const F zk = detail::power<F>(z, k);
        out.d = detail::axpby<F>(zm1, detail::apply_times(d, a, k), -zk, a);
        out.s = detail::axpby<F>(zk, ok(), -zm1, a);
        break;
    }
    case FamilyKind::Hermite: {
        const F tz = detail::power<F>(two * z, k);
        out.d = detail::axpby<F>(ratio<F>(1), detail::apply_times(d, a, k), -tz, a);
        out.s = detail::axpby<F>(tz, ok(), ratio<F>(-1), a);
        break;
    }
    default: detail::require_genfun(family);
    }
    return out;
}

/// D(k) and S(k) as assembled matrices, for cross-checking the vector
/// chains at small n.
template <Field F>
std::pair<OperationalMatrix<F>, std::optional<OperationalMatrix<F>>>
genfun_matrices(const Family& family, std::size_t k, const F& z, std::size_t n, Route route = Route::Automatic) {
    detail::require_genfun(family);
    if (k < 1) throw std::invalid_argument("generating-function tests need k >= 1");
    const auto m = shift_matrix<F>(family, n);
    const auto d = derivative_matrix<F>(family, n, route);
    const auto id = OperationalMatrix<F>::identity(n);
    const F two = ratio<F>(2);
    const F kk = ratio<F>(static_cast<long long>(k));
    const auto r = add_identity(F(-two * z) * m, F(ratio<F>(1) + z * z));
    auto mpow = [&](const OperationalMatrix<F>& x, std::size_t e) {
        auto p = id;
        for (std::size_t t = 0; t < e; ++t) p = p * x;
        return p;
    };
    const auto nk = mpow(d, k);
    auto ok = [&] { return mpow(primitive_matrix<F>(family, n, route), k); };
    auto rn = [&](const F& c) { return r * (d * nk) - F(c * z) * nk; };

    switch (family.kind()) {
    case FamilyKind::Gegenbauer: {
        const F l = from_parameter<F>(family.lambda());
        const F c = detail::power<F>(two * z, k) * detail::pochhammer<F>(l - kk, k);
        return {rn(two * (l + kk)), c * ok() - mpow(r, k)};
    }
    case FamilyKind::ChebyshevFirst: return {rn(two * kk), std::nullopt};
    case FamilyKind::ChebyshevSecond: return {rn(two * (kk + ratio<F>(1))), std::nullopt};
    case FamilyKind::Legendre: {
        const F c = detail::double_factorial_odd<F>(k) * detail::power<F>(z, k);
        return {rn(two * kk + ratio<F>(1)), c * ok() - mpow(ratio<F>(-1) * r, k)};
    }
    case FamilyKind::Laguerre: {
        const F zm1 = detail::power<F>(z - ratio<F>(1), k);
        const F zk = detail::power<F>(z, k);
        return {zm1 * nk - zk * id, zk * ok() - zm1 * id};
    }
    case FamilyKind::Hermite: {
        const F tz = detail::power<F>(two * z, k);
        return {nk - tz * id, tz * ok() - id};
    }
    default: break;
    }
    throw invalid_family("no generating-function test for " + family.name());
}

/// Rows of the residual vectors that are free of truncation: rows
/// 0 .. n - max(k+2, 4) - 1. S residuals also skip rows < k, which hold
/// the integration constants of the k-fold primitive.
struct GenFunRows {
    std::size_t d_first = 0;
    std::size_t s_first = 0;
    std::optional<std::size_t> last;
};

inline GenFunRows genfun_valid_rows(std::size_t k, std::size_t n) { return {0, k, moments_last_valid(k, n)}; }

struct GenFunResidual {
    Residual d;
    std::optional<Residual> s;
};

namespace detail {

template <Field F>
Residual norm_rows(const std::vector<F>& v, std::size_t first, std::optional<std::size_t> last) {
    double all = 0.0;
    double valid = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = to_double(v[i]);
        all += x * x;
        if (last && i >= first && i <= *last) valid += x * x;
    }
    return {std::sqrt(valid), std::sqrt(all)};
}

}  // namespace detail

/// Euclidean norms of D(k) a and S(k) a.
template <Field F>
GenFunResidual genfun_residuals(const Family& family, std::size_t k, const F& z, std::size_t n,
                                Route route = Route::Automatic) {
    const auto v = genfun_vectors<F>(family, k, z, n, route);
    const auto rows = genfun_valid_rows(k, n);
    GenFunResidual out{detail::norm_rows(v.d, rows.d_first, rows.last), std::nullopt};
    if (v.s) out.s = detail::norm_rows(*v.s, rows.s_first, rows.last);
    return out;
}

// ---------------------------------------------------------------------------
// Sweeps.

enum class TestId { DiffEq, Moments, GenFun };

inline TestId parse_test_id(std::string_view s) {
    if (s == "diffeq") return TestId::DiffEq;
    if (s == "moments") return TestId::Moments;
    if (s == "genfun") return TestId::GenFun;
    throw std::invalid_argument("unknown test '" + std::string(s) + "' (expected diffeq, moments or genfun)");
}

struct SweepGrid {
    std::size_t n_min = 20;
    std::size_t n_max = 1000;
    std::size_t step = 20;
    std::vector<std::size_t> ks;
    double z = 0.1;
    std::string z_text = "0.1";

    [[nodiscard]] std::vector<std::size_t> ns() const {
        if (step == 0) throw std::invalid_argument("sweep step must be positive");
        std::vector<std::size_t> out;
        for (std::size_t n = n_min; n <= n_max; n += step) out.push_back(n);
        return out;
    }
};

struct SweepRow {
    std::string test;
    std::string family;
    std::string params;
    std::size_t n = 0;
    std::optional<std::size_t> k;
    std::optional<std::string> z;
    double residual = 0.0;
    double residual_unrestricted = 0.0;
};

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, unsigned threads = 0) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i; (i = next++) < count;) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// One row per grid point, ordered by (k, n). Generating-function sweeps
/// emit a `genfun-D` row and, where defined, a `genfun-S` row per point.
inline std::vector<SweepRow> sweep(TestId test, const Family& family, const SweepGrid& grid, unsigned threads = 0) {
    const auto ns = grid.ns();
    std::vector<std::size_t> ks = grid.ks;
    switch (test) {
    case TestId::DiffEq:
        if (!has_diffeq(family)) throw invalid_family("no differential-equation test for " + family.name());
        ks = {0};
        break;
    case TestId::Moments:
        if (family.kind() != FamilyKind::Legendre) throw invalid_family("the moments test is defined for legendre only");
        if (ks.empty()) ks = {0, 1, 2, 10, 50};
        break;
    case TestId::GenFun:
        detail::require_genfun(family);
        if (ks.empty()) ks = {1, 2, 3};
        for (auto k : ks)
            if (k < 1) throw std::invalid_argument("generating-function tests need k >= 1");
        break;
    }
    const std::size_t per_point = test == TestId::GenFun && has_genfun_integral(family) ? 2 : 1;
    std::vector<SweepRow> rows(ks.size() * ns.size() * per_point);
    parallel_for(
        ks.size() * ns.size(),
        [&](std::size_t idx) {
            const std::size_t k = ks[idx / ns.size()];
            const std::size_t n = ns[idx % ns.size()];
            SweepRow base{"", family.name(), family.params(), n, std::nullopt, std::nullopt, 0.0, 0.0};
            switch (test) {
            case TestId::DiffEq: {
                const auto r = diffeq_residual<double>(family, n);
                base.test = "diffeq";
                base.residual = r.restricted;
                base.residual_unrestricted = r.unrestricted;
                rows[idx] = base;
                break;
            }
            case TestId::Moments: {
                const auto r = legendre_moment_error(k, n);
                base.test = "moments";
                base.k = k;
                base.residual = r.restricted;
                base.residual_unrestricted = r.unrestricted;
                rows[idx] = base;
                break;
            }
            case TestId::GenFun: {
                const auto r = genfun_residuals<double>(family, k, grid.z, n);
                base.k = k;
                base.z = grid.z_text;
                auto d = base;
                d.test = "genfun-D";
                d.residual = r.d.restricted;
                d.residual_unrestricted = r.d.unrestricted;
                rows[idx * per_point] = d;
                if (r.s) {
                    auto s = base;
                    s.test = "genfun-S";
                    s.residual = r.s->restricted;
                    s.residual_unrestricted = r.s->unrestricted;
                    rows[idx * per_point + 1] = s;
                }
                break;
            }
            }
        },
        threads);
    return rows;
}

inline void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "test,family,params,n,k,z,residual,residual_unrestricted\n";
    for (const auto& r : rows) {
        out << r.test << ',' << r.family << ',' << r.params << ',' << r.n << ',' << (r.k ? std::to_string(*r.k) : "")
            << ',' << (r.z ? *r.z : "") << ',' << format_number(r.residual) << ','
            << format_number(r.residual_unrestricted) << '\n';
    }
}

}  // namespace opmat

#pragma once

// Independent exact oracle. Builds each P_j in the monomial basis from the
// recurrence, applies x*, d/dx or the primitive with ordinary calculus, and
// projects the result back by triangular back-substitution. No eta/theta
// recursion is involved, so agreement with the builders is real evidence.

#include "opmat/family.hpp"
#include "opmat/matrix.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace opmat {

/// Rational polynomial in the monomial basis, lowest degree first.
/// Trailing zeros are trimmed; the zero polynomial has no coefficients.
class MonomialPoly {
public:
    MonomialPoly() = default;
    explicit MonomialPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

    static MonomialPoly x() { return MonomialPoly({Rational(0), Rational(1)}); }

    [[nodiscard]] const std::vector<Rational>& coeffs() const { return c_; }
    [[nodiscard]] bool is_zero() const { return c_.empty(); }
    /// -1 for the zero polynomial.
    [[nodiscard]] long degree() const { return static_cast<long>(c_.size()) - 1; }
    [[nodiscard]] Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }

    [[nodiscard]] Rational operator()(const Rational& at) const {
        Rational r = 0;
        for (std::size_t k = c_.size(); k-- > 0;) r = r * at + c_[k];
        return r;
    }

    friend MonomialPoly operator+(const MonomialPoly& a, const MonomialPoly& b) {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(k) + b.coeff(k);
        return MonomialPoly(std::move(c));
    }
    friend MonomialPoly operator-(const MonomialPoly& a, const MonomialPoly& b) {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(k) - b.coeff(k);
        return MonomialPoly(std::move(c));
    }
    friend MonomialPoly operator*(const Rational& s, const MonomialPoly& a) {
        std::vector<Rational> c(a.c_.size());
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = s * a.c_[k];
        return MonomialPoly(std::move(c));
    }
    friend MonomialPoly operator*(const MonomialPoly& a, const MonomialPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t k = 0; k < b.c_.size(); ++k) c[i + k] += a.c_[i] * b.c_[k];
        return MonomialPoly(std::move(c));
    }
    friend bool operator==(const MonomialPoly&, const MonomialPoly&) = default;

private:
    void trim() {
        while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

inline MonomialPoly differentiate(const MonomialPoly& p) {
    if (p.degree() < 1) return {};
    std::vector<Rational> c(p.coeffs().size() - 1);
    for (std::size_t k = 1; k < p.coeffs().size(); ++k) c[k - 1] = p.coeffs()[k] * static_cast<long>(k);
    return MonomialPoly(std::move(c));
}

/// Antiderivative with zero constant term.
inline MonomialPoly integrate(const MonomialPoly& p) {
    std::vector<Rational> c(p.coeffs().size() + 1);
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) c[k + 1] = p.coeffs()[k] / static_cast<long>(k + 1);
    return MonomialPoly(std::move(c));
}

namespace detail {

inline RecurrenceTable<Rational> oracle_table(const Family& family, std::size_t count) {
    if (!family.is_rational()) {
        throw inexact_parameter("the exact oracle needs rational parameters for " + family.name());
    }
    return recurrence_table<Rational>(family, count);
}

}  // namespace detail

/// P_0..P_{n-1} in the monomial basis.
inline std::vector<MonomialPoly> basis_as_monomials(const Family& family, std::size_t n) {
    if (n == 0) throw std::invalid_argument("basis_as_monomials needs n >= 1");
    const auto rec = detail::oracle_table(family, n);
    std::vector<MonomialPoly> p;
    p.reserve(n);
    p.push_back(MonomialPoly({Rational(1)}));
    const auto x = MonomialPoly::x();
    for (std::size_t j = 0; j + 1 < n; ++j) {
        MonomialPoly next = x * p[j] - rec.beta[j] * p[j];
        if (j > 0) next = next - rec.gamma[j] * p[j - 1];
        p.push_back((Rational(1) / rec.alpha[j]) * next);
    }
    return p;
}

/// Coefficients c with sum_j c_j P_j = q, for a basis with deg P_j = j.
inline std::vector<Rational> project(const MonomialPoly& q, const std::vector<MonomialPoly>& basis) {
    if (q.degree() >= static_cast<long>(basis.size())) {
        throw std::invalid_argument("project: degree " + std::to_string(q.degree()) + " exceeds basis size " +
                                    std::to_string(basis.size()));
    }
    std::vector<Rational> rest = q.coeffs();
    rest.resize(basis.size());
    std::vector<Rational> c(basis.size());
    for (std::size_t d = basis.size(); d-- > 0;) {
        if (sgn(rest[d]) == 0) continue;
        const auto& pd = basis[d].coeffs();
        if (static_cast<long>(d) != basis[d].degree()) throw std::logic_error("basis element has wrong degree");
        c[d] = rest[d] / pd[d];
        for (std::size_t k = 0; k <= d; ++k) rest[k] -= c[d] * pd[k];
    }
    return c;
}

inline std::vector<Rational> project(const MonomialPoly& q, const Family& family, std::size_t n) {
    return project(q, basis_as_monomials(family, n));
}

enum class OracleKind { Shift, Derivative, Primitive, DefiniteIntegral };

/// Column j = projection of the operator applied to P_j.
/// Primitive: P_0 coefficient set to 0. DefiniteIntegral: primitive vanishing at a.
inline OperationalMatrix<Rational> oracle_matrix(OracleKind kind, const Family& family, std::size_t n,
                                                 const Rational& a = Rational(0)) {
    if (n == 0) throw std::invalid_argument("oracle_matrix needs n >= 1");
    const auto basis = basis_as_monomials(family, n + 2);
    OperationalMatrix<Rational> m(n, Structure::General);
    for (std::size_t j = 0; j < n; ++j) {
        MonomialPoly image;
        switch (kind) {
        case OracleKind::Shift: image = MonomialPoly::x() * basis[j]; break;
        case OracleKind::Derivative: image = differentiate(basis[j]); break;
        case OracleKind::Primitive: image = integrate(basis[j]); break;
        case OracleKind::DefiniteIntegral: {
            auto prim = integrate(basis[j]);
            image = prim - MonomialPoly({prim(a)});
            break;
        }
        }
        auto c = project(image, basis);
        if (kind == OracleKind::Primitive) c[0] = 0;
        for (std::size_t i = 0; i < n; ++i) m(i, j) = c[i];
    }
    return m;
}

/// A differing entry between two matrices.
struct Mismatch {
    std::size_t row = 0;
    std::size_t col = 0;
    std::string lhs;
    std::string rhs;

    [[nodiscard]] std::string str() const {
        return "(" + std::to_string(row) + ", " + std::to_string(col) + "): " + lhs + " != " + rhs;
    }
};

template <Field F>
std::optional<Mismatch> first_mismatch(const OperationalMatrix<F>& a, const OperationalMatrix<F>& b) {
    if (a.size() != b.size()) {
        return Mismatch{0, 0, "size " + std::to_string(a.size()), "size " + std::to_string(b.size())};
    }
    for (std::size_t j = 0; j < a.size(); ++j)
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a(i, j) != b(i, j)) return Mismatch{i, j, format_number(a(i, j)), format_number(b(i, j))};
    return std::nullopt;
}

}  // namespace opmat

#pragma once

#include "opmat/field.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace opmat {

class dimension_mismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Guaranteed zero pattern of an operational matrix.
enum class Structure {
    Tridiagonal,              ///< rows j-1, j, j+1 of column j
    StrictlyUpperTriangular,  ///< rows < j
    SubTridiagonal,           ///< rows j-1, j, j+1; row 0 zero
    Row0DenseSubTridiagonal,  ///< SubTridiagonal plus a dense row 0
    General,
};

inline std::string to_string(Structure s) {
    switch (s) {
    case Structure::Tridiagonal: return "tridiagonal";
    case Structure::StrictlyUpperTriangular: return "strictly-upper-triangular";
    case Structure::SubTridiagonal: return "sub-tridiagonal";
    case Structure::Row0DenseSubTridiagonal: return "row0-dense-sub-tridiagonal";
    case Structure::General: return "general";
    }
    return "unknown";
}

/// Half-open row range [first, last) that may hold nonzeros in column j,
/// not counting the dense row 0 of Row0DenseSubTridiagonal.
inline std::pair<std::size_t, std::size_t> band_rows(Structure s, std::size_t n, std::size_t j) {
    switch (s) {
    case Structure::Tridiagonal: return {j == 0 ? 0 : j - 1, std::min(n, j + 2)};
    case Structure::StrictlyUpperTriangular: return {0, j};
    case Structure::SubTridiagonal:
    case Structure::Row0DenseSubTridiagonal: return {j <= 1 ? 1 : j - 1, std::min(n, j + 2)};
    case Structure::General: return {0, n};
    }
    return {0, n};
}

inline bool in_pattern(Structure s, std::size_t n, std::size_t i, std::size_t j) {
    if (s == Structure::Row0DenseSubTridiagonal && i == 0) return true;
    auto [lo, hi] = band_rows(s, n, j);
    return i >= lo && i < hi;
}

/// Square n x n matrix truncated from an infinite operational matrix.
/// Stored densely, column-major; the structure tag records which entries
/// are guaranteed zero so products can skip them.
template <Field F>
class OperationalMatrix {
public:
    OperationalMatrix() = default;
    explicit OperationalMatrix(std::size_t n, Structure s = Structure::General)
        : n_(n), structure_(s), data_(n * n, ratio<F>(0)) {}

    static OperationalMatrix identity(std::size_t n) {
        OperationalMatrix m(n, Structure::General);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = ratio<F>(1);
        return m;
    }

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] Structure structure() const { return structure_; }
    void set_structure(Structure s) { structure_ = s; }

    F& operator()(std::size_t i, std::size_t j) { return data_[j * n_ + i]; }
    const F& operator()(std::size_t i, std::size_t j) const { return data_[j * n_ + i]; }

    std::span<F> column(std::size_t j) { return {data_.data() + j * n_, n_}; }
    std::span<const F> column(std::size_t j) const { return {data_.data() + j * n_, n_}; }

    /// Rows of column j that may be nonzero, in increasing order.
    template <class Fn>
    void for_each_row(std::size_t j, Fn&& fn) const {
        auto [lo, hi] = band_rows(structure_, n_, j);
        if (structure_ == Structure::Row0DenseSubTridiagonal && lo > 0) fn(std::size_t{0});
        for (std::size_t i = lo; i < hi; ++i) fn(i);
    }

    /// Top-left k x k block.
    [[nodiscard]] OperationalMatrix leading_block(std::size_t k) const {
        if (k > n_) throw dimension_mismatch("leading block larger than matrix");
        OperationalMatrix b(k, structure_);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < k; ++i) b(i, j) = (*this)(i, j);
        return b;
    }

    friend bool operator==(const OperationalMatrix& a, const OperationalMatrix& b) {
        return a.n_ == b.n_ && a.data_ == b.data_;
    }

private:
    std::size_t n_ = 0;
    Structure structure_ = Structure::General;
    std::vector<F> data_;
};

/// First entry outside the pattern of `s` that is not exactly zero.
template <Field F>
std::optional<std::pair<std::size_t, std::size_t>> pattern_violation(const OperationalMatrix<F>& a, Structure s) {
    const std::size_t n = a.size();
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (!in_pattern(s, n, i, j) && !is_zero(a(i, j))) return std::pair{i, j};
    return std::nullopt;
}

namespace detail {

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw dimension_mismatch(std::string(what) + ": sizes " + std::to_string(a) + " and " + std::to_string(b));
    }
}

inline Structure sum_structure(Structure a, Structure b) {
    if (a == b) return a;
    auto sub = [](Structure s) { return s == Structure::SubTridiagonal || s == Structure::Row0DenseSubTridiagonal; };
    if (sub(a) && sub(b)) return Structure::Row0DenseSubTridiagonal;
    return Structure::General;
}

}  // namespace detail

template <Field F>
OperationalMatrix<F> operator+(const OperationalMatrix<F>& a, const OperationalMatrix<F>& b) {
    detail::require_same_size(a.size(), b.size(), "matrix sum");
    OperationalMatrix<F> c(a.size(), detail::sum_structure(a.structure(), b.structure()));
    for (std::size_t j = 0; j < a.size(); ++j)
        for (std::size_t i = 0; i < a.size(); ++i) c(i, j) = a(i, j) + b(i, j);
    return c;
}

template <Field F>
OperationalMatrix<F> operator-(const OperationalMatrix<F>& a, const OperationalMatrix<F>& b) {
    detail::require_same_size(a.size(), b.size(), "matrix difference");
    OperationalMatrix<F> c(a.size(), detail::sum_structure(a.structure(), b.structure()));
    for (std::size_t j = 0; j < a.size(); ++j)
        for (std::size_t i = 0; i < a.size(); ++i) c(i, j) = a(i, j) - b(i, j);
    return c;
}

template <Field F>
OperationalMatrix<F> operator*(const F& s, const OperationalMatrix<F>& a) {
    OperationalMatrix<F> c(a.size(), a.structure());
    for (std::size_t j = 0; j < a.size(); ++j)
        for (std::size_t i = 0; i < a.size(); ++i) c(i, j) = s * a(i, j);
    return c;
}

/// Adds s to every diagonal entry.
template <Field F>
OperationalMatrix<F> add_identity(OperationalMatrix<F> a, const F& s) {
    for (std::size_t i = 0; i < a.size(); ++i) a(i, i) = a(i, i) + s;
    if (a.structure() != Structure::Tridiagonal) a.set_structure(Structure::General);
    return a;
}

/// Product of two truncated matrices; loops only over the structural
/// nonzeros of both operands.
template <Field F>
OperationalMatrix<F> operator*(const OperationalMatrix<F>& a, const OperationalMatrix<F>& b) {
    detail::require_same_size(a.size(), b.size(), "matrix product");
    const std::size_t n = a.size();
    const bool upper = a.structure() == Structure::StrictlyUpperTriangular &&
                       b.structure() == Structure::StrictlyUpperTriangular;
    OperationalMatrix<F> c(n, upper ? Structure::StrictlyUpperTriangular : Structure::General);
    for (std::size_t j = 0; j < n; ++j) {
        auto cj = c.column(j);
        b.for_each_row(j, [&](std::size_t k) {
            const F& bkj = b(k, j);
            if (is_zero(bkj)) return;
            auto ak = a.column(k);
            a.for_each_row(k, [&](std::size_t i) { cj[i] += ak[i] * bkj; });
        });
    }
    return c;
}

/// A * v.
template <Field F>
std::vector<F> apply(const OperationalMatrix<F>& a, std::span<const F> v) {
    detail::require_same_size(a.size(), v.size(), "matrix-vector product");
    std::vector<F> out(a.size(), ratio<F>(0));
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (is_zero(v[j])) continue;
        auto aj = a.column(j);
        a.for_each_row(j, [&](std::size_t i) { out[i] += aj[i] * v[j]; });
    }
    return out;
}

template <Field F>
std::vector<F> apply(const OperationalMatrix<F>& a, const std::vector<F>& v) {
    return opmat::apply(a, std::span<const F>(v));
}

/// w^T * A, returned as a plain vector.
template <Field F>
std::vector<F> apply_left(std::span<const F> w, const OperationalMatrix<F>& a) {
    detail::require_same_size(a.size(), w.size(), "vector-matrix product");
    std::vector<F> out(a.size(), ratio<F>(0));
    for (std::size_t j = 0; j < a.size(); ++j) {
        auto aj = a.column(j);
        F s = ratio<F>(0);
        a.for_each_row(j, [&](std::size_t i) { s += w[i] * aj[i]; });
        out[j] = s;
    }
    return out;
}

template <Field F>
std::vector<F> apply_left(const std::vector<F>& w, const OperationalMatrix<F>& a) {
    return apply_left(std::span<const F>(w), a);
}

/// Converts an exact matrix to doubles, keeping the structure tag.
inline OperationalMatrix<double> to_double(const OperationalMatrix<Rational>& a) {
    OperationalMatrix<double> d(a.size(), a.structure());
    for (std::size_t j = 0; j < a.size(); ++j)
        for (std::size_t i = 0; i < a.size(); ++i) d(i, j) = a(i, j).get_d();
    return d;
}

}  // namespace opmat

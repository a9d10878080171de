#pragma once

#include "opmat/matrix.hpp"

#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string_view>

namespace opmat {

enum class MatrixFormat { Csv, Coo };

inline MatrixFormat parse_matrix_format(std::string_view s) {
    if (s == "csv") return MatrixFormat::Csv;
    if (s == "coo") return MatrixFormat::Coo;
    throw std::invalid_argument("unknown matrix format '" + std::string(s) + "' (expected csv or coo)");
}

/// Dense, row-major, one matrix row per line.
template <Field F>
void write_csv(std::ostream& out, const OperationalMatrix<F>& a) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (j > 0) out << ',';
            out << format_number(a(i, j));
        }
        out << '\n';
    }
}

/// `i j value` per nonzero, column by column.
template <Field F>
void write_coo(std::ostream& out, const OperationalMatrix<F>& a) {
    for (std::size_t j = 0; j < a.size(); ++j)
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!is_zero(a(i, j))) out << i << ' ' << j << ' ' << format_number(a(i, j)) << '\n';
}

template <Field F>
void write_matrix(std::ostream& out, const OperationalMatrix<F>& a, MatrixFormat format) {
    if (format == MatrixFormat::Csv) {
        write_csv(out, a);
    } else {
        write_coo(out, a);
    }
}

}  // namespace opmat

#include "mmid/matrix.hpp"

#include <cmath>
#include <cstdint>

namespace mmid {

DataMatrix DataMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t m = rows.size();
    const std::size_t n = m ? rows.begin()->size() : 0;
    DataMatrix out(m, n);
    std::size_t i = 0;
    for (const auto &r : rows) {
        if (r.size() != n) throw DimensionMismatch("ragged initializer rows");
        std::size_t j = 0;
        for (double v : r) out(i, j++) = v;
        ++i;
    }
    return out;
}

DataMatrix DataMatrix::identity(std::size_t n) {
    DataMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

std::vector<double> DataMatrix::col(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

void DataMatrix::set_col(std::size_t j, std::span<const double> values) {
    if (values.size() != rows_) throw DimensionMismatch("column length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

bool DataMatrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

void DataMatrix::require_finite(const std::string &where) const {
    if (!all_finite()) throw NonFiniteInput(where + ": matrix contains NaN or Inf");
}

DataMatrix DataMatrix::select_cols(std::span<const std::size_t> indices) const {
    DataMatrix out(rows_, indices.size());
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] >= cols_) throw DimensionMismatch("column index out of range");
        for (std::size_t i = 0; i < rows_; ++i) out(i, k) = (*this)(i, indices[k]);
    }
    return out;
}

DataMatrix DataMatrix::transposed() const {
    DataMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

DataMatrix multiply(const DataMatrix &a, const DataMatrix &b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("multiply: inner dimensions differ");
    const std::int64_t m = static_cast<std::int64_t>(a.rows());
    const std::size_t n = b.cols(), k = a.cols();
    DataMatrix c(a.rows(), n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < m; ++i) {
        const auto ai = a.row(static_cast<std::size_t>(i));
        auto ci = c.row(static_cast<std::size_t>(i));
        for (std::size_t l = 0; l < k; ++l) {
            const double ail = ai[l];
            if (ail == 0.0) continue;
            const auto bl = b.row(l);
            for (std::size_t j = 0; j < n; ++j) ci[j] += ail * bl[j];
        }
    }
    return c;
}

DataMatrix multiply_transpose_a(const DataMatrix &a, const DataMatrix &b) {
    if (a.rows() != b.rows()) throw DimensionMismatch("multiply_transpose_a: row counts differ");
    const std::int64_t m = static_cast<std::int64_t>(a.cols());
    const std::size_t n = b.cols(), k = a.rows();
    DataMatrix c(a.cols(), n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < m; ++i) {
        auto ci = c.row(static_cast<std::size_t>(i));
        for (std::size_t l = 0; l < k; ++l) {
            const double ali = a(l, static_cast<std::size_t>(i));
            if (ali == 0.0) continue;
            const auto bl = b.row(l);
            for (std::size_t j = 0; j < n; ++j) ci[j] += ali * bl[j];
        }
    }
    return c;
}

DataMatrix add(const DataMatrix &a, const DataMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("add: shapes differ");
    DataMatrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] += b.data()[i];
    return c;
}

DataMatrix subtract(const DataMatrix &a, const DataMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("subtract: shapes differ");
    DataMatrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] -= b.data()[i];
    return c;
}

DataMatrix scale(const DataMatrix &a, double factor) {
    DataMatrix c = a;
    for (double &v : c.data()) v *= factor;
    return c;
}

double frobenius_norm(const DataMatrix &a) {
    a.require_finite("frobenius_norm");
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

double frobenius_norm_diff(const DataMatrix &a, const DataMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("frobenius_norm_diff: shapes differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double column_norm(const DataMatrix &a, std::size_t j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

double vector_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace mmid

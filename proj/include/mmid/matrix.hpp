#ifndef MMID_MATRIX_HPP
#define MMID_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "mmid/errors.hpp"

namespace mmid {

// Dense real matrix, row-major. Columns hold QOI vectors v(xi_j) on a fixed
// grid; all front-end interfaces address entries by (row, column).
class DataMatrix {
  public:
    DataMatrix() = default;

    DataMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {
        if (rows == 0 || cols == 0) throw DimensionMismatch("matrix dimensions must be positive");
    }

    DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
        : rows_(rows), cols_(cols), data_(std::move(values)) {
        if (rows == 0 || cols == 0) throw DimensionMismatch("matrix dimensions must be positive");
        if (data_.size() != rows * cols)
            throw DimensionMismatch("value count does not match rows*cols");
    }

    // Row-major initializer, e.g. DataMatrix::from_rows({{1,2},{3,4}}).
    static DataMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    static DataMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::vector<double> col(std::size_t j) const;
    void set_col(std::size_t j, std::span<const double> values);

    const std::vector<double> &data() const { return data_; }
    std::vector<double> &data() { return data_; }

    bool all_finite() const;

    // Throws NonFiniteInput naming `where` if any entry is NaN/Inf.
    void require_finite(const std::string &where) const;

    // Columns indexed by `indices`, in the given order.
    DataMatrix select_cols(std::span<const std::size_t> indices) const;

    DataMatrix transposed() const;

    bool operator==(const DataMatrix &other) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Dense products. OpenMP-parallel over output rows; entries are accumulated
// in a fixed order so results do not depend on the thread count.
DataMatrix multiply(const DataMatrix &a, const DataMatrix &b);
DataMatrix multiply_transpose_a(const DataMatrix &a, const DataMatrix &b);  // a^T * b

DataMatrix add(const DataMatrix &a, const DataMatrix &b);
DataMatrix subtract(const DataMatrix &a, const DataMatrix &b);
DataMatrix scale(const DataMatrix &a, double factor);

double frobenius_norm(const DataMatrix &a);
double frobenius_norm_diff(const DataMatrix &a, const DataMatrix &b);

// Largest singular value; defined in svd.cpp.
double spectral_norm(const DataMatrix &a);

double column_norm(const DataMatrix &a, std::size_t j);
double vector_norm(std::span<const double> v);

}  // namespace mmid

#endif

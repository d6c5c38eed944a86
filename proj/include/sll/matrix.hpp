#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "sll/errors.hpp"

namespace sll {

/// Dense row-major matrix of doubles. The only numeric container used for
/// feature blocks and probability tables throughout the toolkit.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m;
    for (const auto& r : rows) m.append_row(r);
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m;
    for (const auto& r : rows) m.append_row(r);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  Matrix select_rows(std::span<const std::size_t> indices) const {
    Matrix out(indices.size(), cols_);
    for (std::size_t i = 0; i < indices.size(); ++i) {
      auto src = row(indices[i]);
      std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
  }

  Matrix select_cols(std::span<const std::size_t> indices) const {
    Matrix out(rows_, indices.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < indices.size(); ++j) out(i, j) = (*this)(i, indices[j]);
    return out;
  }

  bool operator==(const Matrix& other) const = default;

 private:
  template <typename Range>
  void append_row(const Range& r) {
    if (rows_ == 0) cols_ = r.size();
    if (r.size() != cols_) throw ShapeMismatchError("ragged initializer for Matrix");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace sll

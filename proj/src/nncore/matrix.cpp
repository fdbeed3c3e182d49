#include "pedfuse/nncore/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pedfuse::nncore {

namespace {

std::string shape_of(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

bool Matrix::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: shape mismatch " + shape_of(a) + " * " + shape_of(b));
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      const auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out_row[j] += aik * b_row[j];
      }
    }
  }
  return out;
}

void matvec(const Matrix& w, std::span<const double> x, std::span<double> out) {
  if (x.size() != w.cols() || out.size() != w.rows()) {
    throw std::invalid_argument("matvec: shape mismatch " + shape_of(w) + " * vector of length " +
                                std::to_string(x.size()));
  }
  for (std::size_t i = 0; i < w.rows(); ++i) {
    const auto row = w.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * x[j];
    out[i] = acc;
  }
}

void matvec_transposed_add(const Matrix& w, std::span<const double> y, std::span<double> acc) {
  if (y.size() != w.rows() || acc.size() != w.cols()) {
    throw std::invalid_argument("matvec_transposed_add: shape mismatch " + shape_of(w) +
                                "^T * vector of length " + std::to_string(y.size()));
  }
  for (std::size_t i = 0; i < w.rows(); ++i) {
    const double yi = y[i];
    const auto row = w.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) acc[j] += yi * row[j];
  }
}

void add_outer(Matrix& acc, std::span<const double> u, std::span<const double> v) {
  if (u.size() != acc.rows() || v.size() != acc.cols()) {
    throw std::invalid_argument("add_outer: shape mismatch " + shape_of(acc) + " += outer(" +
                                std::to_string(u.size()) + ", " + std::to_string(v.size()) + ")");
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double ui = u[i];
    auto row = acc.row(i);
    for (std::size_t j = 0; j < v.size(); ++j) row[j] += ui * v[j];
  }
}

}  // namespace pedfuse::nncore

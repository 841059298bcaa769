#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace graphfactor {

class SparseMatrix;

// Row-major matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool operator==(const DenseMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Refuse dense n x n allocations above max_nodes.
struct MemoryCap {
  std::size_t max_nodes = 20000;
};

// Throws ErrorCode::kMemoryCap naming the projected allocation.
void check_dense_allocation(std::size_t n, const MemoryCap& cap);

enum class Trans { kNo, kYes };

// op(a) * op(b), backed by BLAS dgemm.
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b,
                     Trans ta = Trans::kNo, Trans tb = Trans::kNo);

// a * b for sparse a; parallel over output rows.
DenseMatrix multiply(const SparseMatrix& a, const DenseMatrix& b);

DenseMatrix to_dense(const SparseMatrix& a);
DenseMatrix transpose(const DenseMatrix& a);

double frobenius_norm(const DenseMatrix& a);
double max_abs_difference(const DenseMatrix& a, const DenseMatrix& b);
bool all_finite(const DenseMatrix& a);

// One row per line, comma separated, shortest round-trip formatting.
void write_csv(const DenseMatrix& m, std::ostream& out);
void write_csv(const DenseMatrix& m, const std::filesystem::path& path);
DenseMatrix read_csv(std::istream& in);

// GFMX1: magic "GFMX1", u64 rows, u64 cols, row-major f64, all little-endian.
void write_binary(const DenseMatrix& m, std::ostream& out);
void write_binary(const DenseMatrix& m, const std::filesystem::path& path);
DenseMatrix read_binary(std::istream& in);
DenseMatrix read_binary(const std::filesystem::path& path);

}  // namespace graphfactor

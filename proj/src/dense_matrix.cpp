#include "graphfactor/dense_matrix.hpp"

#include <cblas.h>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "graphfactor/error.hpp"
#include "graphfactor/graph.hpp"

namespace graphfactor {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void check_dense_allocation(std::size_t n, const MemoryCap& cap) {
  if (n <= cap.max_nodes) return;
  double gb = static_cast<double>(n) * static_cast<double>(n) * sizeof(double) / 1e9;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", gb);
  throw Error(ErrorCode::kMemoryCap,
              "graph has " + std::to_string(n) + " nodes; a dense " + std::to_string(n) + "x" +
                  std::to_string(n) + " matrix needs " + buf + " GB, above the cap of " +
                  std::to_string(cap.max_nodes) + " nodes (raise with --mem-cap)");
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b, Trans ta, Trans tb) {
  const std::size_t m = ta == Trans::kNo ? a.rows() : a.cols();
  const std::size_t k = ta == Trans::kNo ? a.cols() : a.rows();
  const std::size_t kb = tb == Trans::kNo ? b.rows() : b.cols();
  const std::size_t n = tb == Trans::kNo ? b.cols() : b.rows();
  if (k != kb) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matrix product inner dimensions differ: " + std::to_string(k) + " vs " +
                    std::to_string(kb));
  }
  DenseMatrix c(m, n);
  if (m == 0 || n == 0 || k == 0) return c;
  cblas_dgemm(CblasRowMajor, ta == Trans::kNo ? CblasNoTrans : CblasTrans,
              tb == Trans::kNo ? CblasNoTrans : CblasTrans, static_cast<int>(m),
              static_cast<int>(n), static_cast<int>(k), 1.0, a.data(),
              static_cast<int>(a.cols()), b.data(), static_cast<int>(b.cols()), 0.0,
              c.data(), static_cast<int>(n));
  return c;
}

DenseMatrix multiply(const SparseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "sparse product inner dimensions differ: " + std::to_string(a.cols()) + " vs " +
                    std::to_string(b.rows()));
  }
  DenseMatrix c(a.rows(), b.cols());
  const auto rows = static_cast<std::int64_t>(a.rows());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t r = 0; r < rows; ++r) {
    auto out = c.row(static_cast<std::size_t>(r));
    auto idx = a.row_indices(static_cast<std::size_t>(r));
    auto val = a.row_values(static_cast<std::size_t>(r));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const double w = val[k];
      auto in = b.row(idx[k]);
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += w * in[j];
    }
  }
  return c;
}

DenseMatrix to_dense(const SparseMatrix& a) {
  DenseMatrix d(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto idx = a.row_indices(r);
    auto val = a.row_values(r);
    for (std::size_t k = 0; k < idx.size(); ++k) d(r, idx[k]) = val[k];
  }
  return d;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  constexpr std::size_t kBlock = 64;
  for (std::size_t i0 = 0; i0 < a.rows(); i0 += kBlock) {
    for (std::size_t j0 = 0; j0 < a.cols(); j0 += kBlock) {
      const auto i1 = std::min(a.rows(), i0 + kBlock);
      const auto j1 = std::min(a.cols(), j0 + kBlock);
      for (std::size_t i = i0; i < i1; ++i)
        for (std::size_t j = j0; j < j1; ++j) t(j, i) = a(i, j);
    }
  }
  return t;
}

double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (double x : a.values()) s += x * x;
  return std::sqrt(s);
}

double max_abs_difference(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "shape mismatch in comparison");
  }
  double m = 0.0;
  auto x = a.values();
  auto y = b.values();
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

bool all_finite(const DenseMatrix& a) {
  return std::all_of(a.values().begin(), a.values().end(),
                     [](double x) { return std::isfinite(x); });
}

void write_csv(const DenseMatrix& m, std::ostream& out) {
  std::array<char, 32> buf;
  std::string line;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    line.clear();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) line.push_back(',');
      auto res = std::to_chars(buf.data(), buf.data() + buf.size(), m(r, c));
      line.append(buf.data(), res.ptr);
    }
    line.push_back('\n');
    out << line;
  }
}

void write_csv(const DenseMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  write_csv(m, out);
}

DenseMatrix read_csv(std::istream& in) {
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t count = 0;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p <= end) {
      const char* comma = std::find(p, end, ',');
      double x = 0.0;
      auto res = std::from_chars(p, comma, x);
      if (res.ec != std::errc() || res.ptr != comma) {
        throw Error(ErrorCode::kParse, "bad number on CSV row " + std::to_string(rows + 1));
      }
      values.push_back(x);
      ++count;
      p = comma + 1;
    }
    if (rows == 0) cols = count;
    if (count != cols) throw Error(ErrorCode::kParse, "ragged CSV row " + std::to_string(rows + 1));
    ++rows;
  }
  DenseMatrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

namespace {

constexpr char kMagic[5] = {'G', 'F', 'M', 'X', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &value, 8);
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
    throw Error(ErrorCode::kParse, "truncated GFMX1 stream");
  }
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  T value;
  std::memcpy(&value, &bits, 8);
  return value;
}

}  // namespace

void write_binary(const DenseMatrix& m, std::ostream& out) {
  out.write(kMagic, sizeof kMagic);
  put_le<std::uint64_t>(out, m.rows());
  put_le<std::uint64_t>(out, m.cols());
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(m.size() * sizeof(double)));
  } else {
    for (double x : m.values()) put_le(out, x);
  }
}

void write_binary(const DenseMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  write_binary(m, out);
}

DenseMatrix read_binary(std::istream& in) {
  char magic[5];
  if (!in.read(magic, 5) || std::memcmp(magic, kMagic, 5) != 0) {
    throw Error(ErrorCode::kParse, "missing GFMX1 header");
  }
  auto rows = get_le<std::uint64_t>(in);
  auto cols = get_le<std::uint64_t>(in);
  DenseMatrix m(rows, cols);
  for (double& x : m.values()) x = get_le<double>(in);
  return m;
}

DenseMatrix read_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return read_binary(in);
}

}  // namespace graphfactor

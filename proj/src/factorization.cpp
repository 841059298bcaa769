#include "graphfactor/factorization.hpp"

#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "graphfactor/error.hpp"

namespace graphfactor {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Orthonormalizes the rows of q in place, in order. A row that is (nearly)
// dependent on its predecessors is replaced by the first unit vector that is
// not.
void orthonormalize_rows(DenseMatrix& q) {
  const std::size_t k = q.rows();
  const std::size_t len = q.cols();
  if (k > len) {
    throw Error(ErrorCode::kDimensionMismatch, "cannot orthonormalize " + std::to_string(k) +
                                                   " vectors of length " + std::to_string(len));
  }
  std::vector<double> coef(k);
  auto project_out = [&](std::size_t i) {
    auto v = q.row(i);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < i; ++j) coef[j] = dot(q.row(j), v);
      for (std::size_t j = 0; j < i; ++j) {
        auto qj = q.row(j);
        const double c = coef[j];
        for (std::size_t t = 0; t < len; ++t) v[t] -= c * qj[t];
      }
    }
    return std::sqrt(dot(v, v));
  };

  std::size_t next_unit = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double before = std::sqrt(dot(q.row(i), q.row(i)));
    double after = project_out(i);
    if (before == 0.0 || after <= 1e-10 * before) {
      for (;;) {
        if (next_unit >= len) throw Error(ErrorCode::kNumeric, "basis completion failed");
        auto v = q.row(i);
        std::fill(v.begin(), v.end(), 0.0);
        v[next_unit++] = 1.0;
        after = project_out(i);
        if (after > 0.5) break;
      }
    }
    auto v = q.row(i);
    for (double& x : v) x /= after;
  }
}

struct RowJacobi {
  DenseMatrix rows;      // orthogonalized in place
  DenseMatrix rotation;  // accumulated: input = rotation * rows
};

// Hestenes iteration: rotate pairs of rows until all are mutually orthogonal.
RowJacobi orthogonalize_rows_jacobi(DenseMatrix w) {
  const std::size_t k = w.rows();
  const std::size_t len = w.cols();
  DenseMatrix g = DenseMatrix::identity(k);
  constexpr double kTol = 1e-15;
  constexpr int kMaxSweeps = 80;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        auto a = w.row(p);
        auto b = w.row(q);
        const double alpha = dot(a, a);
        const double beta = dot(b, b);
        const double gamma = dot(a, b);
        if (gamma == 0.0 || std::abs(gamma) <= kTol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < len; ++i) {
          const double x = a[i];
          const double y = b[i];
          a[i] = c * x - s * y;
          b[i] = s * x + c * y;
        }
        for (std::size_t i = 0; i < k; ++i) {
          const double x = g(i, p);
          const double y = g(i, q);
          g(i, p) = c * x - s * y;
          g(i, q) = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }
  return {std::move(w), std::move(g)};
}

DenseMatrix leading_columns(const DenseMatrix& m, std::size_t d) {
  DenseMatrix out(m.rows(), d);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::copy_n(m.row(r).begin(), d, out.row(r).begin());
  }
  return out;
}

}  // namespace

DenseMatrix orthonormalize_columns(const DenseMatrix& m) {
  DenseMatrix t = transpose(m);
  orthonormalize_rows(t);
  return transpose(t);
}

ThinSvd jacobi_svd(const DenseMatrix& m) {
  const bool wide = m.rows() <= m.cols();
  auto [w, g] = orthogonalize_rows_jacobi(wide ? m : transpose(m));
  const std::size_t k = w.rows();
  const std::size_t len = w.cols();

  std::vector<double> norms(k);
  for (std::size_t i = 0; i < k; ++i) norms[i] = std::sqrt(dot(w.row(i), w.row(i)));
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return norms[a] > norms[b]; });

  const double smax = k ? norms[order[0]] : 0.0;
  ThinSvd out;
  out.s.resize(k);
  DenseMatrix directions(k, len);  // normalized rows of w, sorted
  DenseMatrix rot(g.rows(), k);    // columns of g, sorted
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t src = order[i];
    const double s = norms[src];
    const bool null_direction = s == 0.0 || s <= smax * 1e-14;
    out.s[i] = null_direction ? 0.0 : s;
    if (!null_direction) {
      auto from = w.row(src);
      auto to = directions.row(i);
      for (std::size_t t = 0; t < len; ++t) to[t] = from[t] / s;
    }
    for (std::size_t r = 0; r < g.rows(); ++r) rot(r, i) = g(r, src);
  }
  // Null directions are zero rows here; completion gives them an
  // orthonormal complement.
  orthonormalize_rows(directions);

  if (wide) {
    out.u = std::move(rot);
    out.v = transpose(directions);
  } else {
    out.u = transpose(directions);
    out.v = std::move(rot);
  }
  return out;
}

EmbeddingSet truncated_svd(const DenseMatrix& m, const SvdOptions& options) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  const std::size_t min_dim = std::min(rows, cols);
  if (options.rank < 1 || static_cast<std::size_t>(options.rank) > min_dim) {
    throw Error(ErrorCode::kInvalidArgument, "rank must lie in [1, " + std::to_string(min_dim) +
                                                 "], got " + std::to_string(options.rank));
  }
  if (options.oversample < 0 || options.power_iters < 0) {
    throw Error(ErrorCode::kInvalidArgument, "oversample and power_iters must be >= 0");
  }
  if (!all_finite(m)) throw Error(ErrorCode::kNumeric, "matrix has non-finite entries");

  const auto d = static_cast<std::size_t>(options.rank);
  const std::size_t width =
      std::min(d + static_cast<std::size_t>(options.oversample), min_dim);

  std::mt19937_64 gen(options.seed);
  std::normal_distribution<double> normal;
  DenseMatrix omega(cols, width);
  for (double& x : omega.values()) x = normal(gen);

  DenseMatrix sample = multiply(m, omega);
  for (int it = 0; it < options.power_iters; ++it) {
    DenseMatrix z = orthonormalize_columns(multiply(m, orthonormalize_columns(sample), Trans::kYes));
    sample = multiply(m, z);
  }
  const DenseMatrix basis = orthonormalize_columns(sample);
  const DenseMatrix projected = multiply(basis, m, Trans::kYes);  // width x cols

  ThinSvd small = jacobi_svd(projected);
  DenseMatrix u = multiply(basis, small.u);

  EmbeddingSet out;
  out.left = leading_columns(u, d);
  out.right = leading_columns(small.v, d);
  out.singular_values.assign(small.s.begin(), small.s.begin() + static_cast<std::ptrdiff_t>(d));

  for (std::size_t k = 0; k < d; ++k) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows; ++i) {
      if (std::abs(out.left(i, k)) > std::abs(out.left(best, k))) best = i;
    }
    if (out.left(best, k) < 0.0) {
      for (std::size_t i = 0; i < rows; ++i) out.left(i, k) = -out.left(i, k);
      for (std::size_t i = 0; i < cols; ++i) out.right(i, k) = -out.right(i, k);
    }
  }
  out.embedding = embed(out);
  return out;
}

DenseMatrix embed(const EmbeddingSet& svd) {
  const auto& u = svd.left;
  if (svd.singular_values.size() != u.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "singular values do not match factor width");
  }
  std::vector<double> root(u.cols());
  for (std::size_t k = 0; k < u.cols(); ++k) {
    const double s = svd.singular_values[k];
    if (s < 0.0) throw Error(ErrorCode::kNumeric, "negative singular value");
    root[k] = std::sqrt(s);
  }
  DenseMatrix y(u.rows(), u.cols());
  for (std::size_t i = 0; i < u.rows(); ++i) {
    for (std::size_t k = 0; k < u.cols(); ++k) y(i, k) = u(i, k) * root[k];
  }
  return y;
}

DenseMatrix reconstruct(const DenseMatrix& y) {
  const std::size_t n = y.rows();
  DenseMatrix out(n, n);
  if (n == 0 || y.cols() == 0) return out;
  cblas_dsyrk(CblasRowMajor, CblasUpper, CblasNoTrans, static_cast<int>(n),
              static_cast<int>(y.cols()), 1.0, y.data(), static_cast<int>(y.cols()), 0.0,
              out.data(), static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) out(i, j) = out(j, i);
  return out;
}

}  // namespace graphfactor

#include "graphfactor/rw_matrices.hpp"

#include <cmath>
#include <string>

#include "graphfactor/error.hpp"

namespace graphfactor {

namespace {

void check_walk_params(const HyperParams& h) {
  if (h.window < 1) {
    throw Error(ErrorCode::kInvalidArgument, "window T must be >= 1, got " + std::to_string(h.window));
  }
  if (!(h.negatives > 0.0) || !std::isfinite(h.negatives)) {
    throw Error(ErrorCode::kInvalidArgument, "negative shift b must be a positive number");
  }
}

void check_nonempty(const Graph& g) {
  if (g.num_edges() == 0) throw Error(ErrorCode::kEmptyGraph, "graph has no edges");
}

void add_into(DenseMatrix& acc, const DenseMatrix& x) {
  auto a = acc.values();
  auto b = x.values();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

void scale(DenseMatrix& m, double s) {
  for (double& x : m.values()) x *= s;
}

}  // namespace

void HyperParams::validate(std::size_t n) const {
  check_walk_params(*this);
  if (rank < 1 || static_cast<std::size_t>(rank) > n) {
    throw Error(ErrorCode::kInvalidArgument, "rank must lie in [1, " + std::to_string(n) +
                                                 "], got " + std::to_string(rank));
  }
}

DenseMatrix power_sum(const SparseMatrix& p, int window, const MemoryCap& cap) {
  if (p.rows() != p.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "transition matrix must be square");
  }
  if (window < 1) throw Error(ErrorCode::kInvalidArgument, "window T must be >= 1");
  check_dense_allocation(p.rows(), cap);

  DenseMatrix term = to_dense(p);
  DenseMatrix sum = term;
  for (int r = 2; r <= window; ++r) {
    term = multiply(p, term);
    add_into(sum, term);
  }
  return sum;
}

DenseMatrix deepwalk_q(const Graph& g, const HyperParams& h, const MemoryCap& cap) {
  check_walk_params(h);
  check_nonempty(g);
  DenseMatrix q = power_sum(transition(g), h.window, cap);

  const double front = static_cast<double>(g.volume()) / (h.negatives * h.window);
  std::vector<double> col_scale(g.num_nodes());
  for (NodeId c = 0; c < g.num_nodes(); ++c) {
    auto d = g.degree(c);
    col_scale[c] = d == 0 ? 0.0 : front / static_cast<double>(d);
  }
  for (std::size_t r = 0; r < q.rows(); ++r) {
    auto row = q.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] *= col_scale[c];
  }
  return q;
}

DenseMatrix joint_j(const Graph& g, const HyperParams& h, JIndex index, const MemoryCap& cap) {
  check_walk_params(h);
  check_nonempty(g);
  check_dense_allocation(g.num_nodes(), cap);

  const SparseMatrix pt = transition(g).transposed();
  DenseMatrix term = to_dense(adjacency(g));
  DenseMatrix sum;
  if (index == JIndex::kCanonical) {
    sum = term;
    for (int k = 1; k < h.window; ++k) {
      term = multiply(pt, term);
      add_into(sum, term);
    }
  } else {
    sum = DenseMatrix(g.num_nodes(), g.num_nodes());
    for (int r = 1; r < h.window; ++r) {
      term = multiply(pt, term);
      add_into(sum, term);
    }
  }
  scale(sum, 1.0 / (static_cast<double>(h.window) * static_cast<double>(g.volume())));
  return sum;
}

DenseMatrix q_from_j_identity(const Graph& g, const HyperParams& h, const MemoryCap& cap) {
  check_walk_params(h);
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    if (g.degree(u) == 0) {
      throw Error(ErrorCode::kZeroDegree, "node " + std::to_string(u) + " has zero degree");
    }
  }
  DenseMatrix j = joint_j(g, h, JIndex::kCanonical, cap);
  const double vol = static_cast<double>(g.volume());
  const double front = vol * vol / h.negatives;
  for (std::size_t r = 0; r < j.rows(); ++r) {
    const double dr = static_cast<double>(g.degree(static_cast<NodeId>(r)));
    auto row = j.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      row[c] *= front / (dr * static_cast<double>(g.degree(static_cast<NodeId>(c))));
    }
  }
  return j;
}

}  // namespace graphfactor

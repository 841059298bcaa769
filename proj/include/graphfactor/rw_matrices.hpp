#pragma once

#include "graphfactor/dense_matrix.hpp"
#include "graphfactor/graph.hpp"

namespace graphfactor {

struct HyperParams {
  int window = 10;         // T: walk-power horizon
  double negatives = 10.0; // b: negative-sample shift
  int rank = 128;          // d: embedding dimension

  // Throws kInvalidArgument unless T >= 1, b > 0 and 1 <= rank <= n.
  void validate(std::size_t n) const;
};

enum class JIndex {
  kCanonical,     // sum_{k=0}^{T-1} (P^T)^k A
  kPaperLiteral,  // sum_{r=1}^{T-1} (P^r)^T A
};

// sum_{r=1}^{T} P^r, accumulated through repeated sparse-times-dense products.
DenseMatrix power_sum(const SparseMatrix& p, int window, const MemoryCap& cap = {});

// Q = vol(G)/(b T) * (sum_r P^r) * D^-1; zero-degree columns are zero.
DenseMatrix deepwalk_q(const Graph& g, const HyperParams& h, const MemoryCap& cap = {});

// Joint co-occurrence probability matrix, scaled by 1/(T vol(G)).
DenseMatrix joint_j(const Graph& g, const HyperParams& h, JIndex index = JIndex::kCanonical,
                    const MemoryCap& cap = {});

// (vol^2 / b) D^-1 J D^-1 from canonical J. Requires every degree > 0.
DenseMatrix q_from_j_identity(const Graph& g, const HyperParams& h, const MemoryCap& cap = {});

}  // namespace graphfactor

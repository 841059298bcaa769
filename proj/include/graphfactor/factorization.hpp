#pragma once

#include <cstdint>
#include <vector>

#include "graphfactor/dense_matrix.hpp"

namespace graphfactor {

struct SvdOptions {
  int rank = 128;
  int oversample = 10;
  int power_iters = 7;
  std::uint64_t seed = 0;
};

// Rank-d factors M ~ U diag(s) V^T and the node embedding Y = U sqrt(s).
struct EmbeddingSet {
  DenseMatrix left;                    // n_rows x d, orthonormal columns
  std::vector<double> singular_values; // nonincreasing
  DenseMatrix right;                   // n_cols x d, orthonormal columns
  DenseMatrix embedding;               // Y
};

struct ThinSvd {
  DenseMatrix u;
  std::vector<double> s;
  DenseMatrix v;
};

// One-sided (Hestenes) Jacobi SVD of the full matrix; returns min(r, c)
// triplets sorted by decreasing singular value.
ThinSvd jacobi_svd(const DenseMatrix& m);

// Orthonormal basis for the column space of m (two-pass classical
// Gram-Schmidt). Dependent columns are replaced by unit vectors orthogonal
// to the rest, so the result always has orthonormal columns.
DenseMatrix orthonormalize_columns(const DenseMatrix& m);

// Randomized range finder + exact Jacobi SVD of the projected matrix.
// Deterministic for a given seed. Each singular pair is signed so the
// largest-magnitude entry of the left vector is positive.
EmbeddingSet truncated_svd(const DenseMatrix& m, const SvdOptions& options);

// Y[i,k] = U[i,k] * sqrt(s_k).
DenseMatrix embed(const EmbeddingSet& svd);

// Y * Y^T, exactly symmetric.
DenseMatrix reconstruct(const DenseMatrix& y);

}  // namespace graphfactor

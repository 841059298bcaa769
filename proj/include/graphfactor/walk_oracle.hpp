#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "graphfactor/dense_matrix.hpp"
#include "graphfactor/graph.hpp"
#include "graphfactor/rw_matrices.hpp"

namespace graphfactor {

// Uniform random walks, walks_per_node started at every node, stored flat.
class WalkCorpus {
 public:
  WalkCorpus(std::size_t num_nodes, int walks_per_node, int walk_length, std::uint64_t seed,
             std::vector<NodeId> nodes, std::vector<std::size_t> offsets);

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_walks() const { return offsets_.size() - 1; }
  std::span<const NodeId> walk(std::size_t i) const {
    return {nodes_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  int walks_per_node() const { return walks_per_node_; }
  int walk_length() const { return walk_length_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::size_t num_nodes_;
  int walks_per_node_;
  int walk_length_;
  std::uint64_t seed_;
  std::vector<NodeId> nodes_;
  std::vector<std::size_t> offsets_;
};

// Walk (node, index) uses its own generator seeded from (seed, node, index),
// so output does not depend on thread scheduling. Walks that reach a
// zero-degree node stop there.
WalkCorpus simulate_walks(const Graph& g, int walks_per_node, int walk_length, std::uint64_t seed);

// One walk per line, space-separated node ids.
void write_corpus(const WalkCorpus& corpus, std::ostream& out);

struct PairCount {
  NodeId word = 0;
  NodeId context = 0;
  std::uint64_t count = 0;
};

struct CooccurrenceCounts {
  int window = 0;
  std::size_t num_nodes = 0;
  std::vector<PairCount> pairs;  // sorted by (word, context), counts > 0
  std::uint64_t total = 0;       // |Omega|
  std::vector<std::uint64_t> word_marginals;
  std::vector<std::uint64_t> context_marginals;
};

// Pairs (w_i, w_{i+r}) and (w_i, w_{i-r}) for r = 1..T, omitting offsets
// that fall outside the walk.
CooccurrenceCounts count_cooccurrences(const WalkCorpus& corpus, int window);

// #(w,c) / |Omega|.
DenseMatrix empirical_joint(const CooccurrenceCounts& counts);

// log(#(w,c)|Omega| / (#(w)#(c))) - log b; -inf for pairs never observed.
DenseMatrix empirical_pmi(const CooccurrenceCounts& counts, double negatives);

struct ConvergenceRow {
  int walks_per_node = 0;
  double joint_rel_error = 0.0;     // ||J_hat - J||_F / ||J||_F
  double max_marginal_error = 0.0;  // max_w |#(w)/|Omega| - d_w/vol|
  double max_q_rel_error = 0.0;     // max over observed pairs |exp(pmi) - Q| / Q
  std::size_t observed_pairs = 0;
};

struct ConvergenceStudy {
  std::uint64_t seed = 0;
  int walk_length = 0;
  HyperParams params;
  JIndex j_index = JIndex::kCanonical;
  std::vector<ConvergenceRow> rows;
};

ConvergenceStudy run_convergence_study(const Graph& g, const HyperParams& h,
                                       std::span<const int> walks_per_node, int walk_length,
                                       std::uint64_t seed, JIndex j_index = JIndex::kCanonical,
                                       const MemoryCap& cap = {});

}  // namespace graphfactor

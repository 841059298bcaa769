#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace graphfactor {

using NodeId = std::uint32_t;

// Unordered pair stored canonically with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  auto operator<=>(const Edge&) const = default;
};

Edge canonical_edge(NodeId a, NodeId b);

// Undirected simple graph on nodes 0..n-1. Immutable after construction.
class Graph {
 public:
  Graph() = default;

  // Edges are canonicalized and sorted; throws on self-loops, duplicates
  // or ids >= n.
  static Graph from_edges(std::size_t n, std::vector<Edge> edges);

  std::size_t num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }

  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
  std::vector<std::size_t> degrees() const;
  std::size_t volume() const { return 2 * edges_.size(); }

  // Sorted neighbor list.
  std::span<const NodeId> neighbors(NodeId u) const {
    return {adjacency_.data() + offsets_[u], degree(u)};
  }
  bool has_edge(NodeId a, NodeId b) const;

  bool operator==(const Graph& other) const {
    return n_ == other.n_ && edges_ == other.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
};

// Row-compressed sparse matrix. Column indices strictly increase within a
// row and no explicit zeros are stored.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols,
               std::vector<std::size_t> row_ptr,
               std::vector<std::uint32_t> col_idx, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const { return values_.size(); }

  std::span<const std::uint32_t> row_indices(std::size_t r) const {
    return {col_idx_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<const double> row_values(std::size_t r) const {
    return {values_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }

  double at(std::size_t r, std::size_t c) const;
  SparseMatrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> col_idx_;
  std::vector<double> values_;
};

enum class EdgeLabel { kPositive, kNegative };
enum class EdgeOrigin { kTrain, kTest };

struct EdgeSubset {
  std::vector<Edge> pairs;
  EdgeLabel label = EdgeLabel::kPositive;
  EdgeOrigin origin = EdgeOrigin::kTrain;
};

struct LoadedGraph {
  Graph graph;
  // external_ids[internal] is the id as it appeared in the file.
  std::vector<std::int64_t> external_ids;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_merged = 0;
};

// SNAP-style edge list: whitespace separated "u v" per line, '#' comments.
// Ids are remapped to 0..n-1 in ascending external-id order; directed
// duplicates are merged.
LoadedGraph parse_edge_list(std::istream& in, const std::string& source = "<stream>");
LoadedGraph load_edge_list(const std::filesystem::path& path);

void write_edge_list(const Graph& g, std::ostream& out);
void write_edge_list(const Graph& g, const std::filesystem::path& path);
void write_node_map(std::span<const std::int64_t> external_ids, std::ostream& out);
void write_node_map(std::span<const std::int64_t> external_ids,
                    const std::filesystem::path& path);

SparseMatrix adjacency(const Graph& g);

// P = D^-1 A; rows of zero-degree nodes are empty.
SparseMatrix transition(const Graph& g);

// Same node set, edge set replaced by keep. Every kept pair must be an edge of g.
Graph subgraph_from_edges(const Graph& g, const EdgeSubset& keep);

}  // namespace graphfactor

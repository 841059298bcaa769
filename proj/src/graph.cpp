#include "graphfactor/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "graphfactor/error.hpp"

namespace graphfactor {

Edge canonical_edge(NodeId a, NodeId b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

Graph Graph::from_edges(std::size_t n, std::vector<Edge> edges) {
  for (auto& e : edges) {
    if (e.u == e.v) {
      throw Error(ErrorCode::kInvalidArgument,
                  "self-loop on node " + std::to_string(e.u));
    }
    if (e.u >= n || e.v >= n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                      ") references a node >= " + std::to_string(n));
    }
    e = canonical_edge(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  auto dup = std::adjacent_find(edges.begin(), edges.end());
  if (dup != edges.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "duplicate edge (" + std::to_string(dup->u) + "," +
                    std::to_string(dup->v) + ")");
  }

  Graph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  std::vector<std::size_t> deg(n, 0);
  for (const auto& e : g.edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
  g.adjacency_.resize(g.offsets_[n]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Sorted edge order yields sorted neighbor lists for both endpoints.
  for (const auto& e : g.edges_) g.adjacency_[cursor[e.u]++] = e.v;
  for (const auto& e : g.edges_) g.adjacency_[cursor[e.v]++] = e.u;
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(g.adjacency_.begin() + g.offsets_[i], g.adjacency_.begin() + g.offsets_[i + 1]);
  }
  return g;
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> d(n_);
  for (std::size_t i = 0; i < n_; ++i) d[i] = degree(static_cast<NodeId>(i));
  return d;
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  if (a >= n_ || b >= n_ || a == b) return false;
  auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols,
                           std::vector<std::size_t> row_ptr,
                           std::vector<std::uint32_t> col_idx,
                           std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != rows_ + 1 || row_ptr_.front() != 0 ||
      row_ptr_.back() != col_idx_.size() || col_idx_.size() != values_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "inconsistent CSR arrays");
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    if (row_ptr_[r + 1] < row_ptr_[r]) {
      throw Error(ErrorCode::kInvalidArgument, "row pointers must be nondecreasing");
    }
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (col_idx_[k] >= cols_) throw Error(ErrorCode::kInvalidArgument, "column index out of range");
      if (k > row_ptr_[r] && col_idx_[k] <= col_idx_[k - 1]) {
        throw Error(ErrorCode::kInvalidArgument, "column indices must strictly increase within a row");
      }
      if (values_[k] == 0.0) throw Error(ErrorCode::kInvalidArgument, "explicit zero stored");
    }
  }
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  auto idx = row_indices(r);
  auto it = std::lower_bound(idx.begin(), idx.end(), static_cast<std::uint32_t>(c));
  if (it == idx.end() || *it != c) return 0.0;
  return values_[row_ptr_[r] + static_cast<std::size_t>(it - idx.begin())];
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<std::size_t> ptr(cols_ + 1, 0);
  for (auto c : col_idx_) ++ptr[c + 1];
  for (std::size_t c = 0; c < cols_; ++c) ptr[c + 1] += ptr[c];
  std::vector<std::uint32_t> idx(col_idx_.size());
  std::vector<double> val(values_.size());
  std::vector<std::size_t> cursor(ptr.begin(), ptr.end() - 1);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      auto dst = cursor[col_idx_[k]]++;
      idx[dst] = static_cast<std::uint32_t>(r);
      val[dst] = values_[k];
    }
  }
  return SparseMatrix(cols_, rows_, std::move(ptr), std::move(idx), std::move(val));
}

namespace {

bool parse_id(std::string_view token, std::int64_t& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

}  // namespace

LoadedGraph parse_edge_list(std::istream& in, const std::string& source) {
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::size_t loops = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    std::string a, b, extra;
    fields >> a >> b;
    std::int64_t u = 0, v = 0;
    if (b.empty() || (fields >> extra) || !parse_id(a, u) || !parse_id(b, v)) {
      throw Error(ErrorCode::kParse, source + ":" + std::to_string(line_no) +
                                         ": expected two integer node ids, got '" + line + "'");
    }
    if (u == v) {
      ++loops;
      continue;
    }
    raw.emplace_back(std::min(u, v), std::max(u, v));
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "read failure on " + source);
  if (raw.empty()) throw Error(ErrorCode::kEmptyGraph, source + ": no edges");

  std::vector<std::int64_t> ids;
  ids.reserve(raw.size() * 2);
  for (const auto& [u, v] : raw) {
    ids.push_back(u);
    ids.push_back(v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto internal = [&](std::int64_t x) {
    return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), x) - ids.begin());
  };

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const auto& [u, v] : raw) edges.push_back(canonical_edge(internal(u), internal(v)));
  std::sort(edges.begin(), edges.end());
  auto before = edges.size();
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  LoadedGraph out;
  out.duplicates_merged = before - edges.size();
  out.self_loops_dropped = loops;
  out.graph = Graph::from_edges(ids.size(), std::move(edges));
  out.external_ids = std::move(ids);
  return out;
}

LoadedGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open edge list " + path.string());
  return parse_edge_list(in, path.string());
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << "# nodes " << g.num_nodes() << " edges " << g.num_edges() << "\n";
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  write_edge_list(g, out);
}

void write_node_map(std::span<const std::int64_t> external_ids, std::ostream& out) {
  out << "external_id,internal_id\n";
  for (std::size_t i = 0; i < external_ids.size(); ++i) out << external_ids[i] << ',' << i << '\n';
}

void write_node_map(std::span<const std::int64_t> external_ids,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  write_node_map(external_ids, out);
}

namespace {

SparseMatrix scaled_adjacency(const Graph& g, bool row_normalize) {
  const auto n = g.num_nodes();
  std::vector<std::size_t> ptr(n + 1, 0);
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  idx.reserve(g.volume());
  val.reserve(g.volume());
  for (NodeId u = 0; u < n; ++u) {
    auto nb = g.neighbors(u);
    double w = row_normalize ? 1.0 / static_cast<double>(nb.size()) : 1.0;
    for (auto v : nb) {
      idx.push_back(v);
      val.push_back(w);
    }
    ptr[u + 1] = idx.size();
  }
  return SparseMatrix(n, n, std::move(ptr), std::move(idx), std::move(val));
}

}  // namespace

SparseMatrix adjacency(const Graph& g) { return scaled_adjacency(g, false); }

SparseMatrix transition(const Graph& g) { return scaled_adjacency(g, true); }

Graph subgraph_from_edges(const Graph& g, const EdgeSubset& keep) {
  std::vector<Edge> edges;
  edges.reserve(keep.pairs.size());
  for (const auto& e : keep.pairs) {
    if (!g.has_edge(e.u, e.v)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                      ") is not in the source graph");
    }
    edges.push_back(canonical_edge(e.u, e.v));
  }
  return Graph::from_edges(g.num_nodes(), std::move(edges));
}

}  // namespace graphfactor

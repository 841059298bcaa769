#include "graphfactor/walk_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <unordered_map>

#include "graphfactor/error.hpp"
#include "graphfactor/seed.hpp"

namespace graphfactor {

WalkCorpus::WalkCorpus(std::size_t num_nodes, int walks_per_node, int walk_length,
                       std::uint64_t seed, std::vector<NodeId> nodes,
                       std::vector<std::size_t> offsets)
    : num_nodes_(num_nodes),
      walks_per_node_(walks_per_node),
      walk_length_(walk_length),
      seed_(seed),
      nodes_(std::move(nodes)),
      offsets_(std::move(offsets)) {
  if (offsets_.empty() || offsets_.front() != 0 || offsets_.back() != nodes_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "inconsistent walk offsets");
  }
}

WalkCorpus simulate_walks(const Graph& g, int walks_per_node, int walk_length, std::uint64_t seed) {
  if (walks_per_node < 1) throw Error(ErrorCode::kInvalidArgument, "walks per node must be >= 1");
  if (walk_length < 2) throw Error(ErrorCode::kInvalidArgument, "walk length must be >= 2");

  const std::size_t n = g.num_nodes();
  const std::size_t per = static_cast<std::size_t>(walks_per_node);
  const std::size_t len = static_cast<std::size_t>(walk_length);
  const std::size_t total = n * per;

  // Fixed-stride slots; a walk cut short at a zero-degree node keeps its
  // length in lengths[] and is compacted below.
  std::vector<NodeId> slots(total * len);
  std::vector<std::size_t> lengths(total, 0);
  const auto count = static_cast<std::int64_t>(total);
#pragma omp parallel for schedule(static)
  for (std::int64_t w = 0; w < count; ++w) {
    const auto idx = static_cast<std::size_t>(w);
    const auto start = static_cast<NodeId>(idx / per);
    std::mt19937_64 gen(derive_seed(seed, {start, idx % per}));
    NodeId* out = slots.data() + idx * len;
    out[0] = start;
    std::size_t filled = 1;
    NodeId cur = start;
    while (filled < len) {
      auto nb = g.neighbors(cur);
      if (nb.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
      cur = nb[pick(gen)];
      out[filled++] = cur;
    }
    lengths[idx] = filled;
  }

  std::vector<NodeId> nodes;
  std::vector<std::size_t> offsets{0};
  nodes.reserve(slots.size());
  offsets.reserve(total + 1);
  for (std::size_t w = 0; w < total; ++w) {
    nodes.insert(nodes.end(), slots.begin() + static_cast<std::ptrdiff_t>(w * len),
                 slots.begin() + static_cast<std::ptrdiff_t>(w * len + lengths[w]));
    offsets.push_back(nodes.size());
  }
  return WalkCorpus(n, walks_per_node, walk_length, seed, std::move(nodes), std::move(offsets));
}

void write_corpus(const WalkCorpus& corpus, std::ostream& out) {
  std::string line;
  for (std::size_t w = 0; w < corpus.num_walks(); ++w) {
    line.clear();
    for (auto node : corpus.walk(w)) {
      if (!line.empty()) line.push_back(' ');
      line += std::to_string(node);
    }
    line.push_back('\n');
    out << line;
  }
}

CooccurrenceCounts count_cooccurrences(const WalkCorpus& corpus, int window) {
  if (window < 1) throw Error(ErrorCode::kInvalidArgument, "window T must be >= 1");
  const std::uint64_t n = corpus.num_nodes();
  const auto span = static_cast<std::size_t>(window);

  std::unordered_map<std::uint64_t, std::uint64_t> table;
  table.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n * n, 1u << 22)));
  for (std::size_t w = 0; w < corpus.num_walks(); ++w) {
    auto walk = corpus.walk(w);
    for (std::size_t i = 0; i < walk.size(); ++i) {
      const std::size_t last = std::min(walk.size() - 1, i + span);
      for (std::size_t j = i + 1; j <= last; ++j) {
        // Right context of walk[i] and left context of walk[j].
        ++table[walk[i] * n + walk[j]];
        ++table[walk[j] * n + walk[i]];
      }
    }
  }

  CooccurrenceCounts out;
  out.window = window;
  out.num_nodes = n;
  out.word_marginals.assign(n, 0);
  out.context_marginals.assign(n, 0);
  out.pairs.reserve(table.size());
  for (const auto& [key, c] : table) {
    out.pairs.push_back({static_cast<NodeId>(key / n), static_cast<NodeId>(key % n), c});
  }
  std::sort(out.pairs.begin(), out.pairs.end(), [](const PairCount& a, const PairCount& b) {
    return a.word != b.word ? a.word < b.word : a.context < b.context;
  });
  for (const auto& p : out.pairs) {
    out.total += p.count;
    out.word_marginals[p.word] += p.count;
    out.context_marginals[p.context] += p.count;
  }
  return out;
}

DenseMatrix empirical_joint(const CooccurrenceCounts& counts) {
  if (counts.total == 0) throw Error(ErrorCode::kInvalidArgument, "empty co-occurrence multiset");
  DenseMatrix j(counts.num_nodes, counts.num_nodes);
  const double total = static_cast<double>(counts.total);
  for (const auto& p : counts.pairs) j(p.word, p.context) = static_cast<double>(p.count) / total;
  return j;
}

DenseMatrix empirical_pmi(const CooccurrenceCounts& counts, double negatives) {
  if (counts.total == 0) throw Error(ErrorCode::kInvalidArgument, "empty co-occurrence multiset");
  if (!(negatives > 0.0)) throw Error(ErrorCode::kInvalidArgument, "negative shift b must be > 0");
  DenseMatrix m(counts.num_nodes, counts.num_nodes, -std::numeric_limits<double>::infinity());
  const double total = static_cast<double>(counts.total);
  const double shift = std::log(negatives);
  for (const auto& p : counts.pairs) {
    const double ratio = static_cast<double>(p.count) * total /
                         (static_cast<double>(counts.word_marginals[p.word]) *
                          static_cast<double>(counts.context_marginals[p.context]));
    m(p.word, p.context) = std::log(ratio) - shift;
  }
  return m;
}

ConvergenceStudy run_convergence_study(const Graph& g, const HyperParams& h,
                                       std::span<const int> walks_per_node, int walk_length,
                                       std::uint64_t seed, JIndex j_index, const MemoryCap& cap) {
  ConvergenceStudy study;
  study.seed = seed;
  study.walk_length = walk_length;
  study.params = h;
  study.j_index = j_index;

  const DenseMatrix j = joint_j(g, h, j_index, cap);
  const DenseMatrix q = deepwalk_q(g, h, cap);
  const double j_norm = frobenius_norm(j);
  const double vol = static_cast<double>(g.volume());

  for (int per_node : walks_per_node) {
    const auto corpus = simulate_walks(g, per_node, walk_length, seed);
    const auto counts = count_cooccurrences(corpus, h.window);

    ConvergenceRow row;
    row.walks_per_node = per_node;
    DenseMatrix diff = empirical_joint(counts);
    for (std::size_t i = 0; i < diff.size(); ++i) diff.values()[i] -= j.values()[i];
    row.joint_rel_error = frobenius_norm(diff) / j_norm;

    for (NodeId w = 0; w < g.num_nodes(); ++w) {
      const double freq =
          static_cast<double>(counts.word_marginals[w]) / static_cast<double>(counts.total);
      row.max_marginal_error =
          std::max(row.max_marginal_error, std::abs(freq - static_cast<double>(g.degree(w)) / vol));
    }

    const DenseMatrix pmi = empirical_pmi(counts, h.negatives);
    for (const auto& p : counts.pairs) {
      const double closed = q(p.word, p.context);
      if (closed <= 0.0) continue;
      const double rel = std::abs(std::exp(pmi(p.word, p.context)) - closed) / closed;
      row.max_q_rel_error = std::max(row.max_q_rel_error, rel);
      ++row.observed_pairs;
    }
    study.rows.push_back(row);
  }
  return study;
}

}  // namespace graphfactor

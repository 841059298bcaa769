// graphfactor command-line tool: ingest, matrix, reconstruct, evaluate, oracle.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graphfactor/graphfactor.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RuntimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(gf_status status, const std::string& what) {
  if (status == GF_OK) return;
  throw RuntimeError(what + ": " + gf_status_string(status) + ": " + gf_last_error());
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};

using GraphHandle = Handle<gf_graph, gf_graph_free>;
using MatrixHandle = Handle<gf_matrix, gf_matrix_free>;
using EmbeddingHandle = Handle<gf_embedding, gf_embedding_free>;
using ReportHandle = Handle<gf_report, gf_report_free>;

// Raw flag values; unset optionals fall back to config file, preset, then defaults.
struct Flags {
  std::string graph;
  std::string out = ".";
  std::string config;
  std::string preset;
  std::string dataset;
  std::vector<std::string> recipes;
  std::optional<int> window, rank, folds, oversample, power_iters, walk_length;
  std::optional<double> negatives;
  std::optional<std::uint64_t> seed, mem_cap;
  std::optional<std::string> j_index;
  std::vector<int> walks;
  int threads = 0;
};

struct RunConfig {
  std::string command;
  std::string graph;
  std::string out;
  std::string preset;
  std::string dataset;
  std::vector<std::string> recipes;
  gf_params params{};
  std::vector<int> walks;
  int walk_length = 40;
  int threads = 0;
};

const char* j_index_token(int j) { return j == GF_J_PAPER_LITERAL ? "paper-literal" : "canonical"; }

int parse_j_index(const std::string& s) {
  if (s == "canonical") return GF_J_CANONICAL;
  if (s == "paper-literal") return GF_J_PAPER_LITERAL;
  throw UsageError("--j-index must be canonical or paper-literal, got '" + s + "'");
}

std::uint64_t parse_seed(const std::string& text, const std::string& origin) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used, 10);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(origin + " must be a non-negative integer, got '" + text + "'");
  }
}

void check_recipe(const std::string& token) {
  if (!gf_recipe_is_valid(token.c_str())) {
    throw UsageError("unknown recipe '" + token + "'; valid recipes: " + gf_recipe_tokens());
  }
}

ordered_json config_json(const RunConfig& c) {
  const auto& p = c.params;
  ordered_json j;
  j["command"] = c.command;
  j["graph"] = c.graph;
  j["preset"] = c.preset.empty() ? ordered_json(nullptr) : ordered_json(c.preset);
  if (!c.dataset.empty()) j["dataset"] = c.dataset;
  j["T"] = p.window;
  j["b"] = p.negatives;
  j["dim"] = p.rank;
  j["folds"] = p.folds;
  j["seed"] = p.seed;
  j["oversample"] = p.oversample;
  j["power_iters"] = p.power_iters;
  j["j_index"] = j_index_token(p.j_index);
  j["mem_cap"] = p.mem_cap_nodes;
  if (!c.recipes.empty()) j["recipes"] = c.recipes;
  if (c.command == "oracle") {
    j["walks_per_node"] = c.walks;
    j["walk_length"] = c.walk_length;
  }
  return j;
}

void apply_config_file(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path);
  ordered_json j;
  try {
    j = ordered_json::parse(in);
    auto& p = c.params;
    if (j.contains("graph") && c.graph.empty()) c.graph = j["graph"].get<std::string>();
    if (j.contains("preset") && j["preset"].is_string()) c.preset = j["preset"].get<std::string>();
    if (j.contains("dataset")) c.dataset = j["dataset"].get<std::string>();
    if (j.contains("T")) p.window = j["T"].get<int>();
    if (j.contains("b")) p.negatives = j["b"].get<double>();
    if (j.contains("dim")) p.rank = j["dim"].get<int>();
    if (j.contains("folds")) p.folds = j["folds"].get<int>();
    if (j.contains("seed")) p.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("oversample")) p.oversample = j["oversample"].get<int>();
    if (j.contains("power_iters")) p.power_iters = j["power_iters"].get<int>();
    if (j.contains("j_index")) p.j_index = parse_j_index(j["j_index"].get<std::string>());
    if (j.contains("mem_cap")) p.mem_cap_nodes = j["mem_cap"].get<std::uint64_t>();
    if (j.contains("recipes")) c.recipes = j["recipes"].get<std::vector<std::string>>();
    if (j.contains("walks_per_node")) c.walks = j["walks_per_node"].get<std::vector<int>>();
    if (j.contains("walk_length")) c.walk_length = j["walk_length"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("bad config " + path + ": " + e.what());
  }
}

RunConfig resolve(const std::string& command, const Flags& f) {
  RunConfig c;
  c.command = command;
  gf_params_init(&c.params);
  if (command == "reconstruct") c.preset = "karate-fig1";
  if (command == "oracle") c.walks = {80};
  if (!f.config.empty()) apply_config_file(f.config, c);
  if (!f.preset.empty()) c.preset = f.preset;
  if (!c.preset.empty() && gf_params_apply_preset(&c.params, c.preset.c_str()) != GF_OK) {
    throw UsageError(gf_last_error());
  }
  auto& p = c.params;
  if (!f.graph.empty()) c.graph = f.graph;
  if (f.window) p.window = *f.window;
  if (f.negatives) p.negatives = *f.negatives;
  if (f.rank) p.rank = *f.rank;
  if (f.folds) p.folds = *f.folds;
  if (f.oversample) p.oversample = *f.oversample;
  if (f.power_iters) p.power_iters = *f.power_iters;
  if (f.mem_cap) p.mem_cap_nodes = *f.mem_cap;
  if (f.j_index) p.j_index = parse_j_index(*f.j_index);
  if (f.seed) {
    p.seed = *f.seed;
  } else if (f.config.empty()) {
    if (const char* env = std::getenv("GRAPHFACTOR_SEED"); env && *env) {
      p.seed = parse_seed(env, "GRAPHFACTOR_SEED");
    }
  }
  if (!f.recipes.empty()) c.recipes = f.recipes;
  if (!f.walks.empty()) c.walks = f.walks;
  if (f.walk_length) c.walk_length = *f.walk_length;
  if (!f.dataset.empty()) c.dataset = f.dataset;
  c.out = f.out;
  c.threads = f.threads;

  if (c.graph.empty()) throw UsageError("--graph is required");
  for (const auto& r : c.recipes) check_recipe(r);
  if (command == "evaluate") {
    if (c.recipes.empty()) {
      for (size_t i = 0; i < gf_recipe_count(); ++i) c.recipes.emplace_back(gf_recipe_name(i));
    }
    auto menu_pos = [](const std::string& t) {
      for (size_t i = 0; i < gf_recipe_count(); ++i) {
        if (t == gf_recipe_name(i)) return i;
      }
      return gf_recipe_count();
    };
    std::sort(c.recipes.begin(), c.recipes.end(),
              [&](const auto& a, const auto& b) { return menu_pos(a) < menu_pos(b); });
    c.recipes.erase(std::unique(c.recipes.begin(), c.recipes.end()), c.recipes.end());
    if (c.dataset.empty()) c.dataset = fs::path(c.graph).stem().string();
  }
  if (command == "matrix" && c.recipes.size() != 1) {
    throw UsageError("matrix needs exactly one --recipe; valid recipes: " +
                     std::string(gf_recipe_tokens()));
  }
  if (p.window < 1) throw UsageError("--T must be >= 1");
  if (!(p.negatives > 0)) throw UsageError("--b must be > 0");
  if (p.rank < 1) throw UsageError("--dim must be >= 1");
  if (p.folds < 2) throw UsageError("--folds must be >= 2");
  if (p.oversample < 0 || p.power_iters < 0) {
    throw UsageError("--oversample and --power-iters must be >= 0");
  }
  if (command == "oracle") {
    if (c.walks.empty()) throw UsageError("--walks needs at least one value");
    for (int w : c.walks) {
      if (w < 1) throw UsageError("--walks values must be >= 1");
    }
    if (c.walk_length < 2) throw UsageError("--walk-length must be >= 2");
  }
  return c;
}

fs::path prepare_out(const RunConfig& c) {
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw RuntimeError("cannot create " + dir.string() + ": " + ec.message());
  std::ofstream cfg(dir / "config.json", std::ios::binary);
  if (!cfg) throw RuntimeError("cannot write " + (dir / "config.json").string());
  cfg << config_json(c).dump(2) << '\n';
  return dir;
}

std::string str(const fs::path& p) { return p.string(); }

void load_graph(const RunConfig& c, GraphHandle& g) {
  check(gf_graph_load(c.graph.c_str(), g.out()), "loading " + c.graph);
}

int run_ingest(const RunConfig& c) {
  GraphHandle g;
  load_graph(c, g);
  const auto dir = prepare_out(c);
  check(gf_graph_write_edges(g.get(), str(dir / "edges.txt").c_str()), "writing edges");
  check(gf_graph_write_node_map(g.get(), str(dir / "node_map.csv").c_str()), "writing node map");
  std::cout << "nodes " << gf_graph_num_nodes(g.get()) << ", edges " << gf_graph_num_edges(g.get())
            << ", self-loops dropped " << gf_graph_self_loops_dropped(g.get())
            << ", duplicates merged " << gf_graph_duplicates_merged(g.get()) << '\n';
  return 0;
}

int run_matrix(const RunConfig& c) {
  GraphHandle g;
  load_graph(c, g);
  MatrixHandle m;
  check(gf_matrix_compute(g.get(), c.recipes[0].c_str(), &c.params, m.out()),
        "computing " + c.recipes[0]);
  const auto dir = prepare_out(c);
  check(gf_matrix_write_csv(m.get(), str(dir / "matrix.csv").c_str()), "writing CSV");
  check(gf_matrix_write_binary(m.get(), str(dir / "matrix.gfmx").c_str()), "writing GFMX1");
  std::cout << c.recipes[0] << ": " << gf_matrix_rows(m.get()) << "x" << gf_matrix_cols(m.get())
            << " written to " << dir.string() << '\n';
  return 0;
}

int run_reconstruct(const RunConfig& c) {
  GraphHandle g;
  load_graph(c, g);
  const std::string recipe = c.recipes.empty() ? "trunc_log_q" : c.recipes[0];
  MatrixHandle truth, target, recon;
  EmbeddingHandle emb;
  check(gf_matrix_shifted_pmi(g.get(), &c.params, truth.out()), "computing shifted PMI");
  check(gf_matrix_compute(g.get(), recipe.c_str(), &c.params, target.out()), "computing " + recipe);
  check(gf_factorize(target.get(), &c.params, emb.out()), "factorizing");
  check(gf_embedding_reconstruct(emb.get(), recon.out()), "reconstructing");
  const auto dir = prepare_out(c);
  double lo = 0, hi = 0;
  check(gf_write_heatmaps(truth.get(), recon.get(), str(dir).c_str(), &lo, &hi),
        "writing heatmaps");
  check(gf_embedding_write_csv(emb.get(), str(dir / "embedding.csv").c_str()), "writing embedding");
  std::cout << "panels " << gf_matrix_rows(recon.get()) << "x" << gf_matrix_cols(recon.get())
            << ", shared scale [" << lo << ", " << hi << "], written to " << dir.string() << '\n';
  return 0;
}

int run_evaluate(const RunConfig& c) {
  GraphHandle g;
  load_graph(c, g);
  std::vector<const char*> names;
  for (const auto& r : c.recipes) names.push_back(r.c_str());
  ReportHandle report;
  check(gf_evaluate(g.get(), names.data(), names.size(), &c.params, c.dataset.c_str(),
                    report.out()),
        "evaluating");
  const auto dir = prepare_out(c);
  check(gf_report_write_json(report.get(), str(dir / "report.json").c_str()), "writing JSON");
  check(gf_report_write_markdown(report.get(), str(dir / "report.md").c_str()), "writing markdown");
  check(gf_report_write_csv(report.get(), str(dir / "report.csv").c_str()), "writing CSV");
  const auto errors = gf_report_error_count(report.get());
  for (const auto& r : c.recipes) {
    double auc = 0;
    if (gf_report_mean_test_auc(report.get(), r.c_str(), &auc) == GF_OK) {
      std::cout << r << ": mean test AUC " << auc << '\n';
    } else {
      std::cout << r << ": failed\n";
    }
  }
  if (errors) {
    std::cerr << "graphfactor: " << errors << " recipe/fold failures; see report.json\n";
    return kExitRuntime;
  }
  return 0;
}

int run_oracle(const RunConfig& c) {
  GraphHandle g;
  load_graph(c, g);
  const auto dir = prepare_out(c);
  check(gf_oracle_study(g.get(), &c.params, c.walks.data(), c.walks.size(), c.walk_length,
                        str(dir / "convergence.csv").c_str(),
                        str(dir / "convergence.md").c_str()),
        "running convergence study");
  std::ifstream md(dir / "convergence.md");
  std::cout << md.rdbuf();
  return 0;
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--graph", f.graph, "SNAP-style edge list");
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
  cmd->add_option("--config", f.config, "config.json from an earlier run");
  cmd->add_option("--preset", f.preset, "paper-main or karate-fig1");
  cmd->add_option("--T", f.window, "window size");
  cmd->add_option("--b", f.negatives, "negative-sample shift");
  cmd->add_option("--dim", f.rank, "embedding dimension");
  cmd->add_option("--seed", f.seed, "random seed (default: $GRAPHFACTOR_SEED, then 42)");
  cmd->add_option("--threads", f.threads, "worker threads (0: library default)");
  cmd->add_option("--mem-cap", f.mem_cap, "largest n allowed for dense n x n matrices");
  cmd->add_option("--j-index", f.j_index, "canonical or paper-literal")
      ->check(CLI::IsMember({"canonical", "paper-literal"}));
  cmd->add_option("--oversample", f.oversample, "randomized SVD oversampling");
  cmd->add_option("--power-iters", f.power_iters, "randomized SVD power iterations");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-walk co-occurrence matrices, factorization embeddings and link prediction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gf_version()));

  Flags f;
  auto* ingest = app.add_subcommand("ingest", "load an edge list, write the cleaned graph");
  auto* matrix = app.add_subcommand("matrix", "compute and export a recipe matrix");
  auto* reconstruct = app.add_subcommand("reconstruct", "shifted PMI vs rank-d reconstruction heatmaps");
  auto* evaluate = app.add_subcommand("evaluate", "k-fold link prediction over recipes");
  auto* oracle = app.add_subcommand("oracle", "Monte-Carlo random-walk convergence study");
  for (auto* cmd : {ingest, matrix, reconstruct, evaluate, oracle}) add_common(cmd, f);
  matrix->add_option("--recipe", f.recipes, "recipe token")->expected(1);
  reconstruct->add_option("--recipe", f.recipes, "matrix to factorize (default trunc_log_q)")
      ->expected(1);
  evaluate->add_option("--recipe", f.recipes, "recipe tokens (default: full menu)")
      ->delimiter(',');
  evaluate->add_option("--folds", f.folds, "number of folds");
  evaluate->add_option("--dataset", f.dataset, "dataset name in reports");
  oracle->add_option("--walks", f.walks, "walks per node; a list such as 100,1000,10000 gives a convergence table")->delimiter(',');
  oracle->add_option("--walk-length", f.walk_length, "walk length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  try {
    const RunConfig c = resolve(command, f);
    if (c.threads > 0) gf_set_threads(c.threads);
    if (command == "ingest") return run_ingest(c);
    if (command == "matrix") return run_matrix(c);
    if (command == "reconstruct") return run_reconstruct(c);
    if (command == "evaluate") return run_evaluate(c);
    return run_oracle(c);
  } catch (const UsageError& e) {
    std::cerr << "graphfactor: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "graphfactor: " << e.what() << '\n';
    return kExitRuntime;
  }
}

// cafpono: pairwise causal direction and DAG discovery from the command line.
//
// Subcommands: pair, discover, simulate, benchmark, eval. Every run echoes
// its full effective configuration into the result JSON, so outputs are
// self-describing; repeated runs with the same seed produce identical JSON
// except for the timestamp field.
//
// Exit codes: 0 success, 2 argument or input-shape errors, 1 runtime errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "cafpono/benchmark_suite.hpp"
#include "cafpono/bivariate.hpp"
#include "cafpono/data_io.hpp"
#include "cafpono/metrics.hpp"
#include "cafpono/ordering.hpp"
#include "cafpono/rng.hpp"
#include "cafpono/synth.hpp"

namespace {

using nlohmann::ordered_json;
using namespace cafpono;

std::string iso_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

ordered_json fit_json(const FitConfig& cfg) {
  return {{"components", cfg.components},
          {"hidden", cfg.hidden_dim},
          {"learning_rate", cfg.learning_rate},
          {"batch_size", cfg.batch_size},
          {"epochs", cfg.max_epochs},
          {"patience", cfg.patience},
          {"seed", cfg.seed}};
}

ordered_json hsic_json(const HsicConfig& cfg) {
  return {{"bandwidth", cfg.bandwidth}};
}

ordered_json prune_json(const PruneConfig& cfg) {
  return {{"alpha", cfg.alpha},
          {"n_perm", cfg.n_perm},
          {"seed", cfg.seed},
          {"regressor", fit_json(cfg.regressor)}};
}

ordered_json side_json(const DirectionScore& s) {
  return {{"score", s.score},
          {"val_nll", s.val_nll},
          {"epochs_run", s.epochs_run},
          {"degenerate", s.degenerate}};
}

ordered_json graph_edges(const AdjacencyMatrix& g, const std::vector<std::string>& names) {
  ordered_json edges = ordered_json::array();
  for (int i = 0; i < g.dim(); ++i) {
    for (int j = 0; j < g.dim(); ++j) {
      if (g.at(i, j)) edges.push_back({names[static_cast<std::size_t>(i)],
                                       names[static_cast<std::size_t>(j)]});
    }
  }
  return edges;
}

void emit(const ordered_json& doc, const std::string& out_path) {
  const std::string text = doc.dump(2) + "\n";
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("failed writing '" + out_path + "'");
  }
  std::cout << text;
}

// Shared fit/hsic knobs; every subcommand that fits models takes these.
struct FitFlags {
  FitConfig fit;
  HsicConfig hsic;

  void attach(CLI::App* cmd) {
    cmd->add_option("--components", fit.components, "CDF-flow mixture components");
    cmd->add_option("--hidden", fit.hidden_dim, "hidden units in the regression net");
    cmd->add_option("--epochs", fit.max_epochs, "maximum training epochs");
    cmd->add_option("--lr", fit.learning_rate, "Adam learning rate");
    cmd->add_option("--batch", fit.batch_size, "minibatch size");
    cmd->add_option("--patience", fit.patience, "early-stopping patience in epochs");
    cmd->add_option("--bandwidth", hsic.bandwidth, "Gaussian HSIC kernel bandwidth");
  }
};

// --- pair ------------------------------------------------------------------

struct PairArgs {
  std::string data, x_col, y_col, out;
  std::uint64_t seed = 0;
  FitFlags flags;
};

int cmd_pair(const PairArgs& a) {
  Dataset data = read_dataset(a.data);
  const int xi = data.column_index(a.x_col);
  const int yi = data.column_index(a.y_col);

  FitConfig cfg = a.flags.fit;
  cfg.seed = a.seed;
  const PairDecision d = infer_direction(data.col(xi), data.col(yi), cfg, a.flags.hsic);

  ordered_json doc{
      {"command", "pair"},
      {"config", {{"fit", fit_json(cfg)}, {"hsic", hsic_json(a.flags.hsic)}}},
      {"data", {{"path", a.data}, {"x", a.x_col}, {"y", a.y_col}, {"n", data.n()}}},
      {"result",
       {{"direction", d.direction},
        {"cause", d.direction > 0 ? a.x_col : a.y_col},
        {"effect", d.direction > 0 ? a.y_col : a.x_col},
        {"score_xy", d.score_xy},
        {"score_yx", d.score_yx},
        {"tie", d.tie},
        {"degenerate", d.degenerate},
        {"forward", side_json(d.forward)},
        {"backward", side_json(d.backward)}}},
      {"timestamp", iso_timestamp()}};
  emit(doc, a.out);
  return 0;
}

// --- discover ----------------------------------------------------------------

struct DiscoverArgs {
  std::string data, out;
  double alpha = 0.001;
  int n_perm = 1999;
  std::uint64_t seed = 0;
  int jobs = default_jobs();
  FitFlags flags;
};

int cmd_discover(const DiscoverArgs& a) {
  Dataset data = read_dataset(a.data);

  FitConfig cfg = a.flags.fit;
  cfg.seed = a.seed;
  PruneConfig pcfg;
  pcfg.alpha = a.alpha;
  pcfg.n_perm = a.n_perm;
  pcfg.seed = a.seed;
  pcfg.hsic = a.flags.hsic;

  const DiscoveryResult res = discover(data, cfg, pcfg, a.flags.hsic, a.jobs);

  ordered_json order = ordered_json::array();
  for (int v : res.ordering.root_first()) order.push_back(data.names[static_cast<std::size_t>(v)]);

  // Top-level nodes/edges make the output directly loadable as a graph file.
  ordered_json doc{
      {"command", "discover"},
      {"config",
       {{"fit", fit_json(cfg)},
        {"prune", prune_json(pcfg)},
        {"hsic", hsic_json(a.flags.hsic)},
        {"jobs", a.jobs}}},
      {"data", {{"path", a.data}, {"n", data.n()}, {"d", data.dim()}}},
      {"nodes", data.names},
      {"edges", graph_edges(res.graph, data.names)},
      {"order", order},
      {"fits_run", res.fits_run},
      {"timestamp", iso_timestamp()}};
  emit(doc, a.out);
  return 0;
}

// --- simulate ----------------------------------------------------------------

struct SimulateArgs {
  std::string kind, noise = "gaussian", g = "linear", h = "square";
  int n = 0, d = 4;
  double in_degree = 2.0;
  std::uint64_t seed = 0;
  std::string out, truth;
};

OuterKind parse_outer(const std::string& s) {
  static const std::map<std::string, OuterKind> m{
      {"linear", OuterKind::Linear}, {"cube", OuterKind::Cube},
      {"inverse", OuterKind::Inverse}, {"exp", OuterKind::Exp},
      {"log", OuterKind::Log},       {"sigmoid", OuterKind::Sigmoid}};
  const auto it = m.find(s);
  if (it == m.end()) throw std::invalid_argument("unknown outer function '" + s + "'");
  return it->second;
}

InnerKind parse_inner(const std::string& s) {
  static const std::map<std::string, InnerKind> m{{"square", InnerKind::Square},
                                                  {"abs", InnerKind::Absolute},
                                                  {"sigmoid", InnerKind::Sigmoid}};
  const auto it = m.find(s);
  if (it == m.end()) throw std::invalid_argument("unknown inner function '" + s + "'");
  return it->second;
}

NoiseKind parse_noise(const std::string& s) {
  static const std::map<std::string, NoiseKind> m{{"gaussian", NoiseKind::Gaussian},
                                                  {"uniform", NoiseKind::Uniform},
                                                  {"laplace", NoiseKind::Laplace}};
  const auto it = m.find(s);
  if (it == m.end()) throw std::invalid_argument("unknown noise kind '" + s + "'");
  return it->second;
}

Dataset pair_dataset(const GeneratedPair& g) {
  Dataset d;
  d.values.resize(g.x.size(), 2);
  d.values.col(0) = g.x;
  d.values.col(1) = g.y;
  d.names = {"x", "y"};
  return d;
}

int cmd_simulate(const SimulateArgs& a) {
  const std::string out = a.out.empty() ? a.kind + ".csv" : a.out;

  Dataset data;
  NamedGraph truth;
  if (a.kind == "simple-pnl") {
    PairSpec spec{parse_outer(a.g), parse_inner(a.h), parse_noise(a.noise)};
    data = pair_dataset(gen_simple_pnl(a.n, spec, a.seed));
  } else if (a.kind == "gp-pnl") {
    data = pair_dataset(gen_gp_pnl(a.n, a.seed));
  } else if (a.kind == "an") {
    data = pair_dataset(gen_an_ls(LocalKind::Additive, a.n, a.seed));
  } else if (a.kind == "ls") {
    data = pair_dataset(gen_an_ls(LocalKind::LocationScale, a.n, a.seed));
  } else if (a.kind == "er-multivariate") {
    const AdjacencyMatrix g = gen_er_graph(a.d, a.in_degree, mix_seed(a.seed, 1));
    data = gen_multivariate(g, a.n, mix_seed(a.seed, 2));
    truth.nodes = data.names;
    truth.adjacency = g;
  } else {
    throw std::invalid_argument("unknown kind '" + a.kind + "'");
  }

  if (truth.nodes.empty()) {
    // Pair generators are causal x -> y by construction.
    truth.nodes = data.names;
    truth.adjacency = AdjacencyMatrix(2);
    truth.adjacency.set(0, 1, true);
  }

  write_dataset(out, data);
  if (!a.truth.empty()) write_graph(a.truth, truth);

  ordered_json doc{
      {"command", "simulate"},
      {"config",
       {{"kind", a.kind},
        {"n", a.n},
        {"d", a.kind == "er-multivariate" ? a.d : 2},
        {"in_degree", a.in_degree},
        {"noise", a.noise},
        {"g", a.g},
        {"h", a.h},
        {"seed", a.seed}}},
      {"output",
       {{"csv", out},
        {"truth", a.truth.empty() ? ordered_json(nullptr) : ordered_json(a.truth)},
        {"rows", data.n()},
        {"columns", data.dim()}}},
      {"timestamp", iso_timestamp()}};
  emit(doc, "");
  return 0;
}

// --- benchmark ---------------------------------------------------------------

struct BenchmarkArgs {
  std::string suite, pair_dir, out;
  int n_pairs = 100, n = 500;
  std::uint64_t seed = 0;
  int jobs = default_jobs();
  FitFlags flags;
};

int cmd_benchmark(const BenchmarkArgs& a) {
  FitConfig cfg = a.flags.fit;
  cfg.seed = a.seed;

  SuiteResult res;
  std::vector<std::string> warnings;
  if (a.suite == "pairdir") {
    if (a.pair_dir.empty()) {
      throw std::invalid_argument("--pair-dir is required with --suite pairdir");
    }
    const std::vector<CauseEffectPair> pairs = read_pair_dir(a.pair_dir, &warnings);
    if (pairs.empty()) throw std::invalid_argument("no usable pairs in '" + a.pair_dir + "'");
    res = run_pair_list(pairs, cfg, a.seed, a.jobs);
  } else if (is_known_suite(a.suite)) {
    res = run_synthetic_suite(a.suite, a.n_pairs, a.n, cfg, a.seed, a.jobs);
  } else {
    throw std::invalid_argument("unknown suite '" + a.suite + "'");
  }

  ordered_json pairs = ordered_json::array();
  for (const SuiteOutcome& p : res.pairs) {
    pairs.push_back({{"name", p.name},
                     {"truth", p.truth},
                     {"score_xy", p.score_xy},
                     {"score_yx", p.score_yx},
                     {"direction", p.direction},
                     {"correct", p.direction == p.truth},
                     {"weight", p.weight}});
  }

  ordered_json doc{
      {"method", "cafpono"},
      {"command", "benchmark"},
      {"suite", a.suite},
      {"config",
       {{"fit", fit_json(cfg)},
        {"hsic", hsic_json(a.flags.hsic)},
        {"pairs", a.suite == "pairdir" ? static_cast<int>(res.pairs.size()) : a.n_pairs},
        {"n", a.n},
        {"pair_dir", a.pair_dir},
        {"seed", a.seed},
        {"jobs", a.jobs}}},
      {"pairs", pairs},
      {"metrics",
       {{"auc", res.auc}, {"accuracy", res.acc}, {"weighted_accuracy", res.weighted_acc}}},
      {"warnings", warnings},
      {"timestamp", iso_timestamp()}};
  emit(doc, a.out);
  return 0;
}

// --- eval --------------------------------------------------------------------

struct EvalArgs {
  std::string pred, truth, order, metrics = "shd,sid,dorder";
};

// Re-index `g` (named by `names`) into `target`'s name order.
AdjacencyMatrix align_graph(const NamedGraph& g, const std::vector<std::string>& target) {
  if (g.nodes.size() != target.size()) {
    throw std::invalid_argument("graphs have different node counts");
  }
  std::map<std::string, int> to_target;
  for (std::size_t i = 0; i < target.size(); ++i) to_target[target[i]] = static_cast<int>(i);

  AdjacencyMatrix out(static_cast<int>(target.size()));
  std::vector<int> remap(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto it = to_target.find(g.nodes[i]);
    if (it == to_target.end()) {
      throw std::invalid_argument("node '" + g.nodes[i] + "' is missing from the other graph");
    }
    remap[i] = it->second;
  }
  for (int i = 0; i < g.adjacency.dim(); ++i) {
    for (int j = 0; j < g.adjacency.dim(); ++j) {
      if (g.adjacency.at(i, j)) {
        out.set(remap[static_cast<std::size_t>(i)], remap[static_cast<std::size_t>(j)], true);
      }
    }
  }
  return out;
}

std::vector<int> read_order(const std::string& path, const std::vector<std::string>& names) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
  if (!doc.is_object() || !doc.contains("order") || !doc["order"].is_array()) {
    throw ParseError("'" + path + "': expected an object with an 'order' array");
  }
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = static_cast<int>(i);
  std::vector<int> order;
  for (const auto& node : doc["order"]) {
    if (!node.is_string() || !index.count(node.get<std::string>())) {
      throw std::invalid_argument("order entry is not a node of the truth graph");
    }
    order.push_back(index[node.get<std::string>()]);
  }
  return order;
}

int cmd_eval(const EvalArgs& a) {
  std::vector<std::string> requested;
  for (std::size_t start = 0; start <= a.metrics.size();) {
    const std::size_t comma = a.metrics.find(',', start);
    const std::size_t end = comma == std::string::npos ? a.metrics.size() : comma;
    if (end > start) requested.push_back(a.metrics.substr(start, end - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (requested.empty()) throw std::invalid_argument("--metrics is empty");
  for (const std::string& m : requested) {
    if (m != "shd" && m != "sid" && m != "dorder") {
      throw std::invalid_argument("unknown metric '" + m + "'");
    }
  }

  const NamedGraph truth = read_graph(a.truth);
  const NamedGraph pred = read_graph(a.pred);
  const AdjacencyMatrix aligned = align_graph(pred, truth.nodes);

  ordered_json metrics;
  for (const std::string& m : requested) {
    if (m == "shd") {
      metrics["shd"] = shd(aligned, truth.adjacency);
    } else if (m == "sid") {
      metrics["sid"] = sid(aligned, truth.adjacency);
    } else {
      if (a.order.empty()) {
        throw std::invalid_argument("metric 'dorder' requires --order");
      }
      metrics["dorder"] = order_divergence(read_order(a.order, truth.nodes), truth.adjacency);
    }
  }

  ordered_json doc{{"command", "eval"},
                   {"inputs", {{"pred", a.pred}, {"truth", a.truth}, {"order", a.order}}},
                   {"metrics", metrics},
                   {"timestamp", iso_timestamp()}};
  emit(doc, "");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Post-nonlinear causal discovery via CDF-flow noise recovery"};
  app.require_subcommand(1);

  PairArgs pair;
  CLI::App* p = app.add_subcommand("pair", "Decide causal direction between two columns");
  p->add_option("--data", pair.data, "input CSV")->required();
  p->add_option("--x", pair.x_col, "first column name")->required();
  p->add_option("--y", pair.y_col, "second column name")->required();
  p->add_option("--seed", pair.seed, "RNG seed")->envname("CAFPONO_SEED");
  p->add_option("--out", pair.out, "result JSON path");
  pair.flags.attach(p);

  DiscoverArgs disc;
  CLI::App* d = app.add_subcommand("discover", "Recover a causal DAG over all columns");
  d->add_option("--data", disc.data, "input CSV")->required();
  d->add_option("--alpha", disc.alpha, "pruning significance level");
  d->add_option("--n-perm", disc.n_perm, "permutations per independence test");
  d->add_option("--seed", disc.seed, "RNG seed")->envname("CAFPONO_SEED");
  d->add_option("--jobs", disc.jobs, "worker threads");
  d->add_option("--out", disc.out, "result JSON path");
  disc.flags.attach(d);

  SimulateArgs sim;
  CLI::App* s = app.add_subcommand("simulate", "Generate synthetic benchmark data");
  s->set_help_flag("--help", "print help");  // frees -h for the inner-function flag
  s->add_option("--kind", sim.kind, "simple-pnl | gp-pnl | er-multivariate | an | ls")->required();
  s->add_option("--n", sim.n, "sample count")->required();
  s->add_option("--d", sim.d, "node count (er-multivariate)");
  s->add_option("--in-degree", sim.in_degree, "expected in-degree (er-multivariate)");
  s->add_option("--noise", sim.noise, "gaussian | uniform | laplace (simple-pnl)");
  s->add_option("--g", sim.g, "outer function (simple-pnl)");
  s->add_option("--h", sim.h, "inner function (simple-pnl)");
  s->add_option("--seed", sim.seed, "RNG seed")->envname("CAFPONO_SEED");
  s->add_option("--out", sim.out, "output CSV path (default <kind>.csv)");
  s->add_option("--truth", sim.truth, "also write the generating graph JSON");

  BenchmarkArgs bench;
  CLI::App* b = app.add_subcommand("benchmark", "Score a suite of cause-effect pairs");
  b->add_option("--suite", bench.suite,
                "simple-pnl-gaussian | simple-pnl-laplace | simple-pnl-uniform | gp-pnl | pairdir")
      ->required();
  b->add_option("--pairs", bench.n_pairs, "number of generated pairs");
  b->add_option("--n", bench.n, "samples per generated pair");
  b->add_option("--pair-dir", bench.pair_dir, "directory of pairNNNN.txt files (pairdir)");
  b->add_option("--seed", bench.seed, "RNG seed")->envname("CAFPONO_SEED");
  b->add_option("--jobs", bench.jobs, "worker threads");
  b->add_option("--out", bench.out, "result JSON path");
  bench.flags.attach(b);

  EvalArgs ev;
  CLI::App* e = app.add_subcommand("eval", "Compare a predicted graph against a truth graph");
  e->add_option("--pred", ev.pred, "predicted graph JSON")->required();
  e->add_option("--truth", ev.truth, "true graph JSON")->required();
  e->add_option("--order", ev.order, "ordering JSON (for dorder)");
  e->add_option("--metrics", ev.metrics, "comma list from shd,sid,dorder");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }

  try {
    if (p->parsed()) return cmd_pair(pair);
    if (d->parsed()) return cmd_discover(disc);
    if (s->parsed()) return cmd_simulate(sim);
    if (b->parsed()) return cmd_benchmark(bench);
    return cmd_eval(ev);
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}

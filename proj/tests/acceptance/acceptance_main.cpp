// Acceptance gate: ten end-to-end criteria, one per command-line argument
// (1..10, or "all"). Each prints a single [PASS]/[FAIL] line with the
// measured numbers; the process exits 0 iff every selected criterion passed.
// Thresholds are pinned here on purpose; do not tune them to the build.

#include <Eigen/Core>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <thread>
#include <vector>

#include "cafpono/benchmark_suite.hpp"
#include "cafpono/bivariate.hpp"
#include "cafpono/cdf_flow.hpp"
#include "cafpono/data_io.hpp"
#include "cafpono/hsic.hpp"
#include "cafpono/metrics.hpp"
#include "cafpono/mlp.hpp"
#include "cafpono/ordering.hpp"
#include "cafpono/pnl.hpp"
#include "cafpono/rng.hpp"
#include "cafpono/synth.hpp"
#include "support/graph_oracle.hpp"
#include "support/util.hpp"

namespace {

using namespace cafpono;
using test_util::TempDir;

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
}

// --- 1: flow correctness ----------------------------------------------------

bool criterion1() {
  Rng rng(101);
  int checked = 0;
  double worst_fd = 0.0, worst_round = 0.0;
  bool monotone = true;

  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + rng.below(12);
    const CdfFlowParams p = test_util::sample_flow_params(rng, k);

    std::vector<double> ys(50);
    for (double& y : ys) y = test_util::sample_support_y(rng, p);
    std::sort(ys.begin(), ys.end());

    const FlowCache cache(p);
    double prev_z = -std::numeric_limits<double>::infinity();
    double prev_y = -std::numeric_limits<double>::infinity();
    for (const double y : ys) {
      const FlowEval ev = cache.eval(y);
      if (y > prev_y && !(ev.z > prev_z)) monotone = false;
      prev_y = y;
      prev_z = ev.z;

      if (!ev.clamped) {
        const double h = 1e-6 * std::max(1.0, std::abs(y));
        const double fd = (flow_forward(p, y + h) - flow_forward(p, y - h)) / (2.0 * h);
        const double an = std::exp(ev.log_deriv);
        worst_fd = std::max(worst_fd, std::abs(fd - an) / std::max(std::abs(an), 1e-300));

        const double back = flow_inverse(p, ev.z);
        worst_round = std::max(worst_round, std::abs(back - y));
        ++checked;
      }
    }
  }

  const bool pass = monotone && worst_fd <= 1e-4 && worst_round <= 1e-6 && checked > 9000;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "flow: %d points, monotone=%s, max deriv rel err %.2e (<=1e-4), "
                "max round-trip %.2e (<=1e-6)",
                checked, monotone ? "yes" : "NO", worst_fd, worst_round);
  report(1, pass, buf);
  return pass;
}

// --- 2: likelihood gradients -------------------------------------------------

bool criterion2() {
  Rng rng(202);
  double worst = 0.0;
  int models = 0;

  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + rng.below(4);
    const int input_dim = 1 + rng.below(3);
    const int hidden = 2 + rng.below(5);

    PnlModel m;
    m.flow = test_util::sample_flow_params(rng, k);
    m.net = InnerNet::glorot(input_dim, hidden, rng);

    const int n = 16 + rng.below(17);
    Eigen::MatrixXd x(n, input_dim);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < input_dim; ++j) x(i, j) = rng.normal();
      y[i] = 0.8 * rng.normal();
    }

    Eigen::VectorXd grad;
    nll_loss_grad(m, x, y, grad);

    Eigen::VectorXd theta = pack(m);
    PnlModel probe = m;
    for (Eigen::Index idx = 0; idx < theta.size(); ++idx) {
      const double keep = theta[idx];
      const double h = 1e-5 * std::max(1.0, std::abs(keep));
      theta[idx] = keep + h;
      unpack(theta, probe);
      const double hi = nll_loss(probe, x, y);
      theta[idx] = keep - h;
      unpack(theta, probe);
      const double lo = nll_loss(probe, x, y);
      theta[idx] = keep;
      const double fd = (hi - lo) / (2.0 * h);
      worst = std::max(worst, std::abs(grad[idx] - fd) /
                                  std::max({1.0, std::abs(grad[idx]), std::abs(fd)}));
    }
    ++models;
  }

  const bool pass = worst <= 1e-3 && models == 50;
  char buf[160];
  std::snprintf(buf, sizeof buf, "gradients: %d models, max rel err %.2e (<=1e-3)",
                models, worst);
  report(2, pass, buf);
  return pass;
}

// --- 3: hsic oracle ----------------------------------------------------------

bool criterion3() {
  Rng rng(303);
  double worst = 0.0;

  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + rng.below(5);
    Eigen::VectorXd x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = 2.0 * rng.normal();
      y[i] = 2.0 * rng.normal();
    }

    Eigen::MatrixXd K(n, n), L(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        K(i, j) = std::exp(-0.5 * (x[i] - x[j]) * (x[i] - x[j]));
        L(i, j) = std::exp(-0.5 * (y[i] - y[j]) * (y[i] - y[j]));
      }
    }
    const Eigen::MatrixXd H =
        Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    const double direct = (K * H * L * H).trace() / (static_cast<double>(n) * n);
    worst = std::max(worst, std::abs(hsic(x, y) - direct));
  }

  const bool pass = worst <= 1e-12;
  char buf[120];
  std::snprintf(buf, sizeof buf, "hsic vs direct trace: max abs diff %.2e (<=1e-12)", worst);
  report(3, pass, buf);
  return pass;
}

// --- 4: metric oracles ---------------------------------------------------------

int shd_oracle(const AdjacencyMatrix& a, const AdjacencyMatrix& b) {
  int cost = 0;
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = i + 1; j < a.dim(); ++j) {
      const int a_state = a.at(i, j) ? 1 : (a.at(j, i) ? 2 : 0);
      const int b_state = b.at(i, j) ? 1 : (b.at(j, i) ? 2 : 0);
      if (a_state != b_state) ++cost;
    }
  }
  return cost;
}

int dorder_oracle(const std::vector<int>& root_first, const AdjacencyMatrix& truth) {
  std::vector<int> pos(root_first.size());
  for (std::size_t r = 0; r < root_first.size(); ++r) {
    pos[static_cast<std::size_t>(root_first[r])] = static_cast<int>(r);
  }
  int bad = 0;
  for (int i = 0; i < truth.dim(); ++i) {
    for (int j = 0; j < truth.dim(); ++j) {
      if (truth.at(i, j) && pos[static_cast<std::size_t>(j)] < pos[static_cast<std::size_t>(i)]) {
        ++bad;
      }
    }
  }
  return bad;
}

bool criterion4() {
  long long graph_pairs = 0, order_pairs = 0;
  const double t0 = now_seconds();

  for (int d = 1; d <= 4; ++d) {
    const std::vector<AdjacencyMatrix> dags = test_util::all_dags(d);

    for (const AdjacencyMatrix& pred : dags) {
      for (const AdjacencyMatrix& truth : dags) {
        if (shd(pred, truth) != shd_oracle(pred, truth)) {
          report(4, false, "shd mismatch at d=" + std::to_string(d));
          return false;
        }
        if (sid(pred, truth) != test_util::sid_oracle(pred, truth)) {
          report(4, false, "sid mismatch at d=" + std::to_string(d));
          return false;
        }
        ++graph_pairs;
      }
    }

    std::vector<int> perm(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) perm[static_cast<std::size_t>(i)] = i;
    do {
      for (const AdjacencyMatrix& truth : dags) {
        if (order_divergence(perm, truth) != dorder_oracle(perm, truth)) {
          report(4, false, "order_divergence mismatch at d=" + std::to_string(d));
          return false;
        }
        ++order_pairs;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "metrics match oracles on %lld graph pairs + %lld order pairs (%.0f s)",
                graph_pairs, order_pairs, now_seconds() - t0);
  report(4, true, buf);
  return true;
}

// --- 5 and 6: bivariate suites --------------------------------------------------

int suite_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

bool criterion5() {
  const FitConfig cfg;  // stock configuration, seed 0
  struct Row {
    const char* suite;
    double min_auc;
    double auc = 0.0;
    double acc = 0.0;
  };
  std::vector<Row> rows{{"simple-pnl-gaussian", 0.85},
                        {"simple-pnl-laplace", 0.80},
                        {"simple-pnl-uniform", 0.80}};

  bool pass = true;
  std::string detail = "simple-pnl 100 pairs, n=500:";
  for (Row& r : rows) {
    const SuiteResult res = run_synthetic_suite(r.suite, 100, 500, cfg, 0, suite_jobs());
    r.auc = res.auc;
    r.acc = res.acc;
    char buf[120];
    std::snprintf(buf, sizeof buf, " %s auc=%.4f (>=%.2f) acc=%.2f;", r.suite, r.auc,
                  r.min_auc, r.acc);
    detail += buf;
    if (!(r.auc >= r.min_auc)) pass = false;
  }
  report(5, pass, detail);
  return pass;
}

bool criterion6() {
  const FitConfig cfg;
  const SuiteResult res = run_synthetic_suite("gp-pnl", 50, 500, cfg, 0, suite_jobs());
  const bool pass = res.auc >= 0.80;
  char buf[120];
  std::snprintf(buf, sizeof buf, "gp-pnl 50 pairs, n=500: auc=%.4f (>=0.80) acc=%.2f",
                res.auc, res.acc);
  report(6, pass, buf);
  return pass;
}

// --- 7: multivariate recovery ----------------------------------------------------

bool criterion7() {
  double sum_dorder = 0.0, sum_shd = 0.0, sum_sid = 0.0;
  const int runs = 10;

  for (int r = 0; r < runs; ++r) {
    const AdjacencyMatrix truth = gen_er_graph(4, 2.0, 4000 + static_cast<std::uint64_t>(r));
    const Dataset data = gen_multivariate(truth, 1000, 5000 + static_cast<std::uint64_t>(r));

    FitConfig cfg;
    cfg.seed = 600 + static_cast<std::uint64_t>(r);
    PruneConfig pcfg;
    pcfg.seed = 700 + static_cast<std::uint64_t>(r);

    const DiscoveryResult res = discover(data, cfg, pcfg, {}, suite_jobs());
    const int dd = order_divergence(res.ordering.root_first(), truth);
    const int ds = shd(res.graph, truth);
    const int di = sid(res.graph, truth);
    sum_dorder += dd;
    sum_shd += ds;
    sum_sid += di;
    std::printf("  graph %d: edges=%d dorder=%d shd=%d sid=%d\n", r, truth.edge_count(),
                dd, ds, di);
    std::fflush(stdout);
  }

  const double md = sum_dorder / runs, ms = sum_shd / runs, mi = sum_sid / runs;
  const bool pass = md <= 1.5 && ms <= 4.0 && mi <= 6.0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "10 ER graphs d=4 n=1000: mean dorder=%.2f (<=1.5) shd=%.2f (<=4) "
                "sid=%.2f (<=6)",
                md, ms, mi);
  report(7, pass, buf);
  return pass;
}

// --- 8: ordering scaling -----------------------------------------------------------

bool criterion8() {
  FitConfig cfg;
  cfg.components = 6;
  cfg.hidden_dim = 16;
  cfg.max_epochs = 150;
  cfg.patience = 150;  // no early exit: every fit does identical work
  cfg.seed = 11;

  std::vector<int> dims{4, 6, 8};
  std::vector<double> times;
  for (const int d : dims) {
    AdjacencyMatrix g(d);
    for (int v = 0; v + 1 < d; ++v) g.set(v, v + 1, true);
    const Dataset data = gen_multivariate(g, 400, 42 + static_cast<std::uint64_t>(d));

    const double t0 = now_seconds();
    causal_order(data, cfg, {}, 1);
    times.push_back(now_seconds() - t0);
  }

  // Fit the cubic constant at d=4; larger d must stay within 1.5x of c*d^3.
  const double c = times[0] / 64.0;
  bool pass = true;
  std::string detail = "ordering wall time:";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const double bound = c * std::pow(dims[i], 3.0) * 1.5;
    char buf[80];
    std::snprintf(buf, sizeof buf, " d=%d %.2fs (bound %.2fs);", dims[i], times[i],
                  i == 0 ? times[0] * 1.5 : bound);
    detail += buf;
    if (i > 0 && times[i] > bound) pass = false;
  }
  report(8, pass, detail);
  return pass;
}

// --- 9: external-format ingestion ------------------------------------------------

// Stand-in fixtures in the exact on-disk formats; the real datasets are not
// redistributable, so they are taken from the environment when provided.
bool criterion9() {
  std::string detail;

  // Cause-effect pair directory (whitespace files + pairmeta).
  {
    const char* env_dir = std::getenv("CAFPONO_TUEBINGEN_DIR");
    TempDir tmp("acc9-pairs");
    std::string dir;
    if (env_dir != nullptr && *env_dir != '\0') {
      dir = env_dir;
    } else {
      dir = tmp.str();
      Rng rng(91);
      for (int id = 1; id <= 3; ++id) {
        std::ofstream f(tmp.file("pair000" + std::to_string(id) + ".txt"));
        for (int i = 0; i < 150; ++i) {
          const double x = rng.normal();
          const double y = std::tanh(x * x + 0.4 * rng.normal());
          if (id == 2) {
            f << y << " " << x << "\n";
          } else {
            f << x << " " << y << "\n";
          }
        }
      }
      std::ofstream meta(tmp.file("pairmeta.txt"));
      meta << "0001 1 1 2 2 1.0\n0002 2 2 1 1 1.0\n0003 1 1 2 2 0.5\n";
    }

    std::vector<std::string> warnings;
    const std::vector<CauseEffectPair> pairs = read_pair_dir(dir, &warnings);
    if (pairs.empty()) {
      report(9, false, "pair directory '" + dir + "' yielded no usable pairs");
      return false;
    }
    FitConfig cfg;
    cfg.seed = 13;
    const SuiteResult res = run_pair_list(pairs, cfg, 13, suite_jobs());
    char buf[160];
    std::snprintf(buf, sizeof buf, "pairs[%s]: %zu read (%zu skipped), acc=%.2f wacc=%.2f; ",
                  env_dir ? "external" : "stand-in", pairs.size(), warnings.size(), res.acc,
                  res.weighted_acc);
    detail += buf;
  }

  // Protein-network style CSV + truth graph, full discover/eval cycle.
  {
    const char* env_csv = std::getenv("CAFPONO_SACHS_CSV");
    const char* env_truth = std::getenv("CAFPONO_SACHS_TRUTH");
    TempDir tmp("acc9-net");
    std::string csv, truth_path;
    const bool external = env_csv != nullptr && *env_csv != '\0';
    if (external) {
      csv = env_csv;
      truth_path = (env_truth != nullptr) ? env_truth : "";
    } else {
      const AdjacencyMatrix g = gen_er_graph(4, 2.0, 97);
      const Dataset sim = gen_multivariate(g, 600, 98);
      csv = tmp.file("network.csv");
      truth_path = tmp.file("network_truth.json");
      write_dataset(csv, sim);
      write_graph(truth_path, NamedGraph{sim.names, g});
    }

    const Dataset data = read_dataset(csv);
    FitConfig cfg;
    cfg.seed = 29;
    PruneConfig pcfg;
    pcfg.seed = 31;
    const DiscoveryResult res = discover(data, cfg, pcfg, {}, suite_jobs());

    char buf[200];
    if (!truth_path.empty()) {
      const NamedGraph truth = read_graph(truth_path);
      const int s = shd(res.graph, truth.adjacency);
      if (external) {
        // Soft target from the acceptance note: recorded, not gated.
        std::snprintf(buf, sizeof buf,
                      "network[external]: d=%d n=%d edges=%d shd=%d (soft target <=15 %s)",
                      data.dim(), data.n(), res.graph.edge_count(), s,
                      s <= 15 ? "met" : "NOT met");
      } else {
        std::snprintf(buf, sizeof buf, "network[stand-in]: d=%d n=%d edges=%d shd=%d",
                      data.dim(), data.n(), res.graph.edge_count(), s);
      }
    } else {
      std::snprintf(buf, sizeof buf, "network[external]: d=%d n=%d edges=%d (no truth given)",
                    data.dim(), data.n(), res.graph.edge_count());
    }
    detail += buf;
  }

  report(9, true, detail);
  return true;
}

// --- 10: CLI determinism ------------------------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return "<unreadable:" + path + ">";
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return text;
}

std::string strip_timestamp(const std::string& text) {
  std::string out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    const std::size_t end = nl == std::string::npos ? text.size() : nl;
    const std::string line = text.substr(start, end - start);
    if (line.find("\"timestamp\"") == std::string::npos) out += line + "\n";
    if (nl == std::string::npos) break;
    start = nl + 1;
  }
  return out;
}

bool shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 0;
}

bool criterion10() {
  const std::string cli = CAFPONO_CLI_PATH;
  TempDir tmp("acc10");
  const std::string quick = " --epochs 120 --hidden 16 --components 6";

  if (!shell(cli + " simulate --kind simple-pnl --n 200 --seed 7 --out " + tmp.file("d.csv") +
             " > /dev/null") ||
      !shell(cli + " simulate --kind er-multivariate --d 3 --n 200 --seed 8 --out " +
             tmp.file("e.csv") + " > /dev/null")) {
    report(10, false, "simulate runs failed");
    return false;
  }

  struct Cmd {
    const char* name;
    std::string args;
  };
  const std::vector<Cmd> cmds{
      {"pair", " pair --data " + tmp.file("d.csv") + " --x x --y y --seed 4" + quick},
      {"benchmark",
       " benchmark --suite gp-pnl --pairs 3 --n 120 --seed 5 --jobs 2" + quick},
      {"discover", " discover --data " + tmp.file("e.csv") +
                       " --alpha 0.05 --n-perm 49 --seed 6 --jobs 2" + quick},
  };

  std::string detail = "identical JSON modulo timestamp:";
  for (const Cmd& c : cmds) {
    const std::string r1 = tmp.file(std::string(c.name) + "1.json");
    const std::string r2 = tmp.file(std::string(c.name) + "2.json");
    if (!shell(cli + c.args + " --out " + r1 + " > /dev/null") ||
        !shell(cli + c.args + " --out " + r2 + " > /dev/null")) {
      report(10, false, std::string(c.name) + " run failed");
      return false;
    }
    const std::string a = strip_timestamp(slurp(r1));
    if (a != strip_timestamp(slurp(r2)) || a.empty()) {
      report(10, false, std::string(c.name) + " output differs across identical runs");
      return false;
    }
    detail += std::string(" ") + c.name + ";";
  }
  report(10, true, detail);
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  if (argc < 2 || std::strcmp(argv[1], "all") == 0) {
    for (int i = 1; i <= 10; ++i) selected.push_back(i);
  } else {
    for (int a = 1; a < argc; ++a) {
      const int k = std::atoi(argv[a]);
      if (k < 1 || k > 10) {
        std::fprintf(stderr, "usage: %s [all | criterion numbers 1..10]\n", argv[0]);
        return 2;
      }
      selected.push_back(k);
    }
  }

  bool all_pass = true;
  for (const int k : selected) {
    bool ok = false;
    switch (k) {
      case 1: ok = criterion1(); break;
      case 2: ok = criterion2(); break;
      case 3: ok = criterion3(); break;
      case 4: ok = criterion4(); break;
      case 5: ok = criterion5(); break;
      case 6: ok = criterion6(); break;
      case 7: ok = criterion7(); break;
      case 8: ok = criterion8(); break;
      case 9: ok = criterion9(); break;
      case 10: ok = criterion10(); break;
    }
    all_pass = all_pass && ok;
  }
  return all_pass ? 0 : 1;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cafpono/data_io.hpp"
#include "cafpono/metrics.hpp"
#include "support/util.hpp"

// End-to-end runs of the installed binary. CAFPONO_CLI_PATH is injected by
// the build; every invocation goes through the shell so env-var and
// redirection syntax match what a user would type.

namespace {

using nlohmann::json;
using test_util::TempDir;

std::string cli() { return std::string(CAFPONO_CLI_PATH); }

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Drop the timestamp line; everything else must be reproducible.
std::string strip_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::string out, line;
  while (std::getline(in, line)) {
    if (line.find("\"timestamp\"") == std::string::npos) out += line + "\n";
  }
  return out;
}

json load_json(const std::string& path) { return json::parse(slurp(path)); }

}  // namespace

TEST_CASE("simulate writes deterministic CSV and a valid truth graph") {
  TempDir tmp("cli-sim");
  const std::string base = cli() + " simulate --kind er-multivariate --d 3 --n 50 --seed 12";

  CHECK(run(base + " --out " + tmp.file("a.csv") + " --truth " + tmp.file("t.json") +
            " > /dev/null") == 0);
  const cafpono::Dataset data = cafpono::read_dataset(tmp.file("a.csv"));
  CHECK(data.n() == 50);
  CHECK(data.dim() == 3);
  const cafpono::NamedGraph truth = cafpono::read_graph(tmp.file("t.json"));
  CHECK(truth.nodes == data.names);  // read_graph already rejects cycles

  CHECK(run(base + " --out " + tmp.file("b.csv") + " > /dev/null") == 0);
  CHECK(slurp(tmp.file("a.csv")) == slurp(tmp.file("b.csv")));

  CHECK(run(cli() + " simulate --kind simple-pnl --n 40 --g exp --h abs --noise laplace" +
            " --seed 3 --out " + tmp.file("p.csv") + " > /dev/null") == 0);
  const cafpono::Dataset pair = cafpono::read_dataset(tmp.file("p.csv"));
  CHECK(pair.n() == 40);
  CHECK(pair.names == std::vector<std::string>{"x", "y"});

  CHECK(run(cli() + " simulate --kind nope --n 10 --out " + tmp.file("z.csv") +
            " 2> /dev/null") == 2);
}

TEST_CASE("pair emits a result JSON and repeats byte-for-byte modulo timestamp") {
  TempDir tmp("cli-pair");
  REQUIRE(run(cli() + " simulate --kind simple-pnl --n 200 --seed 5 --out " +
              tmp.file("d.csv") + " > /dev/null") == 0);
  const std::string fit = " --epochs 100 --hidden 16 --components 6";
  const std::string base =
      cli() + " pair --data " + tmp.file("d.csv") + " --x x --y y" + fit;

  CHECK(run(base + " --seed 4 --out " + tmp.file("r1.json") + " > /dev/null") == 0);
  const json r = load_json(tmp.file("r1.json"));
  CHECK((r["result"]["direction"] == 1 || r["result"]["direction"] == -1));
  CHECK(r["result"]["score_xy"].is_number());
  CHECK(r["result"]["score_yx"].is_number());
  CHECK(r["config"]["fit"]["epochs"] == 100);

  CHECK(run(base + " --seed 4 --out " + tmp.file("r2.json") + " > /dev/null") == 0);
  CHECK(strip_timestamp(slurp(tmp.file("r1.json"))) ==
        strip_timestamp(slurp(tmp.file("r2.json"))));

  // The environment variable is the default seed.
  CHECK(run("CAFPONO_SEED=4 " + base + " --out " + tmp.file("r3.json") + " > /dev/null") == 0);
  CHECK(strip_timestamp(slurp(tmp.file("r1.json"))) ==
        strip_timestamp(slurp(tmp.file("r3.json"))));
}

TEST_CASE("argument errors exit 2 and name the offender, runtime errors exit 1") {
  TempDir tmp("cli-err");
  REQUIRE(run(cli() + " simulate --kind simple-pnl --n 100 --seed 1 --out " +
              tmp.file("d.csv") + " > /dev/null") == 0);

  const std::string err = tmp.file("err.txt");
  CHECK(run(cli() + " pair --data " + tmp.file("d.csv") + " --x nope --y y 2> " + err) == 2);
  CHECK(slurp(err).find("nope") != std::string::npos);

  CHECK(run(cli() + " pair --data " + tmp.file("missing.csv") + " --x x --y y 2> /dev/null") ==
        1);
  CHECK(run(cli() + " pair --data " + tmp.file("d.csv") + " --wat 2> /dev/null") == 2);
  CHECK(run(cli() + " bogus 2> /dev/null") == 2);
  CHECK(run(cli() + " --help > /dev/null") == 0);
}

TEST_CASE("discover on two columns matches pair semantics; alpha 1 keeps all candidates") {
  TempDir tmp("cli-disc");
  REQUIRE(run(cli() + " simulate --kind simple-pnl --n 400 --seed 9001 --out " +
              tmp.file("d.csv") + " > /dev/null") == 0);

  CHECK(run(cli() + " pair --data " + tmp.file("d.csv") + " --x x --y y --seed 101 --out " +
            tmp.file("p.json") + " > /dev/null") == 0);
  CHECK(run(cli() + " discover --data " + tmp.file("d.csv") +
            " --alpha 1.0 --n-perm 99 --seed 101 --jobs 1 --out " + tmp.file("g.json") +
            " > /dev/null") == 0);

  const json p = load_json(tmp.file("p.json"));
  const json g = load_json(tmp.file("g.json"));
  REQUIRE(g["order"].size() == 2);
  CHECK(g["order"][0] == p["result"]["cause"]);
  CHECK(g["edges"].size() == 1);  // alpha = 1: the one candidate survives
  CHECK(g["fits_run"] == 2);

  // Three nodes, alpha = 1: all d(d-1)/2 candidate edges kept.
  REQUIRE(run(cli() + " simulate --kind er-multivariate --d 3 --n 300 --seed 9 --out " +
              tmp.file("e.csv") + " > /dev/null") == 0);
  CHECK(run(cli() + " discover --data " + tmp.file("e.csv") +
            " --alpha 1.0 --n-perm 99 --epochs 120 --hidden 16 --components 6" +
            " --seed 2 --jobs 2 --out " + tmp.file("ge.json") + " > /dev/null") == 0);
  CHECK(load_json(tmp.file("ge.json"))["edges"].size() == 3);
}

TEST_CASE("eval aligns node names and rejects unknown metrics") {
  TempDir tmp("cli-eval");
  {
    std::ofstream t(tmp.file("truth.json"));
    t << R"({"nodes": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]]})";
    // Same graph, nodes listed in a different order.
    std::ofstream p(tmp.file("pred.json"));
    p << R"({"nodes": ["c", "a", "b"], "edges": [["a", "b"], ["b", "c"]]})";
    std::ofstream o(tmp.file("ord.json"));
    o << R"({"order": ["b", "a", "c"]})";
  }
  const std::string base = cli() + " eval --pred " + tmp.file("pred.json") + " --truth " +
                           tmp.file("truth.json");

  CHECK(run(base + " --metrics shd,sid > " + tmp.file("m.json")) == 0);
  const json m = load_json(tmp.file("m.json"));
  CHECK(m["metrics"]["shd"] == 0);
  CHECK(m["metrics"]["sid"] == 0);

  CHECK(run(base + " --order " + tmp.file("ord.json") + " --metrics dorder > " +
            tmp.file("mo.json")) == 0);
  // b before a violates the true edge a -> b and nothing else.
  CHECK(load_json(tmp.file("mo.json"))["metrics"]["dorder"] == 1);

  CHECK(run(base + " --metrics shd,wat 2> /dev/null") == 2);
  CHECK(run(base + " --metrics dorder 2> /dev/null") == 2);
}

TEST_CASE("benchmark summary metrics match its own per-pair entries") {
  TempDir tmp("cli-bench");
  CHECK(run(cli() + " benchmark --suite simple-pnl-gaussian --pairs 4 --n 200" +
            " --epochs 120 --hidden 16 --components 6 --seed 3 --jobs 2 --out " +
            tmp.file("b.json") + " > /dev/null") == 0);

  const json b = load_json(tmp.file("b.json"));
  CHECK(b["method"] == "cafpono");
  REQUIRE(b["pairs"].size() == 4);

  std::vector<cafpono::PairLabel> labels;
  for (const auto& p : b["pairs"]) {
    labels.push_back({p["score_xy"].get<double>() - p["score_yx"].get<double>(),
                      p["truth"].get<int>()});
  }
  CHECK(b["metrics"]["auc"].get<double>() ==
        doctest::Approx(cafpono::auc_bidirectional(labels)).epsilon(1e-12));
  CHECK(b["metrics"]["accuracy"].get<double>() ==
        doctest::Approx(cafpono::accuracy(labels)).epsilon(1e-12));

  CHECK(run(cli() + " benchmark --suite nope --pairs 2 2> /dev/null") == 2);
}

TEST_CASE("benchmark ingests a directory of cause-effect pair files") {
  TempDir tmp("cli-pairdir");
  {
    cafpono::Rng rng(31);
    std::ofstream f1(tmp.file("pair0001.txt"));
    std::ofstream f2(tmp.file("pair0002.txt"));
    for (int i = 0; i < 120; ++i) {
      const double x = rng.normal();
      const double y = x * x * x + 0.3 * rng.normal();
      f1 << x << " " << y << "\n";
      f2 << y << " " << x << "\n";  // same pair, cause in the second column
    }
    std::ofstream meta(tmp.file("pairmeta.txt"));
    meta << "0001 1 1 2 2 1.0\n0002 2 2 1 1 1.0\n";
  }

  CHECK(run(cli() + " benchmark --suite pairdir --pair-dir " + tmp.str() +
            " --epochs 100 --hidden 16 --components 6 --seed 3 --out " +
            tmp.file("b.json") + " > /dev/null") == 0);
  const json b = load_json(tmp.file("b.json"));
  REQUIRE(b["pairs"].size() == 2);
  CHECK(b["pairs"][0]["truth"] == 1);
  CHECK(b["pairs"][1]["truth"] == -1);

  CHECK(run(cli() + " benchmark --suite pairdir 2> /dev/null") == 2);
}

#include "cafpono/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace cafpono {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (const char ch : text) {
    if (ch == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) {
    if (cur.back() == '\r') cur.pop_back();
    lines.push_back(cur);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (const char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  cells.push_back(cur);
  return cells;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return s.substr(b, e - b);
}

double parse_cell(const std::string& raw, int row, int col) {
  const std::string cell = trim(raw);
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || cell.empty()) {
    throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                     ": cannot parse '" + cell + "' as a number");
  }
  if (!std::isfinite(value)) {
    throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                     ": non-finite value");
  }
  return value;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

Dataset read_dataset(const std::string& path) {
  const std::vector<std::string> lines = split_lines(read_file(path));
  if (lines.empty()) throw ParseError("'" + path + "' is empty");

  Dataset out;
  for (const auto& name : split_csv(lines[0])) {
    out.names.push_back(trim(name));
  }
  const int cols = static_cast<int>(out.names.size());
  const int rows = static_cast<int>(lines.size()) - 1;
  if (rows < 1) throw ParseError("'" + path + "' has no data rows");

  out.values.resize(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const auto cells = split_csv(lines[static_cast<std::size_t>(r + 1)]);
    if (static_cast<int>(cells.size()) != cols) {
      throw ParseError("row " + std::to_string(r + 1) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(cols));
    }
    for (int c = 0; c < cols; ++c) {
      out.values(r, c) = parse_cell(cells[static_cast<std::size_t>(c)], r + 1, c + 1);
    }
  }
  out.validate();
  return out;
}

void write_dataset(const std::string& path, const Dataset& data) {
  data.validate();
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw ParseError("cannot write '" + path + "'");
  for (int c = 0; c < data.dim(); ++c) {
    if (c) outf << ',';
    outf << data.names[static_cast<std::size_t>(c)];
  }
  outf << '\n';
  char buf[64];
  for (int r = 0; r < data.n(); ++r) {
    for (int c = 0; c < data.dim(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", data.values(r, c));
      if (c) outf << ',';
      outf << buf;
    }
    outf << '\n';
  }
  if (!outf) throw ParseError("write to '" + path + "' failed");
}

std::vector<CauseEffectPair> read_pair_dir(const std::string& dir,
                                           std::vector<std::string>* warnings) {
  const auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };
  if (!fs::is_directory(dir)) throw ParseError("'" + dir + "' is not a directory");

  std::string meta_path;
  std::vector<std::string> data_files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind("pairmeta", 0) == 0) {
      meta_path = entry.path().string();
    } else if (name.rfind("pair", 0) == 0 && name.size() > 8 &&
               name.substr(name.size() - 4) == ".txt") {
      data_files.push_back(name);
    }
  }
  if (meta_path.empty()) throw ParseError("no pairmeta file in '" + dir + "'");

  struct Meta {
    int cause_first, effect_first;
    double weight;
  };
  std::map<std::string, Meta> meta;  // id -> columns; map keeps output sorted
  for (const auto& line : split_lines(read_file(meta_path))) {
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() < 5) {
      warn("pairmeta line for '" + tok[0] + "' is malformed, skipped");
      continue;
    }
    try {
      const int c0 = std::stoi(tok[1]);
      const int c1 = std::stoi(tok[2]);
      const int e0 = std::stoi(tok[3]);
      const int e1 = std::stoi(tok[4]);
      const double w = tok.size() >= 6 ? std::stod(tok[5]) : 1.0;
      if (c0 < 1 || c1 < c0 || e0 < 1 || e1 < e0 || c0 == e0 || !(w > 0.0)) {
        warn("pairmeta entry '" + tok[0] + "' has invalid columns or weight, skipped");
        continue;
      }
      meta[tok[0]] = Meta{c0, e0, w};
    } catch (const std::exception&) {
      warn("pairmeta entry '" + tok[0] + "' is malformed, skipped");
    }
  }

  std::sort(data_files.begin(), data_files.end());
  std::vector<CauseEffectPair> out;
  for (const auto& file : data_files) {
    const std::string id = file.substr(4, file.size() - 8);
    const auto it = meta.find(id);
    if (it == meta.end()) {
      warn("no metadata for '" + file + "', skipped");
      continue;
    }
    const Meta& m = it->second;

    const auto lines = split_lines(read_file((fs::path(dir) / file).string()));
    std::vector<std::vector<double>> rows;
    bool ok = true;
    for (const auto& line : lines) {
      const auto tok = split_ws(line);
      if (tok.empty()) continue;
      std::vector<double> row;
      for (const auto& t : tok) {
        try {
          const double v = std::stod(t);
          if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
          row.push_back(v);
        } catch (const std::exception&) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
      rows.push_back(std::move(row));
    }
    const int need = std::max(m.cause_first, m.effect_first);
    if (!ok || rows.empty()) {
      warn("'" + file + "' is not numeric, skipped");
      continue;
    }
    if (std::any_of(rows.begin(), rows.end(), [need](const auto& r) {
          return static_cast<int>(r.size()) < need;
        })) {
      warn("'" + file + "' is missing metadata columns, skipped");
      continue;
    }

    CauseEffectPair pair;
    pair.name = "pair" + id;
    pair.weight = m.weight;
    const int n = static_cast<int>(rows.size());
    pair.x.resize(n);
    pair.y.resize(n);
    // x is always the lower column group, truth says which group causes.
    const int xcol = std::min(m.cause_first, m.effect_first) - 1;
    const int ycol = std::max(m.cause_first, m.effect_first) - 1;
    pair.truth = m.cause_first < m.effect_first ? 1 : -1;
    for (int i = 0; i < n; ++i) {
      pair.x[i] = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(xcol)];
      pair.y[i] = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(ycol)];
    }
    out.push_back(std::move(pair));
  }
  return out;
}

NamedGraph read_graph(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) {
    throw ParseError("'" + path + "': expected an object with a 'nodes' array");
  }

  NamedGraph g;
  std::map<std::string, int> index;
  for (const auto& node : doc["nodes"]) {
    if (!node.is_string()) throw ParseError("'" + path + "': node names must be strings");
    const std::string name = node.get<std::string>();
    if (index.count(name)) throw ParseError("'" + path + "': duplicate node '" + name + "'");
    index[name] = static_cast<int>(g.nodes.size());
    g.nodes.push_back(name);
  }
  if (g.nodes.empty()) throw ParseError("'" + path + "': empty node list");

  g.adjacency = AdjacencyMatrix(static_cast<int>(g.nodes.size()));
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw ParseError("'" + path + "': 'edges' must be an array");
    for (const auto& e : doc["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
        throw ParseError("'" + path + "': each edge must be a [parent, child] pair");
      }
      for (const auto& endpoint : {e[0], e[1]}) {
        if (!index.count(endpoint.get<std::string>())) {
          throw ParseError("'" + path + "': unknown node '" + endpoint.get<std::string>() +
                           "' in edge");
        }
      }
      const int a = index[e[0].get<std::string>()];
      const int b = index[e[1].get<std::string>()];
      if (a == b) throw ParseError("'" + path + "': self-loop on '" + g.nodes[static_cast<std::size_t>(a)] + "'");
      g.adjacency.set(a, b, true);
    }
  }
  if (!g.adjacency.is_acyclic()) throw ParseError("'" + path + "': graph has a cycle");
  return g;
}

void write_graph(const std::string& path, const NamedGraph& graph) {
  const int d = graph.adjacency.dim();
  if (static_cast<int>(graph.nodes.size()) != d) {
    throw std::invalid_argument("write_graph: node name count mismatch");
  }
  nlohmann::json doc;
  doc["nodes"] = graph.nodes;
  doc["edges"] = nlohmann::json::array();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i != j && graph.adjacency.at(i, j)) {
        doc["edges"].push_back({graph.nodes[static_cast<std::size_t>(i)],
                                graph.nodes[static_cast<std::size_t>(j)]});
      }
    }
  }
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw ParseError("cannot write '" + path + "'");
  outf << doc.dump(2) << '\n';
  if (!outf) throw ParseError("write to '" + path + "' failed");
}

}  // namespace cafpono

#include "thetabody/graph.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

#include "thetabody/errors.hpp"

namespace thetabody {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
  if (n < 0) throw InputError("vertex count must be non-negative");
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw InputError("edge endpoint out of range");
    if (u == v) throw InputError("loops are not allowed (vertex " + std::to_string(u + 1) + ")");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw InputError("duplicate edge");
  edges_ = std::move(edges);
  adj_.assign(n, {});
  matrix_.assign(n, std::vector<bool>(n, false));
  for (const auto& [u, v] : edges_) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
    matrix_[u][v] = matrix_[v][u] = true;
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

bool Graph::adjacent(int u, int v) const { return matrix_.at(u).at(v); }

Graph Graph::complement() const {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n_; ++u)
    for (int v = u + 1; v < n_; ++v)
      if (!adjacent(u, v)) e.emplace_back(u, v);
  return Graph(n_, std::move(e));
}

Graph cycle_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, std::move(e));
}

Graph path_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, std::move(e));
}

Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph(n, std::move(e));
}

Graph complete_bipartite_graph(int a, int b) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < a; ++u)
    for (int v = 0; v < b; ++v) e.emplace_back(u, a + v);
  return Graph(a + b, std::move(e));
}

Graph petersen_graph() {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  return Graph(10, std::move(e));
}

BipartiteCheck is_bipartite(const Graph& g) {
  const int n = g.num_vertices();
  BipartiteCheck out;
  out.color.assign(n, -1);
  std::vector<int> parent(n, -1), depth(n, 0);
  for (int root = 0; root < n; ++root) {
    if (out.color[root] != -1) continue;
    out.color[root] = 0;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : g.neighbors(u)) {
        if (out.color[v] == -1) {
          out.color[v] = 1 - out.color[u];
          parent[v] = u;
          depth[v] = depth[u] + 1;
          q.push(v);
        } else if (out.color[v] == out.color[u]) {
          // Walk both endpoints up the BFS tree to their common ancestor.
          std::vector<int> left{u}, right{v};
          int a = u, b = v;
          while (a != b) {
            if (depth[a] >= depth[b]) {
              a = parent[a];
              left.push_back(a);
            } else {
              b = parent[b];
              right.push_back(b);
            }
          }
          // u ... ancestor ... v, closed by the edge {v, u}.
          right.pop_back();
          out.odd_cycle = std::move(left);
          out.odd_cycle.insert(out.odd_cycle.end(), right.rbegin(), right.rend());
          out.bipartite = false;
          out.color.clear();
          return out;
        }
      }
    }
  }
  return out;
}

namespace {

Rational weight_from_json(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw InputError("edge weights must be rational strings or integers");
}

}  // namespace

WeightedGraph parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int n = -1, m = -1, line_no = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<Rational> weights;
  bool any_weight = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    if (tag == "p") {
      std::string kind;
      if (!(ls >> kind >> n >> m) || (kind != "edge" && kind != "col") || n < 0 || m < 0)
        throw InputError("line " + std::to_string(line_no) + ": expected 'p edge n m'");
    } else if (tag == "e") {
      if (n < 0) throw InputError("line " + std::to_string(line_no) + ": edge before 'p' line");
      int u = 0, v = 0;
      if (!(ls >> u >> v)) throw InputError("line " + std::to_string(line_no) + ": expected 'e u v'");
      if (u < 1 || v < 1 || u > n || v > n)
        throw InputError("line " + std::to_string(line_no) + ": vertex out of range");
      edges.emplace_back(u - 1, v - 1);
      std::string w;
      if (ls >> w) {
        any_weight = true;
        weights.push_back(parse_rational(w));
      } else {
        weights.emplace_back(1);
      }
    } else {
      throw InputError("line " + std::to_string(line_no) + ": unknown record '" + tag + "'");
    }
  }
  if (n < 0) throw InputError("missing 'p edge n m' header");
  if (static_cast<int>(edges.size()) != m)
    throw InputError("header announces " + std::to_string(m) + " edges, found " +
                     std::to_string(edges.size()));
  // Weights follow the sorted edge order of Graph.
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto norm = [&](std::size_t i) {
    auto [u, v] = edges[i];
    return u < v ? std::make_pair(u, v) : std::make_pair(v, u);
  };
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return norm(a) < norm(b); });
  WeightedGraph out{Graph(n, edges), std::nullopt};
  if (any_weight) {
    std::vector<Rational> w;
    for (auto i : order) w.push_back(weights[i]);
    out.weights = std::move(w);
  }
  return out;
}

WeightedGraph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw InputError("graph JSON needs \"n\" and \"edges\"");
  if (!j["n"].is_number_integer()) throw InputError("\"n\" must be an integer");
  const int n = j["n"].get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw InputError("edges must be [u, v] pairs of integers");
    const int u = e[0].get<int>(), v = e[1].get<int>();
    if (u < 1 || v < 1 || u > n || v > n) throw InputError("edge endpoint out of range");
    edges.emplace_back(u - 1, v - 1);
  }
  std::vector<Rational> weights;
  if (j.contains("weights")) {
    if (!j["weights"].is_array() || j["weights"].size() != edges.size())
      throw InputError("\"weights\" must list one weight per edge");
    for (const auto& w : j["weights"]) weights.push_back(weight_from_json(w));
  }
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto norm = [&](std::size_t i) {
    auto [u, v] = edges[i];
    return u < v ? std::make_pair(u, v) : std::make_pair(v, u);
  };
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return norm(a) < norm(b); });
  WeightedGraph out{Graph(n, edges), std::nullopt};
  if (!weights.empty()) {
    std::vector<Rational> w;
    for (auto i : order) w.push_back(weights[i]);
    out.weights = std::move(w);
  }
  return out;
}

WeightedGraph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return graph_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw InputError("invalid graph JSON in '" + path + "': " + e.what());
    }
  }
  return parse_dimacs(text);
}

nlohmann::json to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u + 1, v + 1});
  return {{"n", g.num_vertices()}, {"edges", edges}};
}

}  // namespace thetabody

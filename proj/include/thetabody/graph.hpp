#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "thetabody/rational.hpp"

namespace thetabody {

// Simple undirected graph on vertices 0..n-1. Edges are stored as (u, v) with
// u < v, sorted, without duplicates.
class Graph {
 public:
  Graph() = default;
  // Throws InputError on loops, duplicates or out-of-range endpoints.
  Graph(int n, std::vector<std::pair<int, int>> edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool adjacent(int u, int v) const;
  const std::vector<int>& neighbors(int v) const { return adj_.at(v); }
  Graph complement() const;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::vector<bool>> matrix_;
};

Graph cycle_graph(int n);
Graph path_graph(int n);
Graph complete_graph(int n);
Graph complete_bipartite_graph(int a, int b);
Graph petersen_graph();

struct BipartiteCheck {
  bool bipartite = true;
  std::vector<int> color;       // 0/1 per vertex when bipartite
  std::vector<int> odd_cycle;   // vertex sequence of an odd cycle otherwise
};
BipartiteCheck is_bipartite(const Graph& g);

// A graph with optional rational edge weights (one per edge, in edge order).
struct WeightedGraph {
  Graph graph;
  std::optional<std::vector<Rational>> weights;
};

// DIMACS: "c ..." comments, "p edge n m", then "e u v [w]" with 1-based ids.
WeightedGraph parse_dimacs(const std::string& text);
// {"n": 5, "edges": [[1,2],...], "weights": ["1","3/2",...]} with 1-based ids.
WeightedGraph graph_from_json(const nlohmann::json& j);
// Picks the format from the content (JSON if it starts with '{').
WeightedGraph read_graph(const std::string& path);
nlohmann::json to_json(const Graph& g);

}  // namespace thetabody

#pragma once

#include <vector>

#include "thetabody/graph.hpp"
#include "thetabody/moment.hpp"
#include "thetabody/sdp.hpp"

namespace thetabody {

enum class CombKind { StableSets, OddCycleFreeEdgeSets };

// Combinatorial quotient basis {x^U}: stable vertex sets for I_G, or edge
// sets containing no odd cycle for I(SG). Elements sorted by size, then
// lexicographically; the empty set comes first.
struct CombBasis {
  CombKind kind = CombKind::StableSets;
  int ground_size = 0;                  // n for stable sets, |E| for edge sets
  std::vector<std::vector<int>> elements;

  int count_up_to_size(int s) const;
  Monomial monomial(int i) const;       // squarefree x^U over ground_size vars
};

struct CombOptions {
  int enumeration_cap = 20000;
  SdpOptions sdp;
};

// Throws ResourceError when more than `cap` elements would be produced.
CombBasis enumerate_stable_sets(const Graph& g, int max_size, int cap = 20000);
CombBasis enumerate_odd_cycle_free(const Graph& g, int max_size, int cap = 20000);

// True if the edge subset (indices into g.edges()) spans a bipartite subgraph.
bool edge_set_is_bipartite(const Graph& g, const std::vector<int>& edge_ids);

// M_{B_k}(y): cell (U, U') is y_{U ∪ U'} when U ∪ U' is in the basis and 0
// otherwise. `basis` must contain every element of size <= 2k.
MomentTemplate build_comb_template(const CombBasis& basis, int k);

struct ThetaResult {
  double value = 0.0;
  std::vector<double> point;   // the B_1 coordinates (one per vertex / edge)
  SdpSolution solution;
  int side = 0;
  int y_dim = 0;
};

// max sum_i w_i y_i over TH_k(I_G); unit weights when `weights` is empty.
ThetaResult stable_set_theta(const Graph& g, int k, const std::vector<double>& weights = {},
                             const CombOptions& options = {});

// max sum_e w_e y_e over TH_k(I(SG)). Weights must be non-negative
// (InputError otherwise); all-zero weights give exactly 0 without solving.
ThetaResult cut_theta(const Graph& g, const std::vector<Rational>& weights, int k,
                      const CombOptions& options = {});

}  // namespace thetabody

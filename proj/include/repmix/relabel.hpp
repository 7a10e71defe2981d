#ifndef REPMIX_RELABEL_HPP
#define REPMIX_RELABEL_HPP

#include <vector>

#include "repmix/sampler.hpp"

namespace repmix {

/// Minimum-cost assignment on a square cost matrix; returns sigma with
/// sigma[row] = column. O(k^3) Hungarian method with potentials.
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost);

struct RelabeledDraws {
  PosteriorDraws draws;
  std::vector<std::vector<int>> permutations;  // per draw, old index -> new index
  int sweeps = 0;
  double final_cost = 0.0;
};

/// Classification probabilities P_ih for one draw, recomputed from its
/// weights and components against the data.
std::vector<double> classification_matrix(const Draw& draw, const Dataset& data);

/// Stephens' KL relabeling: alternate averaging the permuted classification
/// matrices and reassigning each draw by optimal assignment, until the total
/// cost decrease falls below 1e-10 or max_sweeps is hit.
RelabeledDraws relabel_stephens(const PosteriorDraws& draws, const Dataset& data,
                                int max_sweeps = 100);

}  // namespace repmix

#endif

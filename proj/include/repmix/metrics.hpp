#ifndef REPMIX_METRICS_HPP
#define REPMIX_METRICS_HPP

#include <functional>
#include <vector>

#include "repmix/sampler.hpp"

namespace repmix {

/// Pointwise-evaluable truth density with a box covering +-8 sd per dimension.
struct TruthDensity {
  std::function<double(const std::vector<double>&)> pdf;
  std::vector<double> box_lo;
  std::vector<double> box_hi;

  std::size_t dim() const { return box_lo.size(); }
};

/// KL(f0, fhat) by trapezoid quadrature on [lo, hi] with `nodes` points;
/// fhat is floored at 1e-300 inside the log.
double kl_quadrature_1d(const std::function<double(double)>& f0,
                        const std::function<double(double)>& fhat, double lo, double hi,
                        std::size_t nodes = 2048);

double kl_quadrature_2d(const std::function<double(double, double)>& f0,
                        const std::function<double(double, double)>& fhat, double lo1, double hi1,
                        double lo2, double hi2, std::size_t nodes_per_axis = 256);

struct KlReport {
  std::vector<double> per_draw;   // KL(f0, f_t) per retained draw
  double kl_of_mean_density = 0;  // KL(f0, average of the draw densities)
};

/// Per-draw KL to the truth plus the KL of the posterior-mean density,
/// sharing one pass over the quadrature grid. Supports m = 1 and m = 2.
KlReport kl_to_truth(const PosteriorDraws& draws, const TruthDensity& truth);

/// Mean over pairs i < j of |S_ij - T_ij| where S is the co-allocation
/// frequency across draws and T the truth co-membership indicator.
double similarity_misclassification(const PosteriorDraws& draws,
                                    const std::vector<int>& truth_labels);

/// Permutation-minimal total weight beyond k0 components: the sum of the
/// k - k0 smallest weights.
double sum_extra_weights(const std::vector<double>& weights, std::size_t k0);

struct ComponentSummary {
  double weight_mean = 0.0;
  double weight_sd = 0.0;
  std::vector<double> mean_mean, mean_sd;  // location, per dimension
  std::vector<double> sd_mean, sd_sd;      // scale sigma (not variance), per dimension
};

struct SummaryReport {
  std::vector<ComponentSummary> components;  // decreasing posterior mean weight
  bool has_kl = false;
  double kl_mean = 0.0;
  double kl_sd = 0.0;
  double kl_of_mean_density = 0.0;
  bool has_misclass = false;
  double misclass = 0.0;
  bool has_extra_weight = false;
  double extra_weight_mean = 0.0;
  double extra_weight_sd = 0.0;
};

/// Posterior summaries of relabeled draws; metrics are filled when the truth
/// density, truth labels, or k0 are supplied (pass nullptr / 0 to skip).
SummaryReport summarize(const PosteriorDraws& relabeled, const TruthDensity* truth,
                        const std::vector<int>* truth_labels, std::size_t k0);

/// Grid dump of the posterior mean density for external plotting.
struct DensityGrid {
  std::size_t m = 1;
  std::vector<double> axis1, axis2;   // axis2 empty in one dimension
  std::vector<double> mean_density;   // row-major over (axis1, axis2)
};

DensityGrid compute_density_grid(const PosteriorDraws& draws, const std::vector<double>& lo,
                                 const std::vector<double>& hi, std::size_t nodes_per_axis);

}  // namespace repmix

#endif

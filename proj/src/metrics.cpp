#include "repmix/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "repmix/calibration.hpp"
#include "repmix/special.hpp"

namespace repmix {

namespace {

double draw_density_1d(const Draw& draw, double x) {
  double f = 0.0;
  for (std::size_t h = 0; h < draw.weights.size(); ++h)
    f += draw.weights[h] * normal_pdf(x, draw.components[h].mean[0], draw.components[h].var[0]);
  return f;
}

double draw_density_2d(const Draw& draw, double x1, double x2) {
  double f = 0.0;
  for (std::size_t h = 0; h < draw.weights.size(); ++h) {
    const Component& c = draw.components[h];
    f += draw.weights[h] * normal_pdf(x1, c.mean[0], c.var[0]) * normal_pdf(x2, c.mean[1], c.var[1]);
  }
  return f;
}

inline double kl_term(double f0, double fhat) {
  if (f0 <= 0.0) return 0.0;
  return f0 * (std::log(f0) - std::log(std::max(fhat, 1e-300)));
}

}  // namespace

double kl_quadrature_1d(const std::function<double(double)>& f0,
                        const std::function<double(double)>& fhat, double lo, double hi,
                        std::size_t nodes) {
  if (nodes < 2) throw InputError("quadrature needs at least two nodes");
  const double dx = (hi - lo) / static_cast<double>(nodes - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double x = lo + dx * static_cast<double>(i);
    const double w = (i == 0 || i + 1 == nodes) ? 0.5 : 1.0;
    const double term = kl_term(f0(x), fhat(x));
    if (!std::isfinite(term))
      throw NumericalError("non-finite KL integrand at x=" + std::to_string(x));
    sum += w * term;
  }
  return sum * dx;
}

double kl_quadrature_2d(const std::function<double(double, double)>& f0,
                        const std::function<double(double, double)>& fhat, double lo1, double hi1,
                        double lo2, double hi2, std::size_t nodes_per_axis) {
  const std::size_t N = nodes_per_axis;
  if (N < 2) throw InputError("quadrature needs at least two nodes");
  const double dx = (hi1 - lo1) / static_cast<double>(N - 1);
  const double dy = (hi2 - lo2) / static_cast<double>(N - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double x = lo1 + dx * static_cast<double>(i);
    const double wx = (i == 0 || i + 1 == N) ? 0.5 : 1.0;
    for (std::size_t j = 0; j < N; ++j) {
      const double y = lo2 + dy * static_cast<double>(j);
      const double wy = (j == 0 || j + 1 == N) ? 0.5 : 1.0;
      sum += wx * wy * kl_term(f0(x, y), fhat(x, y));
    }
  }
  return sum * dx * dy;
}

KlReport kl_to_truth(const PosteriorDraws& draws, const TruthDensity& truth) {
  KlReport report;
  const std::size_t T = draws.draws.size();
  if (T == 0) return report;
  report.per_draw.assign(T, 0.0);

  if (draws.m == 1) {
    const std::size_t N = 2048;
    const double lo = truth.box_lo[0];
    const double hi = truth.box_hi[0];
    const double dx = (hi - lo) / static_cast<double>(N - 1);
    std::vector<double> f0(N), mean_f(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) f0[i] = truth.pdf({lo + dx * static_cast<double>(i)});
    for (std::size_t t = 0; t < T; ++t) {
      double acc = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double x = lo + dx * static_cast<double>(i);
        const double ft = draw_density_1d(draws.draws[t], x);
        mean_f[i] += ft;
        const double w = (i == 0 || i + 1 == N) ? 0.5 : 1.0;
        acc += w * kl_term(f0[i], ft);
      }
      report.per_draw[t] = acc * dx;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double w = (i == 0 || i + 1 == N) ? 0.5 : 1.0;
      acc += w * kl_term(f0[i], mean_f[i] / static_cast<double>(T));
    }
    report.kl_of_mean_density = acc * dx;
    return report;
  }

  if (draws.m == 2) {
    const std::size_t N = 256;
    const double lo1 = truth.box_lo[0], hi1 = truth.box_hi[0];
    const double lo2 = truth.box_lo[1], hi2 = truth.box_hi[1];
    const double dx = (hi1 - lo1) / static_cast<double>(N - 1);
    const double dy = (hi2 - lo2) / static_cast<double>(N - 1);
    std::vector<double> f0(N * N), mean_f(N * N, 0.0);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        f0[i * N + j] = truth.pdf({lo1 + dx * static_cast<double>(i),
                                   lo2 + dy * static_cast<double>(j)});
    for (std::size_t t = 0; t < T; ++t) {
      double acc = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double x = lo1 + dx * static_cast<double>(i);
        const double wx = (i == 0 || i + 1 == N) ? 0.5 : 1.0;
        for (std::size_t j = 0; j < N; ++j) {
          const double y = lo2 + dy * static_cast<double>(j);
          const double wy = (j == 0 || j + 1 == N) ? 0.5 : 1.0;
          const double ft = draw_density_2d(draws.draws[t], x, y);
          mean_f[i * N + j] += ft;
          acc += wx * wy * kl_term(f0[i * N + j], ft);
        }
      }
      report.per_draw[t] = acc * dx * dy;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        const double wx = (i == 0 || i + 1 == N) ? 0.5 : 1.0;
        const double wy = (j == 0 || j + 1 == N) ? 0.5 : 1.0;
        acc += wx * wy * kl_term(f0[i * N + j], mean_f[i * N + j] / static_cast<double>(T));
      }
    report.kl_of_mean_density = acc * dx * dy;
    return report;
  }

  throw InputError("KL quadrature supports one or two dimensions");
}

double similarity_misclassification(const PosteriorDraws& draws,
                                    const std::vector<int>& truth_labels) {
  const std::size_t n = truth_labels.size();
  if (n == 0) throw InputError("misclassification needs truth labels");
  const std::size_t T = draws.draws.size();
  if (T == 0) throw InputError("misclassification needs retained draws");
  for (const Draw& d : draws.draws)
    if (d.allocations.size() != n)
      throw InputError("draw allocations do not match the label count");

  // co-allocation counts over pairs i < j, bucketed by component per draw
  std::vector<std::uint32_t> counts(n * (n - 1) / 2, 0);
  auto pidx = [n](std::size_t i, std::size_t j) {  // requires i < j
    return (j * (j - 1)) / 2 + i;
  };
  std::vector<std::vector<std::uint32_t>> buckets(draws.k);
  for (const Draw& d : draws.draws) {
    for (auto& b : buckets) b.clear();
    for (std::size_t i = 0; i < n; ++i)
      buckets[static_cast<std::size_t>(d.allocations[i])].push_back(
          static_cast<std::uint32_t>(i));
    for (const auto& b : buckets)
      for (std::size_t a = 1; a < b.size(); ++a)
        for (std::size_t c = 0; c < a; ++c) ++counts[pidx(b[c], b[a])];
  }

  double total = 0.0;
  std::size_t npairs = 0;
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const double S = static_cast<double>(counts[pidx(i, j)]) / static_cast<double>(T);
      const double Tij = truth_labels[i] == truth_labels[j] ? 1.0 : 0.0;
      total += std::fabs(S - Tij);
      ++npairs;
    }
  }
  return total / static_cast<double>(npairs);
}

double sum_extra_weights(const std::vector<double>& weights, std::size_t k0) {
  if (k0 > weights.size()) throw InputError("k0 exceeds the number of components");
  std::vector<double> sorted = weights;
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + k0 < sorted.size(); ++i) sum += sorted[i];
  return sum;
}

SummaryReport summarize(const PosteriorDraws& relabeled, const TruthDensity* truth,
                        const std::vector<int>* truth_labels, std::size_t k0) {
  SummaryReport report;
  const std::size_t T = relabeled.draws.size();
  const std::size_t k = relabeled.k;
  const std::size_t m = relabeled.m;
  if (T == 0) return report;

  std::vector<ComponentSummary> comps(k);
  for (std::size_t h = 0; h < k; ++h) {
    std::vector<double> w(T), mu(T), sd(T);
    ComponentSummary& cs = comps[h];
    for (std::size_t t = 0; t < T; ++t) w[t] = relabeled.draws[t].weights[h];
    cs.weight_mean = mean_of(w);
    cs.weight_sd = sd_of(w);
    cs.mean_mean.resize(m);
    cs.mean_sd.resize(m);
    cs.sd_mean.resize(m);
    cs.sd_sd.resize(m);
    for (std::size_t d = 0; d < m; ++d) {
      for (std::size_t t = 0; t < T; ++t) {
        mu[t] = relabeled.draws[t].components[h].mean[d];
        sd[t] = std::sqrt(relabeled.draws[t].components[h].var[d]);
      }
      cs.mean_mean[d] = mean_of(mu);
      cs.mean_sd[d] = sd_of(mu);
      cs.sd_mean[d] = mean_of(sd);
      cs.sd_sd[d] = sd_of(sd);
    }
  }
  std::sort(comps.begin(), comps.end(), [](const ComponentSummary& a, const ComponentSummary& b) {
    return a.weight_mean > b.weight_mean;
  });
  report.components = std::move(comps);

  if (truth != nullptr) {
    const KlReport kl = kl_to_truth(relabeled, *truth);
    report.has_kl = true;
    report.kl_mean = mean_of(kl.per_draw);
    report.kl_sd = sd_of(kl.per_draw);
    report.kl_of_mean_density = kl.kl_of_mean_density;
  }
  if (truth_labels != nullptr && !truth_labels->empty()) {
    report.has_misclass = true;
    report.misclass = similarity_misclassification(relabeled, *truth_labels);
  }
  if (k0 > 0) {
    std::vector<double> extra(T);
    for (std::size_t t = 0; t < T; ++t)
      extra[t] = sum_extra_weights(relabeled.draws[t].weights, k0);
    report.has_extra_weight = true;
    report.extra_weight_mean = mean_of(extra);
    report.extra_weight_sd = sd_of(extra);
  }
  return report;
}

DensityGrid compute_density_grid(const PosteriorDraws& draws, const std::vector<double>& lo,
                                 const std::vector<double>& hi, std::size_t nodes_per_axis) {
  DensityGrid grid;
  grid.m = draws.m;
  const std::size_t T = draws.draws.size();
  const std::size_t N = nodes_per_axis;
  if (draws.m == 1) {
    grid.axis1.resize(N);
    const double dx = (hi[0] - lo[0]) / static_cast<double>(N - 1);
    for (std::size_t i = 0; i < N; ++i) grid.axis1[i] = lo[0] + dx * static_cast<double>(i);
    grid.mean_density.assign(N, 0.0);
    for (const Draw& d : draws.draws)
      for (std::size_t i = 0; i < N; ++i) grid.mean_density[i] += draw_density_1d(d, grid.axis1[i]);
    for (double& f : grid.mean_density) f /= static_cast<double>(T);
  } else if (draws.m == 2) {
    grid.axis1.resize(N);
    grid.axis2.resize(N);
    const double dx = (hi[0] - lo[0]) / static_cast<double>(N - 1);
    const double dy = (hi[1] - lo[1]) / static_cast<double>(N - 1);
    for (std::size_t i = 0; i < N; ++i) {
      grid.axis1[i] = lo[0] + dx * static_cast<double>(i);
      grid.axis2[i] = lo[1] + dy * static_cast<double>(i);
    }
    grid.mean_density.assign(N * N, 0.0);
    for (const Draw& d : draws.draws)
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
          grid.mean_density[i * N + j] += draw_density_2d(d, grid.axis1[i], grid.axis2[j]);
    for (double& f : grid.mean_density) f /= static_cast<double>(T);
  } else {
    throw InputError("density grid supports one or two dimensions");
  }
  return grid;
}

}  // namespace repmix

#include "repmix/relabel.hpp"

#include <cmath>
#include <limits>

#include "repmix/special.hpp"

namespace repmix {

std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> sigma(n);
  for (int j = 1; j <= n; ++j) sigma[p[j] - 1] = j - 1;
  return sigma;
}

std::vector<double> classification_matrix(const Draw& draw, const Dataset& data) {
  const std::size_t k = draw.weights.size();
  const std::size_t m = data.m;
  std::vector<double> P(data.n * k);
  std::vector<double> lp(k);
  for (std::size_t i = 0; i < data.n; ++i) {
    double lp_max = -std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < k; ++h) {
      double v = draw.weights[h] > 0.0 ? std::log(draw.weights[h])
                                       : -std::numeric_limits<double>::infinity();
      for (std::size_t d = 0; d < m; ++d)
        v += log_normal_pdf(data.at(i, d), draw.components[h].mean[d], draw.components[h].var[d]);
      lp[h] = v;
      lp_max = std::max(lp_max, v);
    }
    double sum = 0.0;
    for (std::size_t h = 0; h < k; ++h) {
      lp[h] = std::exp(lp[h] - lp_max);
      sum += lp[h];
    }
    for (std::size_t h = 0; h < k; ++h) P[i * k + h] = lp[h] / sum;
  }
  return P;
}

RelabeledDraws relabel_stephens(const PosteriorDraws& draws, const Dataset& data, int max_sweeps) {
  const std::size_t T = draws.draws.size();
  const std::size_t k = draws.k;
  const std::size_t n = data.n;
  RelabeledDraws out;
  out.permutations.assign(T, std::vector<int>(k));
  for (auto& perm : out.permutations)
    for (std::size_t h = 0; h < k; ++h) perm[h] = static_cast<int>(h);
  if (T == 0 || n == 0 || k < 2) {
    out.draws = draws;
    return out;
  }

  std::vector<std::vector<double>> P(T);
  for (std::size_t t = 0; t < T; ++t) P[t] = classification_matrix(draws.draws[t], data);

  // entropy rows sum_i P_ih log P_ih, constant across sweeps
  std::vector<std::vector<double>> entropy(T, std::vector<double>(k, 0.0));
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t h = 0; h < k; ++h) {
        const double p = P[t][i * k + h];
        if (p > 0.0) entropy[t][h] += p * std::log(p);
      }

  std::vector<double> Q(n * k), logQ(n * k);
  std::vector<std::vector<double>> cost(k, std::vector<double>(k));
  double prev_cost = std::numeric_limits<double>::infinity();

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    // Q = average of the permuted classification matrices
    std::fill(Q.begin(), Q.end(), 0.0);
    for (std::size_t t = 0; t < T; ++t) {
      const auto& perm = out.permutations[t];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t h = 0; h < k; ++h)
          Q[i * k + static_cast<std::size_t>(perm[h])] += P[t][i * k + h];
    }
    for (std::size_t idx = 0; idx < n * k; ++idx) {
      Q[idx] /= static_cast<double>(T);
      logQ[idx] = std::log(std::max(Q[idx], 1e-300));
    }

    double total = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t h = 0; h < k; ++h) {
        for (std::size_t l = 0; l < k; ++l) {
          double dot = 0.0;
          for (std::size_t i = 0; i < n; ++i) dot += P[t][i * k + h] * logQ[i * k + l];
          cost[h][l] = entropy[t][h] - dot;
        }
      }
      const std::vector<int> sigma = solve_assignment(cost);
      out.permutations[t] = sigma;
      for (std::size_t h = 0; h < k; ++h) total += cost[h][static_cast<std::size_t>(sigma[h])];
    }

    out.sweeps = sweep;
    out.final_cost = total;
    if (prev_cost - total < 1e-10) break;
    prev_cost = total;
  }

  // apply permutations: component h of draw t becomes component sigma[h]
  out.draws.k = draws.k;
  out.draws.m = draws.m;
  out.draws.draws.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    const auto& src = draws.draws[t];
    const auto& perm = out.permutations[t];
    Draw dst;
    dst.iter = src.iter;
    dst.weights.resize(k);
    dst.components.resize(k);
    for (std::size_t h = 0; h < k; ++h) {
      dst.weights[static_cast<std::size_t>(perm[h])] = src.weights[h];
      dst.components[static_cast<std::size_t>(perm[h])] = src.components[h];
    }
    dst.allocations.resize(src.allocations.size());
    for (std::size_t i = 0; i < src.allocations.size(); ++i)
      dst.allocations[i] = perm[static_cast<std::size_t>(src.allocations[i])];
    out.draws.draws[t] = std::move(dst);
  }
  return out;
}

}  // namespace repmix

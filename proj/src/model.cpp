#include "repmix/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "repmix/special.hpp"

namespace repmix {

MixtureConfig MixtureConfig::overfitted(std::size_t k, std::size_t m) {
  MixtureConfig cfg;
  cfg.k = k;
  cfg.m = m;
  cfg.alpha.assign(k, 1.0 / static_cast<double>(k));
  return cfg;
}

BasePrior BasePrior::empirical(const Dataset& data) {
  if (data.n == 0) throw InputError("empirical prior needs at least one observation");
  BasePrior prior;
  prior.m0.resize(data.m);
  prior.v0.resize(data.m);
  prior.b0.resize(data.m);
  prior.a0 = 2.0;
  for (std::size_t d = 0; d < data.m; ++d) {
    double mean = 0.0;
    double lo = data.at(0, d), hi = data.at(0, d);
    for (std::size_t i = 0; i < data.n; ++i) {
      mean += data.at(i, d);
      lo = std::min(lo, data.at(i, d));
      hi = std::max(hi, data.at(i, d));
    }
    mean /= static_cast<double>(data.n);
    double ss = 0.0;
    for (std::size_t i = 0; i < data.n; ++i) {
      const double z = data.at(i, d) - mean;
      ss += z * z;
    }
    const double var = data.n > 1 ? ss / static_cast<double>(data.n - 1) : 1.0;
    const double range = hi > lo ? hi - lo : 1.0;
    prior.m0[d] = mean;
    prior.v0[d] = 3.0 * var;
    prior.b0[d] = 0.05 * range * range;
  }
  return prior;
}

BasePrior BasePrior::standard(std::size_t m) {
  BasePrior prior;
  prior.m0.assign(m, 0.0);
  prior.v0.assign(m, 1.0);
  prior.a0 = 2.0;
  prior.b0.assign(m, 1.0);
  return prior;
}

double BasePrior::log_g0(const Component& c) const {
  if (c.dim() != dim()) throw InputError("component dimension does not match prior");
  double lp = 0.0;
  for (std::size_t d = 0; d < dim(); ++d) {
    lp += log_normal_pdf(c.mean[d], m0[d], v0[d]);
    lp += log_inv_gamma_pdf(c.var[d], a0, b0[d]);
  }
  return lp;
}

Component BasePrior::draw(Rng& rng) const {
  Component c;
  c.mean.resize(dim());
  c.var.resize(dim());
  for (std::size_t d = 0; d < dim(); ++d) {
    c.mean[d] = rng.normal(m0[d], std::sqrt(v0[d]));
    c.var[d] = rng.inv_gamma(a0, b0[d]);
  }
  return c;
}

std::vector<double> BasePrior::draw_location(Rng& rng) const {
  std::vector<double> mu(dim());
  for (std::size_t d = 0; d < dim(); ++d) mu[d] = rng.normal(m0[d], std::sqrt(v0[d]));
  return mu;
}

double eval_mixture_density(const MixtureState& state, const std::vector<double>& y) {
  const std::size_t m = state.dim();
  if (y.size() != m) throw InputError("point dimension does not match mixture");
  double f = 0.0;
  for (std::size_t h = 0; h < state.k(); ++h) {
    double lp = 0.0;
    for (std::size_t d = 0; d < m; ++d)
      lp += log_normal_pdf(y[d], state.components[h].mean[d], state.components[h].var[d]);
    f += state.weights[h] * std::exp(lp);
  }
  return f;
}

std::vector<Violation> validate_config(const MixtureConfig& cfg, const BasePrior& prior) {
  std::vector<Violation> out;
  auto error = [&](const std::string& msg) { out.push_back({Violation::Level::Error, msg}); };
  auto warn = [&](const std::string& msg) { out.push_back({Violation::Level::Warning, msg}); };

  if (cfg.k < 1) error("component bound k < 1");
  if (cfg.m < 1) error("dimension m < 1");
  if (cfg.alpha.size() != cfg.k) error("alpha length does not equal k");
  double alpha_max = 0.0;
  for (double a : cfg.alpha) {
    if (!(a > 0.0)) error("alpha entries must be positive");
    alpha_max = std::max(alpha_max, a);
  }
  if (!cfg.alpha.empty() && alpha_max >= static_cast<double>(cfg.m) / 2.0)
    warn("alpha exceeds m/2; extra components may keep non-vanishing weight");
  if (!(prior.a0 > 1.0)) error("variance prior shape <= 1");
  if (prior.m0.size() != cfg.m || prior.v0.size() != cfg.m || prior.b0.size() != cfg.m)
    error("prior vectors do not match dimension m");
  for (double v : prior.v0)
    if (!(v > 0.0)) error("location prior variance v0 must be positive");
  for (double b : prior.b0)
    if (!(b > 0.0)) error("variance prior scale b0 must be positive");
  for (double v : prior.m0)
    if (!std::isfinite(v)) error("location prior mean m0 must be finite");
  return out;
}

namespace {

bool parse_double(const std::string& tok, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(tok, &pos);
    while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
    return pos == tok.size();
  } catch (...) {
    return false;
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

Dataset Dataset::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset file: " + path);

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw InputError("dataset file is empty: " + path);

  // A header is present when the first line does not parse as numbers; the
  // label column exists only when the header names its last column "label".
  auto first = split_csv_line(lines.front());
  bool header = false;
  bool labelled = false;
  {
    double tmp;
    for (const auto& tok : first)
      if (!parse_double(tok, tmp)) header = true;
  }
  std::size_t ncols = first.size();
  if (header && ncols >= 2 && first.back() == "label") labelled = true;

  Dataset data;
  data.m = labelled ? ncols - 1 : ncols;
  const std::size_t start = header ? 1 : 0;
  for (std::size_t r = start; r < lines.size(); ++r) {
    auto toks = split_csv_line(lines[r]);
    if (toks.size() != ncols)
      throw InputError("row " + std::to_string(r + 1) + " has " + std::to_string(toks.size()) +
                       " columns, expected " + std::to_string(ncols));
    for (std::size_t d = 0; d < data.m; ++d) {
      double v;
      if (!parse_double(toks[d], v) || !std::isfinite(v))
        throw InputError("row " + std::to_string(r + 1) + ": bad value '" + toks[d] + "'");
      data.values.push_back(v);
    }
    if (labelled) {
      double v;
      if (!parse_double(toks.back(), v))
        throw InputError("row " + std::to_string(r + 1) + ": bad label '" + toks.back() + "'");
      data.labels.push_back(static_cast<int>(v));
    }
  }
  data.n = data.values.size() / data.m;
  if (data.n < 1) throw InputError("dataset has no observations: " + path);
  return data;
}

void Dataset::to_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write dataset file: " + path);
  for (std::size_t d = 0; d < m; ++d) out << (d ? "," : "") << "x" << (d + 1);
  if (has_labels()) out << ",label";
  out << "\n";
  char buf[40];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < m; ++d) {
      std::snprintf(buf, sizeof(buf), "%.17g", at(i, d));
      out << (d ? "," : "") << buf;
    }
    if (has_labels()) out << "," << labels[i];
    out << "\n";
  }
}

}  // namespace repmix

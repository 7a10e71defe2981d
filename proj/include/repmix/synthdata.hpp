#ifndef REPMIX_SYNTHDATA_HPP
#define REPMIX_SYNTHDATA_HPP

#include <cstdint>
#include <string>

#include "repmix/metrics.hpp"
#include "repmix/model.hpp"

namespace repmix {

/// Synthetic benchmark densities: a standard normal (Ia), a scale mixture
/// sharing one location (Ib), a Student t (Ic), poorly/well separated
/// Gaussian pairs (IIa, IIb), Gaussian-plus-skewed pairs (IIIa, IIIb) and a
/// two-dimensional pair of correlated Gaussians (IV).
enum class Scenario { Ia, Ib, Ic, IIa, IIb, IIIa, IIIb, IV };

Scenario scenario_from_string(const std::string& name);
std::string scenario_to_string(Scenario s);

struct ScenarioSpec {
  Scenario id = Scenario::Ia;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
};

struct GeneratedData {
  Dataset data;
  TruthDensity truth;
  std::size_t k0 = 1;  // generative number of components
  std::size_t dim = 1;
};

/// Seeded draw of n observations plus the exact generative density. Labels
/// are recorded for every scenario (single-component scenarios label all 1).
GeneratedData generate_scenario(const ScenarioSpec& spec);

/// The truth oracle alone (no data), e.g. for quadrature checks.
TruthDensity scenario_truth(Scenario id);

std::size_t scenario_k0(Scenario id);
std::size_t scenario_dim(Scenario id);

}  // namespace repmix

#endif

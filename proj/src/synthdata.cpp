#include "repmix/synthdata.hpp"

#include <cmath>

#include "repmix/special.hpp"

namespace repmix {

namespace {

constexpr double kGammaShape = 3.0;  // skewed component: shifted unit-sd gamma
const double kGammaScale = 1.0 / std::sqrt(3.0);
constexpr double kOffsetPoor = 2.5;
constexpr double kOffsetWell = 6.0;
constexpr double kTDf = 4.0;

// scenario IV covariances
constexpr double kV1_11 = 2.0;
const double kV1_12 = 0.9 * std::sqrt(2.0);
constexpr double kV1_22 = 1.0;
constexpr double kV2_11 = 1.0;
constexpr double kV2_12 = -0.8;
constexpr double kV2_22 = 1.0;

double skew_pdf(double x, double offset) {
  // gamma of unit standard deviation shifted to mean zero, then moved by `offset`
  return std::exp(
      log_gamma_pdf(x - offset + kGammaShape * kGammaScale, kGammaShape, kGammaScale));
}

}  // namespace

Scenario scenario_from_string(const std::string& name) {
  if (name == "Ia") return Scenario::Ia;
  if (name == "Ib") return Scenario::Ib;
  if (name == "Ic") return Scenario::Ic;
  if (name == "IIa") return Scenario::IIa;
  if (name == "IIb") return Scenario::IIb;
  if (name == "IIIa") return Scenario::IIIa;
  if (name == "IIIb") return Scenario::IIIb;
  if (name == "IV") return Scenario::IV;
  throw InputError("unknown scenario: " + name);
}

std::string scenario_to_string(Scenario s) {
  switch (s) {
    case Scenario::Ia: return "Ia";
    case Scenario::Ib: return "Ib";
    case Scenario::Ic: return "Ic";
    case Scenario::IIa: return "IIa";
    case Scenario::IIb: return "IIb";
    case Scenario::IIIa: return "IIIa";
    case Scenario::IIIb: return "IIIb";
    case Scenario::IV: return "IV";
  }
  throw InputError("unknown scenario id");
}

std::size_t scenario_k0(Scenario id) {
  switch (id) {
    case Scenario::Ia:
    case Scenario::Ic: return 1;
    default: return 2;
  }
}

std::size_t scenario_dim(Scenario id) { return id == Scenario::IV ? 2 : 1; }

TruthDensity scenario_truth(Scenario id) {
  TruthDensity t;
  switch (id) {
    case Scenario::Ia:
      t.pdf = [](const std::vector<double>& x) { return normal_pdf(x[0], 0.0, 1.0); };
      t.box_lo = {-8.0};
      t.box_hi = {8.0};
      break;
    case Scenario::Ib:
      t.pdf = [](const std::vector<double>& x) {
        return 0.7 * normal_pdf(x[0], 0.0, 0.04) + 0.3 * normal_pdf(x[0], 0.0, 4.0);
      };
      t.box_lo = {-16.0};
      t.box_hi = {16.0};
      break;
    case Scenario::Ic:
      t.pdf = [](const std::vector<double>& x) { return std::exp(log_student_t_pdf(x[0], kTDf)); };
      t.box_lo = {-8.0 * std::sqrt(2.0)};
      t.box_hi = {8.0 * std::sqrt(2.0)};
      break;
    case Scenario::IIa:
      t.pdf = [](const std::vector<double>& x) {
        return 0.5 * normal_pdf(x[0], 0.0, 1.0) + 0.5 * normal_pdf(x[0], kOffsetPoor, 1.0);
      };
      t.box_lo = {-8.0};
      t.box_hi = {kOffsetPoor + 8.0};
      break;
    case Scenario::IIb:
      t.pdf = [](const std::vector<double>& x) {
        return 0.5 * normal_pdf(x[0], 0.0, 1.0) + 0.5 * normal_pdf(x[0], kOffsetWell, 1.0);
      };
      t.box_lo = {-8.0};
      t.box_hi = {kOffsetWell + 8.0};
      break;
    case Scenario::IIIa:
      t.pdf = [](const std::vector<double>& x) {
        return 0.5 * normal_pdf(x[0], 0.0, 1.0) + 0.5 * skew_pdf(x[0], kOffsetPoor);
      };
      t.box_lo = {-8.0};
      t.box_hi = {kOffsetPoor + 8.0};
      break;
    case Scenario::IIIb:
      t.pdf = [](const std::vector<double>& x) {
        return 0.5 * normal_pdf(x[0], 0.0, 1.0) + 0.5 * skew_pdf(x[0], kOffsetWell);
      };
      t.box_lo = {-8.0};
      t.box_hi = {kOffsetWell + 8.0};
      break;
    case Scenario::IV:
      t.pdf = [](const std::vector<double>& x) {
        return 0.5 * binormal_pdf(x[0], x[1], 0.0, 0.0, kV1_11, kV1_12, kV1_22) +
               0.5 * binormal_pdf(x[0], x[1], 4.0, 4.0, kV2_11, kV2_12, kV2_22);
      };
      t.box_lo = {-8.0 * std::sqrt(2.0), -8.0};
      t.box_hi = {4.0 + 8.0, 4.0 + 8.0};
      break;
  }
  return t;
}

GeneratedData generate_scenario(const ScenarioSpec& spec) {
  GeneratedData out;
  out.k0 = scenario_k0(spec.id);
  out.dim = scenario_dim(spec.id);
  out.truth = scenario_truth(spec.id);
  out.data.m = out.dim;
  out.data.n = spec.n;
  out.data.values.reserve(spec.n * out.dim);
  out.data.labels.reserve(spec.n);

  Rng rng(spec.seed);
  for (std::size_t i = 0; i < spec.n; ++i) {
    int label = 1;
    switch (spec.id) {
      case Scenario::Ia:
        out.data.values.push_back(rng.normal());
        break;
      case Scenario::Ib:
        if (rng.uniform() < 0.7) {
          out.data.values.push_back(rng.normal(0.0, 0.2));
          label = 1;
        } else {
          out.data.values.push_back(rng.normal(0.0, 2.0));
          label = 2;
        }
        break;
      case Scenario::Ic:
        out.data.values.push_back(rng.student_t(kTDf));
        break;
      case Scenario::IIa:
      case Scenario::IIb: {
        const double off = spec.id == Scenario::IIa ? kOffsetPoor : kOffsetWell;
        if (rng.uniform() < 0.5) {
          out.data.values.push_back(rng.normal());
          label = 1;
        } else {
          out.data.values.push_back(rng.normal(off, 1.0));
          label = 2;
        }
        break;
      }
      case Scenario::IIIa:
      case Scenario::IIIb: {
        const double off = spec.id == Scenario::IIIa ? kOffsetPoor : kOffsetWell;
        if (rng.uniform() < 0.5) {
          out.data.values.push_back(rng.normal());
          label = 1;
        } else {
          out.data.values.push_back(kGammaScale * rng.gamma(kGammaShape) -
                                    kGammaShape * kGammaScale + off);
          label = 2;
        }
        break;
      }
      case Scenario::IV: {
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        if (rng.uniform() < 0.5) {
          // Cholesky of [[2, 0.9 sqrt 2], [0.9 sqrt 2, 1]]
          const double l11 = std::sqrt(kV1_11);
          const double l21 = kV1_12 / l11;
          const double l22 = std::sqrt(kV1_22 - l21 * l21);
          out.data.values.push_back(l11 * z1);
          out.data.values.push_back(l21 * z1 + l22 * z2);
          label = 1;
        } else {
          const double l11 = std::sqrt(kV2_11);
          const double l21 = kV2_12 / l11;
          const double l22 = std::sqrt(kV2_22 - l21 * l21);
          out.data.values.push_back(4.0 + l11 * z1);
          out.data.values.push_back(4.0 + l21 * z1 + l22 * z2);
          label = 2;
        }
        break;
      }
    }
    out.data.labels.push_back(label);
  }
  return out;
}

}  // namespace repmix

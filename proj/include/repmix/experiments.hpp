#ifndef REPMIX_EXPERIMENTS_HPP
#define REPMIX_EXPERIMENTS_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "repmix/calibration.hpp"
#include "repmix/metrics.hpp"
#include "repmix/relabel.hpp"
#include "repmix/sampler.hpp"
#include "repmix/synthdata.hpp"

namespace repmix {

/// Where the observations come from: a CSV file or a seeded scenario.
struct DataSpec {
  std::string path;
  bool has_scenario = false;
  ScenarioSpec scenario;
};

/// One fit, fully specified. A manifest written after a run is itself a
/// valid config and reproduces the run byte for byte.
struct RunConfig {
  DataSpec data;
  std::size_t k = 6;
  std::vector<double> alpha;  // empty: 1/k each
  bool prior_override = false;
  BasePrior prior;  // used when prior_override, else empirical
  RepulsionSpec repulsion;
  bool tau_auto = true;
  double calibration_c = 4.0;
  std::size_t calibration_mc = 10000;
  std::uint64_t calibration_seed = 0;  // 0: derived from the MCMC seed
  McmcConfig mcmc;
  int chains = 1;
  int jobs = 1;
  std::size_t k0 = 0;  // 0: unknown, extra-weight metrics skipped
  std::string out_dir;
};

struct FitOutput {
  RunConfig resolved;  // concrete prior, tau and seeds
  Dataset data;
  bool has_truth = false;
  TruthDensity truth;
  PosteriorDraws raw;
  RelabeledDraws relabeled;
  SummaryReport summary;
  bool has_calibration = false;
  CalibrationResult calibration;
  std::vector<Violation> warnings;
  double wall_seconds = 0.0;
};

/// Calibrate (when tau is auto), run the chains, relabel and summarize.
FitOutput run_fit(const RunConfig& cfg);

/// draws.csv, summary.json, density_grid.csv and manifest.json under out_dir.
void write_fit_artifacts(const FitOutput& fit, const std::string& out_dir);

/// Parse a config file, or the "config" block of a previously written manifest.
RunConfig load_run_config(const std::string& path);

std::string summary_to_json(const SummaryReport& report);

// -- experiment suites ------------------------------------------------------

/// Replicated comparison of repulsive and non-repulsive fits on one scenario;
/// arms share the data seed within a replicate.
struct ReplicateCell {
  std::vector<SummaryReport> reps;  // one per replicate
};

struct Table1Result {
  std::array<std::array<ReplicateCell, 2>, 2> cells;  // [Ia, Ib][non-repulsive, repulsive]
  int replicates = 0;
  std::uint64_t seed = 0;
};

Table1Result run_table1(const std::string& out_dir, int replicates, int jobs, std::uint64_t seed,
                        const McmcConfig& mcmc_base, std::size_t n = 1000);

struct Table2Result {
  std::vector<Scenario> scenarios;
  std::vector<std::size_t> sample_sizes;
  // cells[scenario][sample_size][arm] with arm 0 = non-repulsive, 1 = repulsive
  std::vector<std::vector<std::array<ReplicateCell, 2>>> cells;
  int replicates = 0;
  std::uint64_t seed = 0;
};

Table2Result run_table2(const std::string& out_dir, int replicates, int jobs, std::uint64_t seed,
                        const McmcConfig& mcmc_base,
                        const std::vector<Scenario>& scenarios = {Scenario::Ic, Scenario::IIa,
                                                                  Scenario::IIb, Scenario::IIIa,
                                                                  Scenario::IIIb, Scenario::IV},
                        const std::vector<std::size_t>& sample_sizes = {100, 1000});

struct RealDataEntry {
  std::size_t k = 0;
  bool repulsive = false;
  SummaryReport summary;
  std::vector<double> per_draw_extra;  // k0-based, when k0 known
  std::size_t significant_components = 0;  // posterior mean weight > 0.05
};

struct RealDataResult {
  std::string name;
  std::vector<RealDataEntry> entries;
};

/// galaxy/acidity: five-component full-kernel fits under both priors.
/// iris: location-only fits with k = 6 and k = 10, extra weights at k0 = 3.
RealDataResult run_realdata(const std::string& name, const std::string& data_path,
                            const std::string& out_dir, int jobs, std::uint64_t seed,
                            const McmcConfig& mcmc_base);

/// Bundled copy of a real dataset, resolved relative to the data directory.
std::string default_dataset_path(const std::string& name);

void write_table1_report(const Table1Result& r, const std::string& out_dir);
void write_table2_report(const Table2Result& r, const std::string& out_dir);

/// Run tasks over `jobs` worker threads; task order is fixed and each task
/// owns its output slot, so results are deterministic.
void parallel_run(std::vector<std::function<void()>>& tasks, int jobs);

}  // namespace repmix

#endif

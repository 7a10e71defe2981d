#include "repmix/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace repmix {

using nlohmann::json;
namespace fs = std::filesystem;

void parallel_run(std::vector<std::function<void()>>& tasks, int jobs) {
  if (jobs <= 1 || tasks.size() <= 1) {
    for (auto& t : tasks) t();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error = nullptr;
  std::mutex err_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      try {
        tasks[idx]();
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int nthreads = std::min<int>(jobs, static_cast<int>(tasks.size()));
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// -- JSON mapping -------------------------------------------------------------

namespace {

std::string case_to_string(RepulsionCase c) {
  return c == RepulsionCase::FullKernel ? "full" : "location";
}

RepulsionCase case_from_string(const std::string& s) {
  if (s == "full") return RepulsionCase::FullKernel;
  if (s == "location") return RepulsionCase::LocationOnly;
  throw InputError("unknown repulsion case: " + s);
}

std::string combiner_to_string(Combiner c) { return c == Combiner::Product ? "product" : "min"; }

Combiner combiner_from_string(const std::string& s) {
  if (s == "product") return Combiner::Product;
  if (s == "min") return Combiner::Min;
  throw InputError("unknown combiner: " + s);
}

json config_to_json(const RunConfig& cfg) {
  json j;
  if (cfg.data.has_scenario) {
    j["data"] = {{"scenario", scenario_to_string(cfg.data.scenario.id)},
                 {"n", cfg.data.scenario.n},
                 {"seed", cfg.data.scenario.seed}};
  } else {
    j["data"] = {{"path", cfg.data.path}};
  }
  j["k"] = cfg.k;
  if (!cfg.alpha.empty()) j["alpha"] = cfg.alpha;
  if (cfg.prior_override)
    j["prior"] = {{"m0", cfg.prior.m0}, {"v0", cfg.prior.v0}, {"a0", cfg.prior.a0},
                  {"b0", cfg.prior.b0}};
  j["repulsion"] = {{"case", case_to_string(cfg.repulsion.rcase)},
                    {"combiner", combiner_to_string(cfg.repulsion.combiner)},
                    {"nu", cfg.repulsion.nu}};
  if (cfg.tau_auto)
    j["repulsion"]["tau"] = "auto";
  else
    j["repulsion"]["tau"] = cfg.repulsion.tau;
  j["calibration"] = {{"c", cfg.calibration_c},
                      {"mc_samples", cfg.calibration_mc},
                      {"seed", cfg.calibration_seed}};
  j["mcmc"] = {{"iterations", cfg.mcmc.iterations}, {"burn_in", cfg.mcmc.burn_in},
               {"thin", cfg.mcmc.thin},             {"seed", cfg.mcmc.seed},
               {"repulsive", cfg.mcmc.repulsive},   {"check_invariants", cfg.mcmc.check_invariants}};
  j["chains"] = cfg.chains;
  j["jobs"] = cfg.jobs;
  if (cfg.k0 > 0) j["k0"] = cfg.k0;
  if (!cfg.out_dir.empty()) j["out"] = cfg.out_dir;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  if (!j.contains("data")) throw InputError("config is missing the data block");
  const json& jd = j.at("data");
  if (jd.contains("scenario")) {
    cfg.data.has_scenario = true;
    cfg.data.scenario.id = scenario_from_string(jd.at("scenario").get<std::string>());
    cfg.data.scenario.n = jd.value("n", 1000);
    cfg.data.scenario.seed = jd.value("seed", 0);
  } else if (jd.contains("path")) {
    cfg.data.path = jd.at("path").get<std::string>();
  } else {
    throw InputError("data block needs either a path or a scenario");
  }
  cfg.k = j.value("k", 6);
  if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<std::vector<double>>();
  if (j.contains("prior")) {
    cfg.prior_override = true;
    cfg.prior.m0 = j.at("prior").at("m0").get<std::vector<double>>();
    cfg.prior.v0 = j.at("prior").at("v0").get<std::vector<double>>();
    cfg.prior.a0 = j.at("prior").at("a0").get<double>();
    cfg.prior.b0 = j.at("prior").at("b0").get<std::vector<double>>();
  }
  if (j.contains("repulsion")) {
    const json& jr = j.at("repulsion");
    cfg.repulsion.rcase = case_from_string(jr.value("case", "location"));
    cfg.repulsion.combiner = combiner_from_string(jr.value("combiner", "min"));
    cfg.repulsion.nu = jr.value("nu", cfg.repulsion.rcase == RepulsionCase::FullKernel ? 2 : 1);
    if (jr.contains("tau") && jr.at("tau").is_number()) {
      cfg.tau_auto = false;
      cfg.repulsion.tau = jr.at("tau").get<double>();
    } else {
      cfg.tau_auto = true;
    }
  }
  if (j.contains("calibration")) {
    cfg.calibration_c = j.at("calibration").value("c", 4.0);
    cfg.calibration_mc = j.at("calibration").value("mc_samples", 10000);
    cfg.calibration_seed = j.at("calibration").value("seed", 0);
  }
  if (j.contains("mcmc")) {
    const json& jm = j.at("mcmc");
    cfg.mcmc.iterations = jm.value("iterations", 10000);
    cfg.mcmc.burn_in = jm.value("burn_in", 5000);
    cfg.mcmc.thin = jm.value("thin", 10);
    cfg.mcmc.seed = jm.value("seed", 0);
    cfg.mcmc.repulsive = jm.value("repulsive", true);
    cfg.mcmc.check_invariants = jm.value("check_invariants", false);
  }
  cfg.chains = j.value("chains", 1);
  cfg.jobs = j.value("jobs", 1);
  cfg.k0 = j.value("k0", 0);
  cfg.out_dir = j.value("out", "");
  return cfg;
}

json calibration_to_json(const CalibrationResult& r) {
  return json{{"tau_star", r.tau_star}, {"nu", r.nu},         {"c", r.c},
              {"rho1", r.rho1},         {"rho2", r.rho2},     {"sigma1", r.sigma1},
              {"sigma2", r.sigma2},     {"mc_samples", r.mc_samples},
              {"seed", r.seed},         {"steps", r.steps},     {"method", r.method}};
}

json summary_to_json_obj(const SummaryReport& s) {
  json j;
  j["components"] = json::array();
  std::size_t significant = 0;
  for (const ComponentSummary& c : s.components) {
    if (c.weight_mean > 0.05) ++significant;
    j["components"].push_back({{"weight_mean", c.weight_mean},
                               {"weight_sd", c.weight_sd},
                               {"mean_mean", c.mean_mean},
                               {"mean_sd", c.mean_sd},
                               {"sd_mean", c.sd_mean},
                               {"sd_sd", c.sd_sd}});
  }
  j["significant_components_0.05"] = significant;
  if (s.has_kl)
    j["kl"] = {{"mean", s.kl_mean}, {"sd", s.kl_sd}, {"of_mean_density", s.kl_of_mean_density}};
  if (s.has_misclass) j["misclassification"] = s.misclass;
  if (s.has_extra_weight)
    j["extra_weights"] = {{"mean", s.extra_weight_mean}, {"sd", s.extra_weight_sd}};
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  out << text;
}

}  // namespace

std::string summary_to_json(const SummaryReport& report) {
  return summary_to_json_obj(report).dump(2);
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InputError(std::string("config parse error: ") + e.what());
  }
  if (j.contains("config")) return config_from_json(j.at("config"));
  return config_from_json(j);
}

// -- fitting ------------------------------------------------------------------

FitOutput run_fit(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  FitOutput fit;
  fit.resolved = cfg;
  RunConfig& r = fit.resolved;

  if (r.data.has_scenario) {
    GeneratedData gen = generate_scenario(r.data.scenario);
    fit.data = std::move(gen.data);
    fit.truth = std::move(gen.truth);
    fit.has_truth = true;
    if (r.k0 == 0) r.k0 = gen.k0;
  } else {
    fit.data = Dataset::from_csv(r.data.path);
  }

  MixtureConfig mix;
  mix.k = r.k;
  mix.m = fit.data.m;
  mix.alpha = r.alpha.empty() ? MixtureConfig::overfitted(r.k, fit.data.m).alpha : r.alpha;
  r.alpha = mix.alpha;

  if (!r.prior_override) {
    r.prior = BasePrior::empirical(fit.data);
    r.prior_override = true;
  }

  for (const Violation& v : validate_config(mix, r.prior)) {
    if (v.level == Violation::Level::Error)
      throw InputError("invalid configuration: " + v.message);
    fit.warnings.push_back(v);
  }

  if (r.mcmc.repulsive && r.tau_auto) {
    if (r.calibration_seed == 0) r.calibration_seed = derive_seed(r.mcmc.seed, 0xCA11B);
    fit.calibration = calibrate_tau(r.prior, r.repulsion.rcase, r.k, r.calibration_c,
                                    r.repulsion.nu, r.repulsion.combiner, r.calibration_seed,
                                    r.calibration_mc);
    fit.has_calibration = true;
    r.repulsion.tau = fit.calibration.tau_star;
    r.tau_auto = false;
  }

  std::vector<PosteriorDraws> chain_draws(static_cast<std::size_t>(r.chains));
  std::vector<std::function<void()>> tasks;
  for (int c = 0; c < r.chains; ++c) {
    tasks.push_back([&, c] {
      Rng rng(derive_seed(r.mcmc.seed, static_cast<std::uint64_t>(c)));
      chain_draws[static_cast<std::size_t>(c)] =
          run_chain(fit.data, r.mcmc, mix, r.prior, r.repulsion, rng);
    });
  }
  parallel_run(tasks, r.jobs);

  fit.raw = std::move(chain_draws.front());
  for (std::size_t c = 1; c < chain_draws.size(); ++c)
    for (Draw& d : chain_draws[c].draws) fit.raw.draws.push_back(std::move(d));

  fit.relabeled = relabel_stephens(fit.raw, fit.data);
  fit.summary = summarize(fit.relabeled.draws, fit.has_truth ? &fit.truth : nullptr,
                          fit.data.has_labels() ? &fit.data.labels : nullptr, r.k0);

  fit.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return fit;
}

void write_fit_artifacts(const FitOutput& fit, const std::string& out_dir) {
  fs::create_directories(out_dir);
  char buf[40];

  {
    std::ofstream out(out_dir + "/draws.csv");
    if (!out) throw InputError("cannot write draws.csv under " + out_dir);
    out << "iter,h,weight";
    for (std::size_t d = 1; d <= fit.raw.m; ++d) out << ",mean_" << d;
    for (std::size_t d = 1; d <= fit.raw.m; ++d) out << ",var_" << d;
    out << "\n";
    for (const Draw& draw : fit.raw.draws) {
      for (std::size_t h = 0; h < fit.raw.k; ++h) {
        out << draw.iter << "," << (h + 1);
        std::snprintf(buf, sizeof(buf), "%.17g", draw.weights[h]);
        out << "," << buf;
        for (std::size_t d = 0; d < fit.raw.m; ++d) {
          std::snprintf(buf, sizeof(buf), "%.17g", draw.components[h].mean[d]);
          out << "," << buf;
        }
        for (std::size_t d = 0; d < fit.raw.m; ++d) {
          std::snprintf(buf, sizeof(buf), "%.17g", draw.components[h].var[d]);
          out << "," << buf;
        }
        out << "\n";
      }
    }
  }

  write_text(out_dir + "/summary.json", summary_to_json(fit.summary) + "\n");

  if (fit.raw.m <= 2 && !fit.raw.draws.empty()) {
    std::vector<double> lo, hi;
    if (fit.has_truth) {
      lo = fit.truth.box_lo;
      hi = fit.truth.box_hi;
    } else {
      lo.assign(fit.data.m, 0.0);
      hi.assign(fit.data.m, 0.0);
      for (std::size_t d = 0; d < fit.data.m; ++d) {
        double mn = fit.data.at(0, d), mx = fit.data.at(0, d);
        for (std::size_t i = 1; i < fit.data.n; ++i) {
          mn = std::min(mn, fit.data.at(i, d));
          mx = std::max(mx, fit.data.at(i, d));
        }
        const double pad = 0.1 * std::max(mx - mn, 1e-6);
        lo[d] = mn - pad;
        hi[d] = mx + pad;
      }
    }
    const DensityGrid grid =
        compute_density_grid(fit.raw, lo, hi, fit.raw.m == 1 ? 2048 : 256);
    std::ofstream out(out_dir + "/density_grid.csv");
    if (fit.raw.m == 1) {
      out << "x,density\n";
      for (std::size_t i = 0; i < grid.axis1.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", grid.axis1[i]);
        out << buf;
        std::snprintf(buf, sizeof(buf), "%.17g", grid.mean_density[i]);
        out << "," << buf << "\n";
      }
    } else {
      out << "x1,x2,density\n";
      const std::size_t N = grid.axis1.size();
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
          std::snprintf(buf, sizeof(buf), "%.17g", grid.axis1[i]);
          out << buf;
          std::snprintf(buf, sizeof(buf), "%.17g", grid.axis2[j]);
          out << "," << buf;
          std::snprintf(buf, sizeof(buf), "%.17g", grid.mean_density[i * N + j]);
          out << "," << buf << "\n";
        }
    }
  }

  json manifest;
  manifest["format"] = "repmix-manifest-v1";
  manifest["config"] = config_to_json(fit.resolved);
  if (fit.has_calibration) manifest["calibration_result"] = calibration_to_json(fit.calibration);
  manifest["warnings"] = json::array();
  for (const Violation& v : fit.warnings) manifest["warnings"].push_back(v.message);
  manifest["data_info"] = {{"n", fit.data.n}, {"m", fit.data.m},
                           {"labelled", fit.data.has_labels()}};
  manifest["relabel"] = {{"sweeps", fit.relabeled.sweeps}, {"final_cost", fit.relabeled.final_cost}};
  manifest["wall_seconds"] = fit.wall_seconds;
  manifest["outputs"] = {"draws.csv", "summary.json", "density_grid.csv"};
  write_text(out_dir + "/manifest.json", manifest.dump(2) + "\n");
}

// -- table experiments ---------------------------------------------------------

namespace {

RunConfig table_fit_config(Scenario scen, std::size_t n, std::size_t k, RepulsionCase rcase,
                           int nu, bool repulsive, std::uint64_t data_seed,
                           std::uint64_t mcmc_seed, std::uint64_t calib_seed,
                           const McmcConfig& mcmc_base) {
  RunConfig cfg;
  cfg.data.has_scenario = true;
  cfg.data.scenario = {scen, n, data_seed};
  cfg.k = k;
  cfg.repulsion.rcase = rcase;
  cfg.repulsion.combiner = rcase == RepulsionCase::FullKernel ? Combiner::Product : Combiner::Min;
  cfg.repulsion.nu = nu;
  cfg.tau_auto = true;
  cfg.calibration_seed = calib_seed;
  cfg.mcmc = mcmc_base;
  cfg.mcmc.seed = mcmc_seed;
  cfg.mcmc.repulsive = repulsive;
  return cfg;
}

}  // namespace

Table1Result run_table1(const std::string& out_dir, int replicates, int jobs, std::uint64_t seed,
                        const McmcConfig& mcmc_base, std::size_t n) {
  Table1Result result;
  result.replicates = replicates;
  result.seed = seed;
  const Scenario scens[2] = {Scenario::Ia, Scenario::Ib};
  for (int si = 0; si < 2; ++si)
    for (int arm = 0; arm < 2; ++arm)
      result.cells[si][arm].reps.resize(static_cast<std::size_t>(replicates));

  std::vector<std::function<void()>> tasks;
  for (int si = 0; si < 2; ++si) {
    for (int rep = 0; rep < replicates; ++rep) {
      const std::uint64_t data_seed =
          derive_seed(seed, 1000 + static_cast<std::uint64_t>(si) * 100 +
                                static_cast<std::uint64_t>(rep));
      for (int arm = 0; arm < 2; ++arm) {
        const std::uint64_t mcmc_seed =
            derive_seed(seed, 5000 + static_cast<std::uint64_t>(si) * 1000 +
                                  static_cast<std::uint64_t>(rep) * 10 +
                                  static_cast<std::uint64_t>(arm));
        const std::uint64_t calib_seed =
            derive_seed(seed, 9000 + static_cast<std::uint64_t>(si) * 1000 +
                                  static_cast<std::uint64_t>(rep));
        tasks.push_back([&, si, rep, arm, data_seed, mcmc_seed, calib_seed] {
          const RunConfig cfg =
              table_fit_config(scens[si], n, 6, RepulsionCase::FullKernel, 2, arm == 1,
                               data_seed, mcmc_seed, calib_seed, mcmc_base);
          result.cells[si][arm].reps[static_cast<std::size_t>(rep)] = run_fit(cfg).summary;
        });
      }
    }
  }
  parallel_run(tasks, jobs);
  if (!out_dir.empty()) write_table1_report(result, out_dir);
  return result;
}

Table2Result run_table2(const std::string& out_dir, int replicates, int jobs, std::uint64_t seed,
                        const McmcConfig& mcmc_base, const std::vector<Scenario>& scenarios,
                        const std::vector<std::size_t>& sample_sizes) {
  Table2Result result;
  result.replicates = replicates;
  result.seed = seed;
  result.scenarios = scenarios;
  result.sample_sizes = sample_sizes;
  result.cells.assign(scenarios.size(),
                      std::vector<std::array<ReplicateCell, 2>>(sample_sizes.size()));
  for (auto& per_scen : result.cells)
    for (auto& per_n : per_scen)
      for (auto& cell : per_n) cell.reps.resize(static_cast<std::size_t>(replicates));

  std::vector<std::function<void()>> tasks;
  for (std::size_t si = 0; si < scenarios.size(); ++si) {
    for (std::size_t ni = 0; ni < sample_sizes.size(); ++ni) {
      for (int rep = 0; rep < replicates; ++rep) {
        const std::uint64_t data_seed =
            derive_seed(seed, 100000 + si * 10000 + ni * 1000 + static_cast<std::uint64_t>(rep));
        for (int arm = 0; arm < 2; ++arm) {
          const std::uint64_t mcmc_seed =
              derive_seed(seed, 500000 + si * 10000 + ni * 1000 +
                                    static_cast<std::uint64_t>(rep) * 10 +
                                    static_cast<std::uint64_t>(arm));
          const std::uint64_t calib_seed =
              derive_seed(seed, 900000 + si * 10000 + ni * 1000 + static_cast<std::uint64_t>(rep));
          tasks.push_back([&, si, ni, rep, arm, data_seed, mcmc_seed, calib_seed] {
            const RunConfig cfg = table_fit_config(
                result.scenarios[si], result.sample_sizes[ni], 6, RepulsionCase::LocationOnly, 1,
                arm == 1, data_seed, mcmc_seed, calib_seed, mcmc_base);
            result.cells[si][ni][static_cast<std::size_t>(arm)]
                .reps[static_cast<std::size_t>(rep)] = run_fit(cfg).summary;
          });
        }
      }
    }
  }
  parallel_run(tasks, jobs);
  if (!out_dir.empty()) write_table2_report(result, out_dir);
  return result;
}

namespace {

double rep_mean(const ReplicateCell& cell, double (*pick)(const SummaryReport&)) {
  std::vector<double> xs;
  xs.reserve(cell.reps.size());
  for (const SummaryReport& s : cell.reps) xs.push_back(pick(s));
  return mean_of(xs);
}

double rep_sd(const ReplicateCell& cell, double (*pick)(const SummaryReport&)) {
  std::vector<double> xs;
  xs.reserve(cell.reps.size());
  for (const SummaryReport& s : cell.reps) xs.push_back(pick(s));
  return sd_of(xs);
}

json cell_component_json(const ReplicateCell& cell, std::size_t comp) {
  // replicate means of the posterior summaries for one ranked component
  std::vector<double> w, wsd, mu, musd, sd, sdsd;
  for (const SummaryReport& s : cell.reps) {
    if (comp >= s.components.size()) continue;
    const ComponentSummary& c = s.components[comp];
    w.push_back(c.weight_mean);
    wsd.push_back(c.weight_sd);
    mu.push_back(c.mean_mean[0]);
    musd.push_back(c.mean_sd[0]);
    sd.push_back(c.sd_mean[0]);
    sdsd.push_back(c.sd_sd[0]);
  }
  return json{{"weight_mean", mean_of(w)},     {"weight_mean_rep_sd", sd_of(w)},
              {"weight_post_sd", mean_of(wsd)}, {"mean_mean", mean_of(mu)},
              {"mean_post_sd", mean_of(musd)},  {"sd_mean", mean_of(sd)},
              {"sd_post_sd", mean_of(sdsd)}};
}

}  // namespace

void write_table1_report(const Table1Result& r, const std::string& out_dir) {
  fs::create_directories(out_dir);
  json j;
  j["replicates"] = r.replicates;
  j["seed"] = r.seed;
  const char* scen_names[2] = {"Ia", "Ib"};
  const char* arm_names[2] = {"non_repulsive", "repulsive"};
  j["true"] = {{"Ia", {{"comp1", {{"weight", 1.0}, {"mean", 0.0}, {"sd", 1.0}}}}},
               {"Ib",
                {{"comp1", {{"weight", 0.7}, {"mean", 0.0}, {"sd", 0.2}}},
                 {"comp2", {{"weight", 0.3}, {"mean", 0.0}, {"sd", 2.0}}}}}};
  for (int si = 0; si < 2; ++si) {
    for (int arm = 0; arm < 2; ++arm) {
      const ReplicateCell& cell = r.cells[si][arm];
      json jc;
      jc["comp1"] = cell_component_json(cell, 0);
      if (si == 1) jc["comp2"] = cell_component_json(cell, 1);
      jc["kl_mean"] = rep_mean(cell, [](const SummaryReport& s) { return s.kl_mean; });
      jc["kl_rep_sd"] = rep_sd(cell, [](const SummaryReport& s) { return s.kl_mean; });
      j[scen_names[si]][arm_names[arm]] = jc;
    }
  }
  write_text(out_dir + "/table1.json", j.dump(2) + "\n");

  std::ostringstream csv;
  csv << "scenario,arm,component,weight_mean,weight_post_sd,mean_mean,mean_post_sd,sd_mean,sd_post_sd\n";
  for (int si = 0; si < 2; ++si)
    for (int arm = 0; arm < 2; ++arm)
      for (std::size_t comp = 0; comp < (si == 1 ? 2u : 1u); ++comp) {
        const json jc = cell_component_json(r.cells[si][arm], comp);
        csv << scen_names[si] << "," << arm_names[arm] << "," << (comp + 1) << ","
            << jc["weight_mean"].get<double>() << "," << jc["weight_post_sd"].get<double>() << ","
            << jc["mean_mean"].get<double>() << "," << jc["mean_post_sd"].get<double>() << ","
            << jc["sd_mean"].get<double>() << "," << jc["sd_post_sd"].get<double>() << "\n";
      }
  write_text(out_dir + "/table1.csv", csv.str());
}

void write_table2_report(const Table2Result& r, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const char* arm_names[2] = {"non_repulsive", "repulsive"};
  json j;
  j["replicates"] = r.replicates;
  j["seed"] = r.seed;
  std::ostringstream csv;
  csv << "scenario,n,arm,kl_mean,kl_rep_sd,misclass_mean,misclass_rep_sd,extra_weight_mean,"
         "extra_weight_rep_sd\n";
  for (std::size_t si = 0; si < r.scenarios.size(); ++si) {
    const std::string scen = scenario_to_string(r.scenarios[si]);
    for (std::size_t ni = 0; ni < r.sample_sizes.size(); ++ni) {
      for (int arm = 0; arm < 2; ++arm) {
        const ReplicateCell& cell = r.cells[si][ni][static_cast<std::size_t>(arm)];
        const double klm = rep_mean(cell, [](const SummaryReport& s) { return s.kl_mean; });
        const double kls = rep_sd(cell, [](const SummaryReport& s) { return s.kl_mean; });
        const double mm = rep_mean(cell, [](const SummaryReport& s) { return s.misclass; });
        const double ms = rep_sd(cell, [](const SummaryReport& s) { return s.misclass; });
        const double em =
            rep_mean(cell, [](const SummaryReport& s) { return s.extra_weight_mean; });
        const double es = rep_sd(cell, [](const SummaryReport& s) { return s.extra_weight_mean; });
        json jc = {{"kl_mean", klm},          {"kl_rep_sd", kls},
                   {"misclass_mean", mm},     {"misclass_rep_sd", ms},
                   {"extra_weight_mean", em}, {"extra_weight_rep_sd", es}};
        j[scen][std::to_string(r.sample_sizes[ni])][arm_names[arm]] = jc;
        csv << scen << "," << r.sample_sizes[ni] << "," << arm_names[arm] << "," << klm << ","
            << kls << "," << mm << "," << ms << "," << em << "," << es << "\n";
      }
    }
  }
  write_text(out_dir + "/table2.json", j.dump(2) + "\n");
  write_text(out_dir + "/table2.csv", csv.str());
}

// -- real data ------------------------------------------------------------------

std::string default_dataset_path(const std::string& name) {
#ifdef REPMIX_DATA_DIR
  const std::string bundled = std::string(REPMIX_DATA_DIR) + "/" + name + ".csv";
  if (fs::exists(bundled)) return bundled;
#endif
  return "data/" + name + ".csv";
}

RealDataResult run_realdata(const std::string& name, const std::string& data_path,
                            const std::string& out_dir, int jobs, std::uint64_t seed,
                            const McmcConfig& mcmc_base) {
  if (name != "galaxy" && name != "acidity" && name != "iris")
    throw InputError("unknown dataset '" + name +
                     "'; expected galaxy, acidity or iris (CSV: columns x1..xm, optional final "
                     "integer column 'label' declared in the header)");
  const std::string path = data_path.empty() ? default_dataset_path(name) : data_path;
  if (!fs::exists(path))
    throw InputError("dataset file not found: " + path +
                     " (expected CSV with header x1..xm[,label])");

  RealDataResult result;
  result.name = name;

  struct Job {
    std::size_t k;
    bool repulsive;
  };
  std::vector<Job> jobs_list;
  if (name == "iris") {
    for (std::size_t k : {std::size_t{6}, std::size_t{10}})
      for (bool rep : {false, true}) jobs_list.push_back({k, rep});
  } else {
    for (bool rep : {false, true}) jobs_list.push_back({std::size_t{5}, rep});
  }

  result.entries.resize(jobs_list.size());
  std::vector<FitOutput> fits(jobs_list.size());
  std::vector<std::function<void()>> tasks;
  for (std::size_t idx = 0; idx < jobs_list.size(); ++idx) {
    tasks.push_back([&, idx] {
      const Job& job = jobs_list[idx];
      RunConfig cfg;
      cfg.data.path = path;
      cfg.k = job.k;
      cfg.repulsion.rcase =
          name == "iris" ? RepulsionCase::LocationOnly : RepulsionCase::FullKernel;
      cfg.repulsion.combiner =
          cfg.repulsion.rcase == RepulsionCase::FullKernel ? Combiner::Product : Combiner::Min;
      cfg.repulsion.nu = name == "iris" ? 1 : 2;
      cfg.tau_auto = true;
      cfg.mcmc = mcmc_base;
      cfg.mcmc.seed = derive_seed(seed, idx);
      cfg.mcmc.repulsive = job.repulsive;
      cfg.calibration_seed = derive_seed(seed, 100 + idx);
      if (name == "iris") cfg.k0 = 3;  // species count as the true cluster number
      FitOutput fit = run_fit(cfg);

      RealDataEntry entry;
      entry.k = job.k;
      entry.repulsive = job.repulsive;
      entry.summary = fit.summary;
      for (const ComponentSummary& c : fit.summary.components)
        if (c.weight_mean > 0.05) ++entry.significant_components;
      if (cfg.k0 > 0) {
        entry.per_draw_extra.reserve(fit.relabeled.draws.draws.size());
        for (const Draw& d : fit.relabeled.draws.draws)
          entry.per_draw_extra.push_back(sum_extra_weights(d.weights, cfg.k0));
      }
      result.entries[idx] = std::move(entry);
      fits[idx] = std::move(fit);
    });
  }
  parallel_run(tasks, jobs);

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    json j;
    j["dataset"] = name;
    j["path"] = path;
    for (std::size_t idx = 0; idx < result.entries.size(); ++idx) {
      const RealDataEntry& e = result.entries[idx];
      const std::string tag =
          "k" + std::to_string(e.k) + (e.repulsive ? "_repulsive" : "_non_repulsive");
      json je = summary_to_json_obj(e.summary);
      je["significant_components_0.05"] = e.significant_components;
      j["fits"][tag] = je;
      write_fit_artifacts(fits[idx], out_dir + "/" + tag);
      if (!e.per_draw_extra.empty()) {
        std::ostringstream csv;
        csv << "extra_weight\n";
        char buf[40];
        for (double x : e.per_draw_extra) {
          std::snprintf(buf, sizeof(buf), "%.17g", x);
          csv << buf << "\n";
        }
        write_text(out_dir + "/extra_weights_" + tag + ".csv", csv.str());
      }
    }
    write_text(out_dir + "/" + name + ".json", j.dump(2) + "\n");
  }
  return result;
}

}  // namespace repmix

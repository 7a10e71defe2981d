#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "repmix/experiments.hpp"

using namespace repmix;

namespace {

int fail(const char* type, const std::string& message, int code) {
  nlohmann::json err;
  err["error"] = {{"type", type}, {"message", message}};
  std::cerr << err.dump(2) << std::endl;
  return code;
}

struct CommonOpts {
  std::optional<std::string> config_path;
  std::optional<std::string> data_path;
  std::optional<std::string> scenario;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> data_seed;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> k;
  std::optional<std::string> rcase;
  std::optional<std::string> combiner;
  std::optional<std::string> tau;
  std::optional<int> nu;
  std::optional<int> iterations;
  std::optional<int> burnin;
  std::optional<int> thin;
  std::optional<int> chains;
  std::optional<int> jobs;
  std::optional<std::size_t> k0;
  std::optional<double> calib_c;
  std::optional<std::size_t> calib_mc;
  bool non_repulsive = false;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON config or a manifest from a previous run");
  cmd->add_option("--data", o.data_path, "input CSV (columns x1..xm, optional label column)");
  cmd->add_option("--scenario", o.scenario, "synthetic scenario id (Ia..IV)");
  cmd->add_option("--n", o.n, "scenario sample size");
  cmd->add_option("--data-seed", o.data_seed, "scenario generation seed");
  cmd->add_option("--seed", o.seed, "MCMC master seed");
  cmd->add_option("--k", o.k, "upper bound on mixture components");
  cmd->add_option("--case", o.rcase, "repulsion case: full | location");
  cmd->add_option("--combiner", o.combiner, "pair combiner: product | min");
  cmd->add_option("--tau", o.tau, "repulsion scale, a number or 'auto'");
  cmd->add_option("--nu", o.nu, "repulsion exponent");
  cmd->add_option("--iterations", o.iterations, "MCMC iterations");
  cmd->add_option("--burnin", o.burnin, "burn-in iterations");
  cmd->add_option("--thin", o.thin, "thinning stride");
  cmd->add_option("--chains", o.chains, "independent chains");
  cmd->add_option("--jobs", o.jobs, "worker threads");
  cmd->add_option("--k0", o.k0, "true component count for extra-weight metrics");
  cmd->add_option("--c", o.calib_c, "calibration separation constant");
  cmd->add_option("--calibration-mc", o.calib_mc, "Monte Carlo draws per calibration step");
  cmd->add_flag("--non-repulsive", o.non_repulsive, "fit the plain (non-repulsive) prior");
  cmd->add_option("--out", o.out, "output directory");
}

RunConfig build_config(const CommonOpts& o) {
  RunConfig cfg;
  if (o.config_path) cfg = load_run_config(*o.config_path);
  if (o.data_path) {
    cfg.data.path = *o.data_path;
    cfg.data.has_scenario = false;
  }
  if (o.scenario) {
    cfg.data.has_scenario = true;
    cfg.data.path.clear();
    cfg.data.scenario.id = scenario_from_string(*o.scenario);
    if (o.n) cfg.data.scenario.n = *o.n;
    if (o.data_seed) cfg.data.scenario.seed = *o.data_seed;
  }
  if (!cfg.data.has_scenario && cfg.data.path.empty())
    throw InputError("no input: give --data <csv> or --scenario <id> (or a --config)");
  if (o.seed) cfg.mcmc.seed = *o.seed;
  if (o.k) cfg.k = *o.k;
  if (o.rcase) {
    if (*o.rcase == "full")
      cfg.repulsion.rcase = RepulsionCase::FullKernel;
    else if (*o.rcase == "location")
      cfg.repulsion.rcase = RepulsionCase::LocationOnly;
    else
      throw InputError("--case must be 'full' or 'location'");
    if (!o.nu) cfg.repulsion.nu = cfg.repulsion.rcase == RepulsionCase::FullKernel ? 2 : 1;
  }
  if (o.combiner) {
    if (*o.combiner == "product")
      cfg.repulsion.combiner = Combiner::Product;
    else if (*o.combiner == "min")
      cfg.repulsion.combiner = Combiner::Min;
    else
      throw InputError("--combiner must be 'product' or 'min'");
  }
  if (o.tau) {
    if (*o.tau == "auto") {
      cfg.tau_auto = true;
    } else {
      try {
        cfg.repulsion.tau = std::stod(*o.tau);
      } catch (...) {
        throw InputError("--tau must be a number or 'auto'");
      }
      if (!(cfg.repulsion.tau > 0.0)) throw InputError("--tau must be positive");
      cfg.tau_auto = false;
    }
  }
  if (o.nu) cfg.repulsion.nu = *o.nu;
  if (o.iterations) cfg.mcmc.iterations = *o.iterations;
  if (o.burnin) cfg.mcmc.burn_in = *o.burnin;
  if (o.thin) cfg.mcmc.thin = *o.thin;
  if (o.chains) cfg.chains = *o.chains;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (o.k0) cfg.k0 = *o.k0;
  if (o.calib_c) cfg.calibration_c = *o.calib_c;
  if (o.calib_mc) cfg.calibration_mc = *o.calib_mc;
  if (o.non_repulsive) cfg.mcmc.repulsive = false;
  if (!o.out.empty()) cfg.out_dir = o.out;
  return cfg;
}

McmcConfig mcmc_from(const CommonOpts& o) {
  McmcConfig mcmc;
  if (o.iterations) mcmc.iterations = *o.iterations;
  if (o.burnin) mcmc.burn_in = *o.burnin;
  if (o.thin) mcmc.thin = *o.thin;
  return mcmc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian mixture fitting under repulsive priors: calibration, slice-sampling "
               "posterior computation and experiment suites"};
  app.require_subcommand(1);

  CommonOpts fit_opts;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit a mixture and write run artifacts");
  add_common(fit_cmd, fit_opts);

  CommonOpts cal_opts;
  std::size_t cal_dims = 0;
  CLI::App* cal_cmd = app.add_subcommand("calibrate", "choose tau by the c-separation rule");
  add_common(cal_cmd, cal_opts);
  cal_cmd->add_option("--standard-m", cal_dims,
                      "use a unit normal-scaled prior of this dimension instead of data");

  CommonOpts t1_opts;
  int t1_reps = 10;
  CLI::App* t1_cmd = app.add_subcommand("table1", "replicated Ia/Ib comparison");
  add_common(t1_cmd, t1_opts);
  t1_cmd->add_option("--replicates", t1_reps, "replicate datasets per cell");

  CommonOpts t2_opts;
  int t2_reps = 10;
  std::vector<std::string> t2_scens;
  std::vector<std::size_t> t2_ns;
  CLI::App* t2_cmd = app.add_subcommand("table2", "replicated Ic..IV metric comparison");
  add_common(t2_cmd, t2_opts);
  t2_cmd->add_option("--replicates", t2_reps, "replicate datasets per cell");
  t2_cmd->add_option("--scenarios", t2_scens, "subset of scenarios (default Ic..IV)");
  t2_cmd->add_option("--n-list", t2_ns, "sample sizes (default 100 1000)");

  CommonOpts rd_opts;
  std::string rd_name;
  CLI::App* rd_cmd = app.add_subcommand("realdata", "galaxy, acidity or iris workflow");
  rd_cmd->add_option("name", rd_name, "dataset name: galaxy | acidity | iris")->required();
  add_common(rd_cmd, rd_opts);

  std::string gen_scen, gen_out;
  std::size_t gen_n = 1000;
  std::uint64_t gen_seed = 0;
  CLI::App* gen_cmd = app.add_subcommand("generate", "write a synthetic scenario dataset");
  gen_cmd->add_option("--scenario", gen_scen, "scenario id (Ia..IV)")->required();
  gen_cmd->add_option("--n", gen_n, "sample size");
  gen_cmd->add_option("--seed", gen_seed, "generation seed");
  gen_cmd->add_option("--out", gen_out, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit_cmd->parsed()) {
      const RunConfig cfg = build_config(fit_opts);
      FitOutput fit = run_fit(cfg);
      if (!cfg.out_dir.empty()) write_fit_artifacts(fit, cfg.out_dir);
      std::cout << summary_to_json(fit.summary) << std::endl;
      return 0;
    }
    if (cal_cmd->parsed()) {
      BasePrior prior;
      if (cal_dims > 0) {
        prior = BasePrior::standard(cal_dims);
      } else if (cal_opts.data_path) {
        prior = BasePrior::empirical(Dataset::from_csv(*cal_opts.data_path));
      } else if (cal_opts.scenario) {
        ScenarioSpec spec;
        spec.id = scenario_from_string(*cal_opts.scenario);
        spec.n = cal_opts.n.value_or(1000);
        spec.seed = cal_opts.data_seed.value_or(0);
        prior = BasePrior::empirical(generate_scenario(spec).data);
      } else {
        throw InputError("calibrate needs --data, --scenario or --standard-m");
      }
      const RepulsionCase rcase = cal_opts.rcase.value_or("location") == "full"
                                      ? RepulsionCase::FullKernel
                                      : RepulsionCase::LocationOnly;
      const Combiner combiner =
          cal_opts.combiner.value_or("min") == "product" ? Combiner::Product : Combiner::Min;
      const int nu = cal_opts.nu.value_or(rcase == RepulsionCase::FullKernel ? 2 : 1);
      const CalibrationResult res = calibrate_tau(
          prior, rcase, cal_opts.k.value_or(6), cal_opts.calib_c.value_or(4.0), nu, combiner,
          cal_opts.seed.value_or(0), cal_opts.calib_mc.value_or(10000));
      nlohmann::json j = {{"tau_star", res.tau_star}, {"nu", res.nu},
                          {"c", res.c},               {"rho1", res.rho1},
                          {"rho2", res.rho2},         {"sigma1", res.sigma1},
                          {"sigma2", res.sigma2},     {"mc_samples", res.mc_samples},
                          {"seed", res.seed},         {"steps", res.steps},
                          {"method", res.method}};
      std::cout << j.dump(2) << std::endl;
      return 0;
    }
    if (t1_cmd->parsed()) {
      if (t1_opts.out.empty()) throw InputError("table1 needs --out");
      run_table1(t1_opts.out, t1_reps, t1_opts.jobs.value_or(1), t1_opts.seed.value_or(0),
                 mcmc_from(t1_opts), t1_opts.n.value_or(1000));
      std::cout << "wrote " << t1_opts.out << "/table1.json" << std::endl;
      return 0;
    }
    if (t2_cmd->parsed()) {
      if (t2_opts.out.empty()) throw InputError("table2 needs --out");
      std::vector<Scenario> scens = {Scenario::Ic,   Scenario::IIa,  Scenario::IIb,
                                     Scenario::IIIa, Scenario::IIIb, Scenario::IV};
      if (!t2_scens.empty()) {
        scens.clear();
        for (const std::string& s : t2_scens) scens.push_back(scenario_from_string(s));
      }
      std::vector<std::size_t> ns = t2_ns.empty() ? std::vector<std::size_t>{100, 1000} : t2_ns;
      run_table2(t2_opts.out, t2_reps, t2_opts.jobs.value_or(1), t2_opts.seed.value_or(0),
                 mcmc_from(t2_opts), scens, ns);
      std::cout << "wrote " << t2_opts.out << "/table2.json" << std::endl;
      return 0;
    }
    if (rd_cmd->parsed()) {
      if (rd_opts.out.empty()) throw InputError("realdata needs --out");
      run_realdata(rd_name, rd_opts.data_path.value_or(""), rd_opts.out,
                   rd_opts.jobs.value_or(1), rd_opts.seed.value_or(0), mcmc_from(rd_opts));
      std::cout << "wrote " << rd_opts.out << "/" << rd_name << ".json" << std::endl;
      return 0;
    }
    if (gen_cmd->parsed()) {
      ScenarioSpec spec;
      spec.id = scenario_from_string(gen_scen);
      spec.n = gen_n;
      spec.seed = gen_seed;
      const GeneratedData gen = generate_scenario(spec);
      gen.data.to_csv(gen_out);
      nlohmann::json meta = {{"scenario", gen_scen}, {"n", gen_n},     {"seed", gen_seed},
                             {"k0", gen.k0},         {"dim", gen.dim}};
      std::ofstream metaf(gen_out + ".meta.json");
      metaf << meta.dump(2) << std::endl;
      std::cout << "wrote " << gen_out << std::endl;
      return 0;
    }
  } catch (const InputError& e) {
    return fail("input", e.what(), 2);
  } catch (const CalibrationError& e) {
    return fail("calibration", e.what(), 4);
  } catch (const SamplerError& e) {
    return fail("sampler", e.what(), 3);
  } catch (const NumericalError& e) {
    return fail("numerical", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 3);
  }
  return 0;
}

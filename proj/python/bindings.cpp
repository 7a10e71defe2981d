#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>

#include <json.hpp>

#include "repmix/experiments.hpp"

namespace py = pybind11;
using namespace repmix;

namespace {

RepulsionSpec make_spec(const std::string& rcase, const std::string& combiner, double tau,
                        int nu) {
  RepulsionSpec spec;
  if (rcase == "full")
    spec.rcase = RepulsionCase::FullKernel;
  else if (rcase == "location")
    spec.rcase = RepulsionCase::LocationOnly;
  else
    throw InputError("case must be 'full' or 'location'");
  if (combiner == "product")
    spec.combiner = Combiner::Product;
  else if (combiner == "min")
    spec.combiner = Combiner::Min;
  else
    throw InputError("combiner must be 'product' or 'min'");
  spec.tau = tau;
  spec.nu = nu;
  return spec;
}

std::vector<Component> make_components(const std::vector<std::vector<double>>& means,
                                       const std::vector<std::vector<double>>& vars) {
  if (means.size() != vars.size()) throw InputError("means and vars must pair up");
  std::vector<Component> comps(means.size());
  for (std::size_t h = 0; h < means.size(); ++h) comps[h] = {means[h], vars[h]};
  return comps;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gaussian mixtures under repulsive priors: density evaluation, tau calibration, "
            "slice-sampling fits and posterior summaries";

  py::register_exception<InputError>(m, "InputError");
  py::register_exception<SamplerError>(m, "SamplerError");
  py::register_exception<CalibrationError>(m, "CalibrationError");

  m.def(
      "eval_mixture_density",
      [](const std::vector<double>& weights, const std::vector<std::vector<double>>& means,
         const std::vector<std::vector<double>>& vars, const std::vector<double>& y) {
        MixtureState state;
        state.weights = weights;
        state.components = make_components(means, vars);
        return eval_mixture_density(state, y);
      },
      py::arg("weights"), py::arg("means"), py::arg("vars"), py::arg("y"));

  m.def(
      "distance",
      [](const std::string& rcase, const std::vector<double>& mean1,
         const std::vector<double>& var1, const std::vector<double>& mean2,
         const std::vector<double>& var2) {
        return distance(make_spec(rcase, "min", 1.0, 1), Component{mean1, var1},
                        Component{mean2, var2});
      },
      py::arg("case"), py::arg("mean1"), py::arg("var1"), py::arg("mean2"), py::arg("var2"));

  m.def(
      "g", [](double tau, int nu, double d) { return g_repulsion(make_spec("location", "min", tau, nu), d); },
      py::arg("tau"), py::arg("nu"), py::arg("d"));

  m.def(
      "g_inverse",
      [](double tau, int nu, double u) { return g_inverse(make_spec("location", "min", tau, nu), u); },
      py::arg("tau"), py::arg("nu"), py::arg("u"));

  m.def(
      "h",
      [](const std::string& rcase, const std::string& combiner, double tau, int nu,
         const std::vector<std::vector<double>>& means,
         const std::vector<std::vector<double>>& vars) {
        return h_combine(make_spec(rcase, combiner, tau, nu), make_components(means, vars));
      },
      py::arg("case"), py::arg("combiner"), py::arg("tau"), py::arg("nu"), py::arg("means"),
      py::arg("vars"));

  m.def(
      "calibrate_tau",
      [](const std::vector<double>& m0, const std::vector<double>& v0, double a0,
         const std::vector<double>& b0, const std::string& rcase, std::size_t k, double c, int nu,
         const std::string& combiner, std::uint64_t seed, std::size_t n_mc) {
        BasePrior prior;
        prior.m0 = m0;
        prior.v0 = v0;
        prior.a0 = a0;
        prior.b0 = b0;
        const RepulsionSpec spec = make_spec(rcase, combiner, 1.0, nu);
        const CalibrationResult r =
            calibrate_tau(prior, spec.rcase, k, c, nu, spec.combiner, seed, n_mc);
        py::dict out;
        out["tau_star"] = r.tau_star;
        out["nu"] = r.nu;
        out["c"] = r.c;
        out["rho1"] = r.rho1;
        out["rho2"] = r.rho2;
        out["sigma1"] = r.sigma1;
        out["sigma2"] = r.sigma2;
        out["mc_samples"] = r.mc_samples;
        out["seed"] = r.seed;
        out["steps"] = r.steps;
        return out;
      },
      py::arg("m0"), py::arg("v0"), py::arg("a0"), py::arg("b0"), py::arg("case"), py::arg("k"),
      py::arg("c") = 4.0, py::arg("nu") = 1, py::arg("combiner") = "min", py::arg("seed") = 0,
      py::arg("n_mc") = 10000);

  m.def(
      "generate_scenario",
      [](const std::string& id, std::size_t n, std::uint64_t seed) {
        ScenarioSpec spec;
        spec.id = scenario_from_string(id);
        spec.n = n;
        spec.seed = seed;
        const GeneratedData gen = generate_scenario(spec);
        py::dict out;
        std::vector<std::vector<double>> rows(gen.data.n, std::vector<double>(gen.data.m));
        for (std::size_t i = 0; i < gen.data.n; ++i)
          for (std::size_t d = 0; d < gen.data.m; ++d) rows[i][d] = gen.data.at(i, d);
        out["values"] = rows;
        out["labels"] = gen.data.labels;
        out["k0"] = gen.k0;
        out["dim"] = gen.dim;
        return out;
      },
      py::arg("scenario"), py::arg("n"), py::arg("seed") = 0);

  m.def(
      "fit_config",
      [](const std::string& config_json) {
        const nlohmann::json j = nlohmann::json::parse(config_json);
        const std::string tmp = "/tmp/repmix_py_config.json";
        {
          std::ofstream out(tmp);
          out << j.dump();
        }
        RunConfig cfg = load_run_config(tmp);
        FitOutput fit = run_fit(cfg);
        if (!cfg.out_dir.empty()) write_fit_artifacts(fit, cfg.out_dir);
        return summary_to_json(fit.summary);
      },
      py::arg("config_json"),
      "Run the full pipeline from a JSON config string; returns the summary as JSON.");

  m.def(
      "run_chain_simple",
      [](const std::vector<std::vector<double>>& rows, std::size_t k, const std::string& rcase,
         const std::string& combiner, double tau, int nu, bool repulsive, int iterations,
         int burn_in, int thin, std::uint64_t seed) {
        Dataset data;
        data.n = rows.size();
        data.m = rows.empty() ? 1 : rows.front().size();
        for (const auto& row : rows)
          for (double v : row) data.values.push_back(v);
        const MixtureConfig mix = MixtureConfig::overfitted(k, data.m);
        const BasePrior prior =
            data.n > 0 ? BasePrior::empirical(data) : BasePrior::standard(data.m);
        const RepulsionSpec spec = make_spec(rcase, combiner, tau, nu);
        McmcConfig mcmc;
        mcmc.iterations = iterations;
        mcmc.burn_in = burn_in;
        mcmc.thin = thin;
        mcmc.seed = seed;
        mcmc.repulsive = repulsive;
        Rng rng(seed);
        const PosteriorDraws draws = run_chain(data, mcmc, mix, prior, spec, rng);
        py::list out;
        for (const Draw& d : draws.draws) {
          py::dict jd;
          jd["iter"] = d.iter;
          jd["weights"] = d.weights;
          std::vector<std::vector<double>> means, vars;
          for (const Component& c : d.components) {
            means.push_back(c.mean);
            vars.push_back(c.var);
          }
          jd["means"] = means;
          jd["vars"] = vars;
          jd["allocations"] = d.allocations;
          out.append(jd);
        }
        return out;
      },
      py::arg("rows"), py::arg("k"), py::arg("case") = "location", py::arg("combiner") = "min",
      py::arg("tau") = 1.0, py::arg("nu") = 1, py::arg("repulsive") = true,
      py::arg("iterations") = 1000, py::arg("burn_in") = 500, py::arg("thin") = 5,
      py::arg("seed") = 0);

  m.def("sum_extra_weights", &sum_extra_weights, py::arg("weights"), py::arg("k0"));
}

#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sst/analysis.hpp"
#include "sst/core.hpp"
#include "sst/error.hpp"
#include "sst/estimators.hpp"
#include "sst/gen.hpp"
#include "sst/isotonic.hpp"
#include "sst/matrix_io.hpp"
#include "sst/random.hpp"

namespace sst::cli {

namespace {

using nlohmann::json;

struct InstanceOptions {
  int n = 0;
  std::string sizes;  // empty: all singletons
  std::string model = "link";
  double spread = 2.0;
  bool no_permute = false;
};

struct ProjectionOptions {
  double tol = 1e-9;
  int max_iter = 10000;
  double feasibility_tol = 1e-7;

  ProjectionSettings settings() const { return {tol, max_iter, feasibility_tol}; }
};

struct EstimatorOptions {
  std::string method = "crl";
  double threshold_multiplier = 1.0;
  bool no_randomize = false;
  double lambda0 = 1.0;
  int n_limit_lse = 8;
  int n_limit_reg = 6;
  ProjectionOptions projection;
};

std::vector<int> int_list(const std::string& text, const std::string& flag) {
  try {
    return parse_int_list(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::kUsageError, flag + ": " + e.what());
  }
}

void usage_check(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kUsageError, message);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write to '" + path + "' failed");
}

InstanceModel parse_model(const std::string& name) {
  if (name == "link") return InstanceModel::kLinkScores;
  if (name == "random") return InstanceModel::kRandomBiIsotone;
  throw Error(ErrorCode::kUsageError, "--model must be link or random");
}

InstanceConfig instance_config(const InstanceOptions& o, std::uint64_t seed) {
  usage_check(o.n >= 2, "--n must be >= 2");
  InstanceConfig cfg;
  cfg.n = o.n;
  cfg.sizes = o.sizes.empty() ? std::vector<int>(o.n, 1) : int_list(o.sizes, "--sizes");
  cfg.model = parse_model(o.model);
  cfg.seed = seed;
  cfg.spread = o.spread;
  cfg.permute_items = !o.no_permute;
  return cfg;
}

ObservationMatrix read_observation(const std::string& path) {
  return ObservationMatrix::from_real(read_matrix_csv(path));
}

json ranking_json(const std::optional<Ranking>& pi) {
  if (!pi) return nullptr;
  return {{"order", pi->order()}, {"ranks", pi->ranks()}};
}

json report_json(const EstimateReport& r) {
  json j = {{"objective", r.objective},
            {"ranking", ranking_json(r.ranking_used)},
            {"kmax", kmax(r.estimate)},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"feasibility_residual", r.feasibility_residual}};
  if (r.regularized_objective) j["regularized_objective"] = *r.regularized_objective;
  if (r.achieved_kmax) j["achieved_kmax"] = *r.achieved_kmax;
  if (r.crl_window) {
    j["crl_window"] = {{"start", r.crl_window->start}, {"size", r.crl_window->size}};
  }
  return j;
}

CrlSettings crl_settings(const EstimatorOptions& o, std::uint64_t seed) {
  CrlSettings s;
  s.threshold_multiplier = o.threshold_multiplier;
  s.seed = seed;
  s.randomize = !o.no_randomize;
  s.projection = o.projection.settings();
  return s;
}

LseSettings lse_settings(const EstimatorOptions& o, int threads) {
  LseSettings s;
  s.n_limit = o.n_limit_lse;
  s.threads = threads;
  s.projection = o.projection.settings();
  return s;
}

RegSettings reg_settings(const EstimatorOptions& o, int threads) {
  RegSettings s;
  s.lambda0 = o.lambda0;
  s.n_limit = o.n_limit_reg;
  s.threads = threads;
  s.projection = o.projection.settings();
  return s;
}

// Estimators used inside Monte-Carlo loops; trials already run in parallel,
// so enumeration inside a trial stays single-threaded.
EstimatorFactory make_factory(const EstimatorOptions& o) {
  const std::string& m = o.method;
  if (m == "crl") {
    return [o](const Instance&) -> Estimator {
      return [o](const ObservationMatrix& y, std::uint64_t seed) {
        return crl_estimate(y, crl_settings(o, seed)).estimate;
      };
    };
  }
  if (m == "lse") {
    return [o](const Instance&) -> Estimator {
      return [o](const ObservationMatrix& y, std::uint64_t) {
        return lse_exact(y, lse_settings(o, 1)).estimate;
      };
    };
  }
  if (m == "reg") {
    return [o](const Instance&) -> Estimator {
      return [o](const ObservationMatrix& y, std::uint64_t) {
        return reg_lse_exact(y, reg_settings(o, 1)).estimate;
      };
    };
  }
  if (m == "oracle") return oracle_proxy;
  if (m == "trivial") {
    return [](const Instance&) -> Estimator {
      return [](const ObservationMatrix& y, std::uint64_t) {
        return trivial_estimate(y.size());
      };
    };
  }
  throw Error(ErrorCode::kUsageError, "--method must be crl, lse, reg, oracle or trivial");
}

void add_instance_options(CLI::App* cmd, InstanceOptions& o) {
  cmd->add_option("--n", o.n, "Number of items");
  cmd->add_option("--sizes", o.sizes,
                  "Block sizes, best block first, e.g. 3,2,1 (empty: all singletons)");
  cmd->add_option("--model", o.model, "Instance model: link or random");
  cmd->add_option("--spread", o.spread, "Score range for the link model");
  cmd->add_flag("--no-permute", o.no_permute, "Keep items in block order");
}

void add_projection_options(CLI::App* cmd, ProjectionOptions& o) {
  cmd->add_option("--tol", o.tol, "Dykstra stopping tolerance");
  cmd->add_option("--max-iter", o.max_iter, "Dykstra sweep cap");
  cmd->add_option("--feasibility-tol", o.feasibility_tol, "Allowed constraint violation");
}

void add_estimator_options(CLI::App* cmd, EstimatorOptions& o) {
  cmd->add_option("--method", o.method, "crl, lse, reg, oracle or trivial");
  cmd->add_option("--threshold-multiplier", o.threshold_multiplier,
                  "CRL window threshold multiplier (T = c sqrt(n) ln n)");
  cmd->add_flag("--no-randomize", o.no_randomize,
                "CRL: project onto the count order without shuffling the window");
  cmd->add_option("--lambda0", o.lambda0, "Regularized LSE weight");
  cmd->add_option("--lse-n-limit", o.n_limit_lse, "Largest n for exhaustive LSE");
  cmd->add_option("--reg-n-limit", o.n_limit_reg, "Largest n for regularized LSE");
  add_projection_options(cmd, o.projection);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Estimation experiments for strongly stochastically transitive "
               "comparison matrices"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0: available parallelism)")
      ->check(CLI::NonNegativeNumber);

  std::function<json()> action;

  // generate
  InstanceOptions gen_inst;
  std::uint64_t gen_seed = 0;
  std::string gen_out, gen_labels_out;
  auto* gen = app.add_subcommand("generate", "Draw an SST matrix with a given partition");
  add_instance_options(gen, gen_inst);
  gen->add_option("--seed", gen_seed, "Master seed");
  gen->add_option("--out", gen_out, "Output matrix CSV")->required();
  gen->add_option("--labels-out", gen_labels_out, "Optional CSV of item block labels");
  gen->callback([&] {
    action = [&] {
      const Instance inst = gen_sst_instance(instance_config(gen_inst, gen_seed));
      write_matrix_csv(gen_out, inst.matrix.values());
      if (!gen_labels_out.empty()) {
        write_text(gen_labels_out, join_ints(inst.partition.labels()) + "\n");
      }
      return json{{"command", "generate"},
                  {"n", inst.matrix.size()},
                  {"sizes", inst.partition.sizes()},
                  {"model", gen_inst.model},
                  {"seed", gen_seed},
                  {"kmax", inst.partition.kmax()},
                  {"labels", inst.partition.labels()},
                  {"out", gen_out}};
    };
  });

  // sample
  std::string sample_in, sample_out;
  std::uint64_t sample_seed = 0;
  auto* sample = app.add_subcommand("sample", "Sample a binary observation from M");
  sample->add_option("--in", sample_in, "Comparison matrix CSV")->required();
  sample->add_option("--seed", sample_seed, "Sampling seed");
  sample->add_option("--out", sample_out, "Output observation CSV")->required();
  sample->callback([&] {
    action = [&] {
      const auto m = validate_comparison(read_matrix_csv(sample_in), 1e-9);
      const auto y = sample_observation(m, sample_seed);
      write_matrix_csv(sample_out, y.to_real());
      return json{{"command", "sample"}, {"n", m.size()}, {"seed", sample_seed},
                  {"out", sample_out}};
    };
  });

  // project
  std::string proj_in, proj_out, proj_order, proj_blocks;
  ProjectionOptions proj_opts;
  auto* project = app.add_subcommand("project", "Project a matrix onto C(pi)");
  project->add_option("--in", proj_in, "Input matrix CSV")->required();
  project->add_option("--order", proj_order,
                      "Ranking as items best first, e.g. 2,0,1 (empty: 0,1,...,n-1)");
  project->add_option("--blocks", proj_blocks,
                      "Optional block label per item; blocks must be contiguous under --order");
  project->add_option("--out", proj_out, "Output matrix CSV")->required();
  add_projection_options(project, proj_opts);
  project->callback([&] {
    action = [&] {
      const Matrix y = read_matrix_csv(proj_in);
      const int n = static_cast<int>(y.rows());
      const Ranking pi = proj_order.empty()
                             ? Ranking::identity(n)
                             : Ranking::from_order(int_list(proj_order, "--order"));
      std::optional<BlockConstraint> blocks;
      if (!proj_blocks.empty()) blocks = BlockConstraint{int_list(proj_blocks, "--blocks")};
      const auto r = project_onto_class(y, pi, blocks, proj_opts.settings());
      write_matrix_csv(proj_out, r.estimate.values());
      json j = report_json(r);
      j["command"] = "project";
      j["out"] = proj_out;
      return j;
    };
  });

  // estimate
  std::string est_in, est_out, est_report, est_labels;
  std::uint64_t est_seed = 0;
  EstimatorOptions est_opts;
  auto* estimate = app.add_subcommand("estimate", "Estimate M from an observation");
  estimate->add_option("--in", est_in, "Observation CSV (0/1 entries)")->required();
  estimate->add_option("--seed", est_seed, "Seed for randomized estimators");
  estimate->add_option("--labels", est_labels, "Oracle: block label per item, block 0 best");
  estimate->add_option("--out", est_out, "Output estimate CSV")->required();
  estimate->add_option("--report", est_report, "Optional JSON diagnostics file");
  add_estimator_options(estimate, est_opts);
  estimate->callback([&] {
    action = [&] {
      const auto y = read_observation(est_in);
      const std::string& m = est_opts.method;
      EstimateReport r;
      if (m == "crl") {
        r = crl_estimate(y, crl_settings(est_opts, est_seed));
      } else if (m == "lse") {
        r = lse_exact(y, lse_settings(est_opts, threads));
      } else if (m == "reg") {
        r = reg_lse_exact(y, reg_settings(est_opts, threads));
      } else if (m == "oracle") {
        usage_check(!est_labels.empty(), "--labels is required for the oracle");
        OracleSettings s;
        s.projection = est_opts.projection.settings();
        r = oracle_estimate(y, PartitionSpec::from_labels(int_list(est_labels, "--labels")),
                            s);
      } else if (m == "trivial") {
        r.estimate = trivial_estimate(y.size());
        r.objective = objective(y.to_real(), r.estimate.values());
      } else {
        throw Error(ErrorCode::kUsageError,
                    "--method must be crl, lse, reg, oracle or trivial");
      }
      write_matrix_csv(est_out, r.estimate.values());
      json j = report_json(r);
      j["command"] = "estimate";
      j["method"] = m;
      j["seed"] = est_seed;
      j["out"] = est_out;
      if (!est_report.empty()) write_text(est_report, j.dump(2) + "\n");
      return j;
    };
  });

  // risk
  InstanceOptions risk_inst;
  EstimatorOptions risk_opts;
  int risk_trials = 100;
  std::uint64_t risk_seed = 0;
  std::string risk_out;
  auto* risk = app.add_subcommand("risk", "Monte-Carlo risk of an estimator");
  add_instance_options(risk, risk_inst);
  add_estimator_options(risk, risk_opts);
  risk->add_option("--trials", risk_trials, "Monte-Carlo trials");
  risk->add_option("--seed", risk_seed, "Master seed");
  risk->add_option("--out", risk_out, "Optional per-trial CSV");
  risk->callback([&] {
    action = [&] {
      usage_check(risk_trials >= 1, "--trials must be >= 1");
      const std::uint64_t instance_seed = mix_seed(risk_seed, 1);
      const std::uint64_t trial_seed = mix_seed(risk_seed, 2);
      const Instance inst = gen_sst_instance(instance_config(risk_inst, instance_seed));
      const auto factory = make_factory(risk_opts);
      const RiskSummary r = mc_risk(factory(inst), risk_opts.method, inst.matrix,
                                    inst.partition.sizes(), risk_trials, trial_seed,
                                    threads);
      if (!risk_out.empty()) {
        std::ostringstream csv;
        write_risk_csv(csv, r);
        write_text(risk_out, csv.str());
      }
      json j = to_json(r);
      j["command"] = "risk";
      j["seed"] = risk_seed;
      j["sub_seeds"] = {{"instance", instance_seed}, {"trials", trial_seed}};
      if (!risk_out.empty()) j["out"] = risk_out;
      return j;
    };
  });

  // adaptivity
  EstimatorOptions ad_opts;
  AdaptivitySettings ad_settings;
  int ad_n = 64;
  std::string ad_grid = "1,16,32,48,63", ad_out, ad_model = "link";
  auto* adapt = app.add_subcommand(
      "adaptivity", "Adaptivity ratio (oracle-proxy) over a k_max grid, sizes (k_max, 1, ..., 1)");
  add_estimator_options(adapt, ad_opts);
  adapt->add_option("--n", ad_n, "Number of items");
  adapt->add_option("--kmax-grid", ad_grid, "Comma-separated k_max values, each < n");
  adapt->add_option("--trials", ad_settings.trials, "Monte-Carlo trials per grid point");
  adapt->add_option("--seed", ad_settings.seed, "Master seed");
  adapt->add_option("--c-lower", ad_settings.c_lower,
                    "Reference lower-curve constant (not specified by theory)");
  adapt->add_option("--c-upper", ad_settings.c_upper,
                    "Reference upper-curve constant (not specified by theory)");
  adapt->add_option("--model", ad_model, "Instance model: link or random");
  adapt->add_option("--spread", ad_settings.spread, "Score range for the link model");
  adapt->add_option("--out", ad_out, "Output CSV, one row per k_max")->required();
  adapt->callback([&] {
    action = [&] {
      usage_check(ad_settings.trials >= 1, "--trials must be >= 1");
      ad_settings.threads = threads;
      ad_settings.model = parse_model(ad_model);
      const auto grid = int_list(ad_grid, "--kmax-grid");
      const auto rows =
          adaptivity_profile(make_factory(ad_opts), ad_opts.method, ad_n, grid, ad_settings);
      std::ostringstream csv;
      write_adaptivity_csv(csv, rows);
      write_text(ad_out, csv.str());
      json j = {{"command", "adaptivity"},
                {"quantity", "adaptivity ratio (oracle-proxy)"},
                {"method", ad_opts.method},
                {"n", ad_n},
                {"trials", ad_settings.trials},
                {"seed", ad_settings.seed},
                {"rows", json::array()},
                {"out", ad_out}};
      for (const auto& row : rows) j["rows"].push_back(to_json(row));
      return j;
    };
  });

  // demo-lse-failure
  int lse_n = 5, lse_trials = 50;
  std::uint64_t lse_seed = 0;
  std::string lse_out;
  ProjectionOptions lse_proj;
  auto* demo_lse = app.add_subcommand(
      "demo-lse-failure",
      "Exhaustive LSE on observations of the all-half matrix, against the (n-1)/4 floor");
  demo_lse->add_option("--n", lse_n, "Number of items (exhaustive, n <= 8)");
  demo_lse->add_option("--trials", lse_trials, "Number of observations");
  demo_lse->add_option("--seed", lse_seed, "Master seed");
  demo_lse->add_option("--out", lse_out, "Optional per-trial CSV");
  add_projection_options(demo_lse, lse_proj);
  demo_lse->callback([&] {
    action = [&] {
      usage_check(lse_trials >= 1, "--trials must be >= 1");
      usage_check(lse_n >= 2, "--n must be >= 2");
      const auto truth = ComparisonMatrix::all_half(lse_n);
      const double bound = (lse_n - 1) / 4.0;
      LseSettings s;
      s.threads = threads;
      s.projection = lse_proj.settings();
      std::ostringstream csv;
      csv << "trial,lse_distance,bound,holds,pythagorean_residual,witness_set_size,"
             "witness_distance\n";
      double min_distance = INFINITY, max_residual = 0.0;
      bool all_hold = true;
      for (int t = 0; t < lse_trials; ++t) {
        const auto y = sample_observation(truth, trial_sample_seed(lse_seed, t));
        const auto r = lse_exact(y, s);
        const double d = squared_distance(r.estimate, truth);
        const Matrix yr = y.to_real();
        const double residual = std::abs(squared_distance(yr, truth.values()) -
                                         squared_distance(yr, r.estimate.values()) - d);
        const auto w = theorem4_witness(y);
        const bool holds = d >= bound - 1e-8;
        min_distance = std::min(min_distance, d);
        max_residual = std::max(max_residual, residual);
        all_hold = all_hold && holds;
        csv << t << ',' << format_double(d) << ',' << format_double(bound) << ','
            << (holds ? 1 : 0) << ',' << format_double(residual) << ','
            << w.beaten.size() << ',' << format_double(w.witness_distance) << '\n';
      }
      if (!lse_out.empty()) write_text(lse_out, csv.str());
      json j = {{"command", "demo-lse-failure"},
                {"n", lse_n},
                {"trials", lse_trials},
                {"seed", lse_seed},
                {"min_distance", min_distance},
                {"bound", bound},
                {"all_hold", all_hold},
                {"max_pythagorean_residual", max_residual}};
      if (!lse_out.empty()) j["out"] = lse_out;
      return j;
    };
  });

  // demo-planted-clique
  int pc_n = 100, pc_k = 0;
  std::uint64_t pc_seed = 0;
  std::string pc_out;
  EstimatorOptions pc_opts;
  auto* demo_pc = app.add_subcommand(
      "demo-planted-clique",
      "Planted-clique reduction instances and the threshold detector on CRL estimates");
  demo_pc->add_option("--n", pc_n, "Number of items (even)");
  demo_pc->add_option("--k", pc_k, "Clique size (0: ceil(sqrt(n) / ln ln n))");
  demo_pc->add_option("--seed", pc_seed, "Master seed");
  demo_pc->add_option("--out", pc_out, "Optional CSV, one row per hypothesis");
  demo_pc->add_option("--threshold-multiplier", pc_opts.threshold_multiplier,
                      "CRL window threshold multiplier");
  add_projection_options(demo_pc, pc_opts.projection);
  demo_pc->callback([&] {
    action = [&] {
      usage_check(pc_n >= 4, "--n must be >= 4");
      const int k = pc_k > 0 ? pc_k
                             : static_cast<int>(std::ceil(std::sqrt(double(pc_n)) /
                                                          std::log(std::log(double(pc_n)))));
      const double threshold = double(k) * k / 16.0;
      const std::uint64_t clique_seed = mix_seed(pc_seed, 1);
      std::ostringstream csv;
      csv << "hypothesis,n,k,exact_distance,estimate_distance,threshold,decision\n";
      json hyps = json::array();
      for (int present = 0; present <= 1; ++present) {
        const auto truth = gen_planted_clique_instance(pc_n, k, present == 1, clique_seed);
        const auto half = ComparisonMatrix::all_half(pc_n);
        const double exact = squared_distance(truth, half);
        const auto y = sample_observation(truth, mix_seed(pc_seed, 2 + present));
        const auto r = crl_estimate(y, crl_settings(pc_opts, mix_seed(pc_seed, 4 + present)));
        const double est = squared_distance(r.estimate, half);
        const auto decision = planted_clique_detect(r.estimate, k);
        const std::string name = present ? "present" : "absent";
        csv << name << ',' << pc_n << ',' << k << ',' << format_double(exact) << ','
            << format_double(est) << ',' << format_double(threshold) << ','
            << clique_decision_name(decision) << '\n';
        hyps.push_back({{"hypothesis", name},
                        {"exact_distance", exact},
                        {"estimate_distance", est},
                        {"decision", clique_decision_name(decision)}});
      }
      if (!pc_out.empty()) write_text(pc_out, csv.str());
      json j = {{"command", "demo-planted-clique"},
                {"n", pc_n},
                {"k", k},
                {"threshold", threshold},
                {"seed", pc_seed},
                {"sub_seeds",
                 {{"clique", clique_seed},
                  {"sample_absent", mix_seed(pc_seed, 2)},
                  {"sample_present", mix_seed(pc_seed, 3)},
                  {"crl_absent", mix_seed(pc_seed, 4)},
                  {"crl_present", mix_seed(pc_seed, 5)}}},
                {"hypotheses", hyps}};
      if (!pc_out.empty()) j["out"] = pc_out;
      return j;
    };
  });

  auto fail = [&](std::string_view category, const std::string& message, int code) {
    err << json{{"error", category}, {"message", message}}.dump() << '\n';
    return code;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    const bool io = dynamic_cast<const CLI::FileError*>(&e) != nullptr;
    return io ? fail("IoError", e.what(), kExitIo) : fail("UsageError", e.what(), kExitUsage);
  }

  try {
    const json summary = action();
    out << summary.dump() << '\n';
    return kExitOk;
  } catch (const Error& e) {
    const int code = e.code() == ErrorCode::kUsageError ? kExitUsage
                     : e.code() == ErrorCode::kIoError  ? kExitIo
                                                        : kExitDomain;
    return fail(error_code_name(e.code()), e.what(), code);
  } catch (const std::exception& e) {
    return fail("InternalError", e.what(), kExitDomain);
  }
}

}  // namespace sst::cli

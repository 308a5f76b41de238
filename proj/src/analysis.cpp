#include "sst/analysis.hpp"

#include <cmath>
#include <ostream>

#include "sst/core.hpp"
#include "sst/error.hpp"
#include "sst/estimators.hpp"
#include "sst/matrix_io.hpp"
#include "sst/parallel.hpp"
#include "sst/random.hpp"

namespace sst {

std::uint64_t trial_sample_seed(std::uint64_t seed, int trial) {
  return mix_seed(seed + static_cast<std::uint64_t>(trial), 1);
}

std::uint64_t trial_estimator_seed(std::uint64_t seed, int trial) {
  return mix_seed(seed + static_cast<std::uint64_t>(trial), 2);
}

RiskSummary mc_risk(const Estimator& estimator, const std::string& estimator_id,
                    const ComparisonMatrix& truth, const std::vector<int>& sizes,
                    int trials, std::uint64_t seed, int threads) {
  if (trials < 1) throw Error(ErrorCode::kInvalidArgument, "trials must be >= 1");
  RiskSummary r;
  r.estimator = estimator_id;
  r.n = truth.size();
  r.sizes = sizes;
  r.trials = trials;
  r.per_trial.assign(trials, 0.0);
  parallel_for(trials, threads, [&](std::size_t t) {
    try {
      const int trial = static_cast<int>(t);
      const auto y = sample_observation(truth, trial_sample_seed(seed, trial));
      const auto estimate = estimator(y, trial_estimator_seed(seed, trial));
      r.per_trial[t] = squared_distance(estimate, truth);
    } catch (const Error& e) {
      throw Error(e.code(), "trial " + std::to_string(t) + ": " + e.what());
    }
  });

  // Serial sums keep the result independent of the worker count.
  double sum = 0.0;
  for (double e : r.per_trial) sum += e;
  r.mean = sum / trials;
  if (trials > 1) {
    double ss = 0.0;
    for (double e : r.per_trial) ss += (e - r.mean) * (e - r.mean);
    r.std_error = std::sqrt(ss / (trials - 1) / trials);
  }
  return r;
}

Prop1Bounds prop1_bounds(int n, int kmax, double c_lower, double c_upper) {
  if (n < 2 || kmax < 1 || kmax > n) {
    throw Error(ErrorCode::kInvalidArgument, "prop1_bounds needs 1 <= k_max <= n");
  }
  const double log_n = std::log(double(n));
  return {c_lower * double(n - kmax), c_upper * double(n - kmax + 1) * log_n * log_n};
}

Estimator oracle_proxy(const Instance& instance) {
  OracleSettings settings;
  settings.assume_label_order =
      instance.partition.block_count() > settings.max_enumerated_blocks;
  PartitionSpec partition = instance.partition;
  return [settings, partition](const ObservationMatrix& y, std::uint64_t) {
    return oracle_estimate(y, partition, settings).estimate;
  };
}

Instance adaptivity_instance(int n, int kmax, std::size_t grid_index,
                             const AdaptivitySettings& settings) {
  if (kmax < 1 || kmax >= n) {
    throw Error(ErrorCode::kInvalidArgument, "adaptivity grid needs 1 <= k_max < n");
  }
  InstanceConfig cfg;
  cfg.n = n;
  cfg.sizes.assign(n - kmax + 1, 1);
  cfg.sizes[0] = kmax;
  cfg.model = settings.model;
  cfg.seed = mix_seed(settings.seed, 1000 + grid_index);
  cfg.spread = settings.spread;
  return gen_sst_instance(cfg);
}

std::vector<AdaptivityRow> adaptivity_profile(const EstimatorFactory& factory,
                                              const std::string& estimator_id,
                                              int n, const std::vector<int>& grid,
                                              const AdaptivitySettings& settings) {
  std::vector<AdaptivityRow> rows;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const Instance instance = adaptivity_instance(n, grid[g], g, settings);
    const std::uint64_t seed = mix_seed(settings.seed, 2000 + g);
    AdaptivityRow row;
    row.kmax = grid[g];
    row.estimator_risk = mc_risk(factory(instance), estimator_id, instance.matrix,
                                 instance.partition.sizes(), settings.trials, seed,
                                 settings.threads);
    row.oracle_risk = mc_risk(oracle_proxy(instance), "oracle", instance.matrix,
                              instance.partition.sizes(), settings.trials, seed,
                              settings.threads);
    row.ratio = row.oracle_risk.mean > 0.0
                    ? row.estimator_risk.mean / row.oracle_risk.mean
                    : (row.estimator_risk.mean > 0.0 ? INFINITY : 1.0);
    row.reference = prop1_bounds(n, grid[g], settings.c_lower, settings.c_upper);
    rows.push_back(std::move(row));
  }
  return rows;
}

CliqueDecision planted_clique_detect(const ComparisonMatrix& estimate, int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "clique size must be >= 1");
  const double distance =
      squared_distance(estimate, ComparisonMatrix::all_half(estimate.size()));
  return distance <= double(k) * k / 16.0 ? CliqueDecision::kAbsent
                                          : CliqueDecision::kPresent;
}

std::string_view clique_decision_name(CliqueDecision d) {
  return d == CliqueDecision::kAbsent ? "absent" : "present";
}

WitnessReport theorem4_witness(const ObservationMatrix& y) {
  const int n = y.size();
  WitnessReport w;
  int best = -1;
  for (int i = 0; i < n; ++i) {
    int wins = 0;
    for (int j = 0; j < n; ++j) {
      if (j != i) wins += y(i, j);
    }
    if (wins > best) {
      best = wins;
      w.leader = i;
    }
  }
  Matrix m = Matrix::Constant(n, n, 0.5);
  for (int j = 0; j < n; ++j) {
    if (j != w.leader && y(w.leader, j) == 1) {
      w.beaten.push_back(j);
      m(w.leader, j) = 1.0;
      m(j, w.leader) = 0.0;
    }
  }
  w.witness = validate_comparison(m, 0.0);

  const Matrix half = Matrix::Constant(n, n, 0.5);
  const Matrix yr = y.to_real();
  w.witness_distance = squared_distance(m, half);
  w.decomposition_residual = std::abs(squared_distance(yr, half) -
                                      squared_distance(yr, m) - w.witness_distance);
  w.set_size_ok = 2 * static_cast<int>(w.beaten.size()) >= n - 1;
  w.distance_ok = w.witness_distance >= (n - 1) / 4.0;
  return w;
}

nlohmann::json to_json(const RiskSummary& r, bool include_trials) {
  nlohmann::json j = {{"estimator", r.estimator}, {"n", r.n},
                      {"sizes", r.sizes},         {"trials", r.trials},
                      {"mean", r.mean},           {"std_error", r.std_error}};
  if (include_trials) j["per_trial"] = r.per_trial;
  return j;
}

nlohmann::json to_json(const AdaptivityRow& row) {
  return {{"kmax", row.kmax},
          {"estimator_risk", row.estimator_risk.mean},
          {"estimator_se", row.estimator_risk.std_error},
          {"oracle_proxy_risk", row.oracle_risk.mean},
          {"oracle_proxy_se", row.oracle_risk.std_error},
          {"adaptivity_ratio_oracle_proxy", row.ratio},
          {"prop1_lower", row.reference.lower},
          {"prop1_upper", row.reference.upper}};
}

void write_risk_csv(std::ostream& out, const RiskSummary& r) {
  out << "trial,estimator,n,squared_error\n";
  for (int t = 0; t < r.trials; ++t) {
    out << t << ',' << r.estimator << ',' << r.n << ','
        << format_double(r.per_trial[t]) << '\n';
  }
}

void write_adaptivity_csv(std::ostream& out, const std::vector<AdaptivityRow>& rows) {
  out << "kmax,estimator,estimator_risk,estimator_se,oracle_proxy_risk,"
         "oracle_proxy_se,adaptivity_ratio_oracle_proxy,prop1_lower,prop1_upper\n";
  for (const auto& row : rows) {
    out << row.kmax << ',' << row.estimator_risk.estimator << ','
        << format_double(row.estimator_risk.mean) << ','
        << format_double(row.estimator_risk.std_error) << ','
        << format_double(row.oracle_risk.mean) << ','
        << format_double(row.oracle_risk.std_error) << ','
        << format_double(row.ratio) << ',' << format_double(row.reference.lower)
        << ',' << format_double(row.reference.upper) << '\n';
  }
}

}  // namespace sst

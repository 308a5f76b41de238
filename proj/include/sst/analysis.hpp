#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sst/gen.hpp"
#include "sst/types.hpp"

namespace sst {

// An estimator as seen by the risk harness: observation plus a per-trial seed
// (only randomized estimators use it) to an estimate.
using Estimator =
    std::function<ComparisonMatrix(const ObservationMatrix&, std::uint64_t)>;

struct RiskSummary {
  std::string estimator;
  int n = 0;
  std::vector<int> sizes;
  int trials = 0;
  double mean = 0.0;       // mean squared Frobenius error
  double std_error = 0.0;  // sample standard deviation / sqrt(trials)
  std::vector<double> per_trial;
};

// Seeds used for trial t of a run with master seed s.
std::uint64_t trial_sample_seed(std::uint64_t seed, int trial);
std::uint64_t trial_estimator_seed(std::uint64_t seed, int trial);

// Averages ||estimator(Y_t) - M*||^2 over Y_t = sample_observation(M*,
// trial_sample_seed(seed, t)). Trials run on up to `threads` workers and the
// result does not depend on the worker count. A failing trial aborts the run
// with an Error that names the trial.
RiskSummary mc_risk(const Estimator& estimator, const std::string& estimator_id,
                    const ComparisonMatrix& truth, const std::vector<int>& sizes,
                    int trials, std::uint64_t seed, int threads = 0);

struct Prop1Bounds {
  double lower = 0.0;  // c_lower * (n - k_max)
  double upper = 0.0;  // c_upper * (n - k_max + 1) * (ln n)^2
};

Prop1Bounds prop1_bounds(int n, int kmax, double c_lower = 1.0,
                         double c_upper = 1.0);

struct AdaptivityRow {
  int kmax = 0;
  RiskSummary estimator_risk;
  RiskSummary oracle_risk;  // labels-known oracle proxy
  double ratio = 0.0;       // adaptivity ratio (oracle-proxy)
  Prop1Bounds reference;
};

struct AdaptivitySettings {
  int trials = 100;
  std::uint64_t seed = 0;
  int threads = 0;
  double c_lower = 1.0;
  double c_upper = 1.0;
  InstanceModel model = InstanceModel::kLinkScores;
  double spread = 2.0;
};

// Builds the estimator for a given instance. Most estimators ignore the
// instance; the oracle proxy reads its partition.
using EstimatorFactory = std::function<Estimator(const Instance&)>;

// Oracle proxy for an instance: exact block-order enumeration while the block
// count allows it, otherwise the known label order.
Estimator oracle_proxy(const Instance& instance);

// Instance used for grid point k: sizes (k, 1, ..., 1).
Instance adaptivity_instance(int n, int kmax, std::size_t grid_index,
                             const AdaptivitySettings& settings);

// For each k in the grid, the estimator's and the oracle proxy's risk on the
// same samples of adaptivity_instance(n, k, ...). Requires 1 <= k < n.
std::vector<AdaptivityRow> adaptivity_profile(const EstimatorFactory& factory,
                                              const std::string& estimator_id,
                                              int n, const std::vector<int>& grid,
                                              const AdaptivitySettings& settings);

enum class CliqueDecision { kAbsent, kPresent };

// Absent iff ||estimate - 11^T/2||^2 <= k^2 / 16.
CliqueDecision planted_clique_detect(const ComparisonMatrix& estimate, int k);
std::string_view clique_decision_name(CliqueDecision d);

struct WitnessReport {
  ComparisonMatrix witness = ComparisonMatrix::all_half(2);
  int leader = 0;             // item with the most off-diagonal wins
  std::vector<int> beaten;    // items the leader beat in Y
  bool set_size_ok = false;   // |beaten| >= (n - 1) / 2
  double decomposition_residual = 0.0;
  double witness_distance = 0.0;  // ||witness - 11^T/2||^2
  bool distance_ok = false;       // witness_distance >= (n - 1) / 4
};

// The witness matrix: 1/2 everywhere except leader-beats-j entries set to 1
// (and their mirror to 0) for every j the leader beat in Y.
WitnessReport theorem4_witness(const ObservationMatrix& y);

// Serialization. CSV columns are listed in the README.
nlohmann::json to_json(const RiskSummary& r, bool include_trials = false);
nlohmann::json to_json(const AdaptivityRow& row);
void write_risk_csv(std::ostream& out, const RiskSummary& r);
void write_adaptivity_csv(std::ostream& out, const std::vector<AdaptivityRow>& rows);

}  // namespace sst

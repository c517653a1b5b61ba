#ifndef RANDCORR_SHOTSIM_HPP
#define RANDCORR_SHOTSIM_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "randcorr/correlations.hpp"
#include "randcorr/witness.hpp"

namespace randcorr {

struct ExperimentConfig {
  int num_parties = 0;
  std::int64_t num_settings = 1;           // M
  std::optional<std::int64_t> shots;       // K; nullopt = infinite
  std::uint64_t seed = 0;

  void validate() const;
};

struct RunRecord {
  std::int64_t setting_index = 0;
  SettingTuple settings;
  double exact_e = 0.0;
  double estimated_e = 0.0;  // equals exact_e when K is infinite
  std::int64_t shot_sum = 0; // sum of +-1 outcomes; 0 when K is infinite
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunRecord> records;
  double r_mk = 0.0;
  // Diagnostic only, never subtracted: (1 - r_mk) / K estimate of the
  // finite-K upward bias; 0 when K is infinite.
  double finite_k_bias = 0.0;
};

struct ShotOutcome {
  std::int64_t shot_sum = 0;
  double estimate = 0.0;  // shot_sum / K
};

// K independent +-1 outcomes with P(+1) = (1 + e)/2, drawn from the
// counter-based stream keyed by (seed, shot tag, stream_index, shot).
ShotOutcome simulate_shots(double e, std::int64_t shots, std::uint64_t seed,
                           std::uint64_t stream_index);

ExperimentResult run_experiment(const ExperimentConfig& config, const CorrelationTensor& tensor,
                                int threads = 0);
ExperimentResult run_experiment(const ExperimentConfig& config, const PureState& psi,
                                int threads = 0);
ExperimentResult run_experiment(const ExperimentConfig& config, const DensityMatrix& rho,
                                int threads = 0);

// Mean and sample standard deviation of R_{M,K} over repeated experiments
// with per-repetition derived seeds.
std::pair<double, double> empirical_deviation(const ExperimentConfig& config,
                                              const CorrelationTensor& tensor,
                                              int repetitions, int threads = 0);

// Single random setting tuple (M = 1) on an ideal GHZ_8, K shots, witness at
// the given confidence; returns the fraction of repetitions declared
// entangled.
double eight_photon_success_rate(std::int64_t shots, ConfidenceLevel confidence,
                                 std::int64_t repetitions, std::uint64_t seed,
                                 int threads = 0);

}  // namespace randcorr

#endif

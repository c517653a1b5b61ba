#include "randcorr/shotsim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "randcorr/parallel.hpp"
#include "randcorr/rng.hpp"

namespace randcorr {

void ExperimentConfig::validate() const {
  if (num_parties < 1) throw std::invalid_argument("config: N must be >= 1");
  if (num_settings < 1) throw std::invalid_argument("config: M must be >= 1");
  if (shots && *shots < 1) throw std::invalid_argument("config: K must be >= 1 or infinite");
  if (shots) {
    // M*K shots are addressed by 64-bit counters
    long double total = static_cast<long double>(num_settings) * static_cast<long double>(*shots);
    if (total > 9e18L) throw std::invalid_argument("config: M*K overflows the shot counter");
  }
}

ShotOutcome simulate_shots(double e, std::int64_t shots, std::uint64_t seed,
                           std::uint64_t stream_index) {
  if (std::abs(e) > 1.0 + kTol)
    throw std::invalid_argument("correlation value " + std::to_string(e) +
                                " lies outside [-1, 1]");
  if (shots < 1) throw std::domain_error("K must be >= 1");
  double p_plus = 0.5 * (1.0 + std::clamp(e, -1.0, 1.0));
  std::int64_t sum = 0;
  for (std::int64_t j = 0; j < shots; ++j) {
    RngStream rng = RngStream::keyed(seed, stream_tag::kShot, stream_index,
                                     static_cast<std::uint64_t>(j));
    sum += rng.uniform() < p_plus ? 1 : -1;
  }
  return {sum, static_cast<double>(sum) / static_cast<double>(shots)};
}

ExperimentResult run_experiment(const ExperimentConfig& config, const CorrelationTensor& tensor,
                                int threads) {
  config.validate();
  if (tensor.num_parties != config.num_parties)
    throw std::invalid_argument("config party count does not match the state");
  ExperimentResult result;
  result.config = config;
  result.records.resize(config.num_settings);
  int n = config.num_parties;
  parallel_for(config.num_settings, threads, [&](std::int64_t i) {
    RunRecord& rec = result.records[i];
    rec.setting_index = i;
    rec.settings.resize(n);
    for (int p = 0; p < n; ++p)
      rec.settings[p] = setting_direction(config.seed, static_cast<std::uint64_t>(i), p);
    rec.exact_e = correlation_value(tensor, rec.settings);
    if (config.shots) {
      ShotOutcome shot = simulate_shots(rec.exact_e, *config.shots, config.seed,
                                        static_cast<std::uint64_t>(i));
      rec.shot_sum = shot.shot_sum;
      rec.estimated_e = shot.estimate;
    } else {
      rec.estimated_e = rec.exact_e;
    }
  });
  double sum = 0.0;
  for (const RunRecord& rec : result.records) sum += rec.estimated_e * rec.estimated_e;
  result.r_mk = sum / static_cast<double>(config.num_settings);
  if (config.shots)
    result.finite_k_bias = (1.0 - result.r_mk) / static_cast<double>(*config.shots);
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const PureState& psi,
                                int threads) {
  return run_experiment(config, correlation_tensor(psi), threads);
}

ExperimentResult run_experiment(const ExperimentConfig& config, const DensityMatrix& rho,
                                int threads) {
  return run_experiment(config, correlation_tensor(rho), threads);
}

std::pair<double, double> empirical_deviation(const ExperimentConfig& config,
                                              const CorrelationTensor& tensor,
                                              int repetitions, int threads) {
  if (repetitions < 2) throw std::domain_error("repetitions must be >= 2");
  std::vector<double> values(repetitions);
  for (int r = 0; r < repetitions; ++r) {
    ExperimentConfig rep = config;
    rep.seed = derive_key({config.seed, stream_tag::kRepetition, static_cast<std::uint64_t>(r)});
    values[r] = run_experiment(rep, tensor, threads).r_mk;
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= repetitions;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (repetitions - 1))};
}

double eight_photon_success_rate(std::int64_t shots, ConfidenceLevel confidence,
                                 std::int64_t repetitions, std::uint64_t seed,
                                 int threads) {
  if (shots < 1) throw std::domain_error("K must be >= 1");
  if (repetitions < 1) throw std::domain_error("repetitions must be >= 1");
  const int n = 8;
  CorrelationTensor tensor = correlation_tensor(make_ghz(n));
  std::vector<unsigned char> hit(repetitions, 0);
  parallel_for(repetitions, threads, [&](std::int64_t r) {
    SettingTuple s(n);
    for (int p = 0; p < n; ++p)
      s[p] = setting_direction(seed, static_cast<std::uint64_t>(r), p);
    double e = correlation_value(tensor, s);
    ShotOutcome shot = simulate_shots(e, shots, seed, static_cast<std::uint64_t>(r));
    WitnessVerdict v = witness_decide(shot.estimate * shot.estimate, n, 1, shots, confidence);
    hit[r] = v.entangled ? 1 : 0;
  });
  std::int64_t count = 0;
  for (unsigned char h : hit) count += h;
  return static_cast<double>(count) / static_cast<double>(repetitions);
}

}  // namespace randcorr

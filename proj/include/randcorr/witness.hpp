#ifndef RANDCORR_WITNESS_HPP
#define RANDCORR_WITNESS_HPP

#include <cstdint>
#include <optional>

#include "randcorr/states.hpp"

namespace randcorr {

// Confidence probability together with the normal-distribution multiplier it
// maps to. The canonical sigma-convention points are pinned exactly:
// 0.80 -> 1.2816, 0.954 -> 2.0, 0.997 -> 3.0 (two-sided).
struct ConfidenceLevel {
  double p = 0.954;
  double z = 2.0;
  bool one_sided = false;

  static ConfidenceLevel two_sided(double p);
  static ConfidenceLevel one_sided_level(double p);
};

// Inverse standard normal CDF.
double inverse_normal_cdf(double p);

// Density of E^2 for a product state under sphere-uniform settings,
// chi_N(e2) = (-ln e2)^{N-1} / (2^N sqrt(e2) (N-1)!), on (0, 1].
double chi_density(double e2, int num_parties);

// CDF of chi_N: Gamma_upper(N, -ln(c)/2) / (N-1)!.
double chi_cdf(double c, int num_parties);

// Standard deviation of E^2 under chi_N: sqrt(1/5^N - 1/9^N).
double delta_product(int num_parties);

// Finite-settings deviation: delta_product(N) / sqrt(M).
double delta_m(int num_parties, std::int64_t num_settings);

// Finite-shots deviation (K >= 2), valid for sufficiently large M.
double delta_k(int num_parties, std::int64_t num_settings, std::int64_t shots);

// Combined deviation sqrt(delta_m^2 + delta_k^2); shots == nullopt means
// K infinite (delta_k = 0).
double delta_mk(int num_parties, std::int64_t num_settings, std::optional<std::int64_t> shots);

// Upper bound 1/5^{N/2} on the E^2 deviation of any separable state.
double separable_delta_bound(int num_parties);

enum class BoundMode { kPure, kSeparable };

struct WitnessVerdict {
  double estimate = 0.0;
  double threshold = 0.0;
  double delta_m = 0.0;
  double delta_k = 0.0;
  double delta_mk = 0.0;
  bool entangled = false;
  ConfidenceLevel confidence;
  BoundMode mode = BoundMode::kPure;
  int num_parties = 0;
  std::int64_t num_settings = 0;
  std::optional<std::int64_t> shots;  // nullopt = infinite
};

// Declares entanglement when r_hat > 1/3^N + z * Delta_{M,K}. In separable
// mode the per-sample deviation is replaced by the separable bound.
WitnessVerdict witness_decide(double r_hat, int num_parties, std::int64_t num_settings,
                              std::optional<std::int64_t> shots, ConfidenceLevel confidence,
                              BoundMode mode = BoundMode::kPure);

struct SingleSettingThreshold {
  double c = 0.0;        // absolute threshold on E^2
  double delta_n = 0.0;  // c - 1/3^N
};

// Solves chi_cdf(c, N) = confidence.p by bisection to 1e-12.
SingleSettingThreshold single_setting_threshold(int num_parties, ConfidenceLevel confidence);

// Fraction of sphere-uniform setting tuples with E^2 above the
// single-setting threshold.
double detection_probability(const PureState& psi, ConfidenceLevel confidence,
                             std::int64_t num_samples, std::uint64_t seed, int threads = 0);

// White-noise admixture above which the separable-bound witness fires for
// GHZ + white noise: sqrt(3^N / (2^{N-2} 5^{N/2})).
double ghz_noise_threshold(int num_parties);

}  // namespace randcorr

#endif

#include "randcorr/witness.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "randcorr/correlations.hpp"
#include "randcorr/parallel.hpp"
#include "randcorr/rng.hpp"

namespace randcorr {

namespace {

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("confidence probability must lie in (0, 1)");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Regularized upper incomplete gamma for integer first argument:
// Q(n, x) = e^{-x} sum_{k=0}^{n-1} x^k / k!.
double upper_gamma_regularized(int n, double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < n; ++k) {
    term *= x / k;
    sum += term;
  }
  return std::exp(-x) * sum;
}

}  // namespace

double inverse_normal_cdf(double p) {
  check_probability(p);
  // Acklam's rational approximation, then one Newton refinement via erfc.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  for (int iter = 0; iter < 2; ++iter) {
    double err = normal_cdf(x) - p;
    double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
    if (pdf > 0.0) x -= err / pdf;
  }
  return x;
}

ConfidenceLevel ConfidenceLevel::two_sided(double p) {
  check_probability(p);
  // pinned sigma-convention table
  double z;
  if (std::abs(p - 0.954) < 1e-12) {
    z = 2.0;
  } else if (std::abs(p - 0.80) < 1e-12) {
    z = 1.2816;
  } else if (std::abs(p - 0.997) < 1e-12) {
    z = 3.0;
  } else {
    z = inverse_normal_cdf(0.5 * (1.0 + p));
  }
  return {p, z, false};
}

ConfidenceLevel ConfidenceLevel::one_sided_level(double p) {
  check_probability(p);
  return {p, inverse_normal_cdf(p), true};
}

double chi_density(double e2, int num_parties) {
  if (num_parties < 1) throw std::domain_error("N must be >= 1");
  if (e2 <= 0.0 || e2 > 1.0)
    throw std::domain_error("chi_N is defined on (0, 1]");
  double log_e2 = std::log(e2);
  return std::pow(-log_e2, num_parties - 1) /
         (std::pow(2.0, num_parties) * std::sqrt(e2) * factorial(num_parties - 1));
}

double chi_cdf(double c, int num_parties) {
  if (num_parties < 1) throw std::domain_error("N must be >= 1");
  if (c < 0.0 || c > 1.0) throw std::domain_error("argument of chi_cdf must lie in [0, 1]");
  if (c == 0.0) return 0.0;
  if (c == 1.0) return 1.0;
  return upper_gamma_regularized(num_parties, -0.5 * std::log(c));
}

double delta_product(int num_parties) {
  if (num_parties < 1) throw std::domain_error("N must be >= 1");
  return std::sqrt(std::pow(5.0, -num_parties) - std::pow(9.0, -num_parties));
}

double delta_m(int num_parties, std::int64_t num_settings) {
  if (num_settings < 1) throw std::domain_error("M must be >= 1");
  return delta_product(num_parties) / std::sqrt(static_cast<double>(num_settings));
}

double delta_k(int num_parties, std::int64_t num_settings, std::int64_t shots) {
  if (shots < 2) throw std::domain_error("K must be >= 2");
  if (num_settings < 1) throw std::domain_error("M must be >= 1");
  double m = static_cast<double>(num_settings);
  double k = static_cast<double>(shots);
  double dm = delta_m(num_parties, num_settings);
  double inv3 = std::pow(3.0, -num_parties);
  double inv9 = std::pow(9.0, -num_parties);
  double bracket = 1.0 - 2.0 * (1.0 - k) * inv3 + (1.0 - 2.0 * k) * (inv9 - dm * dm);
  double var = 2.0 / (m * k * k) * bracket;
  if (var <= 0.0)
    throw std::domain_error("finite-K variance formula is outside its validity regime at N=" +
                            std::to_string(num_parties) + " M=" + std::to_string(num_settings) +
                            " K=" + std::to_string(shots));
  return std::sqrt(var);
}

double delta_mk(int num_parties, std::int64_t num_settings, std::optional<std::int64_t> shots) {
  double dm = delta_m(num_parties, num_settings);
  double dk = shots ? delta_k(num_parties, num_settings, *shots) : 0.0;
  return std::sqrt(dm * dm + dk * dk);
}

double separable_delta_bound(int num_parties) {
  if (num_parties < 1) throw std::domain_error("N must be >= 1");
  return std::pow(5.0, -0.5 * num_parties);
}

WitnessVerdict witness_decide(double r_hat, int num_parties, std::int64_t num_settings,
                              std::optional<std::int64_t> shots, ConfidenceLevel confidence,
                              BoundMode mode) {
  if (num_parties < 1) throw std::domain_error("N must be >= 1");
  if (num_settings < 1) throw std::domain_error("M must be >= 1");
  if (r_hat < -kTol || r_hat > 1.0 + kTol)
    throw std::invalid_argument("R estimate must lie in [0, 1]");
  check_probability(confidence.p);

  WitnessVerdict v;
  v.estimate = r_hat;
  v.confidence = confidence;
  v.mode = mode;
  v.num_parties = num_parties;
  v.num_settings = num_settings;
  v.shots = shots;
  double per_sample = mode == BoundMode::kSeparable ? separable_delta_bound(num_parties)
                                                    : delta_product(num_parties);
  v.delta_m = per_sample / std::sqrt(static_cast<double>(num_settings));
  v.delta_k = shots ? delta_k(num_parties, num_settings, *shots) : 0.0;
  v.delta_mk = std::sqrt(v.delta_m * v.delta_m + v.delta_k * v.delta_k);
  v.threshold = std::pow(3.0, -num_parties) + confidence.z * v.delta_mk;
  v.entangled = r_hat > v.threshold;
  return v;
}

SingleSettingThreshold single_setting_threshold(int num_parties, ConfidenceLevel confidence) {
  check_probability(confidence.p);
  double lo = 0.0;
  double hi = 1.0;
  // chi_cdf is continuous and strictly increasing on [0, 1]
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if (chi_cdf(mid, num_parties) < confidence.p)
      lo = mid;
    else
      hi = mid;
  }
  double c = 0.5 * (lo + hi);
  return {c, c - std::pow(3.0, -num_parties)};
}

double detection_probability(const PureState& psi, ConfidenceLevel confidence,
                             std::int64_t num_samples, std::uint64_t seed, int threads) {
  if (num_samples < 1) throw std::domain_error("num_samples must be >= 1");
  psi.validate();
  int n = psi.num_parties();
  double threshold = single_setting_threshold(n, confidence).c;
  std::vector<unsigned char> hit(num_samples, 0);
  parallel_for(num_samples, threads, [&](std::int64_t i) {
    SettingTuple s(n);
    for (int p = 0; p < n; ++p)
      s[p] = setting_direction(seed, static_cast<std::uint64_t>(i), p);
    double e = correlation_direct(psi, s);
    hit[i] = e * e > threshold ? 1 : 0;
  });
  std::int64_t count = 0;
  for (unsigned char h : hit) count += h;
  return static_cast<double>(count) / static_cast<double>(num_samples);
}

double ghz_noise_threshold(int num_parties) {
  if (num_parties < 2) throw std::domain_error("N must be >= 2");
  return std::sqrt(std::pow(3.0, num_parties) /
                   (std::pow(2.0, num_parties - 2) * std::pow(5.0, 0.5 * num_parties)));
}

}  // namespace randcorr

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "randcorr/shotsim.hpp"

using namespace randcorr;

TEST_CASE("deterministic correlations give exact shot averages") {
  ShotOutcome out = simulate_shots(1.0, 1000, 1, 0);
  CHECK(out.shot_sum == 1000);
  CHECK(out.estimate == 1.0);
  ShotOutcome neg = simulate_shots(-1.0, 1000, 1, 0);
  CHECK(neg.shot_sum == -1000);
  CHECK_THROWS_AS(simulate_shots(1.2, 10, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(simulate_shots(0.0, 0, 1, 0), std::domain_error);
}

TEST_CASE("shot averages are unbiased with variance (1 - e^2)/K") {
  const double e = 0.4;
  const std::int64_t k = 100;
  const int reps = 20000;
  std::vector<double> estimates(reps);
  for (int r = 0; r < reps; ++r) estimates[r] = simulate_shots(e, k, 33, r).estimate;
  auto [mean, stddev] = oracles::mean_std(estimates);
  double expected_std = std::sqrt((1.0 - e * e) / static_cast<double>(k));
  CHECK(std::abs(mean - e) < 4.0 * expected_std / std::sqrt(reps));
  CHECK(stddev == doctest::Approx(expected_std).epsilon(0.05));
}

TEST_CASE("shot sums follow the binomial law (chi-square goodness of fit)") {
  const double e = 0.2;
  const double p = (1.0 + e) / 2.0;
  const std::int64_t k = 20;
  const int reps = 100000;
  std::vector<double> counts(k + 1, 0.0);
  for (int r = 0; r < reps; ++r) {
    std::int64_t plus = (simulate_shots(e, k, 44, r).shot_sum + k) / 2;
    counts[plus] += 1.0;
  }
  // binomial pmf via logarithms, merge bins with expectation < 5
  std::vector<double> expected(k + 1);
  for (std::int64_t j = 0; j <= k; ++j) {
    double lp = std::lgamma(k + 1.0) - std::lgamma(j + 1.0) - std::lgamma(k - j + 1.0) +
                j * std::log(p) + (k - j) * std::log(1.0 - p);
    expected[j] = reps * std::exp(lp);
  }
  double stat = 0.0;
  int bins = 0;
  double obs_acc = 0.0, exp_acc = 0.0;
  for (std::int64_t j = 0; j <= k; ++j) {
    obs_acc += counts[j];
    exp_acc += expected[j];
    if (exp_acc >= 5.0 && (j == k || expected[j + 1] >= 5.0)) {
      stat += (obs_acc - exp_acc) * (obs_acc - exp_acc) / exp_acc;
      ++bins;
      obs_acc = exp_acc = 0.0;
    }
  }
  if (exp_acc > 0.0) {
    stat += (obs_acc - exp_acc) * (obs_acc - exp_acc) / exp_acc;
    ++bins;
  }
  CHECK(oracles::chi_square_pvalue(stat, bins - 1) > 0.001);
}

TEST_CASE("shot streams are independent across stream indices") {
  ShotOutcome a = simulate_shots(0.0, 500, 7, 0);
  ShotOutcome b = simulate_shots(0.0, 500, 7, 1);
  CHECK(a.shot_sum != b.shot_sum);  // 500 coin flips colliding exactly is ~3% odds,
                                    // and fixed seeds make this deterministic anyway
}

TEST_CASE("experiment with infinite shots reproduces the Monte Carlo estimate") {
  CorrelationTensor ghz3 = correlation_tensor(make_ghz(3));
  ExperimentConfig config{3, 2000, std::nullopt, 55};
  ExperimentResult res = run_experiment(config, ghz3);
  McEstimate mc = random_correlations_mc(ghz3, 2000, 55);
  CHECK(res.r_mk == doctest::Approx(mc.estimate).epsilon(1e-12));
  CHECK(res.finite_k_bias == 0.0);
  REQUIRE(res.records.size() == 2000);
  for (const RunRecord& rec : res.records) {
    CHECK(rec.estimated_e == rec.exact_e);
    CHECK(rec.shot_sum == 0);
  }
}

TEST_CASE("finite shots: mean over repetitions carries the 1/K bias") {
  // E[R_MK] = 1/3^N + (1 - 1/3^N)/K for a product state
  CorrelationTensor product =
      correlation_tensor(make_product_state({{0, 0, 1}, {0, 0, 1}}));
  const std::int64_t k = 10;
  ExperimentConfig config{2, 500, k, 0};
  const int reps = 400;
  double sum = 0.0;
  for (int r = 0; r < reps; ++r) {
    config.seed = 10000 + r;
    sum += run_experiment(config, product).r_mk;
  }
  double mean = sum / reps;
  double expected = 1.0 / 9.0 + (1.0 - 1.0 / 9.0) / static_cast<double>(k);
  CHECK(mean == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("experiment is deterministic and thread-count independent") {
  PureState ghz = make_ghz(4);
  ExperimentConfig config{4, 300, 50, 77};
  ExperimentResult a = run_experiment(config, ghz, 1);
  ExperimentResult b = run_experiment(config, ghz, 4);
  ExperimentResult c = run_experiment(config, ghz, 4);
  CHECK(a.r_mk == b.r_mk);
  CHECK(b.r_mk == c.r_mk);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].shot_sum == b.records[i].shot_sum);
    CHECK(a.records[i].exact_e == b.records[i].exact_e);
  }
}

TEST_CASE("state and density overloads agree for pure inputs") {
  PureState ghz = make_ghz(3);
  ExperimentConfig config{3, 100, 20, 5};
  ExperimentResult from_pure = run_experiment(config, ghz);
  ExperimentResult from_density = run_experiment(config, to_density(ghz));
  CHECK(from_pure.r_mk == doctest::Approx(from_density.r_mk).epsilon(1e-12));
}

TEST_CASE("config validation") {
  ExperimentConfig bad{0, 10, std::nullopt, 1};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  ExperimentConfig bad_m{2, 0, std::nullopt, 1};
  CHECK_THROWS_AS(bad_m.validate(), std::invalid_argument);
  ExperimentConfig bad_k{2, 10, 0, 1};
  CHECK_THROWS_AS(bad_k.validate(), std::invalid_argument);
}

TEST_CASE("empirical deviation tracks delta_M at infinite K") {
  CorrelationTensor product =
      correlation_tensor(make_product_state({{0, 0, 1}, {0, 0, 1}}));
  ExperimentConfig config{2, 400, std::nullopt, 21};
  auto [mean, stddev] = empirical_deviation(config, product, 300);
  CHECK(mean == doctest::Approx(1.0 / 9.0).epsilon(0.05));
  CHECK(stddev == doctest::Approx(delta_m(2, 400)).epsilon(0.20));
}

TEST_CASE("empirical deviation tracks the combined delta_MK at finite K") {
  CorrelationTensor product =
      correlation_tensor(make_product_state({{0, 0, 1}, {0, 0, 1}}));
  ExperimentConfig config{2, 400, 60, 22};
  auto [mean, stddev] = empirical_deviation(config, product, 300);
  (void)mean;
  CHECK(stddev == doctest::Approx(delta_mk(2, 400, 60)).epsilon(0.20));
}

TEST_CASE("eight-photon success rate at moderate statistics") {
  // coarse check only; the tight-tolerance version lives in the acceptance suite
  double rate =
      eight_photon_success_rate(1000, ConfidenceLevel::two_sided(0.954), 800, 99, 4);
  CHECK(std::abs(rate - 0.49) < 0.07);
}

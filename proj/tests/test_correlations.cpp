#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "randcorr/correlations.hpp"
#include "randcorr/rng.hpp"

using namespace randcorr;

namespace {

const Eigen::Vector3d kXAxis{1, 0, 0};
const Eigen::Vector3d kYAxis{0, 1, 0};
const Eigen::Vector3d kZAxis{0, 0, 1};

}  // namespace

TEST_CASE("tensor of |00> has a single zz entry") {
  CorrelationTensor t = correlation_tensor(make_product_state({kZAxis, kZAxis}));
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    double expected = i == t.size() - 1 ? 1.0 : 0.0;  // zz is the last flat index
    CHECK(t.entries[i] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("tensor of the Bell state") {
  CorrelationTensor t = correlation_tensor(make_ghz(2));
  CHECK(t.at({0, 0}) == doctest::Approx(1.0));
  CHECK(t.at({1, 1}) == doctest::Approx(-1.0));
  CHECK(t.at({2, 2}) == doctest::Approx(1.0));
  CHECK(t.at({0, 1}) == doctest::Approx(0.0));
  CHECK(t.at({2, 0}) == doctest::Approx(0.0));
}

TEST_CASE("tensor of GHZ_3") {
  CorrelationTensor t = correlation_tensor(make_ghz(3));
  CHECK(t.at({0, 0, 0}) == doctest::Approx(1.0));
  CHECK(t.at({0, 1, 1}) == doctest::Approx(-1.0));
  CHECK(t.at({1, 0, 1}) == doctest::Approx(-1.0));
  CHECK(t.at({1, 1, 0}) == doctest::Approx(-1.0));
  double sum_sq = correlation_length(t);
  CHECK(sum_sq == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("tensor agrees with the brute-force trace oracle") {
  for (int n : {1, 2, 3}) {
    PureState psi = haar_random_pure(n, 500 + n);
    CorrelationTensor t = correlation_tensor(psi);
    std::vector<double> brute = oracles::brute_tensor(to_density(psi).matrix, n);
    for (Eigen::Index i = 0; i < t.size(); ++i)
      CHECK(t.entries[i] == doctest::Approx(brute[i]).epsilon(1e-10));
  }
  // density path
  DensityMatrix rho = mix_with_white_noise(make_ghz(2), 0.7);
  CorrelationTensor t = correlation_tensor(rho);
  std::vector<double> brute = oracles::brute_tensor(rho.matrix, 2);
  for (Eigen::Index i = 0; i < t.size(); ++i)
    CHECK(t.entries[i] == doctest::Approx(brute[i]).epsilon(1e-10));
}

TEST_CASE("non-qubit states are routed to the qudit module") {
  PureState qutrit{std::vector<int>{3}, Eigen::VectorXcd::Unit(3, 0)};
  CHECK_THROWS_WITH_AS(correlation_tensor(qutrit), doctest::Contains("qudit"),
                       std::invalid_argument);
}

TEST_CASE("correlation_value contracts the tensor") {
  CorrelationTensor zz = correlation_tensor(make_product_state({kZAxis, kZAxis}));
  CHECK(correlation_value(zz, {kZAxis, kZAxis}) == doctest::Approx(1.0));

  CorrelationTensor bell = correlation_tensor(make_ghz(2));
  CHECK(correlation_value(bell, {kXAxis, kXAxis}) == doctest::Approx(1.0));
  CHECK(correlation_value(bell, {kXAxis, kYAxis}) == doctest::Approx(0.0));

  CorrelationTensor ghz3 = correlation_tensor(make_ghz(3));
  CHECK(correlation_value(ghz3, {kXAxis, kYAxis, kYAxis}) == doctest::Approx(-1.0));

  CHECK_THROWS_AS(correlation_value(bell, {kXAxis}), std::invalid_argument);
}

TEST_CASE("correlation_direct matches the tensor contraction") {
  for (int n : {1, 2, 3, 4}) {
    PureState psi = haar_random_pure(n, 600 + n);
    CorrelationTensor t = correlation_tensor(psi);
    for (int trial = 0; trial < 20; ++trial) {
      RngStream rng = RngStream::keyed(77, 1, n, trial);
      SettingTuple s;
      for (int p = 0; p < n; ++p) s.push_back(sample_unit_vector(rng));
      CHECK(correlation_direct(psi, s) == doctest::Approx(correlation_value(t, s)).epsilon(1e-10));
    }
  }
}

TEST_CASE("correlation length examples") {
  CHECK(correlation_length(make_product_state({kZAxis, kXAxis})) == doctest::Approx(1.0));
  CHECK(correlation_length(make_ghz(2)) == doctest::Approx(3.0));
  for (int n = 2; n <= 6; ++n) {
    double expected = std::pow(2.0, n - 1) + (n % 2 == 0 ? 1.0 : 0.0);
    CHECK(correlation_length(make_ghz(n)) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("random correlations are C / 3^N exactly") {
  for (int n : {1, 2, 3}) {
    CorrelationTensor t = correlation_tensor(haar_random_pure(n, 700 + n));
    CHECK(random_correlations_exact(t) == correlation_length(t) / std::pow(3.0, n));
  }
  CHECK(random_correlations_exact(correlation_tensor(make_ghz(2))) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(random_correlations_exact(correlation_tensor(
            make_product_state({kZAxis, kZAxis, kZAxis}))) ==
        doctest::Approx(1.0 / 27.0).epsilon(1e-12));
}

TEST_CASE("Monte Carlo estimate converges to the exact value") {
  const std::int64_t m = 100000;

  CorrelationTensor product = correlation_tensor(make_product_state({kZAxis, kZAxis, kZAxis}));
  McEstimate est = random_correlations_mc(product, m, 2024);
  REQUIRE(est.std_error.has_value());
  CHECK(std::abs(est.estimate - 1.0 / 27.0) < 4.0 * *est.std_error);

  CorrelationTensor ghz3 = correlation_tensor(make_ghz(3));
  McEstimate ghz_est = random_correlations_mc(ghz3, m, 2024);
  REQUIRE(ghz_est.std_error.has_value());
  CHECK(std::abs(ghz_est.estimate - 4.0 / 27.0) < 4.0 * *ghz_est.std_error);
}

TEST_CASE("single-sample Monte Carlo has no standard error") {
  CorrelationTensor bell = correlation_tensor(make_ghz(2));
  McEstimate est = random_correlations_mc(bell, 1, 5);
  CHECK_FALSE(est.std_error.has_value());
  SettingTuple s{setting_direction(5, 0, 0), setting_direction(5, 0, 1)};
  double e = correlation_value(bell, s);
  CHECK(est.estimate == doctest::Approx(e * e).epsilon(1e-15));
  CHECK_THROWS_AS(random_correlations_mc(bell, 0, 5), std::domain_error);
}

TEST_CASE("Monte Carlo result is bitwise independent of the thread count") {
  CorrelationTensor ghz3 = correlation_tensor(make_ghz(3));
  McEstimate a = random_correlations_mc(ghz3, 5000, 9, /*threads=*/1);
  McEstimate b = random_correlations_mc(ghz3, 5000, 9, /*threads=*/4);
  CHECK(a.estimate == b.estimate);
  CHECK(*a.std_error == *b.std_error);
}

TEST_CASE("two-copy operator spectrum") {
  TwoCopySpectrum s1 = two_copy_operator_spectrum(1);
  REQUIRE(s1.full.size() == 4);
  CHECK(s1.full.front() == doctest::Approx(-3.0).epsilon(1e-9));
  for (int i = 1; i < 4; ++i) CHECK(s1.full[i] == doctest::Approx(1.0).epsilon(1e-9));
  REQUIRE(s1.symmetric.size() == 3);
  for (double v : s1.symmetric) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));

  for (int n : {2, 3}) {
    TwoCopySpectrum s = two_copy_operator_spectrum(n);
    for (double v : s.symmetric) {
      bool is_power_of_nine = false;
      for (int k = 0; 2 * k <= n; ++k)
        if (std::abs(v - std::pow(9.0, k)) < 1e-7) is_power_of_nine = true;
      CHECK(is_power_of_nine);
    }
  }
  CHECK_THROWS_AS(two_copy_operator_spectrum(4), std::domain_error);
}

TEST_CASE("two-copy expectation equals the correlation length") {
  for (int n : {1, 2, 3}) {
    for (int s = 0; s < 10; ++s) {
      PureState psi = haar_random_pure(n, 800 + 10 * n + s);
      CHECK(two_copy_expectation(psi) ==
            doctest::Approx(correlation_length(psi)).epsilon(1e-9));
    }
  }
}

TEST_CASE("reference-frame measurement reproduces the correlation function") {
  PureState zz = make_product_state({kZAxis, kZAxis});
  CHECK(reference_frame_correlation(zz, {kZAxis, kZAxis}) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(reference_frame_correlation(make_ghz(2), {kXAxis, kXAxis}) ==
        doctest::Approx(1.0).epsilon(1e-9));

  for (int n : {1, 2, 3}) {
    PureState psi = haar_random_pure(n, 900 + n);
    CorrelationTensor t = correlation_tensor(psi);
    for (int trial = 0; trial < 20; ++trial) {
      RngStream rng = RngStream::keyed(31, 2, n, trial);
      SettingTuple s;
      for (int p = 0; p < n; ++p) s.push_back(sample_unit_vector(rng));
      CHECK(reference_frame_correlation(psi, s) ==
            doctest::Approx(correlation_value(t, s)).epsilon(1e-9));
    }
  }
}

TEST_CASE("reference-frame equivalence holds for mixed states") {
  DensityMatrix rho = mix_with_white_noise(make_ghz(2), 0.6);
  CorrelationTensor t = correlation_tensor(rho);
  for (int trial = 0; trial < 10; ++trial) {
    RngStream rng = RngStream::keyed(32, 3, trial);
    SettingTuple s{sample_unit_vector(rng), sample_unit_vector(rng)};
    CHECK(reference_frame_correlation(rho, s) ==
          doctest::Approx(correlation_value(t, s)).epsilon(1e-9));
  }
}

TEST_CASE("tensor entries stay within physical range") {
  for (int n : {2, 3}) {
    CorrelationTensor t = correlation_tensor(haar_random_pure(n, 1200 + n));
    for (double e : t.entries) CHECK(std::abs(e) <= 1.0 + 1e-9);
    CHECK(correlation_length(t) <= std::pow(3.0, n));
  }
}

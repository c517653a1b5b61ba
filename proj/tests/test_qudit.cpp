#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "randcorr/correlations.hpp"
#include "randcorr/qudit.hpp"

using namespace randcorr;

TEST_CASE("d = 2 generators are the Pauli matrices") {
  GeneratorBasis basis = gellmann_basis(2);
  REQUIRE(basis.count() == 3);
  for (int a = 0; a < 3; ++a)
    CHECK((basis.generators[a] - oracles::pauli(a)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("generator count and trace orthogonality") {
  for (int d = 2; d <= 5; ++d) {
    GeneratorBasis basis = gellmann_basis(d, 1.0);
    REQUIRE(basis.count() == d * d - 1);
    for (int a = 0; a < basis.count(); ++a) {
      CHECK(std::abs(basis.generators[a].trace()) < 1e-12);
      CHECK((basis.generators[a] - basis.generators[a].adjoint()).cwiseAbs().maxCoeff() < 1e-12);
      for (int b = 0; b <= a; ++b) {
        double expected = a == b ? 2.0 : 0.0;
        CHECK((basis.generators[a] * basis.generators[b]).trace().real() ==
              doctest::Approx(expected).epsilon(1e-10));
      }
    }
  }
  CHECK_THROWS_AS(gellmann_basis(1), std::domain_error);
}

TEST_CASE("scale enters the orthogonality relation quadratically") {
  double s = calibrated_scale(3);
  CHECK(s == doctest::Approx(1.5));
  GeneratorBasis basis = gellmann_basis(3, s);
  for (int a = 0; a < basis.count(); ++a)
    CHECK((basis.generators[a] * basis.generators[a]).trace().real() ==
          doctest::Approx(2.0 * s * s).epsilon(1e-10));
}

TEST_CASE("qudit correlation length agrees with the qubit module at d = 2") {
  GeneratorBasis pauli2 = gellmann_basis(2, 1.0);
  for (int n : {1, 2, 3}) {
    PureState psi = haar_random_pure(n, 300 + n);
    CHECK(qudit_correlation_length(psi, pauli2) ==
          doctest::Approx(correlation_length(psi)).epsilon(1e-9));
  }
  CHECK(qudit_correlation_length(make_ghz(3), pauli2) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("single qutrit correlation length") {
  PureState basis_state{std::vector<int>{3}, Eigen::VectorXcd::Unit(3, 0)};
  // sum over the 8 unit-scale Gell-Mann generators: <l_3>^2 + <l_8>^2 = 1 + 1/3
  CHECK(qudit_correlation_length(basis_state, gellmann_basis(3, 1.0)) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-10));
  // calibrated scale d/2 lifts it to d(d-1)/2 = 3
  CHECK(qudit_correlation_length(basis_state, gellmann_basis(3, calibrated_scale(3))) ==
        doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("qutrit product pair") {
  PureState pair{std::vector<int>{3, 3}, Eigen::VectorXcd::Unit(9, 0)};
  CHECK(qudit_correlation_length(pair, gellmann_basis(3, 1.0)) ==
        doctest::Approx(16.0 / 9.0).epsilon(1e-10));
  CHECK(qudit_correlation_length(pair, gellmann_basis(3, calibrated_scale(3))) ==
        doctest::Approx(9.0).epsilon(1e-10));
}

TEST_CASE("heterogeneous local dimensions") {
  PureState mixed = haar_random_pure(std::vector<int>{2, 3}, 17);
  std::vector<GeneratorBasis> bases{gellmann_basis(2, calibrated_scale(2)),
                                    gellmann_basis(3, calibrated_scale(3))};
  double c = qudit_correlation_length(mixed, bases);
  CHECK(c >= 1.0 * 3.0 - 1e-6);  // product of single-party bounds is the floor

  std::vector<GeneratorBasis> wrong{gellmann_basis(3), gellmann_basis(3)};
  CHECK_THROWS_AS(qudit_correlation_length(mixed, wrong), std::invalid_argument);
}

TEST_CASE("bound check reports no violations") {
  for (auto [n, d] : {std::pair{1, 3}, {2, 3}, {1, 4}, {2, 4}}) {
    QuditBoundReport report = qudit_bound_check(n, d, 60, 2026);
    CAPTURE(n);
    CAPTURE(d);
    CHECK(report.violations == 0);
    CHECK(report.product_max_abs_dev < 1e-6);
    CHECK(report.min_c >= report.bound - 1e-6);
    CHECK(report.bound == doctest::Approx(std::pow(d * (d - 1) / 2.0, n)));
  }
  CHECK_THROWS_AS(qudit_bound_check(5, 3, 10, 1), std::domain_error);  // d^N > 81
}

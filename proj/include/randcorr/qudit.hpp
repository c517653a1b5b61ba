#ifndef RANDCORR_QUDIT_HPP
#define RANDCORR_QUDIT_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "randcorr/states.hpp"

namespace randcorr {

// d^2 - 1 Hermitian traceless generators of SU(d), generalized Gell-Mann
// matrices times `scale`. With scale = 1, Tr(g_a g_b) = 2 delta_ab and d = 2
// reproduces the Pauli matrices exactly.
struct GeneratorBasis {
  int dim = 2;
  double scale = 1.0;
  std::vector<Eigen::MatrixXcd> generators;

  int count() const { return static_cast<int>(generators.size()); }
};

GeneratorBasis gellmann_basis(int dim, double scale = 1.0);

// The scale d/2 that makes a single pure qudit attain sum <g_a>^2 = d(d-1)/2,
// calibrating the product-state bound [d(d-1)/2]^N. This normalization is an
// inference of this library, not a fixed convention; it is flagged in all
// qudit reports.
double calibrated_scale(int dim);

// Sum of squared generator expectation values over all (d^2-1)^N tuples.
double qudit_correlation_length(const PureState& psi, const GeneratorBasis& basis);
// Heterogeneous local dimensions, one basis per party.
double qudit_correlation_length(const PureState& psi, const std::vector<GeneratorBasis>& bases);

struct QuditBoundReport {
  int num_parties = 0;
  int dim = 0;
  double scale = 0.0;  // calibrated normalization used
  double bound = 0.0;  // [d(d-1)/2]^N
  int num_states = 0;  // per family (Haar and product)
  double min_c = 0.0;
  double max_c = 0.0;
  double product_max_abs_dev = 0.0;  // max |C - bound| over product states
  int violations = 0;
};

// Checks C >= bound - 1e-6 on Haar-random states and |C - bound| <= 1e-6 on
// random product states, under the calibrated normalization.
QuditBoundReport qudit_bound_check(int num_parties, int dim, int num_states,
                                   std::uint64_t seed);

}  // namespace randcorr

#endif

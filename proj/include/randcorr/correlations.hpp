#ifndef RANDCORR_CORRELATIONS_HPP
#define RANDCORR_CORRELATIONS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "randcorr/states.hpp"

namespace randcorr {

// One measurement direction per party.
using SettingTuple = std::vector<Eigen::Vector3d>;

void validate_setting_tuple(const SettingTuple& settings, int num_parties);

// Full-correlation tensor T_{j1...jN} = Tr(rho sigma_{j1} x ... x sigma_{jN}),
// stored row-major over N axes of size 3, axis order (x, y, z), party 1 most
// significant.
struct CorrelationTensor {
  int num_parties = 0;
  std::vector<double> entries;

  Eigen::Index size() const { return static_cast<Eigen::Index>(entries.size()); }
  double at(const std::vector<int>& indices) const;
};

CorrelationTensor correlation_tensor(const PureState& psi);
CorrelationTensor correlation_tensor(const DensityMatrix& rho);

// E(u_1,...,u_N) by contracting the tensor with the setting vectors.
double correlation_value(const CorrelationTensor& tensor, const SettingTuple& settings);

// E evaluated directly as <psi| sigma(u_1) x ... x sigma(u_N) |psi>, without
// the 3^N tensor. Preferred when only a few settings of a large state are
// needed.
double correlation_direct(const PureState& psi, const SettingTuple& settings);

// C = sum of squared tensor entries.
double correlation_length(const CorrelationTensor& tensor);
double correlation_length(const PureState& psi);

// R = C / 3^N.
double random_correlations_exact(const CorrelationTensor& tensor);

struct McEstimate {
  double estimate = 0.0;
  // Sample standard deviation / sqrt(M); absent when M == 1.
  std::optional<double> std_error;
  std::int64_t num_settings = 0;
};

McEstimate random_correlations_mc(const CorrelationTensor& tensor, std::int64_t num_settings,
                                  std::uint64_t seed, int threads = 0);
McEstimate random_correlations_mc(const PureState& psi, std::int64_t num_settings,
                                  std::uint64_t seed, int threads = 0);

struct TwoCopySpectrum {
  std::vector<double> full;       // all 2^{2N} eigenvalues, ascending
  std::vector<double> symmetric;  // eigenvalues on the block-swap-symmetric subspace
};

// Spectrum of S = H_{11'} x ... x H_{NN'} on 2N qubits, N <= 3.
TwoCopySpectrum two_copy_operator_spectrum(int num_parties);

// <psi psi| S |psi psi>; equals correlation_length(psi) for qubit states.
double two_copy_expectation(const PureState& psi);

// Correlation of +1/-3 total-spin outcomes on principal + reference qubits,
// evaluated by explicit Born-rule projection onto singlet/triplet per pair.
double reference_frame_correlation(const PureState& psi, const SettingTuple& settings);
double reference_frame_correlation(const DensityMatrix& rho, const SettingTuple& settings);

// 2x2 matrix of u . sigma.
Eigen::Matrix2cd pauli_along(const Eigen::Vector3d& u);

}  // namespace randcorr

#endif

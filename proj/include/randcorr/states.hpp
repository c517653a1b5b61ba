#ifndef RANDCORR_STATES_HPP
#define RANDCORR_STATES_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "randcorr/common.hpp"

namespace randcorr {

// Pure state of N subsystems as a dense amplitude vector in row-major tensor
// order: party 1 is the most significant index.
struct PureState {
  std::vector<int> local_dims;
  Eigen::VectorXcd amplitudes;

  int num_parties() const { return static_cast<int>(local_dims.size()); }
  Eigen::Index dim() const { return amplitudes.size(); }
  bool all_qubits() const;

  // Throws std::invalid_argument on norm/length violations.
  void validate() const;
};

struct DensityMatrix {
  std::vector<int> local_dims;
  Eigen::MatrixXcd matrix;

  int num_parties() const { return static_cast<int>(local_dims.size()); }
  Eigen::Index dim() const { return matrix.rows(); }
  bool all_qubits() const;

  // Hermitian, unit trace, positive semidefinite (min eigenvalue >= -kTol).
  void validate() const;
};

// One unitary per party.
using LocalRotationSet = std::vector<Eigen::MatrixXcd>;

DensityMatrix to_density(const PureState& psi);

// Single-qubit pure state with the given Bloch vector.
Eigen::Vector2cd bloch_qubit(const Eigen::Vector3d& u);

PureState make_product_state(const std::vector<Eigen::Vector3d>& bloch_vectors);

// (|0...0> + |1...1>)/sqrt(2), N >= 2.
PureState make_ghz(int num_parties);

DensityMatrix mix_with_white_noise(const DensityMatrix& rho, double epsilon);
DensityMatrix mix_with_white_noise(const PureState& psi, double epsilon);

// Haar-random pure state: normalized vector of iid standard complex Gaussians.
PureState haar_random_pure(int num_qubits, std::uint64_t seed);
PureState haar_random_pure(const std::vector<int>& local_dims, std::uint64_t seed);

PureState apply_local_rotations(const PureState& psi, const LocalRotationSet& rotations);
DensityMatrix apply_local_rotations(const DensityMatrix& rho, const LocalRotationSet& rotations);

// Haar-random single-qubit unitaries, one per party.
LocalRotationSet random_local_rotations(int num_parties, std::uint64_t seed);

// Tr(rho_party^2) of the single-party reduced state.
double single_party_purity(const PureState& psi, int party);

// Applies a d x d operator to one party of the amplitude vector in place.
void apply_single_party(Eigen::VectorXcd& amps, const Eigen::MatrixXcd& op,
                        int party, const std::vector<int>& local_dims);

}  // namespace randcorr

#endif

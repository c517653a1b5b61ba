#include "randcorr/states.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "randcorr/rng.hpp"

namespace randcorr {

namespace {

Eigen::Index dims_product(const std::vector<int>& dims) {
  Eigen::Index p = 1;
  for (int d : dims) {
    if (d < 2) throw std::invalid_argument("local dimension must be >= 2");
    p *= d;
  }
  return p;
}

}  // namespace

bool PureState::all_qubits() const {
  for (int d : local_dims)
    if (d != 2) return false;
  return true;
}

void PureState::validate() const {
  if (local_dims.empty()) throw std::invalid_argument("state has no parties");
  if (amplitudes.size() != dims_product(local_dims))
    throw std::invalid_argument("amplitude length does not match product of local_dims");
  double norm2 = amplitudes.squaredNorm();
  if (std::abs(norm2 - 1.0) > kTol)
    throw std::invalid_argument("state norm differs from 1 by " +
                                std::to_string(std::abs(norm2 - 1.0)));
}

bool DensityMatrix::all_qubits() const {
  for (int d : local_dims)
    if (d != 2) return false;
  return true;
}

void DensityMatrix::validate() const {
  if (local_dims.empty()) throw std::invalid_argument("state has no parties");
  Eigen::Index d = dims_product(local_dims);
  if (matrix.rows() != d || matrix.cols() != d)
    throw std::invalid_argument("matrix dimension does not match product of local_dims");
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > kTol)
    throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(matrix.trace().real() - 1.0) > kTol ||
      std::abs(matrix.trace().imag()) > kTol)
    throw std::invalid_argument("density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kTol)
    throw std::invalid_argument("density matrix has negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
}

DensityMatrix to_density(const PureState& psi) {
  DensityMatrix rho;
  rho.local_dims = psi.local_dims;
  rho.matrix = psi.amplitudes * psi.amplitudes.adjoint();
  return rho;
}

Eigen::Vector2cd bloch_qubit(const Eigen::Vector3d& u) {
  // Eigenvector of u . sigma with eigenvalue +1:
  // cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
  double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
  double phi = std::atan2(u.y(), u.x());
  Eigen::Vector2cd v;
  v(0) = std::cos(theta / 2.0);
  v(1) = std::polar(std::sin(theta / 2.0), phi);
  return v;
}

PureState make_product_state(const std::vector<Eigen::Vector3d>& bloch_vectors) {
  if (bloch_vectors.empty()) throw std::invalid_argument("no Bloch vectors given");
  for (std::size_t n = 0; n < bloch_vectors.size(); ++n) {
    if (std::abs(bloch_vectors[n].norm() - 1.0) > kTol)
      throw std::invalid_argument("Bloch vector of party " + std::to_string(n + 1) +
                                  " is not unit length");
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Ones(1);
  for (const auto& u : bloch_vectors) {
    Eigen::Vector2cd q = bloch_qubit(u);
    Eigen::VectorXcd next(amps.size() * 2);
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
      next(2 * i) = amps(i) * q(0);
      next(2 * i + 1) = amps(i) * q(1);
    }
    amps = std::move(next);
  }
  PureState psi{std::vector<int>(bloch_vectors.size(), 2), std::move(amps)};
  psi.validate();
  return psi;
}

PureState make_ghz(int num_parties) {
  if (num_parties < 2) throw std::domain_error("GHZ state requires N >= 2");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index(1) << num_parties);
  amps(0) = 1.0 / std::sqrt(2.0);
  amps(amps.size() - 1) = 1.0 / std::sqrt(2.0);
  return PureState{std::vector<int>(num_parties, 2), std::move(amps)};
}

DensityMatrix mix_with_white_noise(const DensityMatrix& rho, double epsilon) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::domain_error("epsilon must lie in [0, 1]");
  rho.validate();
  DensityMatrix out;
  out.local_dims = rho.local_dims;
  Eigen::Index d = rho.dim();
  out.matrix = epsilon * rho.matrix +
               (1.0 - epsilon) / static_cast<double>(d) *
                   Eigen::MatrixXcd::Identity(d, d);
  return out;
}

DensityMatrix mix_with_white_noise(const PureState& psi, double epsilon) {
  return mix_with_white_noise(to_density(psi), epsilon);
}

PureState haar_random_pure(const std::vector<int>& local_dims, std::uint64_t seed) {
  if (local_dims.empty()) throw std::invalid_argument("state has no parties");
  Eigen::Index d = 1;
  for (int dn : local_dims) d *= dn;
  RngStream rng = RngStream::keyed(seed, stream_tag::kHaar);
  Eigen::VectorXcd amps(d);
  for (Eigen::Index i = 0; i < d; ++i)
    amps(i) = Complex(rng.gaussian(), rng.gaussian());
  amps.normalize();
  return PureState{local_dims, std::move(amps)};
}

PureState haar_random_pure(int num_qubits, std::uint64_t seed) {
  if (num_qubits < 1) throw std::domain_error("N must be >= 1");
  return haar_random_pure(std::vector<int>(num_qubits, 2), seed);
}

void apply_single_party(Eigen::VectorXcd& amps, const Eigen::MatrixXcd& op,
                        int party, const std::vector<int>& local_dims) {
  int n = static_cast<int>(local_dims.size());
  if (party < 0 || party >= n) throw std::invalid_argument("party index out of range");
  int d = local_dims[party];
  if (op.rows() != d || op.cols() != d)
    throw std::invalid_argument("operator dimension mismatch for party " +
                                std::to_string(party + 1));
  Eigen::Index stride = 1;
  for (int m = party + 1; m < n; ++m) stride *= local_dims[m];
  Eigen::Index block = stride * d;
  Eigen::VectorXcd scratch(d);
  for (Eigen::Index base = 0; base < amps.size(); base += block) {
    for (Eigen::Index off = 0; off < stride; ++off) {
      for (int j = 0; j < d; ++j) scratch(j) = amps(base + off + j * stride);
      for (int j = 0; j < d; ++j) {
        Complex acc = 0.0;
        for (int l = 0; l < d; ++l) acc += op(j, l) * scratch(l);
        amps(base + off + j * stride) = acc;
      }
    }
  }
}

namespace {

void check_rotations(const std::vector<int>& dims, const LocalRotationSet& rotations) {
  if (rotations.size() != dims.size())
    throw std::invalid_argument("rotation count does not match party count");
  for (std::size_t n = 0; n < rotations.size(); ++n) {
    const auto& u = rotations[n];
    if (u.rows() != dims[n] || u.cols() != dims[n])
      throw std::invalid_argument("rotation dimension mismatch for party " +
                                  std::to_string(n + 1));
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    if ((u.adjoint() * u - id).cwiseAbs().maxCoeff() > kTol)
      throw std::invalid_argument("rotation for party " + std::to_string(n + 1) +
                                  " is not unitary");
  }
}

}  // namespace

PureState apply_local_rotations(const PureState& psi, const LocalRotationSet& rotations) {
  check_rotations(psi.local_dims, rotations);
  PureState out = psi;
  for (int n = 0; n < psi.num_parties(); ++n)
    apply_single_party(out.amplitudes, rotations[n], n, out.local_dims);
  return out;
}

DensityMatrix apply_local_rotations(const DensityMatrix& rho, const LocalRotationSet& rotations) {
  check_rotations(rho.local_dims, rotations);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1, 1);
  for (const auto& r : rotations) {
    Eigen::MatrixXcd next(u.rows() * r.rows(), u.cols() * r.cols());
    for (Eigen::Index i = 0; i < u.rows(); ++i)
      for (Eigen::Index j = 0; j < u.cols(); ++j)
        next.block(i * r.rows(), j * r.cols(), r.rows(), r.cols()) = u(i, j) * r;
    u = std::move(next);
  }
  DensityMatrix out;
  out.local_dims = rho.local_dims;
  out.matrix = u * rho.matrix * u.adjoint();
  return out;
}

LocalRotationSet random_local_rotations(int num_parties, std::uint64_t seed) {
  LocalRotationSet rotations;
  rotations.reserve(num_parties);
  for (int n = 0; n < num_parties; ++n) {
    RngStream rng = RngStream::keyed(seed, stream_tag::kRotation, n);
    // QR of a Ginibre matrix with phase fix gives a Haar unitary.
    Eigen::Matrix2cd g;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
    Eigen::HouseholderQR<Eigen::Matrix2cd> qr(g);
    Eigen::Matrix2cd q = qr.householderQ();
    Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < 2; ++j) {
      Complex diag = r(j, j);
      if (std::abs(diag) > 0) q.col(j) *= diag / std::abs(diag);
    }
    rotations.push_back(q);
  }
  return rotations;
}

double single_party_purity(const PureState& psi, int party) {
  int n = psi.num_parties();
  if (party < 0 || party >= n) throw std::invalid_argument("party index out of range");
  int d = psi.local_dims[party];
  Eigen::Index stride = 1;
  for (int m = party + 1; m < n; ++m) stride *= psi.local_dims[m];
  Eigen::Index block = stride * d;
  Eigen::MatrixXcd reduced = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index base = 0; base < psi.amplitudes.size(); base += block)
    for (Eigen::Index off = 0; off < stride; ++off)
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l)
          reduced(j, l) += psi.amplitudes(base + off + j * stride) *
                           std::conj(psi.amplitudes(base + off + l * stride));
  return (reduced * reduced).trace().real();
}

}  // namespace randcorr

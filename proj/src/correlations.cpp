#include "randcorr/correlations.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "randcorr/parallel.hpp"
#include "randcorr/rng.hpp"

namespace randcorr {

namespace {

constexpr int kX = 0;
constexpr int kY = 1;
constexpr int kZ = 2;

Eigen::Index pow3(int n) {
  Eigen::Index p = 1;
  for (int i = 0; i < n; ++i) p *= 3;
  return p;
}

void require_qubits(const std::vector<int>& dims) {
  for (int d : dims)
    if (d != 2)
      throw std::invalid_argument(
          "correlation tensor is defined for qubits; use the qudit module for d != 2");
}

// Decodes tensor index t into per-party axis labels, party 1 first.
void decode_axes(Eigen::Index t, int n, std::vector<int>& axes) {
  for (int p = n - 1; p >= 0; --p) {
    axes[p] = static_cast<int>(t % 3);
    t /= 3;
  }
}

// A tensor product of Pauli operators has one nonzero per column:
// O|a> = val(a) |a ^ flip_mask> with val(a) = phase * (-1)^popcount(a & sign_mask).
struct PauliString {
  std::uint64_t flip_mask = 0;  // qubits carrying sigma_x or sigma_y
  std::uint64_t sign_mask = 0;  // qubits carrying sigma_y or sigma_z
  Complex phase = 1.0;          // i^{number of sigma_y}

  // Axis j for the qubit at bit position `bit` (bit 0 = least significant).
  void add(int axis, int bit) {
    std::uint64_t m = std::uint64_t(1) << bit;
    if (axis == kX) {
      flip_mask |= m;
    } else if (axis == kY) {
      flip_mask |= m;
      sign_mask |= m;
      phase *= Complex(0.0, 1.0);
    } else {
      sign_mask |= m;
    }
  }
};

PauliString pauli_string(const std::vector<int>& axes) {
  PauliString s;
  int n = static_cast<int>(axes.size());
  // party 1 is the most significant index
  for (int p = 0; p < n; ++p) s.add(axes[p], n - 1 - p);
  return s;
}

double real_entry(Complex e, const std::string& what) {
  if (std::abs(e.imag()) > kTol)
    throw std::invalid_argument(what + " has imaginary residue " +
                                std::to_string(e.imag()));
  return e.real();
}

Complex pure_expectation(const Eigen::VectorXcd& amps, const PauliString& s) {
  Complex acc = 0.0;
  const Eigen::Index d = amps.size();
  for (Eigen::Index a = 0; a < d; ++a) {
    double sign = (std::popcount(static_cast<std::uint64_t>(a) & s.sign_mask) & 1) ? -1.0 : 1.0;
    acc += std::conj(amps(a ^ static_cast<Eigen::Index>(s.flip_mask))) * sign * amps(a);
  }
  return s.phase * acc;
}

Complex density_expectation(const Eigen::MatrixXcd& rho, const PauliString& s) {
  Complex acc = 0.0;
  const Eigen::Index d = rho.rows();
  for (Eigen::Index a = 0; a < d; ++a) {
    double sign = (std::popcount(static_cast<std::uint64_t>(a) & s.sign_mask) & 1) ? -1.0 : 1.0;
    acc += rho(a, a ^ static_cast<Eigen::Index>(s.flip_mask)) * sign;
  }
  return s.phase * acc;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Embeds a two-qubit operator acting on qubit positions (a, b) of a register
// of `total` qubits, position 0 most significant.
Eigen::MatrixXcd embed_two_qubit(const Eigen::Matrix4cd& op, int a, int b, int total) {
  Eigen::Index dim = Eigen::Index(1) << total;
  int sa = total - 1 - a;  // bit positions
  int sb = total - 1 - b;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    int ca = static_cast<int>((col >> sa) & 1);
    int cb = static_cast<int>((col >> sb) & 1);
    for (int ra = 0; ra < 2; ++ra)
      for (int rb = 0; rb < 2; ++rb) {
        Complex v = op(2 * ra + rb, 2 * ca + cb);
        if (v == Complex(0.0)) continue;
        Eigen::Index row = col;
        row = (row & ~(Eigen::Index(1) << sa)) | (Eigen::Index(ra) << sa);
        row = (row & ~(Eigen::Index(1) << sb)) | (Eigen::Index(rb) << sb);
        out(row, col) += v;
      }
  }
  return out;
}

Eigen::Matrix4cd heisenberg_coupling() {
  // sigma_x x sigma_x + sigma_y x sigma_y + sigma_z x sigma_z
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  h(0, 0) = 1.0;
  h(3, 3) = 1.0;
  h(1, 1) = -1.0;
  h(2, 2) = -1.0;
  h(1, 2) = 2.0;
  h(2, 1) = 2.0;
  return h;
}

Eigen::Matrix4cd singlet_projector() {
  Eigen::Matrix4cd p = Eigen::Matrix4cd::Zero();
  p(1, 1) = 0.5;
  p(2, 2) = 0.5;
  p(1, 2) = -0.5;
  p(2, 1) = -0.5;
  return p;
}

}  // namespace

void validate_setting_tuple(const SettingTuple& settings, int num_parties) {
  if (static_cast<int>(settings.size()) != num_parties)
    throw std::invalid_argument("setting tuple has " + std::to_string(settings.size()) +
                                " directions, state has " + std::to_string(num_parties) +
                                " parties");
  for (std::size_t n = 0; n < settings.size(); ++n)
    if (std::abs(settings[n].norm() - 1.0) > kTol)
      throw std::invalid_argument("setting for party " + std::to_string(n + 1) +
                                  " is not a unit vector");
}

double CorrelationTensor::at(const std::vector<int>& indices) const {
  if (static_cast<int>(indices.size()) != num_parties)
    throw std::invalid_argument("index arity mismatch");
  Eigen::Index t = 0;
  for (int j : indices) {
    if (j < 0 || j > 2) throw std::invalid_argument("tensor index out of range");
    t = t * 3 + j;
  }
  return entries[t];
}

CorrelationTensor correlation_tensor(const PureState& psi) {
  psi.validate();
  require_qubits(psi.local_dims);
  int n = psi.num_parties();
  CorrelationTensor tensor{n, std::vector<double>(pow3(n))};
  std::vector<int> axes(n);
  for (Eigen::Index t = 0; t < tensor.size(); ++t) {
    decode_axes(t, n, axes);
    tensor.entries[t] =
        real_entry(pure_expectation(psi.amplitudes, pauli_string(axes)), "tensor entry");
  }
  return tensor;
}

CorrelationTensor correlation_tensor(const DensityMatrix& rho) {
  rho.validate();
  require_qubits(rho.local_dims);
  int n = rho.num_parties();
  CorrelationTensor tensor{n, std::vector<double>(pow3(n))};
  std::vector<int> axes(n);
  for (Eigen::Index t = 0; t < tensor.size(); ++t) {
    decode_axes(t, n, axes);
    tensor.entries[t] =
        real_entry(density_expectation(rho.matrix, pauli_string(axes)), "tensor entry");
  }
  return tensor;
}

double correlation_value(const CorrelationTensor& tensor, const SettingTuple& settings) {
  validate_setting_tuple(settings, tensor.num_parties);
  // Contract one party at a time, last party first (its axis is contiguous).
  std::vector<double> work(tensor.entries);
  Eigen::Index len = tensor.size();
  for (int p = tensor.num_parties - 1; p >= 0; --p) {
    const Eigen::Vector3d& u = settings[p];
    len /= 3;
    for (Eigen::Index i = 0; i < len; ++i)
      work[i] = work[3 * i] * u.x() + work[3 * i + 1] * u.y() + work[3 * i + 2] * u.z();
  }
  return work[0];
}

Eigen::Matrix2cd pauli_along(const Eigen::Vector3d& u) {
  Eigen::Matrix2cd m;
  m(0, 0) = u.z();
  m(0, 1) = Complex(u.x(), -u.y());
  m(1, 0) = Complex(u.x(), u.y());
  m(1, 1) = -u.z();
  return m;
}

double correlation_direct(const PureState& psi, const SettingTuple& settings) {
  require_qubits(psi.local_dims);
  validate_setting_tuple(settings, psi.num_parties());
  Eigen::VectorXcd work = psi.amplitudes;
  for (int n = 0; n < psi.num_parties(); ++n)
    apply_single_party(work, pauli_along(settings[n]), n, psi.local_dims);
  return psi.amplitudes.dot(work).real();
}

double correlation_length(const CorrelationTensor& tensor) {
  double c = 0.0;
  for (double e : tensor.entries) c += e * e;
  return c;
}

double correlation_length(const PureState& psi) {
  return correlation_length(correlation_tensor(psi));
}

double random_correlations_exact(const CorrelationTensor& tensor) {
  return correlation_length(tensor) / static_cast<double>(pow3(tensor.num_parties));
}

McEstimate random_correlations_mc(const CorrelationTensor& tensor, std::int64_t num_settings,
                                  std::uint64_t seed, int threads) {
  if (num_settings < 1) throw std::domain_error("M must be >= 1");
  int n = tensor.num_parties;
  std::vector<double> e2(num_settings);
  parallel_for(num_settings, threads, [&](std::int64_t i) {
    SettingTuple s(n);
    for (int p = 0; p < n; ++p)
      s[p] = setting_direction(seed, static_cast<std::uint64_t>(i), p);
    double e = correlation_value(tensor, s);
    e2[i] = e * e;
  });
  // reduce in index order so the result is independent of the thread count
  double mean = 0.0;
  for (double v : e2) mean += v;
  mean /= static_cast<double>(num_settings);
  McEstimate out;
  out.estimate = mean;
  out.num_settings = num_settings;
  if (num_settings > 1) {
    double ss = 0.0;
    for (double v : e2) ss += (v - mean) * (v - mean);
    out.std_error = std::sqrt(ss / static_cast<double>(num_settings - 1) /
                              static_cast<double>(num_settings));
  }
  return out;
}

McEstimate random_correlations_mc(const PureState& psi, std::int64_t num_settings,
                                  std::uint64_t seed, int threads) {
  return random_correlations_mc(correlation_tensor(psi), num_settings, seed, threads);
}

TwoCopySpectrum two_copy_operator_spectrum(int num_parties) {
  if (num_parties < 1 || num_parties > 3)
    throw std::domain_error("two-copy spectrum supported for 1 <= N <= 3");
  int total = 2 * num_parties;
  Eigen::Index dim = Eigen::Index(1) << total;
  Eigen::Matrix4cd h = heisenberg_coupling();
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Identity(dim, dim);
  for (int n = 0; n < num_parties; ++n)
    s = s * embed_two_qubit(h, n, num_parties + n, total);

  TwoCopySpectrum out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> full(s, Eigen::EigenvaluesOnly);
  out.full.assign(full.eigenvalues().data(), full.eigenvalues().data() + dim);

  // Swap of the primed and unprimed N-qubit blocks.
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::Index half = Eigen::Index(1) << num_parties;
  for (Eigen::Index a = 0; a < dim; ++a) {
    Eigen::Index u = a / half;
    Eigen::Index p = a % half;
    w(p * half + u, a) = 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> wes(w);
  // columns with eigenvalue +1 span the symmetric subspace
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (wes.eigenvalues()(i) > 0.5) cols.push_back(i);
  Eigen::MatrixXcd basis(dim, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i)
    basis.col(static_cast<Eigen::Index>(i)) = wes.eigenvectors().col(cols[i]);
  Eigen::MatrixXcd restricted = basis.adjoint() * s * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sym(restricted, Eigen::EigenvaluesOnly);
  out.symmetric.assign(sym.eigenvalues().data(),
                       sym.eigenvalues().data() + sym.eigenvalues().size());
  return out;
}

double two_copy_expectation(const PureState& psi) {
  psi.validate();
  require_qubits(psi.local_dims);
  int n = psi.num_parties();
  int total = 2 * n;
  Eigen::VectorXcd two = kron(psi.amplitudes, psi.amplitudes);
  std::vector<int> dims(total, 2);
  Eigen::Matrix4cd h = heisenberg_coupling();
  Eigen::VectorXcd work = two;
  for (int p = 0; p < n; ++p) {
    // apply H on the pair (p, n + p) via two single-party strides
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(work.size());
    int sa = total - 1 - p;
    int sb = total - 1 - (n + p);
    for (Eigen::Index a = 0; a < work.size(); ++a) {
      int ba = static_cast<int>((a >> sa) & 1);
      int bb = static_cast<int>((a >> sb) & 1);
      for (int ra = 0; ra < 2; ++ra)
        for (int rb = 0; rb < 2; ++rb) {
          Complex v = h(2 * ra + rb, 2 * ba + bb);
          if (v == Complex(0.0)) continue;
          Eigen::Index row = a;
          row = (row & ~(Eigen::Index(1) << sa)) | (Eigen::Index(ra) << sa);
          row = (row & ~(Eigen::Index(1) << sb)) | (Eigen::Index(rb) << sb);
          next(row) += v * work(a);
        }
    }
    work = std::move(next);
  }
  return two.dot(work).real();
}

namespace {

double reference_frame_value(int pattern, int num_parties) {
  double v = 1.0;
  for (int n = 0; n < num_parties; ++n)
    v *= (pattern >> n) & 1 ? -3.0 : 1.0;
  return v;
}

}  // namespace

double reference_frame_correlation(const PureState& psi, const SettingTuple& settings) {
  psi.validate();
  require_qubits(psi.local_dims);
  int n = psi.num_parties();
  validate_setting_tuple(settings, n);
  int total = 2 * n;
  // register: principal qubits 1..N, then reference qubits 1..N
  Eigen::VectorXcd joint = psi.amplitudes;
  for (int p = 0; p < n; ++p) {
    Eigen::Vector2cd q = bloch_qubit(settings[p]);
    Eigen::VectorXcd next(joint.size() * 2);
    for (Eigen::Index i = 0; i < joint.size(); ++i) {
      next(2 * i) = joint(i) * q(0);
      next(2 * i + 1) = joint(i) * q(1);
    }
    joint = std::move(next);
  }
  Eigen::Matrix4cd ps = singlet_projector();
  Eigen::Matrix4cd pt = Eigen::Matrix4cd::Identity() - ps;
  double e = 0.0;
  std::vector<int> dims(total, 2);
  for (int pattern = 0; pattern < (1 << n); ++pattern) {
    Eigen::VectorXcd proj = joint;
    for (int p = 0; p < n; ++p) {
      const Eigen::Matrix4cd& pr = (pattern >> p) & 1 ? ps : pt;
      Eigen::MatrixXcd full = embed_two_qubit(pr, p, n + p, total);
      proj = full * proj;
    }
    e += proj.squaredNorm() * reference_frame_value(pattern, n);
  }
  return e;
}

double reference_frame_correlation(const DensityMatrix& rho, const SettingTuple& settings) {
  rho.validate();
  require_qubits(rho.local_dims);
  int n = rho.num_parties();
  validate_setting_tuple(settings, n);
  int total = 2 * n;
  Eigen::MatrixXcd joint = rho.matrix;
  for (int p = 0; p < n; ++p) {
    Eigen::Vector2cd q = bloch_qubit(settings[p]);
    joint = kron(joint, q * q.adjoint());
  }
  Eigen::Matrix4cd ps = singlet_projector();
  Eigen::Matrix4cd pt = Eigen::Matrix4cd::Identity() - ps;
  double e = 0.0;
  for (int pattern = 0; pattern < (1 << n); ++pattern) {
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(joint.rows(), joint.cols());
    for (int p = 0; p < n; ++p) {
      const Eigen::Matrix4cd& pr = (pattern >> p) & 1 ? ps : pt;
      proj = proj * embed_two_qubit(pr, p, n + p, total);
    }
    e += (proj * joint).trace().real() * reference_frame_value(pattern, n);
  }
  return e;
}

}  // namespace randcorr

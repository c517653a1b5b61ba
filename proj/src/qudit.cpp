#include "randcorr/qudit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "randcorr/rng.hpp"

namespace randcorr {

GeneratorBasis gellmann_basis(int dim, double scale) {
  if (dim < 2) throw std::domain_error("generator basis requires d >= 2");
  if (scale <= 0.0) throw std::domain_error("scale must be positive");
  GeneratorBasis basis;
  basis.dim = dim;
  basis.scale = scale;
  basis.generators.reserve(dim * dim - 1);
  // off-diagonal families; at d = 2 this yields sigma_x then sigma_y
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      Eigen::MatrixXcd sym = Eigen::MatrixXcd::Zero(dim, dim);
      sym(j, k) = scale;
      sym(k, j) = scale;
      basis.generators.push_back(sym);
      Eigen::MatrixXcd asym = Eigen::MatrixXcd::Zero(dim, dim);
      asym(j, k) = Complex(0.0, -scale);
      asym(k, j) = Complex(0.0, scale);
      basis.generators.push_back(asym);
    }
  }
  // diagonal family; at d = 2 this yields sigma_z
  for (int l = 1; l < dim; ++l) {
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(dim, dim);
    double norm = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) diag(j, j) = scale * norm;
    diag(l, l) = -scale * norm * l;
    basis.generators.push_back(diag);
  }
  return basis;
}

double calibrated_scale(int dim) { return dim / 2.0; }

double qudit_correlation_length(const PureState& psi, const std::vector<GeneratorBasis>& bases) {
  psi.validate();
  int n = psi.num_parties();
  if (static_cast<int>(bases.size()) != n)
    throw std::invalid_argument("basis count does not match party count");
  for (int p = 0; p < n; ++p)
    if (bases[p].dim != psi.local_dims[p])
      throw std::invalid_argument("basis dimension mismatch for party " + std::to_string(p + 1));

  std::vector<int> index(n, 0);
  double c = 0.0;
  while (true) {
    Eigen::VectorXcd work = psi.amplitudes;
    for (int p = 0; p < n; ++p)
      apply_single_party(work, bases[p].generators[index[p]], p, psi.local_dims);
    double e = psi.amplitudes.dot(work).real();
    c += e * e;
    int p = n - 1;
    while (p >= 0 && ++index[p] == bases[p].count()) index[p--] = 0;
    if (p < 0) break;
  }
  return c;
}

double qudit_correlation_length(const PureState& psi, const GeneratorBasis& basis) {
  return qudit_correlation_length(psi,
                                  std::vector<GeneratorBasis>(psi.num_parties(), basis));
}

QuditBoundReport qudit_bound_check(int num_parties, int dim, int num_states,
                                   std::uint64_t seed) {
  if (num_parties < 1 || dim < 2) throw std::domain_error("need N >= 1 and d >= 2");
  if (num_states < 1) throw std::domain_error("need at least one state");
  double total_dim = std::pow(static_cast<double>(dim), num_parties);
  if (total_dim > 81.0 + 0.5)
    throw std::domain_error("d^N too large for the brute-force bound check");

  QuditBoundReport report;
  report.num_parties = num_parties;
  report.dim = dim;
  report.scale = calibrated_scale(dim);
  report.bound = std::pow(dim * (dim - 1.0) / 2.0, num_parties);
  report.num_states = num_states;

  GeneratorBasis basis = gellmann_basis(dim, report.scale);
  std::vector<int> dims(num_parties, dim);
  const double tol = 1e-6;
  bool first = true;
  for (int s = 0; s < num_states; ++s) {
    PureState psi = haar_random_pure(dims, derive_key({seed, 1, static_cast<std::uint64_t>(s)}));
    double c = qudit_correlation_length(psi, basis);
    if (first || c < report.min_c) report.min_c = c;
    if (first || c > report.max_c) report.max_c = c;
    first = false;
    if (c < report.bound - tol) ++report.violations;

    // random product state: tensor product of Haar single-qudit states
    Eigen::VectorXcd amps = Eigen::VectorXcd::Ones(1);
    for (int p = 0; p < num_parties; ++p) {
      PureState local = haar_random_pure(
          std::vector<int>{dim},
          derive_key({seed, 2, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(p)}));
      Eigen::VectorXcd next(amps.size() * dim);
      for (Eigen::Index i = 0; i < amps.size(); ++i)
        for (int j = 0; j < dim; ++j) next(i * dim + j) = amps(i) * local.amplitudes(j);
      amps = std::move(next);
    }
    PureState product{dims, std::move(amps)};
    double cp = qudit_correlation_length(product, basis);
    double dev = std::abs(cp - report.bound);
    if (dev > report.product_max_abs_dev) report.product_max_abs_dev = dev;
    if (dev > tol) ++report.violations;
    if (cp < report.min_c) report.min_c = cp;
    if (cp > report.max_c) report.max_c = cp;
  }
  return report;
}

}  // namespace randcorr

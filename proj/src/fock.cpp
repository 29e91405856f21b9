#include "ptlab/fock.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "ptlab/error.hpp"
#include "ptlab/linalg.hpp"

namespace ptlab::fock {

Eigen::MatrixXcd annihilation(int dim) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Eigen::MatrixXcd creation(int dim) { return annihilation(dim).transpose(); }

Eigen::MatrixXcd number(int dim) {
  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = k;
  return n;
}

TruncatedFockOperator reggeon_single_site(double delta, double g, int dim) {
  if (dim < 4) throw ConfigError("reggeon_single_site: dim must be >= 4");
  TruncatedFockOperator op{dim, Eigen::MatrixXcd::Zero(dim, dim)};
  const cd ig(0.0, g);
  for (int n = 0; n < dim; ++n) {
    op.matrix(n, n) = delta * n;
    if (n + 1 < dim) {
      // <n| a^dag a a |n+1> = <n+1| a^dag a^dag a |n> = n sqrt(n+1)
      const double e = n * std::sqrt(n + 1.0);
      op.matrix(n, n + 1) = ig * e;
      op.matrix(n + 1, n) = ig * e;
    }
  }
  return op;
}

TruncatedFockOperator swanson_model(double delta, double g, double gtilde, int dim) {
  if (dim < 4) throw ConfigError("swanson_model: dim must be >= 4");
  TruncatedFockOperator op{dim, Eigen::MatrixXcd::Zero(dim, dim)};
  for (int n = 0; n < dim; ++n) {
    op.matrix(n, n) = delta * n;
    if (n + 2 < dim) {
      const double e = std::sqrt((n + 1.0) * (n + 2.0));
      op.matrix(n + 2, n) = g * e;
      op.matrix(n, n + 2) = gtilde * e;
    }
  }
  return op;
}

bool is_pt_symmetric(const Eigen::MatrixXcd& h, double tol) {
  // P H P = conj(H) elementwise, P = diag((-1)^n)
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      if (std::abs(sign * h(i, j) - std::conj(h(i, j))) > tol * scale) return false;
    }
  }
  return true;
}

std::vector<cd> eigenvalues(const Eigen::MatrixXcd& h) {
  if (is_pt_symmetric(h, 0.0)) {
    // diag(i^n) H diag(i^-n) has entries i^(m-n) H_mn, all real under PT symmetry
    Eigen::MatrixXd r(h.rows(), h.cols());
    for (Eigen::Index m = 0; m < h.rows(); ++m) {
      for (Eigen::Index n = 0; n < h.cols(); ++n) {
        const Eigen::Index d = ((m - n) % 4 + 4) % 4;
        const cd phase = d == 0 ? cd(1, 0) : d == 1 ? cd(0, 1) : d == 2 ? cd(-1, 0) : cd(0, -1);
        r(m, n) = (phase * h(m, n)).real();
      }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(r, false);
    if (es.info() != Eigen::Success) throw NumericalError("real eigensolver failed");
    const auto& v = es.eigenvalues();
    return {v.data(), v.data() + v.size()};
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h, false);
  if (es.info() != Eigen::Success) throw NumericalError("complex eigensolver failed");
  const auto& v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

namespace {

std::vector<cd> lowest_by_real(std::vector<cd> v, std::size_t k) {
  std::sort(v.begin(), v.end(), [](cd a, cd b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  v.resize(std::min(k, v.size()));
  return v;
}

}  // namespace

spectra::SpectrumReport fock_spectrum(const std::string& model, const nlohmann::json& params,
                                      const std::function<TruncatedFockOperator(int)>& build,
                                      int dim, int k, int dim_step, double tol) {
  if (k < 1 || k > dim) throw ConfigError("fock_spectrum: need 1 <= k <= dim");
  if (dim_step < 1) throw ConfigError("fock_spectrum: dim_step must be positive");
  const auto low = lowest_by_real(eigenvalues(build(dim).matrix), static_cast<std::size_t>(k));
  const auto big = eigenvalues(build(dim + dim_step).matrix);
  const auto matched = linalg::match_nearest(low, big);
  spectra::SpectrumReport r;
  r.model = model;
  r.params = params;
  r.params["dim_step"] = dim_step;
  r.dim = dim;
  r.tolerance = tol;
  r.eigenvalues = low;
  for (std::size_t i = 0; i < low.size(); ++i) {
    const double c = std::abs(matched[i] - low[i]);
    r.truncation_change.push_back(c);
    r.flagged.push_back(!(c <= tol));
  }
  r.classification = spectra::classify_spectrum(r.eigenvalues, 1e-6);
  return r;
}

}  // namespace ptlab::fock

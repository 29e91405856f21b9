#include "ptlab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <ceres/ceres.h>
#include <glog/logging.h>

#include "ptlab/error.hpp"
#include "ptlab/fock.hpp"

namespace ptlab::metric {

std::vector<Eigen::MatrixXcd> ansatz_basis(int dim, int count) {
  if (count < 1 || count > kMaxAnsatz) {
    throw ConfigError("metric ansatz size must be in 1.." + std::to_string(kMaxAnsatz));
  }
  const cd i(0.0, 1.0);
  const Eigen::MatrixXcd a = fock::annihilation(dim);
  const Eigen::MatrixXcd ad = fock::creation(dim);
  const Eigen::MatrixXcd n = fock::number(dim);
  const Eigen::MatrixXcd a2 = a * a, ad2 = ad * ad;
  const Eigen::MatrixXcd a3 = a2 * a, ad3 = ad2 * ad;
  std::vector<Eigen::MatrixXcd> all = {n,       a2 + ad2, i * (a2 - ad2), a + ad,
                                       i * (a - ad), n * n, a3 + ad3,     i * (a3 - ad3)};
  all.resize(static_cast<std::size_t>(count));
  return all;
}

std::vector<std::string> ansatz_names(int count) {
  std::vector<std::string> all = {"N",         "a^2+adag^2", "i(a^2-adag^2)", "a+adag",
                                  "i(a-adag)", "N^2",        "a^3+adag^3",    "i(a^3-adag^3)"};
  all.resize(static_cast<std::size_t>(std::clamp(count, 0, kMaxAnsatz)));
  return all;
}

Eigen::MatrixXcd hermitian_exp(const Eigen::MatrixXcd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  const Eigen::VectorXd ev = es.eigenvalues().array().exp();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double objective(const Eigen::MatrixXcd& h, const std::vector<Eigen::MatrixXcd>& basis,
                 const std::vector<double>& theta, std::vector<double>* grad) {
  const Eigen::Index d = h.rows();
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t k = 0; k < basis.size(); ++k) A += theta[k] * basis[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
  const Eigen::MatrixXcd& U = es.eigenvectors();
  const Eigen::VectorXd lam = es.eigenvalues();
  const Eigen::VectorXd ep = lam.array().exp();
  const Eigen::VectorXd em = (-lam).array().exp();
  // K = eta H eta^-1 in the eigenbasis of A, then rotated back
  const Eigen::MatrixXcd Ht = U.adjoint() * h * U;
  const Eigen::MatrixXcd Kt = ep.asDiagonal() * Ht * em.asDiagonal();
  const Eigen::MatrixXcd K = U * Kt * U.adjoint();
  const Eigen::MatrixXcd G = K - K.adjoint();
  const double f = G.squaredNorm();
  if (grad != nullptr) {
    // df/dtheta_k = -4 Re tr([K, G] X_k), X_k = Dexp(A)[B_k] exp(-A).
    // In the eigenbasis: tr(C X_k) = sum_ij Ct_ji Phi_ij Bt_ij exp(-lam_j).
    const Eigen::MatrixXcd Ct = U.adjoint() * (K * G - G * K) * U;
    Eigen::MatrixXd phi(d, d);
    for (Eigen::Index p = 0; p < d; ++p) {
      for (Eigen::Index q = 0; q < d; ++q) {
        const double dl = lam(p) - lam(q);
        phi(p, q) = std::abs(dl) < 1e-10 ? ep(q) * (1.0 + 0.5 * dl) : (ep(p) - ep(q)) / dl;
      }
    }
    grad->assign(basis.size(), 0.0);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const Eigen::MatrixXcd Bt = U.adjoint() * basis[k] * U;
      cd tr = 0.0;
      for (Eigen::Index p = 0; p < d; ++p) {
        for (Eigen::Index q = 0; q < d; ++q) tr += Ct(q, p) * phi(p, q) * Bt(p, q) * em(q);
      }
      (*grad)[k] = -4.0 * tr.real();
    }
  }
  return f;
}

namespace {

class MetricCost final : public ceres::FirstOrderFunction {
 public:
  // The solver sees phi_k = theta_k * scale_k, scale_k = ||B_k||_2, so a unit
  // step moves the exponent of eta by O(1) whatever the truncation.
  MetricCost(const Eigen::MatrixXcd& h, const std::vector<Eigen::MatrixXcd>& basis,
             const std::vector<double>& scale)
      : h_(h), basis_(basis), scale_(scale) {}

  bool Evaluate(const double* params, double* cost, double* gradient) const override {
    std::vector<double> theta(basis_.size());
    for (std::size_t k = 0; k < theta.size(); ++k) theta[k] = params[k] / scale_[k];
    std::vector<double> g;
    const double f = objective(h_, basis_, theta, gradient != nullptr ? &g : nullptr);
    if (!std::isfinite(f)) return false;
    *cost = f;
    if (gradient != nullptr) {
      for (std::size_t k = 0; k < g.size(); ++k) gradient[k] = g[k] / scale_[k];
    }
    return true;
  }
  int NumParameters() const override { return static_cast<int>(basis_.size()); }

 private:
  const Eigen::MatrixXcd& h_;
  const std::vector<Eigen::MatrixXcd>& basis_;
  const std::vector<double>& scale_;
};

}  // namespace

Result metric_search(const Eigen::MatrixXcd& h, int ansatz_dim, const Options& opt) {
  if (h.rows() != h.cols() || h.rows() < 2) throw ConfigError("metric_search: square matrix required");
  if (ansatz_dim > h.rows()) throw ConfigError("metric_search: ansatz_dim exceeds the matrix dimension");
  const auto basis = ansatz_basis(static_cast<int>(h.rows()), ansatz_dim);
  // BFGS restarts after rejected steps are expected here; keep glog quiet
  FLAGS_minloglevel = std::max(FLAGS_minloglevel, 2);

  ceres::GradientProblemSolver::Options so;
  so.line_search_direction_type = ceres::BFGS;
  so.max_num_iterations = opt.max_iterations;
  so.function_tolerance = 1e-30;
  so.gradient_tolerance = 1e-30;
  so.parameter_tolerance = 1e-30;
  so.logging_type = ceres::SILENT;
  so.minimizer_progress_to_stdout = false;

  std::vector<double> scale;
  for (const auto& b : basis) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b, Eigen::EigenvaluesOnly);
    scale.push_back(std::max(1e-12, es.eigenvalues().cwiseAbs().maxCoeff()));
  }

  // starts drawn up front so the result does not depend on scheduling
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> start(0.0, opt.start_scale);
  std::vector<std::vector<double>> starts(opt.restarts + 1, std::vector<double>(basis.size(), 0.0));
  for (std::size_t s = 1; s < starts.size(); ++s) {
    for (double& t : starts[s]) t = start(rng);
  }
  auto run = [&](std::vector<double> phi) {
    ceres::GradientProblem problem(new MetricCost(h, basis, scale));
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(so, problem, phi.data(), &summary);
    for (std::size_t k = 0; k < phi.size(); ++k) phi[k] /= scale[k];
    return phi;
  };
  std::vector<std::future<std::vector<double>>> jobs;
  for (const auto& s : starts) jobs.push_back(std::async(std::launch::async, run, s));

  Result best;
  best.residual = std::numeric_limits<double>::infinity();
  for (auto& job : jobs) {
    const std::vector<double> theta = job.get();
    const double f = objective(h, basis, theta, nullptr);
    const double r = std::isfinite(f) ? std::sqrt(f) : std::numeric_limits<double>::infinity();
    best.start_residuals.push_back(r);
    if (r < best.residual || best.theta.empty()) {
      best.residual = r;
      best.theta = theta;
    }
  }
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(h.rows(), h.cols());
  for (std::size_t k = 0; k < basis.size(); ++k) A += best.theta[k] * basis[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
  best.eta = hermitian_exp(A);
  best.min_eta_eigenvalue = std::exp(es.eigenvalues().minCoeff());
  best.positive = best.min_eta_eigenvalue >= 1e-12;
  best.converged = best.residual <= opt.target;
  best.ansatz = ansatz_names(ansatz_dim);
  return best;
}

}  // namespace ptlab::metric

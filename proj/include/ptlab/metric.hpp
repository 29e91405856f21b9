#pragma once
// Numerical search for a positive metric eta = exp(A), A Hermitian from a
// finite operator ansatz, such that eta H eta^-1 is Hermitian.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ptlab::metric {

using cd = std::complex<double>;

/// Hermitian ansatz operators in the truncated Fock basis, in order:
/// N, a^2+a^dag2, i(a^2-a^dag2), a+a^dag, i(a-a^dag), N^2, a^3+a^dag3, i(a^3-a^dag3).
inline constexpr int kMaxAnsatz = 8;
std::vector<Eigen::MatrixXcd> ansatz_basis(int dim, int count);
std::vector<std::string> ansatz_names(int count);

/// f(theta) = ||K - K^dag||_F^2 with K = eta H eta^-1, eta = exp(sum theta_k B_k).
/// Writes df/dtheta into `grad` when non-null.
double objective(const Eigen::MatrixXcd& h, const std::vector<Eigen::MatrixXcd>& basis,
                 const std::vector<double>& theta, std::vector<double>* grad);

/// exp of a Hermitian matrix
Eigen::MatrixXcd hermitian_exp(const Eigen::MatrixXcd& a);

struct Options {
  int restarts = 4;          // random starts in addition to theta = 0
  std::uint64_t seed = 1;
  int max_iterations = 2000;
  double start_scale = 0.3;  // std-dev of random starts, per unit spectral norm of each term
  double target = 1e-8;      // residual counted as converged
};

struct Result {
  Eigen::MatrixXcd eta;
  std::vector<double> theta;
  std::vector<std::string> ansatz;
  double residual = 0.0;           // ||K - K^dag||_F at the best point
  bool converged = false;          // residual <= target
  bool positive = true;            // min eigenvalue of eta >= 1e-12
  double min_eta_eigenvalue = 0.0;
  std::vector<double> start_residuals;  // best residual reached from each start
};

/// BFGS (Ceres) from theta = 0 and `restarts` random starts; returns the best.
Result metric_search(const Eigen::MatrixXcd& h, int ansatz_dim, const Options& opt = {});

}  // namespace ptlab::metric

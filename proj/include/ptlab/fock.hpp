#pragma once
// Operators on a truncated oscillator basis |0>, ..., |dim-1>.

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "ptlab/spectra.hpp"

namespace ptlab::fock {

using cd = std::complex<double>;

struct TruncatedFockOperator {
  int dim = 0;
  Eigen::MatrixXcd matrix;
};

/// a|n> = sqrt(n)|n-1>
Eigen::MatrixXcd annihilation(int dim);
Eigen::MatrixXcd creation(int dim);
Eigen::MatrixXcd number(int dim);

/// Delta a^dag a + i g (a^dag a a + a^dag a^dag a)
TruncatedFockOperator reggeon_single_site(double delta, double g, int dim);
/// Delta a^dag a + g a^dag a^dag + gt a a
TruncatedFockOperator swanson_model(double delta, double g, double gtilde, int dim);

/// Invariance under P = diag((-1)^n) combined with complex conjugation.
bool is_pt_symmetric(const Eigen::MatrixXcd& h, double tol = 0.0);

/// All eigenvalues. PT-symmetric matrices are gauged to a real matrix with
/// diag(i^n) and solved in real arithmetic, so real eigenvalues come out
/// exactly real and complex ones as exact conjugate pairs.
std::vector<cd> eigenvalues(const Eigen::MatrixXcd& h);

/// Lowest k eigenvalues by real part at `dim`, with the change of each under
/// dim -> dim + dim_step (flagged above 1e-8).
spectra::SpectrumReport fock_spectrum(const std::string& model, const nlohmann::json& params,
                                      const std::function<TruncatedFockOperator(int)>& build,
                                      int dim, int k, int dim_step = 20, double tol = 1e-8);

}  // namespace ptlab::fock

#pragma once
// Supersymmetric partner construction from a nodeless ground state.
//
// W = -psi'/psi, V_-+ = W^2 -+ W', H_-+ = -d^2/dx^2 + V_-+ + E_m,
// Q = d/dx + W, Qt = -d/dx + W, Q H_- = H_+ Q.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ptlab/grid.hpp"

namespace ptlab::susy {

using cd = std::complex<double>;
using grid::GridWavefunction;
using grid::Stencil;

struct SuperPartnerPair {
  double x0 = 0.0, dx = 1.0;
  std::vector<cd> W, V_minus, V_plus;
  std::vector<double> w, w_hat;
  cd E_m{0.0, 0.0};
  double eps_m = 0.0, eps_hat_m = 0.0;

  std::size_t size() const { return W.size(); }
  double x(std::size_t j) const { return x0 + static_cast<double>(j) * dx; }
};

/// W from the logarithmic derivative of psi (phase unwrapped), V_-+ = W^2 -+ W'.
/// Throws NodeError if psi has a node inside its working window: |psi| below
/// 1e-12 max|psi| between the outermost local maxima, or a sign change of a
/// real psi. Monotonically decaying tails are not nodes.
SuperPartnerPair superpotential_from_groundstate(const GridWavefunction& psi, cd E_m = 0.0);

/// Pair from superpotential samples directly.
SuperPartnerPair pair_from_superpotential(double x0, double dx, std::vector<cd> W, cd E_m = 0.0);

/// -d^2/dx^2 + V on a uniform grid, Dirichlet outside.
class DiscretizedHamiltonian {
 public:
  DiscretizedHamiltonian(double x0, double dx, std::vector<cd> potential);

  double x0() const { return x0_; }
  double dx() const { return dx_; }
  std::size_t size() const { return v_.size(); }
  const std::vector<cd>& potential() const { return v_; }

  /// 3-point tridiagonal matrix
  linalg::Tridiagonal tridiagonal() const { return grid::schrodinger_tridiagonal(v_, dx_); }
  linalg::BandedMatrix banded(Stencil s) const { return grid::schrodinger_matrix(v_, dx_, s); }
  std::vector<cd> apply(std::span<const cd> f, Stencil s) const;

  struct Level {
    cd value;
    double change;  // |difference between the last two extrapolants|
  };
  /// Lowest k eigenvalues by real part from the 3-point matrix, Richardson
  /// extrapolated over grids with spacing dx, 2dx, 4dx (subsampled potential).
  std::vector<Level> eigenvalues(std::size_t k) const;

  /// Eigenvector of the 5-point operator nearest `shift`.
  linalg::EigenPair eigenvector(cd shift) const;

 private:
  double x0_, dx_;
  std::vector<cd> v_;
};

struct PartnerHamiltonians {
  DiscretizedHamiltonian minus, plus;
};

PartnerHamiltonians build_partner_hamiltonians(const SuperPartnerPair& pair, cd E_m);
inline PartnerHamiltonians build_partner_hamiltonians(const SuperPartnerPair& pair) {
  return build_partner_hamiltonians(pair, pair.E_m);
}

/// Q f = f' + W f and Qt f = -f' + W f with 4th-order derivatives, zero padding.
std::vector<cd> apply_Q(const SuperPartnerPair& pair, std::span<const cd> f);
std::vector<cd> apply_Qtilde(const SuperPartnerPair& pair, std::span<const cd> f);

/// Rows at least this far from either end count as interior.
inline constexpr std::size_t kInteriorMargin = 4;

/// Smooth probe functions used to measure operator identities: Gaussian bumps
/// centred at 25%, 50% and 75% of the window, width window/16.
std::vector<std::vector<cd>> probe_functions(double x0, double dx, std::size_t n);

/// max over probes of ||(Q H_- - H_+ Q) f|| / ||H_- f|| on interior rows,
/// 5-point Laplacians. `tilde` checks Qt H_+ = H_- Qt instead.
double verify_intertwining(const SuperPartnerPair& pair, const PartnerHamiltonians& h, bool tilde = false);

/// max over probes of the interior mismatch of H_+ - E_m = Q Qt and H_- - E_m = Qt Q.
double verify_factorization(const SuperPartnerPair& pair, const PartnerHamiltonians& h);

struct MappedWavefunction {
  GridWavefunction phi;
  bool annihilated = false;  // ||Q phi|| < 1e-6 ||phi||
};
MappedWavefunction map_wavefunction(const SuperPartnerPair& pair, const GridWavefunction& phi_minus);

/// ||H f - E f|| / ||f|| on interior rows (5-point).
double eigen_residual(const DiscretizedHamiltonian& h, std::span<const cd> f, cd E);

enum class SusyCase { IsospectralQuartet, TripletPlus, TripletMinus, Doublet };
std::string case_name(SusyCase c);

struct Classification {
  SusyCase result;
  double w_hat_sup = 0.0;
  double plus_residual = 0.0;   // sup |w - (-w_hat' - eps_hat)/(2 w_hat)|
  double minus_residual = 0.0;  // sup |w - ( w_hat' - eps_hat)/(2 w_hat)|
  std::optional<std::string> warning;
};

/// Doublet if sup|w_hat| < 1e-10. Otherwise TripletPlus (H_+ potential real)
/// if w = (-w_hat' - eps_hat)/2w_hat holds to 1e-8, TripletMinus for the
/// other sign, else IsospectralQuartet. The plus sign wins when both hold.
Classification classify_case(const SuperPartnerPair& pair);

}  // namespace ptlab::susy

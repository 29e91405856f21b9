#pragma once
// Spectral reports for non-Hermitian models: real / conjugate-pair
// classification and the monomial family -d^2/dz^2 - g (iz)^N.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace ptlab::spectra {

using cd = std::complex<double>;

enum class Classification { AllReal, ConjugatePairs, Mixed };
std::string classification_name(Classification c);

struct ClassifyResult {
  Classification classification;
  /// pairing[i] is the index of the conjugate partner of eigenvalue i, or i itself
  /// for real eigenvalues and unpaired complex ones.
  std::vector<int> pairing;
};

/// AllReal if every |Im| < tol; otherwise greedy nearest-neighbour pairing of
/// each complex value with the closest unused conj candidate (within
/// tol * (1 + |e|)); Mixed if any complex value is left unpaired.
ClassifyResult classify_spectrum(std::span<const cd> eigs, double tol);

struct SpectrumReport {
  std::string model;
  nlohmann::json params;
  int dim = 0;
  std::vector<cd> eigenvalues;
  ClassifyResult classification;
  /// Per eigenvalue: change under the convergence probe (grid/box or truncation).
  std::vector<double> truncation_change;
  std::vector<bool> flagged;
  double tolerance = 0.0;  // flag threshold for truncation_change

  bool all_converged() const;
};

nlohmann::json to_json(const SpectrumReport& r);

struct MonomialModel {
  int N = 2;
  double g = 1.0;
  double half_width = 0.0;  // 0 picks a default from N and the highest level
  int intervals = 4000;     // finest-grid intervals; scaled with the default half-width
};

/// Lowest k eigenvalues by modulus of -d^2/dz^2 - g (iz)^N, N in {2,3,4}.
/// Level n is solved on its own PT-symmetric contour: flat between the WKB
/// turning points of E_n, bending into the Stokes wedges with slope
/// a = tan((N-2) pi / (2N+4)) beyond them (the real line for N = 2). The
/// 3-point discretization is refined from the WKB value on three grids and
/// Richardson-extrapolated; an eigenvalue is flagged when the grid change or
/// the change under a 25% wider box exceeds 1e-4, or when two levels coincide.
SpectrumReport monomial_spectrum(const MonomialModel& m, int k);

}  // namespace ptlab::spectra

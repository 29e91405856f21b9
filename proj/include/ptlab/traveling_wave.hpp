#pragma once
// Traveling waves u(x, t) = phi(x - c t) of the Fring-deformed KdV equation.
//
// One integration of the traveling-wave ODE gives i d/dxi (i phi')^e =
// phi^2/2 - c phi - A. For a real profile and odd e, with s = phi'^e, this is
// the real system
//
//   phi' = sign(s) |s|^(1/e),   s' = k (A + c phi - phi^2/2),   k = i^(1-e) = +-1.
//
// Profiles are shot from the crest (phi = a, s = 0) on the two parameters
// (a, A) and verified by evolving them with the full PDE.

#include <string>
#include <vector>

#include "ptlab/kdv.hpp"

namespace ptlab::kdv {

enum class WaveBoundary { Decaying, Periodic };
std::string boundary_name(WaveBoundary b);
WaveBoundary parse_boundary(const std::string& s);

struct WaveRequest {
  double epsilon = 1.0;        // odd integer in [1, 9]
  double c = 1.0;              // speed, in [0.05, 20]
  double amplitude_guess = 0;  // crest guess; 0 picks 3c (decaying) or a boundary-specific default
  WaveBoundary boundary = WaveBoundary::Decaying;
  double period = 0.0;         // periodic only; 0 picks 20/sqrt(c)
  int n = 512;                 // samples of the returned profile
  int max_iterations = 60;
  bool verify = true;          // evolve over one translation period
};

struct WaveResult {
  bool found = false;               // shooting converged and (if requested) the evolve check passed
  bool shooting_converged = false;
  std::string reason;               // why not found
  int iterations = 0;
  double amplitude = 0.0;           // crest value a
  double integration_constant = 0.0;  // A
  double shooting_residual = 0.0;   // |F(a, A)| at the end
  KdVField profile;                 // phi on the periodic grid, crest at x = 0
  double shape_drift = -1.0;        // max|u(T) - phi| / max|phi| after T = L/c; -1 if not run
  double pt_asymmetry = -1.0;       // max|phi(x) - conj(phi(-x))| / max|phi|
  bool pt_broken = false;           // pt_asymmetry > 1e-8
};

/// Search box: e odd integer in [1, 9] and c in [0.05, 20]; ConfigError otherwise.
/// Non-convergence is reported in the result, not thrown.
WaveResult traveling_wave_shoot(const WaveRequest& req);

/// Half-width of the decaying-profile window for speed c.
double solitary_half_width(double c);

}  // namespace ptlab::kdv

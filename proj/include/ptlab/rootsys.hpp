#pragma once
// Root systems of the crystallographic Coxeter groups A, B, C, D, G2 and
// Cartan-Weyl matrix bases in their defining representations.

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace ptlab::rootsys {

enum class Family { A, B, C, D, G2 };
enum class Orbit { Short, Long };

std::string family_name(Family f);
/// Accepts "A".."D", "G2" (case-insensitive). Throws ConfigError otherwise.
Family parse_family(std::string_view s);

struct RootSystem {
  Family family;
  int rank;
  int dim;  // ambient dimension: rank + 1 for A and G2, rank otherwise
  std::vector<Eigen::VectorXd> roots;
  std::vector<int> short_roots;
  std::vector<int> long_roots;   // empty for simply-laced families
  std::vector<int> simple_roots;
  std::vector<int> positive_roots;
  std::vector<int> negative;     // negative[i] is the index of -roots[i]

  std::size_t size() const { return roots.size(); }
  bool simply_laced() const { return long_roots.empty(); }
  double length2(int i) const { return roots[i].squaredNorm(); }
  double short_length2() const { return length2(short_roots.front()); }
  double long_length2() const { return simply_laced() ? short_length2() : length2(long_roots.front()); }
  /// Index of `v` in the root list, or -1.
  int index_of(const Eigen::VectorXd& v, double tol = 1e-9) const;
};

/// Throws ConfigError on invalid (family, rank): A needs rank >= 1, B and C
/// rank >= 2, D rank >= 3, G2 rank == 2.
RootSystem build_root_system(Family family, int rank);

Orbit orbit_of(const RootSystem& rs, int root_index);

/// Reflection of `v` in the hyperplane orthogonal to `alpha`.
Eigen::VectorXd reflect(const Eigen::VectorXd& v, const Eigen::VectorXd& alpha);

nlohmann::json to_json(const RootSystem& rs);

struct CartanWeylBasis {
  int matrix_size = 0;
  /// Scale of the invariant form <X, Y> = kappa tr(XY); 1 for A, 1/2 for B, C, D.
  double kappa = 1.0;
  /// One H_i per ambient coordinate, so alpha.H = sum_i alpha^i H_i.
  std::vector<Eigen::MatrixXcd> cartan;
  /// step[k] is E_alpha for alpha = roots[k].
  std::vector<Eigen::MatrixXcd> step;
  /// (a, b) -> eps with [E_a, E_b] = eps E_{a+b}, for every pair with a+b a root.
  std::map<std::pair<int, int>, double> structure_constants;

  std::complex<double> form(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) const {
    return kappa * (x * y).trace();
  }
  /// sum_i v^i H_i
  Eigen::MatrixXcd dot_cartan(const Eigen::VectorXcd& v) const;
};

/// Throws CapabilityError for G2 (no matrix representation provided).
CartanWeylBasis build_cartan_weyl(const RootSystem& rs);

}  // namespace ptlab::rootsys

#include "ptlab/rootsys.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "ptlab/error.hpp"

namespace ptlab::rootsys {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd unit(int dim, int i) {
  VectorXd v = VectorXd::Zero(dim);
  v(i) = 1.0;
  return v;
}

// Generic functional deciding positivity; no root is orthogonal to it.
VectorXd positivity_direction(int dim) {
  VectorXd v(dim);
  for (int k = 0; k < dim; ++k) v(k) = std::pow(std::numbers::pi, -k);
  return v;
}

std::vector<VectorXd> raw_roots(Family family, int rank) {
  std::vector<VectorXd> out;
  const int n = rank;
  auto pm_pairs = [&](int dim) {
    for (int i = 0; i < dim; ++i) {
      for (int j = i + 1; j < dim; ++j) {
        for (double si : {1.0, -1.0}) {
          for (double sj : {1.0, -1.0}) out.push_back(si * unit(dim, i) + sj * unit(dim, j));
        }
      }
    }
  };
  switch (family) {
    case Family::A:
      for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
          if (i != j) out.push_back(unit(n + 1, i) - unit(n + 1, j));
        }
      }
      break;
    case Family::B:
      pm_pairs(n);
      for (int i = 0; i < n; ++i) {
        out.push_back(unit(n, i));
        out.push_back(-unit(n, i));
      }
      break;
    case Family::C:
      pm_pairs(n);
      for (int i = 0; i < n; ++i) {
        out.push_back(2.0 * unit(n, i));
        out.push_back(-2.0 * unit(n, i));
      }
      break;
    case Family::D:
      pm_pairs(n);
      break;
    case Family::G2:
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          if (i == j) continue;
          out.push_back(unit(3, i) - unit(3, j));
        }
        const VectorXd l = 3.0 * unit(3, i) - VectorXd::Ones(3);  // 2e_i - e_j - e_k
        out.push_back(l);
        out.push_back(-l);
      }
      break;
  }
  return out;
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
    case Family::G2: return "G2";
  }
  return "?";
}

Family parse_family(std::string_view s) {
  std::string u(s);
  for (char& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u == "A") return Family::A;
  if (u == "B") return Family::B;
  if (u == "C") return Family::C;
  if (u == "D") return Family::D;
  if (u == "G2" || u == "G") return Family::G2;
  throw ConfigError("unknown root-system family '" + std::string(s) + "'");
}

int RootSystem::index_of(const VectorXd& v, double tol) const {
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if ((roots[i] - v).cwiseAbs().maxCoeff() < tol) return static_cast<int>(i);
  }
  return -1;
}

VectorXd reflect(const VectorXd& v, const VectorXd& alpha) {
  return v - (2.0 * v.dot(alpha) / alpha.squaredNorm()) * alpha;
}

RootSystem build_root_system(Family family, int rank) {
  const bool ok = (family == Family::A && rank >= 1) ||
                  ((family == Family::B || family == Family::C) && rank >= 2) ||
                  (family == Family::D && rank >= 3) || (family == Family::G2 && rank == 2);
  if (!ok) {
    throw ConfigError("invalid root system " + family_name(family) + "_" + std::to_string(rank));
  }
  RootSystem rs;
  rs.family = family;
  rs.rank = rank;
  rs.roots = raw_roots(family, rank);
  rs.dim = static_cast<int>(rs.roots.front().size());

  double max_len2 = 0.0;
  for (const auto& r : rs.roots) max_len2 = std::max(max_len2, r.squaredNorm());
  const bool laced = family == Family::A || family == Family::D;
  const VectorXd v = positivity_direction(rs.dim);
  for (std::size_t i = 0; i < rs.roots.size(); ++i) {
    const int k = static_cast<int>(i);
    const bool is_long = !laced && std::abs(rs.roots[i].squaredNorm() - max_len2) < 1e-9;
    (is_long ? rs.long_roots : rs.short_roots).push_back(k);
    if (rs.roots[i].dot(v) > 0.0) rs.positive_roots.push_back(k);
    rs.negative.push_back(rs.index_of(-rs.roots[i]));
  }
  // Simple roots: positive roots that are not a sum of two positive roots.
  for (int a : rs.positive_roots) {
    bool decomposable = false;
    for (int b : rs.positive_roots) {
      const int c = rs.index_of(rs.roots[a] - rs.roots[b]);
      if (c >= 0 && rs.roots[c].dot(v) > 0.0) {
        decomposable = true;
        break;
      }
    }
    if (!decomposable) rs.simple_roots.push_back(a);
  }
  if (static_cast<int>(rs.simple_roots.size()) != rank) {
    throw NumericalError("root system build: found " + std::to_string(rs.simple_roots.size()) +
                         " simple roots for rank " + std::to_string(rank));
  }
  return rs;
}

Orbit orbit_of(const RootSystem& rs, int root_index) {
  if (root_index < 0 || root_index >= static_cast<int>(rs.size())) {
    throw ConfigError("root index out of range");
  }
  return std::find(rs.long_roots.begin(), rs.long_roots.end(), root_index) != rs.long_roots.end()
             ? Orbit::Long
             : Orbit::Short;
}

nlohmann::json to_json(const RootSystem& rs) {
  nlohmann::json roots = nlohmann::json::array();
  for (const auto& r : rs.roots) {
    roots.push_back(std::vector<double>(r.data(), r.data() + r.size()));
  }
  return {{"family", family_name(rs.family)},
          {"rank", rs.rank},
          {"roots", roots},
          {"short", rs.short_roots},
          {"long", rs.long_roots}};
}

Eigen::MatrixXcd CartanWeylBasis::dot_cartan(const Eigen::VectorXcd& v) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(matrix_size, matrix_size);
  for (std::size_t i = 0; i < cartan.size(); ++i) out += v(static_cast<Eigen::Index>(i)) * cartan[i];
  return out;
}

namespace {

// Weights of the defining representation, one per basis vector.
std::vector<VectorXd> rep_weights(const RootSystem& rs) {
  const int l = rs.rank;
  std::vector<VectorXd> w;
  if (rs.family == Family::A) {
    for (int i = 0; i <= l; ++i) w.push_back(unit(l + 1, i));
    return w;
  }
  for (int i = 0; i < l; ++i) w.push_back(unit(l, i));
  for (int i = 0; i < l; ++i) w.push_back(-unit(l, i));
  if (rs.family == Family::B) w.push_back(VectorXd::Zero(l));
  return w;
}

// Bilinear form J preserved by the algebra: X^T J + J X = 0.
MatrixXd invariant_form(const RootSystem& rs, int n) {
  const int l = rs.rank;
  MatrixXd j = MatrixXd::Zero(n, n);
  switch (rs.family) {
    case Family::B:
      j(2 * l, 2 * l) = 1.0;
      [[fallthrough]];
    case Family::D:
      j.block(0, l, l, l) = MatrixXd::Identity(l, l);
      j.block(l, 0, l, l) = MatrixXd::Identity(l, l);
      break;
    case Family::C:
      j.block(0, l, l, l) = MatrixXd::Identity(l, l);
      j.block(l, 0, l, l) = -MatrixXd::Identity(l, l);
      break;
    default:
      break;
  }
  return j;
}

// One-dimensional root space for `alpha` inside the algebra preserving J.
MatrixXd root_space(const std::vector<VectorXd>& weights, const MatrixXd& j,
                    const VectorXd& alpha, bool constrained) {
  const int n = static_cast<int>(weights.size());
  std::vector<std::pair<int, int>> support;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if ((weights[a] - weights[b] - alpha).cwiseAbs().maxCoeff() < 1e-9) support.emplace_back(a, b);
    }
  }
  if (support.empty()) throw NumericalError("root space has empty support");
  VectorXd coeff;
  if (!constrained) {
    if (support.size() != 1) throw NumericalError("unexpected root-space support");
    coeff = VectorXd::Ones(1);
  } else {
    MatrixXd lin(n * n, support.size());
    for (std::size_t s = 0; s < support.size(); ++s) {
      MatrixXd x = MatrixXd::Zero(n, n);
      x(support[s].first, support[s].second) = 1.0;
      const MatrixXd c = x.transpose() * j + j * x;
      lin.col(static_cast<Eigen::Index>(s)) = Eigen::Map<const VectorXd>(c.data(), n * n);
    }
    Eigen::JacobiSVD<MatrixXd> svd(lin, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const Eigen::Index last = static_cast<Eigen::Index>(support.size()) - 1;
    if (sv(last) > 1e-10 || (last > 0 && sv(last - 1) < 1e-10)) {
      throw NumericalError("root space is not one-dimensional");
    }
    coeff = svd.matrixV().col(last);
  }
  MatrixXd x = MatrixXd::Zero(n, n);
  for (std::size_t s = 0; s < support.size(); ++s) {
    x(support[s].first, support[s].second) = coeff(static_cast<Eigen::Index>(s));
  }
  // Deterministic sign: first nonzero entry (column-major) positive.
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double v = x.data()[k];
    if (std::abs(v) > 1e-12) {
      if (v < 0) x = -x;
      break;
    }
  }
  return x;
}

}  // namespace

CartanWeylBasis build_cartan_weyl(const RootSystem& rs) {
  if (rs.family == Family::G2) {
    throw CapabilityError("no Cartan-Weyl matrix representation for G2");
  }
  const auto weights = rep_weights(rs);
  const int n = static_cast<int>(weights.size());
  CartanWeylBasis cw;
  cw.matrix_size = n;
  cw.kappa = rs.family == Family::A ? 1.0 : 0.5;

  for (int i = 0; i < rs.dim; ++i) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (int a = 0; a < n; ++a) h(a, a) = weights[a](i);
    cw.cartan.push_back(h);
  }

  const MatrixXd j = invariant_form(rs, n);
  const bool constrained = rs.family != Family::A;
  std::vector<MatrixXd> real_step(rs.size());
  for (int a : rs.positive_roots) {
    const int na = rs.negative[a];
    const MatrixXd ep = root_space(weights, j, rs.roots[a], constrained);
    const MatrixXd em = root_space(weights, j, rs.roots[na], constrained);
    const double t = cw.kappa * (ep * em).trace();
    if (std::abs(t) < 1e-12) throw NumericalError("degenerate root-space pairing");
    real_step[a] = ep;
    real_step[na] = em / t;
  }
  cw.step.reserve(rs.size());
  for (const auto& m : real_step) cw.step.push_back(m.cast<std::complex<double>>());

  for (int a = 0; a < static_cast<int>(rs.size()); ++a) {
    for (int b = 0; b < static_cast<int>(rs.size()); ++b) {
      const int c = rs.index_of(rs.roots[a] + rs.roots[b]);
      if (c < 0) continue;
      const MatrixXd comm = real_step[a] * real_step[b] - real_step[b] * real_step[a];
      cw.structure_constants[{a, b}] = cw.kappa * (comm * real_step[rs.negative[c]]).trace();
    }
  }
  return cw;
}

}  // namespace ptlab::rootsys

#include <algorithm>
#include <charconv>
#include <cmath>

#include "ptlab/cli.hpp"
#include "ptlab/error.hpp"

namespace ptlab::cli {

namespace {

using VT = ValueType;

std::vector<Schema> build_schemas() {
  std::vector<Schema> s;
  s.push_back({"spectra",
               "spectrum of a non-Hermitian model with reality classification",
               {
                   {"model", VT::String, "swanson", "model", {"swanson", "reggeon", "monomial"}},
                   {"delta", VT::Double, "2", "oscillator frequency Delta (swanson, reggeon)", {}},
                   {"g", VT::Double, "auto", "coupling g (auto: 0.5 swanson, 0.3 reggeon, 1 monomial)", {}},
                   {"gtilde", VT::Double, "0.3", "second Swanson coupling", {}},
                   {"N", VT::Int, "3", "monomial exponent in -d^2/dz^2 - g (iz)^N", {"2", "3", "4"}},
                   {"levels", VT::Int, "10", "number of eigenvalues reported", {}},
                   {"dim", VT::Int, "120", "Fock truncation", {}},
                   {"dim_step", VT::Int, "40", "truncation increment for the stability probe", {}},
                   {"half_width", VT::Double, "0", "monomial contour half-width (0: automatic)", {}},
                   {"intervals", VT::Int, "4000", "monomial finest-grid intervals", {}},
                   {"tol", VT::Double, "1e-6", "classification tolerance", {}},
                   {"metric", VT::Bool, "false", "also search a metric (Fock models)", {}},
                   {"ansatz", VT::Int, "3", "metric ansatz size (1-8)", {}},
                   {"restarts", VT::Int, "4", "metric random restarts", {}},
               }});
  s.push_back({"susy",
               "supersymmetric partners of a nodeless ground state",
               {
                   {"profile", VT::String, "gaussian", "ground state", {"gaussian", "pt", "generic", "file"}},
                   {"b", VT::Double, "0.5", "pt profile: W = x + i b sech x", {}},
                   {"file", VT::String, "", "CSV with x, Re psi, Im psi (profile = file)", {}},
                   {"window", VT::Double, "9", "grid covers [-window, window]", {}},
                   {"n", VT::Int, "2000", "grid points", {}},
                   {"levels", VT::Int, "10", "partner levels compared", {}},
                   {"em_re", VT::Double, "0", "Re E_m", {}},
                   {"em_im", VT::Double, "0", "Im E_m", {}},
               }});
  s.push_back({"cms",
               "PT-deformed Calogero-Moser-Sutherland checks and trajectories",
               {
                   {"family", VT::String, "A", "root system family", {"A", "B", "C", "D", "G2"}},
                   {"rank", VT::Int, "2", "rank", {}},
                   {"potential", VT::String, "rational", "potential", {"rational", "trigonometric", "hyperbolic"}},
                   {"check", VT::String, "mu-identity", "experiment",
                    {"mu-identity", "shifted", "lax", "bmk", "trajectory"}},
                   {"samples", VT::Int, "100", "random configurations", {}},
                   {"margin", VT::Double, "0.3", "minimum distance of random a.q from a pole", {}},
                   {"g_short", VT::Double, "0.7", "coupling on short roots", {}},
                   {"g_long", VT::Double, "0", "coupling on long roots", {}},
                   {"gtilde_short", VT::Double, "0.4", "deformation on short roots", {}},
                   {"gtilde_long", VT::Double, "0", "deformation on long roots", {}},
                   {"q", VT::String, "", "trajectory start q (comma list; empty: random)", {}},
                   {"p", VT::String, "", "trajectory start p (comma list; empty: random)", {}},
                   {"dt", VT::Double, "1e-3", "RK4 step", {}},
                   {"steps", VT::Int, "10000", "RK4 steps", {}},
                   {"stride", VT::Int, "100", "record every stride steps", {}},
               }});
  s.push_back({"kdv",
               "PT-deformed KdV evolution, symmetry checks and traveling waves",
               {
                   {"mode", VT::String, "evolve", "experiment", {"evolve", "galilean", "pt", "wave"}},
                   {"model", VT::String, "fring", "deformation", {"fring", "bender"}},
                   {"epsilon", VT::Double, "1", "deformation parameter", {}},
                   {"n", VT::Int, "512", "grid points", {}},
                   {"L", VT::Double, "80", "period length", {}},
                   {"dt", VT::Double, "1e-4", "time step (0: half the stability bound, at most t_end/100)", {}},
                   {"t_end", VT::Double, "1", "final time", {}},
                   {"profile", VT::String, "gaussian", "initial data: A exp(-x^2/w^2), A sech^2(x/w), A cos(2 pi x/L)",
                    {"gaussian", "sech2", "cosine"}},
                   {"amplitude", VT::Double, "0.3", "initial amplitude", {}},
                   {"width", VT::Double, "4", "width w of the gaussian and sech2 profiles", {}},
                   {"stride", VT::Int, "1000", "charge record stride (steps)", {}},
                   {"snapshots", VT::Bool, "false", "write the field at every record", {}},
                   {"v", VT::Double, "0.1", "boost velocity (galilean)", {}},
                   {"c", VT::Double, "1", "wave speed (wave)", {}},
                   {"boundary", VT::String, "decaying", "wave boundary condition", {"decaying", "periodic"}},
                   {"period", VT::Double, "0", "periodic wave period (0: 20/sqrt(c))", {}},
                   {"amplitude_guess", VT::Double, "0", "wave crest guess (0: default)", {}},
               }});
  return s;
}

const std::vector<Schema>& schemas() {
  static const std::vector<Schema> s = build_schemas();
  return s;
}

bool parse_int(const std::string& v, long long& out) {
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  return r.ec == std::errc() && r.ptr == v.data() + v.size();
}

bool parse_double(const std::string& v, double& out) {
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  return r.ec == std::errc() && r.ptr == v.data() + v.size() && std::isfinite(out);
}

std::string type_name(VT t) {
  switch (t) {
    case VT::Int: return "an integer";
    case VT::Double: return "a number";
    case VT::Bool: return "true or false";
    case VT::String: return "a string";
  }
  return "";
}

// Canonical text of a value, so equal configs give equal manifests.
std::string canonical(const KeySpec& k, const std::string& v, const std::string& where) {
  const auto bad = [&]() {
    return ConfigError(where + ": key '" + k.key + "' expects " + type_name(k.type) + ", got '" + v + "'");
  };
  std::string out = v;
  switch (k.type) {
    case VT::Int: {
      long long x;
      if (!parse_int(v, x)) throw bad();
      out = std::to_string(x);
      break;
    }
    case VT::Double: {
      if (v == "auto" && k.default_value == "auto") break;
      double x;
      if (!parse_double(v, x)) throw bad();
      out = io::format_double(x);
      break;
    }
    case VT::Bool:
      if (v == "true" || v == "1" || v == "yes") out = "true";
      else if (v == "false" || v == "0" || v == "no") out = "false";
      else throw bad();
      break;
    case VT::String:
      break;
  }
  if (!k.choices.empty() && std::find(k.choices.begin(), k.choices.end(), out) == k.choices.end()) {
    std::string list;
    for (const auto& c : k.choices) list += (list.empty() ? "" : ", ") + c;
    throw ConfigError(where + ": key '" + k.key + "' must be one of {" + list + "}, got '" + v + "'");
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

const KeySpec* Schema::find(const std::string& key) const {
  for (const auto& k : keys) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

std::vector<std::string> subcommands() {
  std::vector<std::string> out;
  for (const auto& s : schemas()) out.push_back(s.subcommand);
  return out;
}

const Schema& schema(const std::string& subcommand) {
  for (const auto& s : schemas()) {
    if (s.subcommand == subcommand) return s;
  }
  throw ConfigError("unknown subcommand '" + subcommand + "' (expected spectra, susy, cms or kdv)");
}

std::vector<std::string> expand_grid(const std::string& grid, const std::string& where) {
  const std::string t = trim(grid);
  std::vector<std::string> out;
  if (t.rfind("linspace(", 0) == 0) {
    if (t.back() != ')') throw ConfigError(where + ": unterminated linspace(...)");
    std::vector<std::string> args;
    std::string cur;
    for (char ch : t.substr(9, t.size() - 10)) {
      if (ch == ',') {
        args.push_back(trim(cur));
        cur.clear();
      } else {
        cur += ch;
      }
    }
    args.push_back(trim(cur));
    double a, b;
    long long n;
    if (args.size() != 3 || !parse_double(args[0], a) || !parse_double(args[1], b) || !parse_int(args[2], n) || n < 1) {
      throw ConfigError(where + ": linspace expects (start, stop, count >= 1)");
    }
    for (long long i = 0; i < n; ++i) {
      const double v = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
      out.push_back(io::format_double(v));
    }
    return out;
  }
  std::string cur;
  for (char ch : t + ",") {
    if (ch == ',') {
      const std::string v = trim(cur);
      if (v.empty()) throw ConfigError(where + ": empty value in grid '" + grid + "'");
      out.push_back(v);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

ExperimentConfig resolve(const std::string& subcommand, const std::map<std::string, io::KvEntry>& file,
                         const std::vector<std::pair<std::string, std::string>>& overrides) {
  const Schema& sc = schema(subcommand);
  std::map<std::string, io::KvEntry> all = file;
  for (const auto& [k, v] : overrides) all[k] = io::KvEntry{v, "command line"};

  ExperimentConfig cfg;
  cfg.subcommand = subcommand;
  for (const auto& k : sc.keys) cfg.params[k.key] = canonical(k, k.default_value, "default");

  for (const auto& [key, entry] : all) {
    const std::string& where = entry.origin;
    if (key == "subcommand") {
      if (entry.value != subcommand) {
        throw ConfigError(where + ": config is for subcommand '" + entry.value + "', not '" + subcommand + "'");
      }
    } else if (key == "seed") {
      long long s;
      if (!parse_int(entry.value, s) || s < 0) throw ConfigError(where + ": seed must be a non-negative integer");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "output_dir") {
      if (entry.value.empty()) throw ConfigError(where + ": output_dir is empty");
      cfg.output_dir = entry.value;
    } else if (key == "workers") {
      long long w;
      if (!parse_int(entry.value, w) || w < 1 || w > 64) throw ConfigError(where + ": workers must be in [1, 64]");
      cfg.workers = static_cast<int>(w);
    } else if (key.rfind("sweep.", 0) == 0) {
      const std::string name = key.substr(6);
      const KeySpec* k = sc.find(name);
      if (!k) throw ConfigError(where + ": unknown sweep key '" + name + "' for subcommand " + subcommand);
      std::vector<std::string> values;
      for (const auto& v : expand_grid(entry.value, where)) values.push_back(canonical(*k, v, where));
      cfg.sweep[name] = values;
    } else {
      const KeySpec* k = sc.find(key);
      if (!k) throw ConfigError(where + ": unknown key '" + key + "' for subcommand " + subcommand);
      cfg.params[key] = canonical(*k, entry.value, where);
    }
  }
  if (static_cast<int>(cfg.sweep.size()) > kMaxSweepKeys) {
    throw ConfigError("at most " + std::to_string(kMaxSweepKeys) + " sweep keys are allowed, got " +
                      std::to_string(cfg.sweep.size()));
  }
  for (const auto& [k, v] : cfg.sweep) cfg.params.erase(k);
  return cfg;
}

}  // namespace ptlab::cli

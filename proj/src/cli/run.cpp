#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <random>

#include "ptlab/cli.hpp"
#include "ptlab/cms.hpp"
#include "ptlab/error.hpp"
#include "ptlab/fock.hpp"
#include "ptlab/kdv.hpp"
#include "ptlab/metric.hpp"
#include "ptlab/rootsys.hpp"
#include "ptlab/spectra.hpp"
#include "ptlab/susy.hpp"
#include "ptlab/traveling_wave.hpp"

namespace ptlab::cli {

namespace {

using json = nlohmann::json;
using cd = std::complex<double>;

// Typed access to resolved parameters; values were validated by resolve().
struct Params {
  const std::map<std::string, std::string>& m;

  const std::string& str(const std::string& k) const {
    const auto it = m.find(k);
    if (it == m.end()) throw ConfigError("missing key '" + k + "'");
    return it->second;
  }
  double dbl(const std::string& k) const {
    const std::string& v = str(k);
    double x = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc()) throw ConfigError("key '" + k + "' is not a number: '" + v + "'");
    return x;
  }
  int integer(const std::string& k) const {
    const std::string& v = str(k);
    long long x = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || x < -(1LL << 31) || x >= (1LL << 31)) {
      throw ConfigError("key '" + k + "' is not an integer: '" + v + "'");
    }
    return static_cast<int>(x);
  }
  bool flag(const std::string& k) const { return str(k) == "true"; }
};

json params_json(const std::map<std::string, std::string>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

struct Stats {
  double max = 0.0, min = 0.0, median = 0.0;
};

Stats stats(std::vector<double> v) {
  Stats s;
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  s.min = v.front();
  s.max = v.back();
  s.median = v[v.size() / 2];
  return s;
}

// ---------------------------------------------------------------- spectra

CellOutput run_spectra(const Params& P, std::uint64_t seed, const std::string& prefix) {
  const std::string model = P.str("model");
  const double g = P.str("g") == "auto" ? (model == "swanson" ? 0.5 : model == "reggeon" ? 0.3 : 1.0) : P.dbl("g");
  const int levels = P.integer("levels");
  require(levels >= 1 && levels <= 200, "levels must be in [1, 200]");
  const double tol = P.dbl("tol");
  require(tol > 0.0, "tol must be positive");

  spectra::SpectrumReport rep;
  std::function<fock::TruncatedFockOperator(int)> build;
  if (model == "monomial") {
    spectra::MonomialModel mm;
    mm.N = P.integer("N");
    mm.g = g;
    mm.half_width = P.dbl("half_width");
    mm.intervals = P.integer("intervals");
    rep = spectra::monomial_spectrum(mm, levels);
  } else {
    const double delta = P.dbl("delta"), gt = P.dbl("gtilde");
    const int dim = P.integer("dim"), step = P.integer("dim_step");
    require(dim >= 8 && dim <= 2000, "dim must be in [8, 2000]");
    require(step >= 1, "dim_step must be positive");
    require(levels <= dim, "levels must not exceed dim");
    json params;
    if (model == "swanson") {
      build = [=](int d) { return fock::swanson_model(delta, g, gt, d); };
      params = {{"delta", delta}, {"g", g}, {"gtilde", gt}};
    } else {
      build = [=](int d) { return fock::reggeon_single_site(delta, g, d); };
      params = {{"delta", delta}, {"g", g}};
    }
    rep = fock::fock_spectrum(model, params, build, dim, levels, step);
  }
  rep.classification = spectra::classify_spectrum(rep.eigenvalues, tol);

  CellOutput out;
  json j = spectra::to_json(rep);
  j["classification_tolerance"] = tol;
  out.artifacts.push_back({prefix + "spectrum.json", io::dump_json(j)});
  int flagged = 0;
  for (bool f : rep.flagged) flagged += f ? 1 : 0;
  const std::vector<cd> lowest(rep.eigenvalues.begin(),
                               rep.eigenvalues.begin() + std::min<std::size_t>(5, rep.eigenvalues.size()));
  out.summary = {{"classification", spectra::classification_name(rep.classification.classification)},
                 {"all_converged", rep.all_converged()},
                 {"flagged", flagged},
                 {"lowest", io::complex_list(lowest)}};

  if (P.flag("metric")) {
    require(model != "monomial", "metric search needs a Fock model (swanson or reggeon)");
    metric::Options o;
    o.restarts = P.integer("restarts");
    o.seed = seed;
    require(o.restarts >= 0 && o.restarts <= 200, "restarts must be in [0, 200]");
    const auto h = build(P.integer("dim")).matrix;
    const auto r = metric::metric_search(h, P.integer("ansatz"), o);
    json m = {{"residual", r.residual},     {"converged", r.converged},
              {"positive", r.positive},     {"min_eta_eigenvalue", r.min_eta_eigenvalue},
              {"theta", r.theta},           {"ansatz", r.ansatz},
              {"start_residuals", r.start_residuals}};
    out.artifacts.push_back({prefix + "metric.json", io::dump_json(m)});
    out.summary["metric_residual"] = r.residual;
    out.summary["metric_positive"] = r.positive;
  }
  return out;
}

// ---------------------------------------------------------------- susy

CellOutput run_susy(const Params& P, const std::string& prefix) {
  const std::string profile = P.str("profile");
  const double L = P.dbl("window");
  const int n = P.integer("n");
  const int levels = P.integer("levels");
  require(levels >= 1 && levels <= 100, "levels must be in [1, 100]");
  grid::GridWavefunction psi;
  if (profile == "file") {
    require(!P.str("file").empty(), "profile = file needs key 'file'");
    psi = io::read_wavefunction_csv(P.str("file"));
  } else {
    require(L > 0.0, "window must be positive");
    require(n >= 16 && n <= 8000, "n must be in [16, 8000]");
    const double b = P.dbl("b");
    std::function<cd(double)> f;
    if (profile == "gaussian") {
      f = [](double x) { return cd(std::exp(-0.5 * x * x)); };
    } else if (profile == "pt") {
      // W = x + i b sech x
      f = [b](double x) { return std::exp(cd(-0.5 * x * x, -2.0 * b * std::atan(std::tanh(0.5 * x)))); };
    } else {
      // W = x + 0.3 + i (0.4 sech x + 0.2 sech^2(x - 0.5))
      f = [](double x) {
        const double phase = 0.8 * std::atan(std::tanh(0.5 * x)) + 0.2 * std::tanh(x - 0.5);
        return std::exp(cd(-0.5 * x * x - 0.3 * x, -phase));
      };
    }
    psi = grid::sample(-L, L, static_cast<std::size_t>(n), f);
  }
  const cd Em(P.dbl("em_re"), P.dbl("em_im"));
  const auto pair = susy::superpotential_from_groundstate(psi, Em);
  const auto h = susy::build_partner_hamiltonians(pair);
  const auto em = h.minus.eigenvalues(levels + 1);
  const auto ep = h.plus.eigenvalues(levels);
  std::vector<cd> vm, vp;
  for (const auto& l : em) vm.push_back(l.value);
  for (const auto& l : ep) vp.push_back(l.value);
  double iso = 0.0;
  for (std::size_t k = 0; k < vp.size() && k + 1 < vm.size(); ++k) iso = std::max(iso, std::abs(vp[k] - vm[k + 1]));
  const auto cls = susy::classify_case(pair);
  const bool pt = grid::is_pt_symmetric(pair.V_minus, 1e-10);

  json j = {{"minus", io::complex_list(vm)},
            {"plus", io::complex_list(vp)},
            {"E_m", {{"re", Em.real()}, {"im", Em.imag()}}},
            {"isospectral_max_diff", iso},
            {"intertwining", susy::verify_intertwining(pair, h)},
            {"intertwining_tilde", susy::verify_intertwining(pair, h, true)},
            {"factorization", susy::verify_factorization(pair, h)},
            {"case", susy::case_name(cls.result)},
            {"pt_symmetric", pt},
            {"classification_minus", spectra::classification_name(spectra::classify_spectrum(vm, 1e-6).classification)},
            {"classification_plus", spectra::classification_name(spectra::classify_spectrum(vp, 1e-6).classification)}};
  if (cls.warning) j["warning"] = *cls.warning;

  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < pair.size(); ++k) {
    rows.push_back({pair.x(k), pair.W[k].real(), pair.W[k].imag(), pair.V_minus[k].real(), pair.V_minus[k].imag(),
                    pair.V_plus[k].real(), pair.V_plus[k].imag()});
  }
  CellOutput out;
  out.artifacts.push_back({prefix + "groundstate.csv", io::wavefunction_csv(psi)});
  out.artifacts.push_back(
      {prefix + "partners.csv", io::csv({"x", "re_W", "im_W", "re_V_minus", "im_V_minus", "re_V_plus", "im_V_plus"}, rows)});
  out.artifacts.push_back({prefix + "spectra.json", io::dump_json(j)});
  out.summary = {{"case", j["case"]}, {"isospectral_max_diff", iso}, {"intertwining", j["intertwining"]}};
  return out;
}

// ---------------------------------------------------------------- cms

cms::CVec parse_vector(const std::string& s, int dim, const std::string& key) {
  cms::CVec v(dim);
  int i = 0;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    std::string f = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    f.erase(0, f.find_first_not_of(' '));
    f.erase(f.find_last_not_of(' ') + 1);
    double x = 0.0;
    const auto r = std::from_chars(f.data(), f.data() + f.size(), x);
    if (r.ec != std::errc() || r.ptr != f.data() + f.size()) throw ConfigError("key '" + key + "': bad number '" + f + "'");
    if (i >= dim) throw ConfigError("key '" + key + "' has more than " + std::to_string(dim) + " entries");
    v(i++) = x;
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (i != dim) throw ConfigError("key '" + key + "' needs " + std::to_string(dim) + " entries");
  return v;
}

CellOutput run_cms(const Params& P, std::uint64_t seed, const std::string& prefix) {
  const auto family = rootsys::parse_family(P.str("family"));
  auto rs = std::make_shared<const rootsys::RootSystem>(rootsys::build_root_system(family, P.integer("rank")));
  const auto kind = cms::parse_potential(P.str("potential"));
  const cms::OrbitCouplings c{P.dbl("g_short"), P.dbl("g_long"), P.dbl("gtilde_short"), P.dbl("gtilde_long")};
  const std::string check = P.str("check");
  const double margin = P.dbl("margin");
  require(margin > cms::kSingularityGuard, "margin must exceed the singularity guard");
  std::mt19937_64 rng(seed);
  CellOutput out;

  if (check == "trajectory") {
    cms::CMSSystem sys = cms::random_configuration(rs, kind, c, rng, margin);
    if (!P.str("q").empty() || !P.str("p").empty()) {
      require(!P.str("q").empty() && !P.str("p").empty(), "give both q and p, or neither");
      sys = cms::CMSSystem(rs, kind, c, parse_vector(P.str("q"), rs->dim, "q"), parse_vector(P.str("p"), rs->dim, "p"));
    }
    const double dt = P.dbl("dt");
    const int steps = P.integer("steps"), stride = P.integer("stride");
    require(dt > 0.0 && steps >= 1 && stride >= 1, "dt, steps and stride must be positive");
    const auto tr = cms::integrate_trajectory(sys, dt, steps, stride);
    std::unique_ptr<rootsys::CartanWeylBasis> basis;
    if (family != rootsys::Family::G2) basis = std::make_unique<rootsys::CartanWeylBasis>(rootsys::build_cartan_weyl(*rs));
    std::vector<std::string> header{"t"};
    for (int i = 1; i <= rs->dim; ++i) {
      header.push_back("re_q" + std::to_string(i));
      header.push_back("im_q" + std::to_string(i));
    }
    for (int i = 1; i <= rs->dim; ++i) {
      header.push_back("re_p" + std::to_string(i));
      header.push_back("im_p" + std::to_string(i));
    }
    header.insert(header.end(), {"re_H", "im_H"});
    if (basis) header.insert(header.end(), {"re_I2", "im_I2", "re_I3", "im_I3"});
    std::vector<std::vector<double>> rows;
    double dH = 0.0, dI2 = 0.0, dI3 = 0.0;
    std::vector<cd> c0;
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
      std::vector<double> row{tr.t[k]};
      for (int i = 0; i < rs->dim; ++i) row.insert(row.end(), {tr.q[k](i).real(), tr.q[k](i).imag()});
      for (int i = 0; i < rs->dim; ++i) row.insert(row.end(), {tr.p[k](i).real(), tr.p[k](i).imag()});
      row.insert(row.end(), {tr.H[k].real(), tr.H[k].imag()});
      dH = std::max(dH, std::abs(tr.H[k] - tr.H.front()) / std::max(std::abs(tr.H.front()), 1e-300));
      if (basis) {
        const auto ch = cms::conserved_charges(sys.at(tr.q[k], tr.p[k]), *basis, 3);
        if (k == 0) c0 = ch;
        row.insert(row.end(), {ch[1].real(), ch[1].imag(), ch[2].real(), ch[2].imag()});
        dI2 = std::max(dI2, std::abs(ch[1] - c0[1]) / std::max(std::abs(c0[1]), 1e-300));
        dI3 = std::max(dI3, std::abs(ch[2] - c0[2]) / std::max(std::abs(c0[2]), 1e-300));
      }
      rows.push_back(std::move(row));
    }
    out.artifacts.push_back({prefix + "trajectory.csv", io::csv(header, rows)});
    out.summary = {{"aborted", tr.aborted}, {"H_drift", dH}, {"records", tr.t.size()}};
    if (tr.aborted) out.summary["error"] = tr.error;
    if (basis) {
      out.summary["I2_drift"] = dI2;
      out.summary["I3_drift"] = dI3;
    }
    return out;
  }

  const int samples = P.integer("samples");
  require(samples >= 1 && samples <= 1000000, "samples must be in [1, 1e6]");
  std::unique_ptr<rootsys::CartanWeylBasis> basis;
  if (check == "lax") basis = std::make_unique<rootsys::CartanWeylBasis>(rootsys::build_cartan_weyl(*rs));
  if (check == "bmk" && family != rootsys::Family::A) {
    throw CapabilityError("the Basu-Mallick-Kundu coordinate form exists for family A only");
  }
  require(check != "bmk" || kind == cms::PotentialKind::Rational, "check = bmk needs potential = rational");
  std::vector<double> res;
  std::vector<std::vector<double>> rows;
  for (int s = 0; s < samples; ++s) {
    const auto sys = cms::random_configuration(rs, kind, c, rng, margin);
    double r = 0.0;
    if (check == "mu-identity") r = cms::verify_mu_identity(sys);
    else if (check == "shifted") r = cms::shifted_equivalence(sys);
    else if (check == "lax") r = cms::lax_residual(sys, *basis);
    else r = std::abs(cms::basu_mallick_kundu_form(rs->rank, 0.0, c.g_short, c.gtilde_short, sys.q(), sys.p()) -
                      cms::hamiltonian_hhh(sys));
    res.push_back(r);
    rows.push_back({static_cast<double>(s), r});
  }
  int above = 0;
  for (double r : res) above += r > 1e-3 ? 1 : 0;
  const Stats st = stats(res);
  out.artifacts.push_back({prefix + "residuals.csv", io::csv({"sample", "residual"}, rows)});
  out.summary = {{"check", check},
                 {"max_residual", st.max},
                 {"median_residual", st.median},
                 {"min_residual", st.min},
                 {"fraction_above_1e-3", static_cast<double>(above) / samples}};
  return out;
}

// ---------------------------------------------------------------- kdv

kdv::KdVField initial_field(const Params& P) {
  const double L = P.dbl("L"), A = P.dbl("amplitude"), w = P.dbl("width");
  const int n = P.integer("n");
  require(n >= 64 && n % 2 == 0 && n <= 65536, "n must be even and in [64, 65536]");
  require(L > 0.0, "L must be positive");
  const std::string profile = P.str("profile");
  require(w > 0.0 || profile == "cosine", "width must be positive");
  std::function<cd(double)> f;
  if (profile == "gaussian") f = [=](double x) { return cd(A * std::exp(-x * x / (w * w))); };
  else if (profile == "sech2") f = [=](double x) { return cd(A / std::pow(std::cosh(x / w), 2)); };
  else f = [=](double x) { return cd(A * std::cos(2.0 * std::numbers::pi * x / L)); };
  return kdv::make_field(L, n, P.dbl("epsilon"), f);
}

std::string field_csv(const kdv::KdVField& f) {
  std::vector<std::vector<double>> rows;
  for (int j = 0; j < f.n(); ++j) rows.push_back({f.x(j), f.u[j].real(), f.u[j].imag()});
  return io::csv({"x", "re_u", "im_u"}, rows);
}

CellOutput run_kdv(const Params& P, const std::string& prefix) {
  const std::string mode = P.str("mode");
  const auto model = kdv::parse_model(P.str("model"));
  CellOutput out;

  if (mode == "wave") {
    kdv::WaveRequest r;
    r.epsilon = P.dbl("epsilon");
    r.c = P.dbl("c");
    r.amplitude_guess = P.dbl("amplitude_guess");
    r.boundary = kdv::parse_boundary(P.str("boundary"));
    r.period = P.dbl("period");
    r.n = P.integer("n");
    const auto w = kdv::traveling_wave_shoot(r);
    std::string profile_file;
    if (w.shooting_converged && !w.profile.u.empty()) {
      profile_file = prefix + "profile.csv";
      out.artifacts.push_back({profile_file, field_csv(w.profile)});
    }
    json j = {{"epsilon", r.epsilon},
              {"c", r.c},
              {"boundary", kdv::boundary_name(r.boundary)},
              {"found", w.found},
              {"shooting_converged", w.shooting_converged},
              {"reason", w.reason},
              {"iterations", w.iterations},
              {"amplitude", w.amplitude},
              {"integration_constant", w.integration_constant},
              {"residual", w.shooting_residual},
              {"shape_drift", w.shape_drift},
              {"pt_asymmetry", w.pt_asymmetry},
              {"pt_broken", w.pt_broken},
              {"profile_file", profile_file}};
    out.artifacts.push_back({prefix + "wave.json", io::dump_json(j)});
    out.summary = {{"found", w.found},
                   {"profile_file", profile_file},
                   {"residual", w.shooting_residual},
                   {"shape_drift", w.shape_drift}};
    if (!w.found) out.summary["reason"] = w.reason;
    return out;
  }

  const kdv::KdVField f = initial_field(P);
  double dt = P.dbl("dt");
  const double t_end = P.dbl("t_end");
  require(t_end > 0.0, "t_end must be positive");
  if (dt == 0.0) {
    kdv::Spectral sp(f.n(), f.L);
    dt = std::min(0.5 * kdv::stable_dt(f, model, sp), t_end / 100.0);
  }
  require(dt > 0.0, "dt must be positive");

  if (mode == "evolve") {
    kdv::EvolveOptions o;
    o.stride = P.integer("stride");
    require(o.stride >= 1, "stride must be positive");
    o.keep_snapshots = P.flag("snapshots");
    const auto tr = kdv::evolve(f, model, dt, t_end, o);
    std::vector<std::vector<double>> rows;
    for (const auto& c : tr.monitor.series) {
      rows.push_back({c.t, c.M.real(), c.P.real(), c.E.real(), c.E.imag(), c.M.imag(), c.P.imag()});
    }
    out.artifacts.push_back({prefix + "charges.csv", io::csv({"t", "M", "P", "re_E", "im_E", "im_M", "im_P"}, rows)});
    out.artifacts.push_back({prefix + "final.csv", field_csv(tr.final)});
    for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "snapshot-%05zu.csv", k);
      out.artifacts.push_back({prefix + name, field_csv(tr.snapshots[k])});
    }
    out.summary = {{"drift_M", tr.monitor.drift_M()},
                   {"drift_P", tr.monitor.drift_P()},
                   {"drift_E", tr.monitor.drift_E()},
                   {"dt", dt},
                   {"integrating_factor", tr.integrating_factor},
                   {"branch_valid", tr.final.branch_valid}};
    return out;
  }
  if (mode == "galilean") {
    const double v = P.dbl("v");
    const double r = kdv::galilean_test(f, model, v, dt, t_end);
    out.summary = {{"residual", r}, {"v", v}, {"dt", dt}, {"t_end", t_end}};
    out.artifacts.push_back({prefix + "galilean.json", io::dump_json(out.summary)});
    return out;
  }
  // pt
  const double r = kdv::pt_flow_residual(f, model, dt, t_end);
  const auto e = kdv::energy_reality_check(f);
  out.summary = {{"pt_flow_residual", r},
                 {"initial_pt_asymmetry", kdv::pt_asymmetry(f)},
                 {"E", {{"re", e.E.real()}, {"im", e.E.imag()}}},
                 {"energy_real", e.is_real},
                 {"dt", dt}};
  out.artifacts.push_back({prefix + "pt.json", io::dump_json(out.summary)});
  return out;
}

}  // namespace

CellOutput run_cell(const std::string& subcommand, const std::map<std::string, std::string>& params,
                    std::uint64_t seed, const std::string& prefix) {
  const Params P{params};
  if (subcommand == "spectra") return run_spectra(P, seed, prefix);
  if (subcommand == "susy") return run_susy(P, prefix);
  if (subcommand == "cms") return run_cms(P, seed, prefix);
  if (subcommand == "kdv") return run_kdv(P, prefix);
  throw ConfigError("unknown subcommand '" + subcommand + "'");
}

}  // namespace ptlab::cli

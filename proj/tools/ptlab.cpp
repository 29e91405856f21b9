// ptlab: config-driven experiments for the spectra, susy, cms and kdv engines.
//
//   ptlab spectra --model swanson --g 0.5 --dim 120
//   ptlab kdv --config wave.ini --set c=2 --sweep epsilon=1,3 --workers 2
//   ptlab run --config experiment.ini      (subcommand taken from the file)

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptlab/cli.hpp"
#include "ptlab/error.hpp"
#include "ptlab/io.hpp"

namespace {

using ptlab::cli::ExperimentConfig;

struct Invocation {
  std::string config_file;
  std::vector<std::string> sets, sweeps;
  std::map<std::string, std::string> flags;  // schema key -> value given as --key
  std::string seed, output_dir, workers;
};

std::pair<std::string, std::string> split_assignment(const std::string& s, const std::string& option) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ptlab::ConfigError("command line: " + option + " expects key=value, got '" + s + "'");
  }
  return {s.substr(0, eq), s.substr(eq + 1)};
}

void add_common(CLI::App* app, Invocation& inv) {
  app->add_option("--config", inv.config_file, "key = value config file");
  app->add_option("--set", inv.sets, "override a key (key=value), repeatable");
  app->add_option("--seed", inv.seed, "seed for random configurations and metric restarts");
  app->add_option("--output-dir", inv.output_dir, "directory for artifacts and manifest.json");
  app->add_option("--workers", inv.workers, "sweep worker threads (1-64)");
}

ExperimentConfig build_config(const std::string& sub, const Invocation& inv) {
  std::map<std::string, ptlab::io::KvEntry> file;
  if (!inv.config_file.empty()) file = ptlab::io::load_kv(inv.config_file);
  std::vector<std::pair<std::string, std::string>> over;
  for (const auto& s : inv.sets) over.push_back(split_assignment(s, "--set"));
  for (const auto& s : inv.sweeps) {
    auto [k, v] = split_assignment(s, "--sweep");
    over.emplace_back("sweep." + k, v);
  }
  for (const auto& [k, v] : inv.flags) over.emplace_back(k, v);
  if (!inv.seed.empty()) over.emplace_back("seed", inv.seed);
  if (!inv.output_dir.empty()) over.emplace_back("output_dir", inv.output_dir);
  if (!inv.workers.empty()) over.emplace_back("workers", inv.workers);
  return ptlab::cli::resolve(sub, file, over);
}

int execute(const ExperimentConfig& cfg) {
  const auto r = ptlab::cli::run(cfg);
  if (r.exit_code != 0) std::cerr << "ptlab: " << r.message << "\n";
  const auto& m = r.manifest;
  std::cout << "status: " << m.value("status", "") << "\n";
  if (m.contains("summary")) std::cout << ptlab::io::dump_json(m["summary"]);
  if (m.contains("cells")) std::cout << "cells: " << m["cells"].size() << ", failed: " << m["failed_cells"] << "\n";
  std::cout << "manifest: " << (cfg.output_dir / "manifest.json").string() << "\n";
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ptlab: PT-symmetric model experiments"};
  app.require_subcommand(1);

  std::map<std::string, Invocation> invocations;
  std::map<std::string, std::map<std::string, std::string>> raw_flags;
  for (const auto& sub : ptlab::cli::subcommands()) {
    const auto& sc = ptlab::cli::schema(sub);
    CLI::App* s = app.add_subcommand(sub, sc.summary);
    Invocation& inv = invocations[sub];
    add_common(s, inv);
    s->add_option("--sweep", inv.sweeps, "grid a key: key=a,b,c or key=linspace(a,b,n); at most 3 keys");
    for (const auto& k : sc.keys) {
      std::string help = k.help + " [default: " + (k.default_value.empty() ? "\"\"" : k.default_value) + "]";
      s->add_option("--" + k.key, raw_flags[sub][k.key], help);
    }
  }
  Invocation run_inv;
  CLI::App* run_cmd = app.add_subcommand("run", "run the experiment described by a config file");
  add_common(run_cmd, run_inv);
  run_cmd->get_option("--config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "ptlab: command line: " << e.what() << "\n";
    return 2;
  }

  try {
    if (run_cmd->parsed()) {
      const auto file = ptlab::io::load_kv(run_inv.config_file);
      const auto it = file.find("subcommand");
      if (it == file.end()) throw ptlab::ConfigError(run_inv.config_file + ": missing key 'subcommand'");
      return execute(build_config(it->second.value, run_inv));
    }
    for (auto& [sub, inv] : invocations) {
      if (!app.got_subcommand(sub)) continue;
      for (const auto& [k, v] : raw_flags[sub]) {
        if (app.get_subcommand(sub)->count("--" + k) > 0) inv.flags[k] = v;
      }
      return execute(build_config(sub, inv));
    }
  } catch (const ptlab::Error& e) {
    std::cerr << "ptlab: " << e.kind() << ": " << e.what() << "\n";
    return ptlab::cli::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "ptlab: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

#include <atomic>
#include <cstdio>
#include <thread>

#include "ptlab/cli.hpp"
#include "ptlab/error.hpp"

namespace ptlab::cli {

namespace {

using json = nlohmann::json;

struct CellResult {
  std::map<std::string, std::string> grid_values;
  CellOutput output;
  bool ok = false;
  int exit_code = 0;
  std::string error_kind, error;
};

void run_one(const ExperimentConfig& cfg, const std::string& prefix, CellResult& r) {
  std::map<std::string, std::string> params = cfg.params;
  for (const auto& [k, v] : r.grid_values) params[k] = v;
  try {
    r.output = run_cell(cfg.subcommand, params, cfg.seed, prefix);
    r.ok = true;
  } catch (const Error& e) {
    r.exit_code = exit_code_for(e);
    r.error_kind = e.kind();
    r.error = e.what();
  } catch (const std::exception& e) {
    r.exit_code = 3;
    r.error_kind = "InternalError";
    r.error = e.what();
  }
}

json artifact_entry(const Artifact& a) {
  return {{"file", a.file}, {"crc32", io::crc32_hex(a.content)}, {"bytes", a.content.size()}};
}

// Worker count is left out so manifests do not depend on parallelism.
json config_json(const ExperimentConfig& cfg) {
  json params = json::object();
  for (const auto& [k, v] : cfg.params) params[k] = v;
  json sweep = json::object();
  for (const auto& [k, v] : cfg.sweep) sweep[k] = v;
  return {{"subcommand", cfg.subcommand},
          {"seed", cfg.seed},
          {"params", params},
          {"sweep", sweep}};
}

// Cartesian product with the last key varying fastest.
std::vector<std::map<std::string, std::string>> cells_of(const ExperimentConfig& cfg) {
  std::vector<std::map<std::string, std::string>> out{{}};
  for (const auto& [k, values] : cfg.sweep) {
    std::vector<std::map<std::string, std::string>> next;
    for (const auto& partial : out) {
      for (const auto& v : values) {
        auto m = partial;
        m[k] = v;
        next.push_back(std::move(m));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  return 3;
}

RunResult run(const ExperimentConfig& cfg) {
  RunResult result;
  json manifest = {{"config", config_json(cfg)}};
  json artifacts = json::array();
  std::vector<Artifact> to_write;

  if (!cfg.is_sweep()) {
    CellResult r;
    run_one(cfg, "", r);
    if (r.ok) {
      for (const auto& a : r.output.artifacts) artifacts.push_back(artifact_entry(a));
      to_write = std::move(r.output.artifacts);
      manifest["status"] = "ok";
      manifest["summary"] = r.output.summary;
    } else {
      manifest["status"] = "error";
      manifest["error"] = {{"kind", r.error_kind}, {"message", r.error}};
      result.exit_code = r.exit_code;
      result.message = r.error_kind + ": " + r.error;
    }
  } else {
    std::vector<CellResult> cells;
    for (auto& g : cells_of(cfg)) cells.push_back(CellResult{std::move(g), {}, false, 0, {}, {}});
    std::vector<std::string> prefixes(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "cell-%04zu/", i);
      prefixes[i] = buf;
    }
    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
      for (std::size_t i = next++; i < cells.size(); i = next++) run_one(cfg, prefixes[i], cells[i]);
    };
    const int nthreads = std::max(1, std::min<int>(cfg.workers, static_cast<int>(cells.size())));
    if (nthreads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }

    json table = json::array(), index = json::array();
    int failed = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      auto& c = cells[i];
      json grid = json::object();
      for (const auto& [k, v] : c.grid_values) grid[k] = v;
      json row = {{"cell", i}, {"grid", grid}, {"status", c.ok ? "ok" : "error"}};
      json files = json::array();
      if (c.ok) {
        row["summary"] = c.output.summary;
        for (auto& a : c.output.artifacts) {
          files.push_back(a.file);
          artifacts.push_back(artifact_entry(a));
          to_write.push_back(std::move(a));
        }
      } else {
        ++failed;
        row["error"] = {{"kind", c.error_kind}, {"message", c.error}};
      }
      table.push_back(row);
      row["files"] = files;
      row.erase("summary");
      index.push_back(std::move(row));
    }
    Artifact summary{"sweep.json", io::dump_json(table)};
    artifacts.push_back(artifact_entry(summary));
    to_write.push_back(std::move(summary));
    manifest["cells"] = index;
    manifest["status"] = failed == 0 ? "ok" : "partial";
    manifest["failed_cells"] = failed;
    if (failed > 0) {
      result.exit_code = 4;
      result.message = std::to_string(failed) + " of " + std::to_string(cells.size()) + " sweep cells failed";
    }
  }
  manifest["artifacts"] = artifacts;

  for (const auto& a : to_write) io::write_atomic(cfg.output_dir / a.file, a.content);
  io::write_atomic(cfg.output_dir / "manifest.json", io::dump_json(manifest));
  result.manifest = std::move(manifest);
  return result;
}

}  // namespace ptlab::cli

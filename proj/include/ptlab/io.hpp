#pragma once
// Locale-independent numeric text, CSV/JSON writers, flat key-value config
// files, checksums and atomic file replacement.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ptlab/grid.hpp"

namespace ptlab::io {

/// Scientific notation with 17 significant digits ("-1.2345678901234567e-03");
/// "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);

/// JSON text with every floating-point number through format_double (non-finite
/// numbers become null). Object keys come out sorted, so equal values give
/// byte-identical text.
std::string dump_json(const nlohmann::json& j, int indent = 2);

/// Header line plus one line per row, comma separated.
std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// Writes to a temporary file next to `path` and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

std::uint32_t crc32(std::string_view data);
/// Eight lowercase hex digits.
std::string crc32_hex(std::string_view data);

struct KvEntry {
  std::string value;
  std::string origin;  // "file:line" or "command line"
};

/// `key = value` lines; '#' starts a comment, blank lines are skipped. Keys are
/// [A-Za-z0-9_.]+. Throws ConfigError naming the line for malformed lines and
/// duplicate keys.
std::map<std::string, KvEntry> parse_kv(std::string_view text, const std::string& source);
std::map<std::string, KvEntry> load_kv(const std::filesystem::path& path);

/// CSV with columns x, Re psi, Im psi (header optional) on a uniform grid.
grid::GridWavefunction read_wavefunction_csv(const std::filesystem::path& path);
std::string wavefunction_csv(const grid::GridWavefunction& psi);

nlohmann::json complex_list(const std::vector<std::complex<double>>& v);

}  // namespace ptlab::io

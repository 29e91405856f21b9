#include "ptlab/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/crc.hpp>

#include "ptlab/error.hpp"

#include <unistd.h>

namespace ptlab::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  return std::string(buf, r.ptr);
}

namespace {

void dump(const nlohmann::json& j, int indent, int depth, std::string& out) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += nlohmann::json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump(v, indent, depth + 1, out);
      }
      newline(depth);
      out += ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string dump_json(const nlohmann::json& j, int indent) {
  std::string out;
  dump(j, indent, 0, out);
  out += '\n';
  return out;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw ConfigError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ConfigError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::uint32_t crc32(std::string_view data) {
  boost::crc_32_type c;
  c.process_bytes(data.data(), data.size());
  return c.checksum();
}

std::string crc32_hex(std::string_view data) {
  char buf[16];
  const auto r = std::to_chars(buf, buf + sizeof buf, crc32(data), 16);
  std::string s(buf, r.ptr);
  return std::string(8 - s.size(), '0') + s;
}

std::map<std::string, KvEntry> parse_kv(std::string_view text, const std::string& source) {
  std::map<std::string, KvEntry> out;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    for (char ch : key) {
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.')) {
        throw ConfigError(where + ": invalid character in key '" + key + "'");
      }
    }
    if (out.count(key)) throw ConfigError(where + ": duplicate key '" + key + "' (first at " + out[key].origin + ")");
    out[key] = KvEntry{value, where};
  }
  return out;
}

std::map<std::string, KvEntry> load_kv(const std::filesystem::path& path) {
  return parse_kv(read_file(path), path.string());
}

grid::GridWavefunction read_wavefunction_csv(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  std::vector<double> xs;
  std::vector<std::complex<double>> vals;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    double v[3];
    std::size_t start = 0;
    bool ok = true;
    for (int c = 0; c < 3 && ok; ++c) {
      const auto comma = t.find(',', start);
      const std::string field = trim(std::string_view(t).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      const auto r = std::from_chars(field.data(), field.data() + field.size(), v[c]);
      ok = r.ec == std::errc() && r.ptr == field.data() + field.size();
      if (comma == std::string::npos && c < 2) ok = false;
      start = comma == std::string::npos ? t.size() : comma + 1;
    }
    if (!ok) {
      if (xs.empty() && vals.empty() && line_no == 1) continue;  // header
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected three numbers x, Re psi, Im psi");
    }
    xs.push_back(v[0]);
    vals.emplace_back(v[1], v[2]);
  }
  if (xs.size() < 2) throw ConfigError(path.string() + ": fewer than two samples");
  grid::GridWavefunction psi;
  psi.x0 = xs.front();
  psi.dx = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (std::abs(xs[j] - (psi.x0 + j * psi.dx)) > 1e-9 * std::max(1.0, std::abs(xs[j]))) {
      throw ConfigError(path.string() + ": grid is not uniform at sample " + std::to_string(j));
    }
  }
  psi.values = std::move(vals);
  psi.validate();
  return psi;
}

std::string wavefunction_csv(const grid::GridWavefunction& psi) {
  std::vector<std::vector<double>> rows;
  rows.reserve(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j) rows.push_back({psi.x(j), psi.values[j].real(), psi.values[j].imag()});
  return csv({"x", "re", "im"}, rows);
}

nlohmann::json complex_list(const std::vector<std::complex<double>>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& z : v) a.push_back({{"re", z.real()}, {"im", z.imag()}});
  return a;
}

}  // namespace ptlab::io

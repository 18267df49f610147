// SPDX-License-Identifier: Apache-2.0

#include "ofdma/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "ofdma/errors.hpp"

namespace ofdma {
namespace {

struct Header {
  int num_users = 0;
  int num_subcarriers = 0;
  std::uint64_t seed = 0;
};

std::string header_line(int k, int n, std::uint64_t seed) {
  std::ostringstream out;
  out << "# K=" << k << " N=" << n << " seed=" << seed << "\n";
  return out.str();
}

Header parse_header(const std::string& line, const std::string& path) {
  Header h;
  std::istringstream in(line);
  std::string hash, tok;
  in >> hash;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    try {
      if (key == "K") h.num_users = std::stoi(val);
      else if (key == "N") h.num_subcarriers = std::stoi(val);
      else if (key == "seed") h.seed = std::stoull(val);
    } catch (const std::exception&) {
      throw ConfigError(path + ": bad matrix header token '" + tok + "'");
    }
  }
  if (h.num_users < 1 || h.num_subcarriers < 1)
    throw ConfigError(path + ": matrix header must record K>=1 and N>=1");
  return h;
}

double parse_field(std::string_view field, const std::string& path, int row,
                   int col) {
  // trim
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
    field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\r' ||
                            field.back() == '\t'))
    field.remove_suffix(1);
  if (field == "NaN" || field == "nan" || field == "NAN")
    return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    std::ostringstream msg;
    msg << path << ": bad numeric field at row " << row << ", column " << col
        << ": '" << field << "'";
    throw ConfigError(msg.str());
  }
  return v;
}

MaskedChannelMatrix load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open matrix file: " + path);
  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#')
    throw ConfigError(path + ": missing '#' matrix header line");
  const Header h = parse_header(line, path);

  MaskedChannelMatrix m(h.num_users, h.num_subcarriers);
  m.seed = h.seed;
  for (int k = 0; k < h.num_users; ++k) {
    if (!std::getline(in, line))
      throw ConfigError(path + ": expected " + std::to_string(h.num_users) +
                        " data rows, got " + std::to_string(k));
    std::string_view rest(line);
    for (int n = 0; n < h.num_subcarriers; ++n) {
      const auto comma = rest.find(',');
      const bool last = (n == h.num_subcarriers - 1);
      if (!last && comma == std::string_view::npos)
        throw ConfigError(path + ": row " + std::to_string(k) + " has fewer than " +
                          std::to_string(h.num_subcarriers) + " fields");
      const std::string_view field =
          last ? rest : rest.substr(0, comma);
      if (last && comma != std::string_view::npos)
        throw ConfigError(path + ": row " + std::to_string(k) +
                          " has more than " +
                          std::to_string(h.num_subcarriers) + " fields");
      const double v = parse_field(field, path, k, n);
      const std::size_t i = static_cast<std::size_t>(k) * h.num_subcarriers + n;
      if (std::isnan(v)) {
        m.observed[i] = 0;
      } else {
        if (!(v > 0.0) || !std::isfinite(v))
          throw ConfigError(path + ": gains must be finite and > 0 (row " +
                            std::to_string(k) + ", column " +
                            std::to_string(n) + ")");
        m.values[i] = v;
        m.observed[i] = 1;
      }
      if (!last) rest.remove_prefix(comma + 1);
    }
  }
  return m;
}

}  // namespace

std::string format_sci(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::scientific, 9);
  return std::string(buf, res.ptr);
}

std::string matrix_to_csv(const ChannelMatrix& m) {
  std::string out = header_line(m.num_users, m.num_subcarriers, m.seed);
  for (int k = 0; k < m.num_users; ++k) {
    for (int n = 0; n < m.num_subcarriers; ++n) {
      if (n > 0) out += ',';
      out += format_sci(m.at(k, n));
    }
    out += '\n';
  }
  return out;
}

std::string matrix_to_csv(const MaskedChannelMatrix& m) {
  std::string out = header_line(m.num_users, m.num_subcarriers, m.seed);
  for (int k = 0; k < m.num_users; ++k) {
    for (int n = 0; n < m.num_subcarriers; ++n) {
      if (n > 0) out += ',';
      out += m.is_observed(k, n) ? format_sci(m.value(k, n)) : "NaN";
    }
    out += '\n';
  }
  return out;
}

void save_matrix(const ChannelMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write matrix file: " + path);
  out << matrix_to_csv(m);
}

void save_matrix(const MaskedChannelMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write matrix file: " + path);
  out << matrix_to_csv(m);
}

MaskedChannelMatrix load_masked_matrix(const std::string& path) {
  return load_csv(path);
}

ChannelMatrix load_matrix(const std::string& path) {
  const MaskedChannelMatrix m = load_csv(path);
  if (m.missing_count() > 0)
    throw ConfigError(path + ": matrix contains " +
                      std::to_string(m.missing_count()) +
                      " missing entries; repair it first");
  ChannelMatrix out(m.num_users, m.num_subcarriers);
  out.gains = m.values;
  out.seed = m.seed;
  return out;
}

}  // namespace ofdma

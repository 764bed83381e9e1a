#pragma once

// File formats.
//
// Wavefunction CSV:
//   # hbar=<ħ> L=<half-width> N=<points>
//   x,re,im
//   <x_j>,<Re ψ_j>,<Im ψ_j>            (N rows, j ascending)
//
// Wigner CSV:
//   # hbar=<ħ> L=<half-width> N=<points>
//   x,p,w
//   <x_j>,<p_k>,<W_jk>                 (N² rows, j slow, k fast)
//
// Numbers are written with 17 significant digits. Covariance files are JSON:
//   {"n": 1, "hbar_ref": 1.0, "mean": [0, 0], "sigma": [0.5, 0, 0, 0.5]}
// with `sigma` the row-major 2n×2n matrix in (x_1..x_n, p_1..p_n) order.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hbarcheck/gaussian.hpp"
#include "hbarcheck/wignergrid.hpp"

namespace hbarcheck::io {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

/// 64-bit FNV-1a, hex encoded. Used as an input digest in reports.
inline std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

struct GridHeader {
  double hbar = 0.0;
  double L = 0.0;
  std::size_t N = 0;
};

inline double parse_number(std::string_view tok, std::string_view what, std::size_t line) {
  while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r'))
    tok.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": field '" +
                                           std::string(what) + "' is not a number: '" +
                                           std::string(tok) + "'");
  }
  return v;
}

inline GridHeader parse_header(std::string_view line) {
  if (line.empty() || line.front() != '#') {
    throw Error(ErrorCode::ParseError, "line 1: expected '# hbar=... L=... N=...' header");
  }
  std::map<std::string, std::string, std::less<>> kv;
  std::istringstream ss{std::string(line.substr(1))};
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  GridHeader h;
  for (const char* key : {"hbar", "L", "N"}) {
    if (!kv.contains(key)) {
      throw Error(ErrorCode::ParseError, std::string("header is missing field '") + key + "'");
    }
  }
  h.hbar = parse_number(kv["hbar"], "hbar", 1);
  h.L = parse_number(kv["L"], "L", 1);
  const double n = parse_number(kv["N"], "N", 1);
  if (n < 1.0 || n != std::floor(n)) {
    throw Error(ErrorCode::ParseError, "header field 'N' must be a positive integer");
  }
  h.N = static_cast<std::size_t>(n);
  if (!(h.hbar > 0.0)) throw Error(ErrorCode::ParseError, "header field 'hbar' must be positive");
  return h;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto l = text.substr(start, end - start);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    lines.push_back(l);
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

inline std::vector<double> parse_row(std::string_view line, std::size_t line_no,
                                     std::initializer_list<std::string_view> names) {
  std::vector<double> out;
  std::size_t start = 0;
  auto name = names.begin();
  while (true) {
    const auto comma = line.find(',', start);
    const auto tok = line.substr(start, comma == std::string_view::npos ? line.size() - start
                                                                         : comma - start);
    if (name == names.end()) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": too many columns");
    }
    out.push_back(parse_number(tok, *name, line_no));
    ++name;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (name != names.end()) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": missing column '" +
                                           std::string(*name) + "'");
  }
  return out;
}

inline PositionGrid grid_from_header(const GridHeader& h) {
  try {
    return PositionGrid(h.L, h.N);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, std::string("header grid: ") + e.what());
  }
}

inline void expect_close(double got, double want, double scale, std::string_view what,
                         std::size_t line) {
  if (std::abs(got - want) > 1e-9 * std::max(1.0, scale)) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": field '" +
                                           std::string(what) + "' = " + format_double(got) +
                                           " does not match the grid value " +
                                           format_double(want));
  }
}

}  // namespace detail

inline std::string wavefunction_csv(const GridWavefunction& psi) {
  const auto& g = psi.grid();
  std::string out = "# hbar=" + format_double(psi.hbar()) + " L=" +
                    format_double(g.half_width()) + " N=" + std::to_string(g.size()) +
                    "\nx,re,im\n";
  for (std::size_t j = 0; j < g.size(); ++j) {
    out += format_double(g.point(j)) + "," + format_double(psi.values()[j].real()) + "," +
           format_double(psi.values()[j].imag()) + "\n";
  }
  return out;
}

inline GridWavefunction parse_wavefunction_csv(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::ParseError, "empty wavefunction file");
  const auto h = detail::parse_header(lines[0]);
  const auto grid = detail::grid_from_header(h);
  if (lines.size() < 2 || lines[1] != "x,re,im") {
    throw Error(ErrorCode::ParseError, "line 2: expected column header 'x,re,im'");
  }
  if (lines.size() != 2 + h.N) {
    throw Error(ErrorCode::ParseError, "expected " + std::to_string(h.N) + " data rows, found " +
                                           std::to_string(lines.size() - 2));
  }
  std::vector<Complex> values(h.N);
  for (std::size_t j = 0; j < h.N; ++j) {
    const auto row = detail::parse_row(lines[2 + j], 3 + j, {"x", "re", "im"});
    detail::expect_close(row[0], grid.point(j), h.L, "x", 3 + j);
    values[j] = {row[1], row[2]};
  }
  return {grid, std::move(values), h.hbar};
}

inline std::string wigner_csv(const WignerGrid& w) {
  const auto& g = w.xgrid();
  const std::size_t n = g.size();
  std::string out = "# hbar=" + format_double(w.hbar()) + " L=" + format_double(g.half_width()) +
                    " N=" + std::to_string(n) + "\nx,p,w\n";
  out.reserve(out.size() + n * n * 72);
  for (std::size_t j = 0; j < n; ++j) {
    const std::string x = format_double(g.point(j)) + ",";
    for (std::size_t k = 0; k < n; ++k) {
      out += x;
      out += format_double(w.pvalues()[k]);
      out += ',';
      out += format_double(w.at(j, k));
      out += '\n';
    }
  }
  return out;
}

inline WignerGrid parse_wigner_csv(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::ParseError, "empty Wigner file");
  const auto h = detail::parse_header(lines[0]);
  const auto grid = detail::grid_from_header(h);
  if (lines.size() < 2 || lines[1] != "x,p,w") {
    throw Error(ErrorCode::ParseError, "line 2: expected column header 'x,p,w'");
  }
  const std::size_t n = h.N;
  if (lines.size() != 2 + n * n) {
    throw Error(ErrorCode::ParseError, "expected " + std::to_string(n * n) +
                                           " data rows, found " + std::to_string(lines.size() - 2));
  }
  auto p = WignerGrid::conjugate_momenta(grid, h.hbar);
  const double pscale = std::max(-p.front(), p.back());
  std::vector<double> w(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t line_no = 3 + j * n + k;
      const auto row = detail::parse_row(lines[2 + j * n + k], line_no, {"x", "p", "w"});
      detail::expect_close(row[0], grid.point(j), h.L, "x", line_no);
      detail::expect_close(row[1], p[k], pscale, "p", line_no);
      w[j * n + k] = row[2];
    }
  return {grid, std::move(p), std::move(w), h.hbar};
}

/// Rescales a Wigner grid to units where ħ = 1: x, p → x/√ħ, p/√ħ and
/// W → ħ·W. Mass, purity and operator spectra are unchanged.
inline WignerGrid nondimensionalize(const WignerGrid& w) {
  if (w.hbar() == 1.0) return w;
  const double s = 1.0 / std::sqrt(w.hbar());
  PositionGrid grid(w.xgrid().half_width() * s, w.size());
  auto p = WignerGrid::conjugate_momenta(grid, 1.0);
  std::vector<double> vals = w.values();
  for (double& v : vals) v *= w.hbar();
  return {grid, std::move(p), std::move(vals), 1.0};
}

struct CovarianceSpec {
  std::size_t n = 0;
  double hbar_ref = 1.0;
  std::vector<double> mean;
  RealMatrix sigma;
};

inline CovarianceSpec parse_covariance_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("covariance JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "covariance file must be a JSON object");
  auto field = [&](const char* name) -> const nlohmann::json& {
    if (!j.contains(name)) {
      throw Error(ErrorCode::ParseError, std::string("missing field '") + name + "'");
    }
    return j.at(name);
  };
  auto numbers = [&](const char* name, std::size_t count) {
    const auto& a = field(name);
    if (!a.is_array() || a.size() != count) {
      throw Error(ErrorCode::ParseError, std::string("field '") + name + "' must be an array of " +
                                             std::to_string(count) + " numbers");
    }
    std::vector<double> out;
    for (const auto& v : a) {
      if (!v.is_number() || !std::isfinite(v.get<double>())) {
        throw Error(ErrorCode::ParseError,
                    std::string("field '") + name + "' contains a non-numeric entry");
      }
      out.push_back(v.get<double>());
    }
    return out;
  };

  CovarianceSpec spec;
  const auto& n = field("n");
  if (!n.is_number_integer() || n.get<long long>() < 1) {
    throw Error(ErrorCode::ParseError, "field 'n' must be a positive integer");
  }
  spec.n = static_cast<std::size_t>(n.get<long long>());
  const auto& hr = field("hbar_ref");
  if (!hr.is_number() || !(hr.get<double>() > 0.0)) {
    throw Error(ErrorCode::ParseError, "field 'hbar_ref' must be a positive number");
  }
  spec.hbar_ref = hr.get<double>();
  const std::size_t dim = 2 * spec.n;
  spec.mean = numbers("mean", dim);
  spec.sigma = RealMatrix(dim, dim, numbers("sigma", dim * dim));
  return spec;
}

inline std::string covariance_json(const CovarianceSpec& spec) {
  nlohmann::ordered_json j;
  j["n"] = spec.n;
  j["hbar_ref"] = spec.hbar_ref;
  j["mean"] = spec.mean;
  j["sigma"] = std::vector<double>(spec.sigma.data().begin(), spec.sigma.data().end());
  return j.dump(2) + "\n";
}

/// GaussianState in units of hbar_ref: Σ/ħ_ref, z̄/√ħ_ref, ħ = 1.
inline GaussianState to_gaussian_state(const CovarianceSpec& spec) {
  if (!is_symmetric(spec.sigma, 1e-12)) {
    throw Error(ErrorCode::NotSymmetric, "field 'sigma' is not symmetric");
  }
  const double s = 1.0 / std::sqrt(spec.hbar_ref);
  std::vector<double> mean = spec.mean;
  for (double& m : mean) m *= s;
  return GaussianState(std::move(mean), (1.0 / spec.hbar_ref) * spec.sigma, 1.0);
}

}  // namespace hbarcheck::io

#include "ccurves/curve_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace ccurves {

std::string format_double(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::map<std::string, std::string> manifold_tag(const FrameManifold & m)
{
  std::map<std::string, std::string> tag{{"manifold", m.name()}};
  for (const auto & [k, v] : m.parameters()) { tag[k] = format_double(v); }
  return tag;
}

void write_curve_csv(std::ostream & out, const Curve & c, const std::map<std::string, std::string> & extra)
{
  auto meta = manifold_tag(c.manifold());
  for (const auto & [k, v] : extra) { meta[k] = v; }
  out << "#";
  for (const auto & [k, v] : meta) { out << ' ' << k << '=' << v; }
  out << '\n';

  out << 's';
  if (c.has_coords()) {
    for (const auto & name : c.manifold().coords()) { out << ',' << name; }
  }
  const std::size_t m = c.manifold().dim();
  for (std::size_t j = 1; j <= m; ++j) { out << ",T" << j; }
  out << '\n';

  for (std::size_t i = 0; i < c.size(); ++i) {
    out << format_double(c.grid()[i]);
    if (c.has_coords()) {
      for (Eigen::Index k = 0; k < c.coords()[i].size(); ++k) { out << ',' << format_double(c.coords()[i][k]); }
    }
    for (Eigen::Index k = 0; k < c.tangent()[i].size(); ++k) { out << ',' << format_double(c.tangent()[i][k]); }
    out << '\n';
  }
}

void write_curve_csv(const std::filesystem::path & path, const Curve & c, const std::map<std::string, std::string> & extra)
{
  std::ofstream out(path);
  if (!out) { throw Error("cannot write '" + path.string() + "'"); }
  write_curve_csv(out, c, extra);
  if (!out) { throw Error("write failed for '" + path.string() + "'"); }
}

namespace {

std::vector<std::string> split(const std::string & line, char sep)
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) { out.push_back(cell); }
  if (!line.empty() && line.back() == sep) { out.emplace_back(); }
  return out;
}

std::string trim(const std::string & s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) { return {}; }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string & text, std::size_t line, std::size_t col)
{
  const std::string t = trim(text);
  char * end          = nullptr;
  errno               = 0;
  const double v      = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
    throw CurveError("line " + std::to_string(line) + ", column " + std::to_string(col + 1) + ": invalid number '" +
                     t + "'");
  }
  return v;
}

bool reproduces(const Grid & g, std::span<const double> s)
{
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (g[i] != s[i]) { return false; }
  }
  return true;
}

}  // namespace

Grid grid_from_samples(std::span<const double> s)
{
  if (s.size() < 2) { throw CurveError("a curve needs at least two samples"); }
  const std::size_t n = s.size();
  const double h0     = (s[n - 1] - s[0]) / static_cast<double>(n - 1);
  if (!(h0 > 0.0)) { throw CurveError("s must be increasing"); }

  // Prefer a step that regenerates every s value bit for bit; the first difference is the
  // usual writer's step, the span quotient its rounded equivalent.
  Grid best{s[0], h0, n};
  double best_err = std::numeric_limits<double>::infinity();
  for (double base : {s[1] - s[0], h0}) {
    double h = base;
    for (int k = 0; k < 64; ++k) h = std::nextafter(h, 0.0);
    for (int k = 0; k <= 128; ++k, h = std::nextafter(h, 1.0)) {
      const Grid g{s[0], h, n};
      if (reproduces(g, s)) { return g; }
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) { err = std::max(err, std::abs(g[i] - s[i])); }
      if (err < best_err) {
        best_err = err;
        best     = g;
      }
    }
  }
  if (best_err > 1e-9 * std::max(1.0, std::abs(s[n - 1] - s[0]))) {
    throw CurveError("s samples are not uniformly spaced (deviation " + format_double(best_err) + ")");
  }
  return best;
}

CurveTable read_curve_table(std::istream & in)
{
  CurveTable t;
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string l = trim(line);
    if (l.empty()) { continue; }
    if (l.front() == '#') {
      std::istringstream is(l.substr(1));
      std::string tok;
      while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) { continue; }
        t.meta[tok.substr(0, eq)] = tok.substr(eq + 1);
      }
      continue;
    }
    header = split(l, ',');
    break;
  }
  if (header.empty()) { throw CurveError("curve CSV has no header"); }
  for (auto & h : header) { h = trim(h); }
  if (header.front() != "s") { throw CurveError("curve CSV header must start with 's'"); }

  std::size_t first_t = header.size();
  for (std::size_t k = 1; k < header.size(); ++k) {
    if (header[k] == "T1") {
      first_t = k;
      break;
    }
  }
  if (first_t == header.size()) { throw CurveError("curve CSV header has no T1 column"); }
  const std::size_t m = header.size() - first_t;
  for (std::size_t j = 0; j < m; ++j) {
    if (header[first_t + j] != "T" + std::to_string(j + 1)) {
      throw CurveError("curve CSV header: expected T" + std::to_string(j + 1) + ", found '" + header[first_t + j] +
                       "'");
    }
  }
  t.coord_names.assign(header.begin() + 1, header.begin() + static_cast<std::ptrdiff_t>(first_t));
  const std::size_t nc = t.coord_names.size();

  std::vector<double> s;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string l = trim(line);
    if (l.empty() || l.front() == '#') { continue; }
    const auto cells = split(l, ',');
    if (cells.size() != header.size()) {
      throw CurveError("line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                       " columns, found " + std::to_string(cells.size()));
    }
    s.push_back(parse_number(cells[0], lineno, 0));
    Vec x(static_cast<Eigen::Index>(nc)), T(static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < nc; ++k) { x[static_cast<Eigen::Index>(k)] = parse_number(cells[1 + k], lineno, 1 + k); }
    for (std::size_t k = 0; k < m; ++k) {
      T[static_cast<Eigen::Index>(k)] = parse_number(cells[first_t + k], lineno, first_t + k);
    }
    if (nc > 0) { t.coords.push_back(std::move(x)); }
    t.tangent.push_back(std::move(T));
  }
  t.grid = grid_from_samples(s);
  return t;
}

CurveTable read_curve_table(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) { throw Error("cannot open curve file '" + path.string() + "'"); }
  return read_curve_table(in);
}

Curve curve_from_table(const CurveTable & t, std::shared_ptr<const FrameManifold> m)
{
  if (!m) { throw CurveError("no manifold given"); }
  if (!t.tangent.empty() && static_cast<std::size_t>(t.tangent.front().size()) != m->dim()) {
    throw CurveError("curve has " + std::to_string(t.tangent.front().size()) + " tangent columns, manifold '" +
                     m->name() + "' has dimension " + std::to_string(m->dim()));
  }
  if (!t.coord_names.empty() && t.coord_names != m->coords()) {
    throw CurveError("coordinate columns do not match manifold '" + m->name() + "'");
  }
  return Curve(std::move(m), t.grid, t.coords, t.tangent);
}

}  // namespace ccurves

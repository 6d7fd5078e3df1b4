#include "ccurves/manifold_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace ccurves {

using nlohmann::json;

namespace {

std::string path_of(const std::string & field, std::initializer_list<std::size_t> ids)
{
  std::string s = field;
  for (auto i : ids) { s += "[" + std::to_string(i) + "]"; }
  return s;
}

Expr parse_field(const std::string & text, const std::vector<std::string> & vars,
                 const std::map<std::string, double> & params, const std::string & path)
{
  Expr e;
  try {
    e = Expr::parse(text, vars);
  } catch (const ParseError & err) {
    throw ManifoldError(path, err.what());
  }
  for (const auto & [k, v] : params) { e = e.bind(k, v); }
  return e;
}

std::string expr_string(const json & j, const std::string & path)
{
  if (j.is_string()) { return j.get<std::string>(); }
  if (j.is_number()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
    return buf;
  }
  throw ManifoldError(path, "expected an expression string or number");
}

const json & require(const json & doc, const char * key)
{
  if (!doc.contains(key)) { throw ManifoldError(key, "missing required key"); }
  return doc.at(key);
}

void expect_array(const json & j, std::size_t n, const std::string & path)
{
  if (!j.is_array()) { throw ManifoldError(path, "expected an array"); }
  if (j.size() != n) {
    throw ManifoldError(path, "dimension mismatch: expected " + std::to_string(n) + " entries, got " +
                                std::to_string(j.size()));
  }
}

std::vector<std::vector<std::string>> string_matrix(const json & j, std::size_t m, const std::string & field)
{
  expect_array(j, m, field);
  std::vector<std::vector<std::string>> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    expect_array(j[i], m, path_of(field, {i}));
    for (std::size_t k = 0; k < m; ++k) { out[i].push_back(expr_string(j[i][k], path_of(field, {i, k}))); }
  }
  return out;
}

}  // namespace

FrameManifold build_manifold(const ManifoldText & t, const std::map<std::string, double> & overrides)
{
  std::map<std::string, double> params = t.parameters;
  for (const auto & [k, v] : overrides) {
    if (!params.contains(k)) { throw ManifoldError("parameters", "unknown parameter '" + k + "'"); }
    params[k] = v;
  }
  std::vector<std::string> vars = t.coords;
  for (const auto & [k, v] : params) {
    if (std::find(t.coords.begin(), t.coords.end(), k) != t.coords.end()) {
      throw ManifoldError("parameters", "parameter '" + k + "' shadows a coordinate");
    }
    vars.push_back(k);
  }

  const std::size_t m = t.dim;
  FrameManifold::Definition d;
  d.name       = t.name;
  d.dim        = m;
  d.coords     = t.coords;
  d.xi_index   = t.xi_index;
  d.parameters = params;

  if (t.omega.size() != m) { throw ManifoldError("omega", "dimension mismatch"); }
  for (std::size_t i = 0; i < m; ++i) {
    if (t.omega[i].size() != m) { throw ManifoldError(path_of("omega", {i}), "dimension mismatch"); }
    for (std::size_t j = 0; j < m; ++j) {
      if (t.omega[i][j].size() != m) { throw ManifoldError(path_of("omega", {i, j}), "dimension mismatch"); }
      for (std::size_t k = 0; k < m; ++k) {
        d.omega.push_back(parse_field(t.omega[i][j][k], vars, params, path_of("omega", {i, j, k})));
      }
    }
  }

  auto matrix = [&](const std::vector<std::vector<std::string>> & src, const char * field) {
    if (src.size() != m) { throw ManifoldError(field, "dimension mismatch"); }
    std::vector<Expr> out;
    for (std::size_t i = 0; i < m; ++i) {
      if (src[i].size() != m) { throw ManifoldError(path_of(field, {i}), "dimension mismatch"); }
      for (std::size_t k = 0; k < m; ++k) { out.push_back(parse_field(src[i][k], vars, params, path_of(field, {i, k}))); }
    }
    return out;
  };
  d.h = matrix(t.h, "h");
  if (t.frame) { d.frame = matrix(*t.frame, "frame"); }

  if (t.phi.size() != m) { throw ManifoldError("phi", "dimension mismatch"); }
  d.phi = Mat(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    if (t.phi[i].size() != m) { throw ManifoldError(path_of("phi", {i}), "dimension mismatch"); }
    for (std::size_t k = 0; k < m; ++k) { d.phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = t.phi[i][k]; }
  }

  if (t.metadata) {
    d.metadata = FrameManifold::Metadata{parse_field((*t.metadata)[0], vars, params, "metadata.kappa"),
                                         parse_field((*t.metadata)[1], vars, params, "metadata.mu"),
                                         parse_field((*t.metadata)[2], vars, params, "metadata.nu")};
  }
  return FrameManifold(std::move(d));
}

ManifoldText manifold_text_from_json(const json & doc)
{
  if (!doc.is_object()) { throw ManifoldError("", "manifold spec must be a JSON object"); }
  ManifoldText t;
  try {
    t.name = doc.value("name", std::string("unnamed"));
    const json & jd = require(doc, "dim");
    if (!jd.is_number_integer() || jd.get<long long>() <= 0) { throw ManifoldError("dim", "must be a positive integer"); }
    t.dim = jd.get<std::size_t>();
    if (t.dim % 2 == 0) { throw ManifoldError("dim", "dimension must be odd, got " + std::to_string(t.dim)); }
    const std::size_t m = t.dim;

    if (doc.contains("coords")) {
      const json & jc = doc.at("coords");
      if (!jc.is_array()) { throw ManifoldError("coords", "expected an array of names"); }
      for (const auto & c : jc) { t.coords.push_back(c.get<std::string>()); }
    }
    if (doc.contains("frame") && !doc.at("frame").is_null()) { t.frame = string_matrix(doc.at("frame"), m, "frame"); }

    const json & jo = require(doc, "omega");
    expect_array(jo, m, "omega");
    t.omega.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      expect_array(jo[i], m, path_of("omega", {i}));
      t.omega[i].resize(m);
      for (std::size_t j = 0; j < m; ++j) {
        expect_array(jo[i][j], m, path_of("omega", {i, j}));
        for (std::size_t k = 0; k < m; ++k) {
          t.omega[i][j].push_back(expr_string(jo[i][j][k], path_of("omega", {i, j, k})));
        }
      }
    }

    const json & jp = require(doc, "phi");
    expect_array(jp, m, "phi");
    for (std::size_t i = 0; i < m; ++i) {
      expect_array(jp[i], m, path_of("phi", {i}));
      std::vector<double> row;
      for (std::size_t k = 0; k < m; ++k) {
        if (!jp[i][k].is_number()) { throw ManifoldError(path_of("phi", {i, k}), "expected a number"); }
        row.push_back(jp[i][k].get<double>());
      }
      t.phi.push_back(std::move(row));
    }

    const json & jx = require(doc, "xi_index");
    if (!jx.is_number_integer() || jx.get<long long>() < 0 || jx.get<std::size_t>() >= m) {
      throw ManifoldError("xi_index", "must be an integer in [0, dim)");
    }
    t.xi_index = jx.get<std::size_t>();
    t.h        = string_matrix(require(doc, "h"), m, "h");

    if (doc.contains("metadata") && !doc.at("metadata").is_null()) {
      const json & jm = doc.at("metadata");
      t.metadata      = std::array<std::string, 3>{expr_string(require(jm, "kappa"), "metadata.kappa"),
                                              expr_string(require(jm, "mu"), "metadata.mu"),
                                              expr_string(require(jm, "nu"), "metadata.nu")};
    }
    if (doc.contains("parameters")) {
      for (const auto & [k, v] : doc.at("parameters").items()) {
        if (!v.is_number()) { throw ManifoldError("parameters." + k, "expected a number"); }
        t.parameters[k] = v.get<double>();
      }
    }
  } catch (const json::exception & e) {
    throw ManifoldError("", std::string("malformed manifold spec: ") + e.what());
  }
  return t;
}

FrameManifold load_manifold(const json & doc, const std::map<std::string, double> & overrides)
{
  return build_manifold(manifold_text_from_json(doc), overrides);
}

FrameManifold load_manifold_file(const std::filesystem::path & path, const std::map<std::string, double> & overrides)
{
  std::ifstream in(path);
  if (!in) { throw Error("cannot open manifold spec '" + path.string() + "'"); }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception & e) {
    throw ManifoldError("", "invalid JSON in '" + path.string() + "': " + e.what());
  }
  return load_manifold(doc, overrides);
}

json to_json(const FrameManifold & M)
{
  const std::size_t m = M.dim();
  json doc;
  doc["name"]   = M.name();
  doc["dim"]    = m;
  doc["coords"] = M.coords();
  auto mat      = [&](auto entry) {
    json rows = json::array();
    for (std::size_t i = 0; i < m; ++i) {
      json row = json::array();
      for (std::size_t k = 0; k < m; ++k) { row.push_back(entry(i, k)); }
      rows.push_back(row);
    }
    return rows;
  };
  if (M.has_coords()) {
    doc["frame"] = mat([&](std::size_t i, std::size_t k) { return M.frame(i, k).str(); });
  }
  json omega = json::array();
  for (std::size_t i = 0; i < m; ++i) {
    json plane = json::array();
    for (std::size_t j = 0; j < m; ++j) {
      json v = json::array();
      for (std::size_t k = 0; k < m; ++k) { v.push_back(M.omega(i, j, k).str()); }
      plane.push_back(v);
    }
    omega.push_back(plane);
  }
  doc["omega"]    = omega;
  doc["phi"]      = mat([&](std::size_t i, std::size_t k) {
    return M.phi()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
  });
  doc["xi_index"] = M.xi_index();
  doc["h"]        = mat([&](std::size_t i, std::size_t k) { return M.h(i, k).str(); });
  if (M.metadata()) {
    doc["metadata"] = {{"kappa", M.metadata()->kappa.str()},
                       {"mu", M.metadata()->mu.str()},
                       {"nu", M.metadata()->nu.str()}};
  }
  return doc;
}

}  // namespace ccurves

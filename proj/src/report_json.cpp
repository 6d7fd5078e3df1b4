#include "ccurves/report_json.hpp"

#include <algorithm>

namespace ccurves {

using nlohmann::json;

namespace {

json range(const std::vector<double> & v, bool with_samples)
{
  json j;
  if (v.empty()) { return j; }
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  j["min"]            = *lo;
  j["max"]            = *hi;
  if (with_samples) { j["samples"] = v; }
  return j;
}

json lambda_json(const ClassificationReport & r, bool with_samples)
{
  json j{{"min", r.lambda_min}, {"max", r.lambda_max}, {"min_abs", r.min_abs_lambda}};
  if (with_samples) { j["samples"] = r.lambda; }
  return j;
}

}  // namespace

json report_json(const ClassificationReport & r, bool with_samples)
{
  return json{
      {"kind", std::string(kind_name(r.kind))},
      {"verdict", std::string(verdict_name(r.verdict))},
      {"max_residual", r.max_residual},
      {"lambda", lambda_json(r, with_samples)},
      {"checks",
       json::array({json{{"name", "residual"},
                         {"max_violation", r.max_residual},
                         {"tol", r.options.tol},
                         {"pass", r.max_residual < r.options.tol}},
                    json{{"name", "lambda_nonzero"},
                         {"max_violation", r.min_abs_lambda},
                         {"tol", r.options.lambda_floor},
                         {"pass", r.lambda_nonzero}}})},
  };
}

json report_json(const TheoremReport & r, bool with_samples)
{
  json j;
  j["theorem"] = std::string(theorem_name(r.id));
  j["verdict"] = r.degenerate ? "degenerate" : (r.pass ? "pass" : "fail");
  if (!r.branch.empty()) { j["branch"] = r.branch; }
  j["sign"] = r.sign;
  double worst = 0.0;
  json checks  = json::array();
  for (const auto & c : r.checks) {
    worst = std::max(worst, c.max_violation);
    checks.push_back(json{{"name", c.name}, {"max_violation", c.max_violation}, {"tol", c.tol}, {"pass", c.pass()}});
  }
  j["max_residual"] = worst;
  if (r.condition) {
    j["condition"] = std::string(kind_name(r.condition->kind));
    j["lambda"]    = lambda_json(*r.condition, with_samples);
  }
  j["checks"] = checks;
  return j;
}

json report_json(const StructureReport & r)
{
  auto checks = [](const std::vector<InvariantCheck> & v) {
    json a = json::array();
    for (const auto & c : v) { a.push_back(json{{"name", c.name}, {"max_violation", c.max_violation}, {"pass", c.pass}}); }
    return a;
  };
  return json{{"verdict", r.pass ? "pass" : "fail"},
              {"points", r.points.size()},
              {"constant_checks", checks(r.constant_checks)},
              {"checks", checks(r.summary)},
              {"min_h_norm", r.min_h_norm},
              {"non_sasakian", r.non_sasakian}};
}

json frenet_json(const FrenetApparatus & f, bool with_samples)
{
  json j;
  j["order"]   = f.order;
  j["samples"] = f.grid.count;
  j["step"]    = f.grid.step;
  json ks      = json::array();
  for (std::size_t a = 0; a < f.curvatures.size(); ++a) {
    json k  = range(f.curvatures[a], with_samples);
    k["name"] = "k" + std::to_string(a + 1);
    ks.push_back(k);
  }
  j["curvatures"] = ks;
  json etas       = json::array();
  for (std::size_t a = 0; a < f.eta.size(); ++a) {
    json e  = range(f.eta[a], with_samples);
    e["name"] = "eta(v" + std::to_string(a + 1) + ")";
    etas.push_back(e);
  }
  j["eta"] = etas;
  return j;
}

}  // namespace ccurves

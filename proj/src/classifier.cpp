#include "ccurves/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace ccurves {

std::string_view kind_name(ConditionKind k)
{
  switch (k) {
  case ConditionKind::CParallelTangent: return "c-parallel-tangent";
  case ConditionKind::CProperTangent: return "c-proper-tangent";
  case ConditionKind::CParallelNormal: return "c-parallel-normal";
  case ConditionKind::CProperNormal: return "c-proper-normal";
  }
  return "?";
}

std::optional<ConditionKind> parse_kind(std::string_view name)
{
  for (auto k : kAllKinds) {
    if (kind_name(k) == name) { return k; }
  }
  return std::nullopt;
}

std::string_view verdict_name(Verdict v) { return v == Verdict::Holds ? "holds" : "fails"; }

std::string_view theorem_name(TheoremId id)
{
  switch (id) {
  case TheoremId::T2_1: return "T2.1";
  case TheoremId::T2_2: return "T2.2";
  case TheoremId::T2_3: return "T2.3";
  case TheoremId::T2_4: return "T2.4";
  case TheoremId::T3_1: return "T3.1";
  case TheoremId::T3_2: return "T3.2";
  case TheoremId::T3_3: return "T3.3";
  case TheoremId::T3_4: return "T3.4";
  case TheoremId::T3_5: return "T3.5";
  case TheoremId::T3_6: return "T3.6";
  }
  return "?";
}

std::optional<TheoremId> parse_theorem(std::string_view name)
{
  for (auto id : kAllTheorems) {
    if (theorem_name(id) == name) { return id; }
  }
  return std::nullopt;
}

ClassificationFailed::ClassificationFailed(ConditionKind kind, double max_residual, double min_abs_lambda)
    : Error([&] {
        std::ostringstream msg;
        msg << "prerequisite condition " << kind_name(kind) << " does not hold (max residual " << max_residual
            << ", min |lambda| " << min_abs_lambda << ")";
        return msg.str();
      }()),
      kind_(kind)
{}

CurveProfile make_profile(FrenetApparatus f, Vec xi, std::vector<double> g_t_phiht, std::vector<double> g_t_ht,
                          std::vector<double> g_ht_ht)
{
  const std::size_t n = f.frames.at(0).size();
  if (g_t_phiht.size() != n || g_t_ht.size() != n || g_ht_ht.size() != n) {
    throw SizeError("profile scalars do not match the Frenet samples");
  }
  if (n < 2 * kEdgeSamples + 1) { throw SizeError("profile needs interior samples"); }
  f.eta.assign(f.frames.size(), std::vector<double>(n));
  for (std::size_t a = 0; a < f.frames.size(); ++a) {
    for (std::size_t i = 0; i < n; ++i) { f.eta[a][i] = f.frames[a][i].dot(xi); }
  }

  CurveProfile p;
  p.frenet    = std::move(f);
  p.xi        = std::move(xi);
  p.g_t_phiht = std::move(g_t_phiht);
  p.g_t_ht    = std::move(g_t_ht);
  p.g_ht_ht   = std::move(g_ht_ht);
  if (p.frenet.order >= 2) { p.formula = mean_vectors_formula(p.frenet); }
  return p;
}

CurveProfile profile(const Curve & c, const FrenetOptions & opts)
{
  CurveProfile p = make_profile(frenet(c, opts), c.manifold().xi(), legendre_scalar(c).values,
                                tangent_h_scalar(c).values, tangent_hh_scalar(c).values);
  if (p.frenet.order >= 2) { p.direct = mean_vectors_direct(c); }
  return p;
}

LambdaFit extract_lambda(std::span<const Vec> v, const Vec & xi)
{
  LambdaFit fit;
  fit.lambda.resize(v.size());
  fit.residual.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    fit.lambda[i]   = v[i].dot(xi);
    fit.residual[i] = (v[i] - fit.lambda[i] * xi).norm();
  }
  return fit;
}

const std::vector<Vec> & condition_vector(const CurveProfile & p, ConditionKind kind)
{
  if (!p.formula) { throw GeodesicError("classification needs a non-geodesic curve (order >= 2)"); }
  switch (kind) {
  case ConditionKind::CParallelTangent: return p.formula->nabla_t_h;
  case ConditionKind::CProperTangent: return p.formula->delta_h;
  case ConditionKind::CParallelNormal: return p.formula->nabla_perp_h;
  case ConditionKind::CProperNormal: return p.formula->delta_perp_h;
  }
  throw Error("unknown condition kind");
}

ClassificationReport classify(const CurveProfile & p, ConditionKind kind, const ClassifyOptions & opts)
{
  const auto & v = condition_vector(p, kind);
  auto fit       = extract_lambda(v, p.xi);

  ClassificationReport r;
  r.kind    = kind;
  r.grid    = p.frenet.grid;
  r.options = opts;
  r.lambda_min     = std::numeric_limits<double>::infinity();
  r.lambda_max     = -std::numeric_limits<double>::infinity();
  r.min_abs_lambda = std::numeric_limits<double>::infinity();
  for (std::size_t i = p.first_interior(); i < p.end_interior(); ++i) {
    r.max_residual   = std::max(r.max_residual, fit.residual[i]);
    r.lambda_min     = std::min(r.lambda_min, fit.lambda[i]);
    r.lambda_max     = std::max(r.lambda_max, fit.lambda[i]);
    r.min_abs_lambda = std::min(r.min_abs_lambda, std::abs(fit.lambda[i]));
  }
  r.lambda_nonzero = r.min_abs_lambda > opts.lambda_floor;
  r.verdict        = (r.max_residual < opts.tol && r.lambda_nonzero) ? Verdict::Holds : Verdict::Fails;
  r.lambda         = std::move(fit.lambda);
  r.residual       = std::move(fit.residual);
  return r;
}

ClassificationReport classify(const Curve & c, ConditionKind kind, const ClassifyOptions & opts)
{
  return classify(profile(c), kind, opts);
}

double legendre_identity_violation(const CurveProfile & p)
{
  if (p.frenet.order < 2) { throw GeodesicError("the Legendre identity needs k1 and v2"); }
  const auto & k1 = p.frenet.k(1);
  const auto & e2 = p.frenet.eta[1];
  double worst    = 0.0;
  for (std::size_t i = p.first_interior(); i < p.end_interior(); ++i) {
    worst = std::max(worst, std::abs(k1[i] * e2[i] - p.g_t_phiht[i]));
  }
  return worst;
}

namespace {

struct Ctx
{
  const CurveProfile & p;
  double tol;
  std::size_t i0, i1;
  std::vector<double> k1, k2, k3, d1, dd1, d2;

  Ctx(const CurveProfile & prof, double t) : p(prof), tol(t), i0(prof.first_interior()), i1(prof.end_interior())
  {
    const auto & f = p.frenet;
    const std::size_t n = p.size();
    const double h      = f.grid.step;
    k1  = f.order >= 2 ? f.k(1) : std::vector<double>(n, 0.0);
    k2  = f.order >= 3 ? f.k(2) : std::vector<double>(n, 0.0);
    k3  = f.order >= 4 ? f.k(3) : std::vector<double>(n, 0.0);
    d1  = central_diff(std::span<const double>(k1), h, 1);
    dd1 = central_diff(std::span<const double>(k1), h, 2);
    d2  = central_diff(std::span<const double>(k2), h, 1);
  }

  double g(std::size_t i) const { return p.g_t_phiht[i]; }
  double eta(std::size_t a, std::size_t i) const { return a <= p.frenet.eta.size() ? p.frenet.eta[a - 1][i] : 0.0; }
  const Vec & v(std::size_t a, std::size_t i) const { return p.frenet.v(a)[i]; }

  double max_over(const std::function<double(std::size_t)> & f) const
  {
    double worst = 0.0;
    for (std::size_t i = i0; i < i1; ++i) { worst = std::max(worst, std::abs(f(i))); }
    return worst;
  }

  double sign_of_eta(std::size_t a) const { return eta(a, i0) < 0.0 ? -1.0 : 1.0; }

  double max_k1() const
  {
    double m = 0.0;
    for (std::size_t i = i0; i < i1; ++i) { m = std::max(m, std::abs(k1[i])); }
    return m;
  }

  bool k1_constant() const { return max_over([&](std::size_t i) { return d1[i]; }) < tol * std::max(1.0, max_k1()); }

  TheoremCheck check(std::string name, const std::function<double(std::size_t)> & f) const
  {
    return TheoremCheck{std::move(name), max_over(f), tol};
  }
};

void require_order(const CurveProfile & p, TheoremId id, std::size_t lo, std::size_t hi)
{
  const std::size_t r = p.frenet.order;
  if (r < lo || r > hi) {
    std::ostringstream msg;
    msg << theorem_name(id) << " needs osculating order ";
    if (lo == hi) {
      msg << lo;
    } else if (hi == std::numeric_limits<std::size_t>::max()) {
      msg << ">= " << lo;
    } else {
      msg << lo << ".." << hi;
    }
    msg << ", curve has order " << r;
    throw OrderMismatch(msg.str());
  }
}

ClassificationReport require_condition(const CurveProfile & p, ConditionKind kind, const ClassifyOptions & opts,
                                       bool allow_zero_lambda)
{
  auto rep     = classify(p, kind, opts);
  const bool ok = allow_zero_lambda ? rep.max_residual < opts.tol : rep.verdict == Verdict::Holds;
  if (!ok) { throw ClassificationFailed(kind, rep.max_residual, rep.min_abs_lambda); }
  return rep;
}

constexpr std::size_t kAny = std::numeric_limits<std::size_t>::max();

void obstruction(const Ctx & c, TheoremReport & rep, const ClassifyOptions & opts)
{
  const auto & p  = c.p;
  const auto & nh = p.direct ? p.direct->nabla_t_h : p.formula->nabla_t_h;
  auto cond       = classify(p, ConditionKind::CParallelTangent, opts);
  rep.checks.push_back(c.check("tangent_component", [&](std::size_t i) {
    return nh[i].dot(c.v(1, i)) + c.k1[i] * c.k1[i];
  }));
  rep.checks.push_back(c.check("residual_bounded_by_k1_squared", [&](std::size_t i) {
    return std::max(0.0, c.k1[i] * c.k1[i] - cond.residual[i]);
  }));
  rep.condition = std::move(cond);
}

}  // namespace

TheoremReport verify_theorem(TheoremId id, const CurveProfile & p, double tol, const ClassifyOptions & opts_in)
{
  ClassifyOptions opts = opts_in;
  TheoremReport rep;
  rep.id = id;

  switch (id) {
  case TheoremId::T2_1: require_order(p, id, 2, kAny); break;
  case TheoremId::T2_3: require_order(p, id, 3, kAny); break;
  case TheoremId::T2_2:
  case TheoremId::T3_1:
  case TheoremId::T3_2: require_order(p, id, 2, 2); break;
  case TheoremId::T2_4:
  case TheoremId::T3_3:
  case TheoremId::T3_4: require_order(p, id, 3, 3); break;
  case TheoremId::T3_5:
  case TheoremId::T3_6: require_order(p, id, 4, kAny); break;
  }

  const Ctx c(p, tol);
  rep.checks.push_back(c.check("legendre", [&](std::size_t i) { return c.eta(1, i); }));
  const double sigma = c.sign_of_eta(2);
  rep.sign           = sigma;

  auto lambda_of = [&](ConditionKind kind, bool allow_zero) {
    rep.condition = require_condition(p, kind, opts, allow_zero);
    return rep.condition->lambda;
  };
  auto unit_norm = [&](std::size_t top) {
    rep.checks.push_back(c.check("unit_norm", [&, top](std::size_t i) {
      double s = 0.0;
      for (std::size_t a = 2; a <= top; ++a) { s += c.eta(a, i) * c.eta(a, i); }
      return s - 1.0;
    }));
  };
  auto xi_on_v2 = [&] {
    rep.checks.push_back(c.check("k1_eq_sigma_g", [&](std::size_t i) { return c.k1[i] - sigma * c.g(i); }));
    rep.checks.push_back(
        c.check("xi_eq_sigma_v2", [&](std::size_t i) { return (p.xi - sigma * c.v(2, i)).norm(); }));
  };
  auto k1_constant = [&] {
    rep.checks.push_back(c.check("k1_constant", [&](std::size_t i) { return c.d1[i]; }));
  };

  switch (id) {
  case TheoremId::T2_1:
  case TheoremId::T2_3: obstruction(c, rep, opts); break;

  case TheoremId::T2_2: {
    const auto lambda = lambda_of(ConditionKind::CParallelNormal, false);
    xi_on_v2();
    rep.checks.push_back(c.check("lambda", [&](std::size_t i) { return lambda[i] - sigma * c.d1[i]; }));
    break;
  }

  case TheoremId::T2_4: {
    const auto lambda = lambda_of(ConditionKind::CParallelNormal, false);
    if (c.k1_constant()) {
      rep.branch         = "k1 constant";
      const double tau   = c.sign_of_eta(3);
      rep.sign           = tau;
      k1_constant();
      rep.checks.push_back(c.check("k2", [&](std::size_t i) {
        return c.k2[i] - std::sqrt(std::max(0.0, 1.0 + 2.0 * p.g_t_ht[i] + p.g_ht_ht[i]));
      }));
      rep.checks.push_back(c.check("lambda", [&](std::size_t i) { return lambda[i] - tau * c.k1[i] * c.k2[i]; }));
      rep.checks.push_back(c.check("xi_eq_sigma_v3", [&](std::size_t i) { return (p.xi - tau * c.v(3, i)).norm(); }));
    } else {
      rep.branch         = "k1 non-constant";
      const double floor = tol * std::max(1.0, c.max_k1());
      auto where_moving  = [&](std::function<double(std::size_t)> f) {
        return [&, f](std::size_t i) { return std::abs(c.d1[i]) > floor ? f(i) : 0.0; };
      };
      rep.checks.push_back(c.check("k2", where_moving([&](std::size_t i) {
        const double g = c.g(i);
        return c.k2[i] - std::abs(c.d1[i]) * std::sqrt(std::max(0.0, c.k1[i] * c.k1[i] - g * g)) /
                             (c.k1[i] * std::abs(g));
      })));
      rep.checks.push_back(
          c.check("lambda", [&](std::size_t i) { return lambda[i] - c.d1[i] * c.k1[i] / c.g(i); }));
      rep.checks.push_back(c.check("xi_decomposition", where_moving([&](std::size_t i) {
        const double g = c.g(i);
        return (p.xi - (g / c.k1[i]) * c.v(2, i) - (c.k2[i] * g / c.d1[i]) * c.v(3, i)).norm();
      })));
      unit_norm(3);
    }
    break;
  }

  case TheoremId::T3_1: {
    const auto lambda = lambda_of(ConditionKind::CProperTangent, false);
    k1_constant();
    xi_on_v2();
    rep.checks.push_back(c.check("lambda", [&](std::size_t i) { return lambda[i] - std::pow(c.g(i), 3); }));
    break;
  }

  case TheoremId::T3_2: {
    const auto lambda = lambda_of(ConditionKind::CProperNormal, true);
    if (c.max_over([&](std::size_t i) { return c.dd1[i]; }) < tol * std::max(1.0, c.max_k1())) {
      rep.branch     = "k1 affine";
      rep.degenerate = true;
      rep.checks.push_back(c.check("k1_affine", [&](std::size_t i) { return c.dd1[i]; }));
      rep.checks.push_back(c.check("lambda_zero", [&](std::size_t i) { return lambda[i]; }));
    } else {
      rep.branch = "k1 = sigma g";
      xi_on_v2();
      rep.checks.push_back(c.check("lambda", [&](std::size_t i) { return lambda[i] + sigma * c.dd1[i]; }));
    }
    break;
  }

  case TheoremId::T3_3:
  case TheoremId::T3_5: {
    const auto lambda = lambda_of(ConditionKind::CProperTangent, false);
    const bool four   = id == TheoremId::T3_5;
    k1_constant();
    rep.checks.push_back(c.check("lambda", [&](std::size_t i) {
      return lambda[i] - c.k1[i] * c.k1[i] * (c.k1[i] * c.k1[i] + c.k2[i] * c.k2[i]) / c.g(i);
    }));
    rep.checks.push_back(c.check("xi_decomposition", [&](std::size_t i) {
      Vec x = (c.g(i) / c.k1[i]) * c.v(2, i) - (c.k1[i] * c.d2[i] / lambda[i]) * c.v(3, i);
      if (four) { x -= (c.k1[i] * c.k2[i] * c.k3[i] / lambda[i]) * c.v(4, i); }
      return (p.xi - x).norm();
    }));
    unit_norm(four ? 4 : 3);
    break;
  }

  case TheoremId::T3_4:
  case TheoremId::T3_6: {
    const auto lambda = lambda_of(ConditionKind::CProperNormal, false);
    const bool four   = id == TheoremId::T3_6;
    rep.checks.push_back(c.check("lambda", [&](std::size_t i) {
      return lambda[i] - (c.k1[i] * c.k1[i] * c.k2[i] * c.k2[i] - c.k1[i] * c.dd1[i]) / c.g(i);
    }));
    rep.checks.push_back(c.check("xi_decomposition", [&](std::size_t i) {
      Vec x = (c.g(i) / c.k1[i]) * c.v(2, i) - ((2.0 * c.d1[i] * c.k2[i] + c.k1[i] * c.d2[i]) / lambda[i]) * c.v(3, i);
      if (four) { x -= (c.k1[i] * c.k2[i] * c.k3[i] / lambda[i]) * c.v(4, i); }
      return (p.xi - x).norm();
    }));
    unit_norm(four ? 4 : 3);
    break;
  }
  }

  rep.pass = !rep.degenerate && std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto & k) { return k.pass(); });
  return rep;
}

TheoremReport verify_theorem(TheoremId id, const Curve & c, double tol, const ClassifyOptions & opts)
{
  return verify_theorem(id, profile(c), tol, opts);
}

}  // namespace ccurves

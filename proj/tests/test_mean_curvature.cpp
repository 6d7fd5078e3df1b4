#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ccurves/constructor.hpp"
#include "ccurves/mean_curvature.hpp"

using namespace ccurves;

namespace {

const double r2 = std::sqrt(2.0) / 2.0;

double interior_gap(const std::vector<Vec> & a, const std::vector<Vec> & b)
{
  double w = 0.0;
  for (std::size_t i = kEdgeSamples; i + kEdgeSamples < a.size(); ++i) { w = std::max(w, (a[i] - b[i]).norm()); }
  return w;
}

Curve varying_rkmn()
{
  FrenetInitialData d;
  d.manifold   = std::make_shared<const FrameManifold>(builtin_rkmn());
  d.p0         = Vec{{std::log(2.0), 0.0, 0.0}};
  d.frame0     = {Vec{{0.0, -r2, r2}}, Vec{{-1.0, 0.0, 0.0}}, Vec{{0.0, -r2, -r2}}};
  const std::vector<std::string> s{"s"};
  d.curvatures = {Expr::parse("1 + 0.5*sin(s)", s), Expr::parse("0.7 + 0.2*s", s)};
  d.s1         = 1.0;
  d.step       = 1e-3;
  return integrate_frenet_curve(d).curve;
}

Curve varying_e2()
{
  FrenetInitialData d;
  d.manifold   = std::make_shared<const FrameManifold>(builtin_e2(2.0));
  d.frame0     = {Vec{{r2, r2, 0.0}}, Vec{{-r2, r2, 0.0}}, Vec{{0.0, 0.0, 1.0}}};
  const std::vector<std::string> s{"s"};
  d.curvatures = {Expr::parse("2 - cos(2*s)", s), Expr::parse("1 + s^2", s)};
  d.s1         = 1.0;
  d.step       = 1e-3;
  return integrate_frenet_curve(d).curve;
}

}  // namespace

TEST_CASE("mean vectors: closed forms on the first example")
{
  const Curve c = build_example_1(0, 1, 1e-3);
  const auto f  = frenet(c);
  const auto mv = mean_vectors_formula(f);
  const Vec T{{0.0, -r2, r2}}, v2{{-1.0, 0.0, 0.0}}, v3{{0.0, -r2, -r2}};
  for (std::size_t i = kEdgeSamples; i + kEdgeSamples < c.size(); ++i) {
    CHECK((mv.nabla_t_h[i] - (-T + v3)).norm() < 1e-6);
    CHECK((mv.nabla_perp_h[i] - v3).norm() < 1e-6);
    CHECK((mv.delta_h[i] - 2.0 * v2).norm() < 1e-6);
    CHECK((mv.delta_perp_h[i] - v2).norm() < 1e-6);
  }
}

TEST_CASE("mean vectors: formula and direct routes agree")
{
  for (const Curve & c : {build_example_1(0, 1, 1e-3), varying_rkmn(), varying_e2(),
                          build_e2_helix(2.0, 3 * std::numbers::pi / 4, 0, 1, 1e-3),
                          build_e2_circle(5.0, 0.6 * std::numbers::pi, 0, 1, 1e-3)}) {
    const auto F = mean_vectors_formula(frenet(c));
    const auto D = mean_vectors_direct(c);
    CHECK(interior_gap(F.nabla_t_h, D.nabla_t_h) < 1e-4);
    CHECK(interior_gap(F.nabla_perp_h, D.nabla_perp_h) < 1e-4);
    CHECK(interior_gap(F.delta_h, D.delta_h) < 1e-3);
    CHECK(interior_gap(F.delta_perp_h, D.delta_perp_h) < 1e-3);
  }
}

TEST_CASE("mean vectors: normal parts are orthogonal to T")
{
  for (const Curve & c : {varying_rkmn(), varying_e2()}) {
    const auto F = mean_vectors_formula(frenet(c));
    const auto D = mean_vectors_direct(c);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const Vec & t = c.tangent()[i];
      CHECK(std::abs(F.nabla_perp_h[i].dot(t)) < 1e-8);
      CHECK(std::abs(F.delta_perp_h[i].dot(t)) < 1e-8);
      CHECK(std::abs(D.nabla_perp_h[i].dot(t)) < 1e-10);
      CHECK(std::abs(D.delta_perp_h[i].dot(t)) < 1e-10);
    }
  }
}

TEST_CASE("mean vectors: g(nabla_T H, T) = -k1^2")
{
  const Curve c = varying_e2();
  const auto f  = frenet(c);
  const auto F  = mean_vectors_formula(f);
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(std::abs(F.nabla_t_h[i].dot(c.tangent()[i]) + f.k(1)[i] * f.k(1)[i]) < 1e-8);
  }
}

TEST_CASE("mean vectors: geodesics are rejected")
{
  auto M = std::make_shared<const FrameManifold>(builtin_e2(2.0));
  const Grid g{0.0, 1e-2, 101};
  const Curve geo(M, g, {}, std::vector<Vec>(g.count, Vec::Unit(3, 2)));
  CHECK_THROWS_AS(mean_vectors_formula(frenet(geo)), GeodesicError);
  CHECK_THROWS_AS(mean_vectors_direct(geo), GeodesicError);
}

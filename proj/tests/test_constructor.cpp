#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ccurves/constructor.hpp"

using namespace ccurves;

namespace {

const double r2 = std::sqrt(2.0) / 2.0;
const std::vector<std::string> svar{"s"};

FrenetInitialData example_1_data(double s1, double step)
{
  FrenetInitialData d;
  d.manifold   = std::make_shared<const FrameManifold>(builtin_rkmn());
  d.p0         = Vec{{std::log(2.0), 0.0, 0.0}};
  d.frame0     = {Vec{{0.0, -r2, r2}}, Vec{{-1.0, 0.0, 0.0}}, Vec{{0.0, -r2, -r2}}};
  d.curvatures = {Expr::parse("1", svar), Expr::parse("1", svar)};
  d.s1         = s1;
  d.step       = step;
  return d;
}

double frame_defect(const FrenetApparatus & f, std::size_t i)
{
  double w = 0.0;
  for (std::size_t a = 1; a <= f.order; ++a) {
    for (std::size_t b = 1; b <= f.order; ++b) {
      w = std::max(w, std::abs(f.v(a)[i].dot(f.v(b)[i]) - (a == b ? 1.0 : 0.0)));
    }
  }
  return w;
}

}  // namespace

TEST_CASE("integrate: reproduces the first example")
{
  const auto ic = integrate_frenet_curve(example_1_data(1.0, 1e-3));
  const Curve ex1 = build_example_1(0, 1, 1e-3);
  REQUIRE(ic.curve.size() == ex1.size());
  for (std::size_t i = 0; i < ex1.size(); ++i) {
    CHECK((ic.curve.coords()[i] - ex1.coords()[i]).norm() < 1e-6);
    CHECK((ic.curve.tangent()[i] - ex1.tangent()[i]).norm() < 1e-6);
  }
}

TEST_CASE("integrate: recovered apparatus matches the prescription")
{
  FrenetInitialData d = example_1_data(1.0, 1e-3);
  d.curvatures        = {Expr::parse("1 + 0.5*sin(s)", svar), Expr::parse("0.7 + 0.2*s", svar)};
  const auto ic       = integrate_frenet_curve(d);
  const auto f        = frenet(ic.curve);
  REQUIRE(f.order == 3);
  for (std::size_t i = 0; i < ic.curve.size(); ++i) {
    const double s = ic.curve.grid()[i];
    CHECK(std::abs(f.k(1)[i] - (1 + 0.5 * std::sin(s))) < 1e-6);
    CHECK(std::abs(f.k(2)[i] - (0.7 + 0.2 * s)) < 1e-6);
    for (std::size_t a = 1; a <= 3; ++a) { CHECK((f.v(a)[i] - ic.frenet.v(a)[i]).norm() < 1e-6); }
  }
}

TEST_CASE("integrate: E(2) geodesic and long-run drift")
{
  FrenetInitialData d;
  d.manifold    = std::make_shared<const FrameManifold>(builtin_e2(2.0));
  d.frame0      = {Vec::Unit(3, 2)};
  d.s1          = 2.0;
  const auto ic = integrate_frenet_curve(d);
  CHECK(ic.frenet.order == 1);
  for (const auto & t : ic.curve.tangent()) { CHECK((t - Vec::Unit(3, 2)).norm() < 1e-12); }

  FrenetInitialData w;
  w.manifold    = std::make_shared<const FrameManifold>(builtin_e2(2.0));
  w.frame0      = {Vec{{r2, r2, 0.0}}, Vec{{-r2, r2, 0.0}}, Vec::Unit(3, 2)};
  w.curvatures  = {Expr::parse("2 - cos(2*s)", svar), Expr::parse("1 + 0.1*s", svar)};
  w.s1          = 10.0;
  w.step        = 1e-3;
  const auto lw = integrate_frenet_curve(w);
  double worst  = 0.0;
  for (std::size_t i = 0; i < lw.curve.size(); ++i) { worst = std::max(worst, frame_defect(lw.frenet, i)); }
  CHECK(worst < 1e-7);

  const auto rk = integrate_frenet_curve(example_1_data(10.0, 1e-3));
  worst         = 0.0;
  for (std::size_t i = 0; i < rk.curve.size(); ++i) { worst = std::max(worst, frame_defect(rk.frenet, i)); }
  CHECK(worst < 1e-7);
}

TEST_CASE("integrate: constant-tangent E(2) curve needs its second curvature")
{
  // T = (cos t, sin t, 0) with t = -pi/4 on c2 = 2: k1 = 1, v2 = xi, k2 = 1, v3 = (sin t, -cos t, 0)
  FrenetInitialData d;
  d.manifold    = std::make_shared<const FrameManifold>(builtin_e2(2.0));
  d.frame0      = {Vec{{r2, -r2, 0.0}}, Vec::Unit(3, 2), Vec{{-r2, -r2, 0.0}}};
  d.curvatures  = {Expr::parse("1", svar), Expr::parse("1", svar)};
  d.s1          = 10.0;
  const auto ic = integrate_frenet_curve(d);
  for (const auto & t : ic.curve.tangent()) { CHECK((t - d.frame0[0]).norm() < 1e-9); }

  // dropping k2 prescribes a different curve whose tangent turns
  d.frame0.pop_back();
  d.curvatures.pop_back();
  const auto wrong = integrate_frenet_curve(d);
  CHECK((wrong.curve.tangent().back() - d.frame0[0]).norm() > 0.1);
}

TEST_CASE("integrate: input errors")
{
  auto d = example_1_data(1.0, 1e-3);
  SUBCASE("non-orthonormal frame")
  {
    d.frame0[1] = Vec{{-1.0, 1e-9, 0.0}};
    CHECK_THROWS_AS(integrate_frenet_curve(d), CurveError);
  }
  SUBCASE("curvature count")
  {
    d.curvatures.pop_back();
    CHECK_THROWS_AS(integrate_frenet_curve(d), CurveError);
  }
  SUBCASE("non-positive curvature")
  {
    d.curvatures[1] = Expr::parse("0.5 - s", svar);
    CHECK_THROWS_WITH_AS(integrate_frenet_curve(d), doctest::Contains("k2"), CurveError);
  }
  SUBCASE("missing initial point")
  {
    d.p0.reset();
    CHECK_THROWS_AS(integrate_frenet_curve(d), CurveError);
  }
}

TEST_CASE("integrate: a curve fed its own apparatus comes back")
{
  const auto first = integrate_frenet_curve(example_1_data(1.0, 1e-3));
  const auto f     = frenet(first.curve);
  FrenetInitialData again;
  again.manifold = first.curve.manifold_ptr();
  again.p0       = first.curve.coords().front();
  for (std::size_t a = 1; a <= f.order; ++a) { again.frame0.push_back(f.v(a).front()); }
  // re-orthonormalise the sampled frame to the 1e-12 tolerance of the integrator
  const auto gs = gram_schmidt(again.frame0);
  again.frame0  = gs.basis;
  for (std::size_t a = 1; a < f.order; ++a) { again.curvatures.push_back(Expr::literal(f.k(a)[f.k(a).size() / 2])); }
  const auto second = integrate_frenet_curve(again);
  for (std::size_t i = 0; i < first.curve.size(); ++i) {
    CHECK((first.curve.coords()[i] - second.curve.coords()[i]).norm() < 1e-6);
    CHECK((first.curve.tangent()[i] - second.curve.tangent()[i]).norm() < 1e-6);
  }
}

TEST_CASE("E(2) builders: hypothesis")
{
  CHECK_THROWS_AS(build_e2_circle(2.0, std::numbers::pi / 4, 0, 1, 1e-3), HypothesisViolation);
  CHECK_THROWS_AS(build_e2_helix(2.0, std::numbers::pi / 2, 0, 1, 1e-3), HypothesisViolation);
  CHECK_NOTHROW(build_e2_helix(2.0, 3 * std::numbers::pi / 4, 0, 1, 1e-3));
  CHECK(parse_family("circle") == Family::Circle);
  CHECK(family_name(Family::Helix) == "helix");
  CHECK_FALSE(parse_family("line"));
}

TEST_CASE("sweep: ordering, errors and CSV")
{
  const std::vector<double> c2s{1.0, 2.0};
  const std::vector<double> ths{3 * std::numbers::pi / 4, std::numbers::pi / 4, 0.6 * std::numbers::pi};
  const std::vector<ConditionKind> kinds{ConditionKind::CProperTangent, ConditionKind::CParallelNormal};
  const auto cells = sweep(Family::Helix, c2s, ths, kinds);
  REQUIRE(cells.size() == 12);
  std::size_t n = 0;
  for (double c2 : c2s) {
    for (double th : ths) {
      for (auto k : kinds) {
        CHECK(cells[n].c2 == c2);
        CHECK(cells[n].theta == th);
        CHECK(cells[n].kind == k);
        const bool bad = th == std::numbers::pi / 4;
        CHECK(cells[n].report.has_value() == !bad);
        CHECK(cells[n].error.empty() == !bad);
        ++n;
      }
    }
  }
  CHECK(cells[0].report->verdict == Verdict::Holds);
  CHECK(cells[1].report->verdict == Verdict::Fails);

  std::ostringstream a, b;
  write_sweep_csv(a, cells);
  write_sweep_csv(b, sweep(Family::Helix, c2s, ths, kinds));
  CHECK(a.str() == b.str());
  std::istringstream lines(a.str());
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "family,c2,theta,kind,verdict,lambda_min,lambda_max,max_residual");
  std::getline(lines, row);
  CHECK(row.rfind("helix,1,2.3561944901923448,c-proper-tangent,holds,", 0) == 0);
  std::getline(lines, row);
  std::getline(lines, row);
  CHECK(row == "helix,1,0.78539816339744828,c-proper-tangent,error,,,");

  CHECK(sweep(Family::Circle, c2s, ths, {}).empty());
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "ccurves/manifold.hpp"
#include "ccurves/manifold_io.hpp"

using namespace ccurves;
using nlohmann::json;

namespace {

const std::string data_dir = CCURVES_TEST_DATA_DIR;

const InvariantCheck * find(const std::vector<InvariantCheck> & v, const std::string & name)
{
  for (const auto & c : v) {
    if (c.name == name) { return &c; }
  }
  return nullptr;
}

std::vector<Vec> random_unit_directions(std::size_t m, std::size_t count, std::uint64_t seed)
{
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<Vec> out;
  for (std::size_t k = 0; k < count; ++k) {
    Vec v(static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < v.size(); ++i) { v[i] = nd(gen); }
    out.push_back(v.normalized());
  }
  return out;
}

}  // namespace

TEST_CASE("rkmn: table values")
{
  const auto M = builtin_rkmn();
  CHECK(M.dim() == 3);
  CHECK(M.xi_index() == 0);
  CHECK_FALSE(M.homogeneous());

  const std::vector<double> p{std::log(2.0), 0.0, 0.0};
  const auto S = M.structure_at(p);
  // nabla_X xi on phi X
  CHECK(S.connection(1, 0, 2) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(S.h(0, 0) == 0.0);
  CHECK(S.h(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(S.h(2, 2) == doctest::Approx(-1.0).epsilon(1e-15));

  const auto S0 = M.structure_at(std::vector<double>{0.0, 0.0, 0.0});
  // nabla_{phi X} X on xi
  CHECK(S0.connection(2, 1, 0) == doctest::Approx(-0.75).epsilon(1e-15));

  const Mat F = M.frame_at(p);
  CHECK(F(0, 0) == 1.0);
  CHECK(F(1, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(F(2, 2) == 1.0);

  REQUIRE(M.metadata());
  CHECK(M.metadata()->nu.eval(std::vector<double>{0, 0, 0}) == 2.0);
  CHECK(M.metadata()->kappa.eval(std::vector<double>{0, 0, 0}) == doctest::Approx(1.0 - 1.0 / 16.0));
}

TEST_CASE("e2: table values")
{
  const auto M = builtin_e2(2.0);
  CHECK(M.homogeneous());
  CHECK(M.xi_index() == 2);
  const auto S = M.structure_at({});
  CHECK(S.connection(0, 1, 2) == 0.0);
  for (double c2 : {0.5, 1.0, 2.0, 5.0}) {
    const auto E = builtin_e2(c2).structure_at({});
    CHECK(E.h(0, 0) == -c2 / 2);
    CHECK(E.h(1, 1) == c2 / 2);
    CHECK(E.h(2, 2) == 0.0);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t k = 0; k < 3; ++k) { CHECK(E.connection(i, j, k) == -E.connection(i, k, j)); }
      }
    }
  }
  CHECK_THROWS_AS(builtin_e2(0.0), ManifoldError);
  CHECK_THROWS_AS(builtin_e2(-1.0), ManifoldError);
  // homogeneous: the point is irrelevant
  const auto A = M.structure_at(std::vector<double>{1.0, 2.0, 3.0});
  CHECK(A.omega == S.omega);
}

TEST_CASE("shipped specs equal the builtins")
{
  CHECK(load_manifold_file(data_dir + "/rkmn.json") == builtin_rkmn());
  CHECK(load_manifold_file(data_dir + "/e2.json") == builtin_e2(2.0));
  CHECK(load_manifold_file(data_dir + "/e2.json", {{"c2", 5.0}}) == builtin_e2(5.0));
  CHECK_THROWS_AS(load_manifold_file(data_dir + "/e2.json", {{"c3", 1.0}}), ManifoldError);
}

TEST_CASE("to_json round trip")
{
  for (const auto & M : {builtin_rkmn(), builtin_e2(0.5), builtin_e2(5.0)}) {
    const json doc = to_json(M);
    CHECK(load_manifold(doc) == M);
    CHECK(load_manifold(json::parse(doc.dump())) == M);
  }
}

TEST_CASE("load_manifold: validation errors")
{
  json doc = to_json(builtin_e2(2.0));

  SUBCASE("even dimension")
  {
    doc["dim"] = 4;
    CHECK_THROWS_WITH_AS(load_manifold(doc), doctest::Contains("odd"), ManifoldError);
  }
  SUBCASE("phi identity")
  {
    doc["phi"][0][1] = -2.0;
    CHECK_THROWS_AS(load_manifold(doc), ManifoldError);
  }
  SUBCASE("dimension mismatch names the field")
  {
    doc["h"][1] = json::array({"0", "1"});
    try {
      (void)load_manifold(doc);
      FAIL("accepted");
    } catch (const ManifoldError & e) {
      CHECK(e.path() == "h[1]");
    }
  }
  SUBCASE("parse error names the field")
  {
    doc["omega"][0][1][2] = "1 +* 2";
    try {
      (void)load_manifold(doc);
      FAIL("accepted");
    } catch (const ManifoldError & e) {
      CHECK(e.path() == "omega[0][1][2]");
    }
  }
  SUBCASE("unknown identifier")
  {
    doc["h"][0][0] = "w";
    CHECK_THROWS_AS(load_manifold(doc), ManifoldError);
  }
  SUBCASE("coordinates without a frame")
  {
    doc["coords"] = json::array({"x", "y", "z"});
    CHECK_THROWS_AS(load_manifold(doc), ManifoldError);
  }
  SUBCASE("xi index out of range")
  {
    doc["xi_index"] = 3;
    CHECK_THROWS_AS(load_manifold(doc), ManifoldError);
  }
}

TEST_CASE("verify_structure: builtins pass")
{
  const auto pts = random_points(3, 100, 0);
  const auto rk  = verify_structure(builtin_rkmn(), pts, 1e-6, 1e-4);
  CHECK(rk.pass);
  CHECK(rk.points.size() == 100);
  CHECK(rk.non_sasakian);
  CHECK(rk.min_h_norm > 0.0);
  for (const auto & p : rk.points) { CHECK(p.h_norm > 0.0); }
  REQUIRE(find(rk.summary, "torsion_free"));
  CHECK(find(rk.summary, "torsion_free")->max_violation < 1e-6);

  for (double c2 : {0.5, 1.0, 2.0, 5.0}) {
    const auto rep = verify_structure(builtin_e2(c2), {{}}, 1e-10);
    CHECK(rep.pass);
    CHECK(rep.non_sasakian);
    CHECK(find(rep.summary, "torsion_free") == nullptr);
  }
}

TEST_CASE("verify_structure: injected faults are flagged")
{
  SUBCASE("connection perturbed")
  {
    json doc              = to_json(builtin_e2(2.0));
    doc["omega"][0][1][2] = "0.1";
    const auto rep        = verify_structure(load_manifold(doc), {{}}, 1e-10);
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(find(rep.summary, "metric_compatibility")->pass);
  }
  SUBCASE("h not anti-commuting")
  {
    json doc       = to_json(builtin_e2(2.0));
    doc["h"][1][1] = "-1";
    const auto rep = verify_structure(load_manifold(doc), {{}}, 1e-10);
    CHECK_FALSE(find(rep.summary, "h_phi_anticommute")->pass);
  }
  SUBCASE("frame field inconsistent with the connection")
  {
    json doc           = to_json(builtin_rkmn());
    doc["frame"][1][0] = "z";
    const auto rep     = verify_structure(load_manifold(doc), random_points(3, 10, 1), 1e-6);
    CHECK_FALSE(find(rep.summary, "torsion_free")->pass);
  }
  SUBCASE("Sasakian-like h = 0 is reported")
  {
    json doc = to_json(builtin_e2(2.0));
    doc["h"] = json::array({json::array({"0", "0", "0"}), json::array({"0", "0", "0"}), json::array({"0", "0", "0"})});
    const auto rep = verify_structure(load_manifold(doc), {{}}, 1e-10);
    CHECK_FALSE(rep.non_sasakian);
  }
}

TEST_CASE("verify_grad_xi: closed forms and random directions")
{
  const auto e2 = builtin_e2(2.0);
  auto rep      = verify_grad_xi(e2, {{{}, Vec::Unit(3, 0)}, {{}, Vec::Unit(3, 2)}}, 1e-12);
  CHECK(rep.pass);
  CHECK(rep.max_violation == 0.0);

  const auto rk = builtin_rkmn();
  const std::vector<double> p{std::log(2.0), 0.0, 0.0};
  const auto S  = rk.structure_at(p);
  const Vec lhs = S.nabla(Vec::Unit(3, 1), rk.xi());
  CHECK((lhs - Vec{{0.0, 0.0, -2.0}}).norm() < 1e-14);

  for (const auto * M : {&e2, &rk}) {
    std::vector<GradXiSample> samples;
    const auto dirs = random_unit_directions(3, 20, 11);
    const auto pts  = random_points(M->has_coords() ? 3 : 0, 20, 12);
    for (std::size_t k = 0; k < 20; ++k) { samples.push_back({pts[k], dirs[k]}); }
    CHECK(verify_grad_xi(*M, samples, 1e-8).pass);
  }
}

TEST_CASE("random_points: seeded and bounded")
{
  const auto a = random_points(3, 50, 42);
  const auto b = random_points(3, 50, 42);
  CHECK(a == b);
  CHECK(a != random_points(3, 50, 43));
  for (const auto & p : a) {
    for (double x : p) {
      CHECK(x >= -1.0);
      CHECK(x < 1.0);
    }
  }
}

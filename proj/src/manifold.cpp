#include "ccurves/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "ccurves/manifold_io.hpp"

namespace ccurves {

Vec StructureValues::nabla(const Vec & u, const Vec & v) const
{
  Vec out = Vec::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    if (u[i] == 0.0) { continue; }
    for (std::size_t j = 0; j < dim; ++j) {
      const double uv = u[i] * v[j];
      if (uv == 0.0) { continue; }
      for (std::size_t k = 0; k < dim; ++k) { out[k] += uv * connection(i, j, k); }
    }
  }
  return out;
}

namespace {

constexpr double kPhiTol = 1e-12;

std::string idx(const std::string & field, std::initializer_list<std::size_t> ids)
{
  std::string s = field;
  for (auto i : ids) { s += "[" + std::to_string(i) + "]"; }
  return s;
}

void check_vars(const Expr & e, const std::set<std::string> & allowed, const std::string & path)
{
  for (const auto & v : e.variables()) {
    if (!allowed.contains(v)) { throw ManifoldError(path, "variable '" + v + "' is not a coordinate"); }
  }
}

}  // namespace

FrameManifold::FrameManifold(Definition def) : def_(std::move(def))
{
  const std::size_t m = def_.dim;
  if (m < 3 || m % 2 == 0) {
    throw ManifoldError("dim", "dimension must be odd and at least 3, got " + std::to_string(m));
  }
  if (def_.omega.size() != m * m * m) { throw ManifoldError("omega", "expected m x m x m entries"); }
  if (def_.h.size() != m * m) { throw ManifoldError("h", "expected m x m entries"); }
  if (def_.phi.rows() != static_cast<Eigen::Index>(m) || def_.phi.cols() != static_cast<Eigen::Index>(m)) {
    throw ManifoldError("phi", "expected an m x m matrix");
  }
  if (!def_.phi.allFinite()) { throw ManifoldError("phi", "non-finite entry"); }
  if (def_.xi_index >= m) { throw ManifoldError("xi_index", "out of range"); }

  const std::set<std::string> allowed(def_.coords.begin(), def_.coords.end());
  if (allowed.size() != def_.coords.size()) { throw ManifoldError("coords", "duplicate coordinate name"); }
  if (!def_.coords.empty()) {
    if (def_.coords.size() != m) { throw ManifoldError("coords", "need exactly dim coordinate names"); }
    if (!def_.frame) { throw ManifoldError("frame", "required when coordinates are given"); }
    if (def_.frame->size() != m * m) { throw ManifoldError("frame", "expected m x m entries"); }
  } else if (def_.frame) {
    throw ManifoldError("frame", "must be absent when no coordinates are declared");
  }

  bool varying = false;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        const auto & e = omega(i, j, k);
        check_vars(e, allowed, idx("omega", {i, j, k}));
        varying = varying || !e.is_constant();
      }
      check_vars(h(i, j), allowed, idx("h", {i, j}));
      varying = varying || !h(i, j).is_constant();
      if (def_.frame) { check_vars(frame(i, j), allowed, idx("frame", {i, j})); }
    }
  }
  homogeneous_ = !varying;

  // Contact metric identities on the constant matrix phi.
  const Vec e     = xi();
  const Mat I     = Mat::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  const Mat want  = -I + e * e.transpose();
  const double sq = (def_.phi * def_.phi - want).cwiseAbs().maxCoeff();
  if (sq > kPhiTol) {
    throw ManifoldError("phi", "phi^2 != -I + eta (x) xi (max deviation " + std::to_string(sq) + ")");
  }
  if ((def_.phi * e).cwiseAbs().maxCoeff() > kPhiTol) { throw ManifoldError("phi", "phi xi != 0"); }
  if ((def_.phi + def_.phi.transpose()).cwiseAbs().maxCoeff() > kPhiTol) {
    throw ManifoldError("phi", "phi is not skew-adjoint for the frame metric");
  }

  if (homogeneous_) { constant_ = structure_at({}); }
}

Vec FrameManifold::xi() const
{
  Vec e = Vec::Zero(static_cast<Eigen::Index>(dim()));
  e[static_cast<Eigen::Index>(xi_index())] = 1.0;
  return e;
}

StructureValues FrameManifold::structure_at(std::span<const double> p) const
{
  if (constant_) { return *constant_; }
  const std::size_t m = dim();
  if (!homogeneous_ && p.size() != def_.coords.size()) {
    throw Error("structure_at: expected " + std::to_string(def_.coords.size()) + " coordinates, got " +
                std::to_string(p.size()));
  }
  StructureValues out;
  out.dim = m;
  out.omega.resize(m * m * m);
  for (std::size_t n = 0; n < out.omega.size(); ++n) { out.omega[n] = def_.omega[n].eval(p); }
  out.h = Mat(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      out.h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h(i, j).eval(p);
    }
  }
  return out;
}

Mat FrameManifold::frame_at(std::span<const double> p) const
{
  if (!def_.frame) { throw Error("manifold '" + name() + "' has no coordinate frame"); }
  if (p.size() != def_.coords.size()) { throw Error("frame_at: wrong number of coordinates"); }
  const auto m = static_cast<Eigen::Index>(dim());
  Mat F(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      F(i, j) = frame(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).eval(p);
    }
  }
  return F;
}

bool FrameManifold::operator==(const FrameManifold & o) const
{
  const auto & a = def_;
  const auto & b = o.def_;
  if (a.name != b.name || a.dim != b.dim || a.coords != b.coords || a.xi_index != b.xi_index) { return false; }
  if (a.phi != b.phi || a.omega != b.omega || a.h != b.h) { return false; }
  if (a.frame.has_value() != b.frame.has_value() || (a.frame && *a.frame != *b.frame)) { return false; }
  if (a.metadata.has_value() != b.metadata.has_value()) { return false; }
  if (a.metadata) {
    return a.metadata->kappa == b.metadata->kappa && a.metadata->mu == b.metadata->mu &&
           a.metadata->nu == b.metadata->nu;
  }
  return true;
}

FrameManifold builtin_rkmn()
{
  ManifoldText t;
  t.name   = "rkmn";
  t.dim    = 3;
  t.coords = {"x", "y", "z"};
  t.frame  = std::vector<std::vector<std::string>>{
    {"1", "0", "2*y"},
    {"0", "1", "(1/4)*exp(2*x) - y^2"},
    {"0", "0", "1"},
  };
  // frame order (xi, X, phi X) = (e1, e2, e3)
  t.omega = {
    {{"0", "0", "0"}, {"0", "0", "-exp(2*x)/4 - 1"}, {"0", "1 + exp(2*x)/4", "0"}},
    {{"0", "0", "-exp(2*x)/4 - 1"}, {"0", "0", "2*y"}, {"exp(2*x)/4 + 1", "-2*y", "0"}},
    {{"0", "1 - exp(2*x)/4", "0"}, {"exp(2*x)/4 - 1", "0", "0"}, {"0", "0", "0"}},
  };
  t.phi      = {{0, 0, 0}, {0, 0, -1}, {0, 1, 0}};
  t.xi_index = 0;
  t.h        = {{"0", "0", "0"}, {"0", "exp(2*x)/4", "0"}, {"0", "0", "-exp(2*x)/4"}};
  t.metadata = std::array<std::string, 3>{"1 - exp(4*x)/16", "2*(1 + exp(2*x)/4)", "2"};
  return build_manifold(t);
}

FrameManifold builtin_e2(double c2)
{
  if (!(c2 > 0.0) || !std::isfinite(c2)) { throw ManifoldError("c2", "structure constant must be positive"); }
  ManifoldText t;
  t.name = "e2";
  t.dim  = 3;
  // frame order (X, phi X, xi) = (e1, e2, e3)
  t.omega = {
    {{"0", "0", "0"}, {"0", "0", "(-c2 + 2)/2"}, {"0", "-(-c2 + 2)/2", "0"}},
    {{"0", "0", "-(c2 + 2)/2"}, {"0", "0", "0"}, {"(c2 + 2)/2", "0", "0"}},
    {{"0", "(c2 - 2)/2", "0"}, {"-(c2 - 2)/2", "0", "0"}, {"0", "0", "0"}},
  };
  t.phi        = {{0, -1, 0}, {1, 0, 0}, {0, 0, 0}};
  t.xi_index   = 2;
  t.h          = {{"-c2/2", "0", "0"}, {"0", "c2/2", "0"}, {"0", "0", "0"}};
  t.parameters = {{"c2", c2}};
  return build_manifold(t);
}

StructureReport verify_structure(const FrameManifold & M, const std::vector<std::vector<double>> & points,
                                 double tol, double bracket_step)
{
  const std::size_t m   = M.dim();
  const auto mi         = static_cast<Eigen::Index>(m);
  const std::size_t xi  = M.xi_index();
  const Mat & phi       = M.phi();
  const Vec e           = M.xi();
  const Mat I           = Mat::Identity(mi, mi);

  StructureReport rep;
  rep.constant_checks.push_back({"phi_squared", (phi * phi - (-I + e * e.transpose())).cwiseAbs().maxCoeff()});
  rep.constant_checks.push_back({"phi_xi", (phi * e).cwiseAbs().maxCoeff()});
  rep.constant_checks.push_back({"phi_skew", (phi + phi.transpose()).cwiseAbs().maxCoeff()});
  bool pass = true;
  for (auto & c : rep.constant_checks) {
    c.pass = c.max_violation <= tol;
    pass   = pass && c.pass;
  }

  const bool torsion = M.has_coords();
  rep.min_h_norm     = std::numeric_limits<double>::infinity();

  for (const auto & p : points) {
    PointCheck pc;
    pc.point                = p;
    const StructureValues S = M.structure_at(p);
    const Mat & h           = S.h;

    double compat = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
          compat = std::max(compat, std::abs(S.connection(i, j, k) + S.connection(i, k, j)));
        }
      }
    }
    double contact = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const double d_eta = -0.5 * (S.connection(i, j, xi) - S.connection(j, i, xi));
        contact            = std::max(contact, std::abs(phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - d_eta));
      }
    }

    pc.checks.push_back({"h_symmetric", (h - h.transpose()).cwiseAbs().maxCoeff()});
    pc.checks.push_back({"h_xi", (h * e).cwiseAbs().maxCoeff()});
    pc.checks.push_back({"h_phi_anticommute", (h * phi + phi * h).cwiseAbs().maxCoeff()});
    pc.checks.push_back({"metric_compatibility", compat});
    pc.checks.push_back({"contact_form", contact});

    if (torsion) {
      // d/dx_b of the frame matrix, fourth-order central differences.
      const std::size_t n = p.size();
      std::vector<Mat> dF(n);
      for (std::size_t b = 0; b < n; ++b) {
        auto shifted = [&](double t) {
          std::vector<double> q = p;
          q[b] += t;
          return M.frame_at(q);
        };
        dF[b] = (shifted(-2 * bracket_step) - 8.0 * shifted(-bracket_step) + 8.0 * shifted(bracket_step) -
                 shifted(2 * bracket_step)) /
                (12.0 * bracket_step);
      }
      const Mat F = M.frame_at(p);
      Eigen::FullPivLU<Mat> lu(F);
      double torsion_err = 0.0;
      if (!lu.isInvertible()) {
        torsion_err = std::numeric_limits<double>::infinity();
      } else {
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = i + 1; j < m; ++j) {
            Vec bracket = Vec::Zero(mi);  // coordinate components of [E_i, E_j]
            for (std::size_t b = 0; b < n; ++b) {
              bracket += F(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(i)) * dF[b].col(static_cast<Eigen::Index>(j)) -
                         F(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(j)) * dF[b].col(static_cast<Eigen::Index>(i));
            }
            const Vec bracket_frame = lu.solve(bracket);
            Vec conn(mi);
            for (std::size_t k = 0; k < m; ++k) {
              conn[static_cast<Eigen::Index>(k)] = S.connection(i, j, k) - S.connection(j, i, k);
            }
            torsion_err = std::max(torsion_err, (conn - bracket_frame).cwiseAbs().maxCoeff());
          }
        }
      }
      pc.checks.push_back({"torsion_free", torsion_err});
    }

    pc.h_norm      = h.norm();
    rep.min_h_norm = std::min(rep.min_h_norm, pc.h_norm);
    pc.pass        = true;
    for (auto & c : pc.checks) {
      c.pass  = c.max_violation <= tol;
      pc.pass = pc.pass && c.pass;
    }
    pass = pass && pc.pass;
    rep.points.push_back(std::move(pc));
  }

  if (!rep.points.empty()) {
    rep.summary = rep.points.front().checks;
    for (const auto & pc : rep.points) {
      for (std::size_t c = 0; c < pc.checks.size(); ++c) {
        rep.summary[c].max_violation = std::max(rep.summary[c].max_violation, pc.checks[c].max_violation);
        rep.summary[c].pass          = rep.summary[c].pass && pc.checks[c].pass;
      }
    }
  } else {
    rep.min_h_norm = 0.0;
  }
  rep.non_sasakian = !rep.points.empty() && rep.min_h_norm > tol;
  rep.pass         = pass && !rep.points.empty();
  return rep;
}

GradXiReport verify_grad_xi(const FrameManifold & M, const std::vector<GradXiSample> & samples, double tol)
{
  GradXiReport rep;
  const Vec e     = M.xi();
  const Mat & phi = M.phi();
  for (const auto & smp : samples) {
    const StructureValues S = M.structure_at(smp.point);
    const Vec lhs           = S.nabla(smp.direction, e);
    const Vec rhs           = -phi * smp.direction - phi * (S.h * smp.direction);
    const double v          = (lhs - rhs).cwiseAbs().maxCoeff();
    rep.violations.push_back(v);
    rep.max_violation = std::max(rep.max_violation, v);
  }
  rep.pass = rep.max_violation <= tol;
  return rep;
}

std::vector<std::vector<double>> random_points(std::size_t n, std::size_t count, std::uint64_t seed, double lo,
                                               double hi)
{
  std::mt19937_64 gen(seed);
  std::vector<std::vector<double>> out(count, std::vector<double>(n));
  for (auto & p : out) {
    for (auto & x : p) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      x              = lo + (hi - lo) * u;
    }
  }
  return out;
}

}  // namespace ccurves

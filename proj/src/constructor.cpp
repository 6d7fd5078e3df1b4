#include "ccurves/constructor.hpp"

#include <cmath>
#include <future>
#include <ostream>
#include <sstream>

#include "ccurves/curve_io.hpp"

namespace ccurves {

FrameDriftError::FrameDriftError(double s, double drift)
    : Error([&] {
        std::ostringstream msg;
        msg << "frame orthonormality drift " << drift << " at s = " << s << " exceeds " << kFrameDriftLimit;
        return msg.str();
      }()),
      s_(s), drift_(drift)
{}

namespace {

double orthonormality_defect(std::span<const Vec> frame)
{
  double worst = 0.0;
  for (std::size_t a = 0; a < frame.size(); ++a) {
    for (std::size_t b = a; b < frame.size(); ++b) {
      worst = std::max(worst, std::abs(frame[a].dot(frame[b]) - (a == b ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace

IntegratedCurve integrate_frenet_curve(const FrenetInitialData & d)
{
  if (!d.manifold) { throw CurveError("integrate_frenet_curve: no manifold"); }
  const FrameManifold & M = *d.manifold;
  const auto m            = static_cast<Eigen::Index>(M.dim());
  const std::size_t r     = d.frame0.size();
  if (r == 0 || r > M.dim()) { throw CurveError("initial frame must hold between 1 and dim vectors"); }
  if (d.curvatures.size() + 1 != r) {
    throw CurveError("an initial frame of " + std::to_string(r) + " vectors needs " + std::to_string(r - 1) +
                     " curvature functions");
  }
  for (const auto & v : d.frame0) {
    if (v.size() != m) { throw CurveError("initial frame vector has wrong dimension"); }
  }
  if (orthonormality_defect(d.frame0) > 1e-12) { throw CurveError("initial frame is not orthonormal within 1e-12"); }

  const bool with_coords = d.p0.has_value();
  if (!with_coords && !M.homogeneous()) {
    throw CurveError("manifold '" + M.name() + "' is not homogeneous; an initial point is required");
  }
  if (with_coords && static_cast<std::size_t>(d.p0->size()) != M.coords().size()) {
    throw CurveError("initial point has wrong number of coordinates");
  }
  const auto nc = with_coords ? d.p0->size() : Eigen::Index{0};

  const Grid grid = Grid::covering(d.s0, d.s1, d.step);
  std::vector<std::vector<double>> k(r - 1, std::vector<double>(grid.count));
  for (std::size_t a = 0; a + 1 < r; ++a) {
    for (std::size_t i = 0; i < grid.count; ++i) {
      const double s = grid[i];
      k[a][i]        = d.curvatures[a].eval(std::span<const double>(&s, 1));
      if (!(k[a][i] > 0.0)) {
        std::ostringstream msg;
        msg << "prescribed k" << a + 1 << " is not positive at s = " << s;
        throw CurveError(msg.str());
      }
    }
  }

  std::optional<StructureValues> constant;
  if (M.homogeneous()) { constant = M.structure_at({}); }

  Vec state(nc + static_cast<Eigen::Index>(r) * m);
  if (with_coords) { state.head(nc) = *d.p0; }
  for (std::size_t a = 0; a < r; ++a) { state.segment(nc + static_cast<Eigen::Index>(a) * m, m) = d.frame0[a]; }

  const Rhs rhs = [&](double s, const Vec & y) {
    Vec dy(y.size());
    std::optional<StructureValues> local;
    std::vector<double> x(static_cast<std::size_t>(nc));
    for (Eigen::Index i = 0; i < nc; ++i) { x[static_cast<std::size_t>(i)] = y[i]; }
    if (!constant) { local = M.structure_at(x); }
    const StructureValues & S = constant ? *constant : *local;

    auto vec      = [&](std::size_t a) { return y.segment(nc + static_cast<Eigen::Index>(a) * m, m); };
    const Vec T   = vec(0);
    if (with_coords) { dy.head(nc) = M.frame_at(x) * T; }
    std::vector<double> kv(r - 1);
    for (std::size_t a = 0; a + 1 < r; ++a) { kv[a] = d.curvatures[a].eval(std::span<const double>(&s, 1)); }
    for (std::size_t a = 0; a < r; ++a) {
      Vec f = -S.nabla(T, vec(a));
      if (a > 0) { f -= kv[a - 1] * vec(a - 1); }
      if (a + 1 < r) { f += kv[a] * vec(a + 1); }
      dy.segment(nc + static_cast<Eigen::Index>(a) * m, m) = f;
    }
    return dy;
  };

  const SampledVec sol = rk4_integrate(rhs, state, d.s0, d.s1, grid.step);

  std::vector<Vec> coords;
  FrenetApparatus f;
  f.order = r;
  f.grid  = sol.grid;
  f.frames.assign(r, std::vector<Vec>(sol.size()));
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const Vec & y = sol.values[i];
    if (with_coords) { coords.push_back(y.head(nc)); }
    std::vector<Vec> frame(r);
    for (std::size_t a = 0; a < r; ++a) {
      frame[a]        = y.segment(nc + static_cast<Eigen::Index>(a) * m, m);
      f.frames[a][i]  = frame[a];
    }
    const double drift = orthonormality_defect(frame);
    if (drift > kFrameDriftLimit) { throw FrameDriftError(sol.grid[i], drift); }
  }
  f.curvatures = std::move(k);
  const auto xi = static_cast<Eigen::Index>(M.xi_index());
  for (const auto & fr : f.frames) {
    std::vector<double> e(fr.size());
    for (std::size_t i = 0; i < fr.size(); ++i) { e[i] = fr[i][xi]; }
    f.eta.push_back(std::move(e));
  }

  Curve c(d.manifold, sol.grid, std::move(coords), f.frames[0]);
  return IntegratedCurve{std::move(c), std::move(f)};
}

Curve build_example_1(double s0, double s1, double step)
{
  static const auto M = std::make_shared<const FrameManifold>(builtin_rkmn());
  const Grid grid     = Grid::covering(s0, s1, step);
  const double r      = std::sqrt(2.0) / 2.0;
  std::vector<Vec> coords, tangent;
  for (std::size_t i = 0; i < grid.count; ++i) {
    coords.push_back(Vec{{std::log(2.0), 0.0, r * grid[i]}});
    tangent.push_back(Vec{{0.0, -r, r}});
  }
  return Curve(M, grid, std::move(coords), std::move(tangent));
}

namespace {

Curve e2_constant(double c2, double theta, double sign, double s0, double s1, double step)
{
  if (!(std::sin(theta) * std::cos(theta) < 0.0)) {
    std::ostringstream msg;
    msg << "theta = " << theta << " violates sin(theta) cos(theta) < 0";
    throw HypothesisViolation(msg.str());
  }
  auto M          = std::make_shared<const FrameManifold>(builtin_e2(c2));
  const Grid grid = Grid::covering(s0, s1, step);
  const Vec T{{sign * std::cos(theta), sign * std::sin(theta), 0.0}};
  return Curve(M, grid, {}, std::vector<Vec>(grid.count, T));
}

}  // namespace

Curve build_e2_circle(double c2, double theta, double s0, double s1, double step)
{
  return e2_constant(c2, theta, -1.0, s0, s1, step);
}

Curve build_e2_helix(double c2, double theta, double s0, double s1, double step)
{
  return e2_constant(c2, theta, 1.0, s0, s1, step);
}

std::string_view family_name(Family f) { return f == Family::Circle ? "circle" : "helix"; }

std::optional<Family> parse_family(std::string_view name)
{
  if (name == "circle") { return Family::Circle; }
  if (name == "helix") { return Family::Helix; }
  return std::nullopt;
}

std::vector<SweepCell> sweep(Family family, std::span<const double> c2s, std::span<const double> thetas,
                             std::span<const ConditionKind> kinds, const SweepOptions & opts)
{
  std::vector<std::future<std::vector<SweepCell>>> jobs;
  for (double c2 : c2s) {
    for (double theta : thetas) {
      jobs.push_back(std::async(std::launch::async, [=, &opts]() {
        std::vector<SweepCell> cells;
        for (auto k : kinds) { cells.push_back(SweepCell{family, c2, theta, k, std::nullopt, {}}); }
        if (cells.empty()) { return cells; }
        try {
          const Curve c = family == Family::Circle ? build_e2_circle(c2, theta, opts.s0, opts.s1, opts.step)
                                                   : build_e2_helix(c2, theta, opts.s0, opts.s1, opts.step);
          const CurveProfile p = profile(c);
          for (auto & cell : cells) {
            try {
              cell.report = classify(p, cell.kind, opts.classify);
            } catch (const Error & e) {
              cell.error = e.what();
            }
          }
        } catch (const Error & e) {
          for (auto & cell : cells) { cell.error = e.what(); }
        }
        return cells;
      }));
    }
  }
  std::vector<SweepCell> out;
  for (auto & j : jobs) {
    auto cells = j.get();
    out.insert(out.end(), std::make_move_iterator(cells.begin()), std::make_move_iterator(cells.end()));
  }
  return out;
}

void write_sweep_csv(std::ostream & out, const std::vector<SweepCell> & cells)
{
  out << "family,c2,theta,kind,verdict,lambda_min,lambda_max,max_residual\n";
  for (const auto & c : cells) {
    out << family_name(c.family) << ',' << format_double(c.c2) << ',' << format_double(c.theta) << ','
        << kind_name(c.kind) << ',';
    if (c.report) {
      out << verdict_name(c.report->verdict) << ',' << format_double(c.report->lambda_min) << ','
          << format_double(c.report->lambda_max) << ',' << format_double(c.report->max_residual) << '\n';
    } else {
      out << "error,,,\n";
    }
  }
}

}  // namespace ccurves

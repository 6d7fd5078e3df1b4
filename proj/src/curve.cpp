#include "ccurves/curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ccurves {

AmbiguousOrderError::AmbiguousOrderError(std::size_t step, double s_lo, double s_hi)
    : Error([&] {
        std::ostringstream msg;
        msg << "ambiguous osculating order: forward residual of step " << step
            << " drops below the rank tolerance only on s in [" << s_lo << ", " << s_hi << "]";
        return msg.str();
      }()),
      step_(step), s_lo_(s_lo), s_hi_(s_hi)
{}

Curve::Curve(std::shared_ptr<const FrameManifold> manifold, Grid grid, std::vector<Vec> coords,
             std::vector<Vec> tangent)
    : manifold_(std::move(manifold)), grid_(grid), coords_(std::move(coords)), tangent_(std::move(tangent))
{
  if (!manifold_) { throw CurveError("curve needs a manifold"); }
  const FrameManifold & M = *manifold_;
  const auto m            = static_cast<Eigen::Index>(M.dim());
  if (tangent_.size() != grid_.count) { throw CurveError("tangent samples do not match the grid"); }
  if (grid_.count < kMinSamples) {
    throw CurveError("a curve needs at least " + std::to_string(kMinSamples) + " samples");
  }

  for (std::size_t i = 0; i < tangent_.size(); ++i) {
    if (tangent_[i].size() != m) { throw CurveError("tangent has wrong dimension"); }
    if (!tangent_[i].allFinite()) { throw CurveError("non-finite tangent at s = " + std::to_string(grid_[i])); }
    const double dev = std::abs(tangent_[i].norm() - 1.0);
    if (dev >= kUnitSpeedTol) {
      std::ostringstream msg;
      msg << "curve is not unit speed at s = " << grid_[i] << " (| |T| - 1 | = " << dev << ")";
      throw CurveError(msg.str());
    }
  }

  if (!coords_.empty()) {
    if (!M.has_coords()) { throw CurveError("manifold '" + M.name() + "' has no coordinates"); }
    if (coords_.size() != grid_.count) { throw CurveError("coordinate samples do not match the grid"); }
    for (const auto & x : coords_) {
      if (x.size() != static_cast<Eigen::Index>(M.coords().size())) {
        throw CurveError("coordinate tuple has wrong length");
      }
    }
  } else if (!M.homogeneous()) {
    throw CurveError("manifold '" + M.name() + "' is not homogeneous; the curve needs coordinates");
  }

  if (M.homogeneous()) {
    structure_.push_back(M.structure_at({}));
  } else {
    structure_.reserve(coords_.size());
    for (const auto & x : coords_) {
      structure_.push_back(M.structure_at(std::span<const double>(x.data(), static_cast<std::size_t>(x.size()))));
    }
  }

  if (!coords_.empty()) {
    const auto dx = central_diff(std::span<const Vec>(coords_), grid_.step, 1);
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      const Mat F   = M.frame_at(std::span<const double>(coords_[i].data(), static_cast<std::size_t>(coords_[i].size())));
      const double e = (dx[i] - F * tangent_[i]).cwiseAbs().maxCoeff();
      if (e > kCoordinateTol) {
        std::ostringstream msg;
        msg << "coordinates do not follow the tangent at s = " << grid_[i] << " (deviation " << e << ")";
        throw CurveError(msg.str());
      }
    }
  }
}

std::vector<Vec> covariant_derivative(const Curve & c, std::span<const Vec> field)
{
  if (field.size() != c.size()) {
    throw CurveError("covariant_derivative: field has " + std::to_string(field.size()) + " samples, curve has " +
                     std::to_string(c.size()));
  }
  std::vector<Vec> out = central_diff(field, c.grid().step, 1);
  const auto & T       = c.tangent();
  for (std::size_t i = 0; i < out.size(); ++i) { out[i] += c.structure(i).nabla(T[i], field[i]); }
  return out;
}

FrenetApparatus frenet(const Curve & c, const FrenetOptions & opts)
{
  const std::size_t m  = c.manifold().dim();
  const std::size_t n  = c.size();
  const auto xi        = static_cast<Eigen::Index>(c.manifold().xi_index());
  const auto & grid    = c.grid();

  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(c.tangent()[i].norm() - 1.0) >= Curve::kUnitSpeedTol) { throw CurveError("frenet: curve is not unit speed"); }
  }

  FrenetApparatus out;
  out.grid = grid;
  out.frames.push_back(c.tangent());
  double max_k1 = 0.0;

  out.order = m;
  for (std::size_t a = 1; a < m; ++a) {
    const auto D = covariant_derivative(c, out.frames[a - 1]);
    std::vector<Vec> fwd(n);
    std::vector<double> norm(n);
    for (std::size_t i = 0; i < n; ++i) {
      Vec w = D[i];
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t b = 0; b < a; ++b) { w -= w.dot(out.frames[b][i]) * out.frames[b][i]; }
      }
      norm[i] = w.norm();
      fwd[i]  = std::move(w);
    }

    const double thr = opts.rank_tol ? *opts.rank_tol : (a == 1 ? 1e-8 : 1e-8 * max_k1);
    std::size_t below = 0;
    double s_lo = 0.0, s_hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (norm[i] < thr) {
        if (below == 0) { s_lo = grid[i]; }
        s_hi = grid[i];
        ++below;
      }
    }
    if (below == n) {
      out.order = a;
      break;
    }
    if (below != 0) { throw AmbiguousOrderError(a, s_lo, s_hi); }

    for (std::size_t i = 0; i < n; ++i) { fwd[i] /= norm[i]; }
    if (a == 1) { max_k1 = *std::max_element(norm.begin(), norm.end()); }
    out.curvatures.push_back(std::move(norm));
    out.frames.push_back(std::move(fwd));
  }

  for (const auto & f : out.frames) {
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) { e[i] = f[i][xi]; }
    out.eta.push_back(std::move(e));
  }
  return out;
}

SampledScalar contact_angle(const Curve & c)
{
  const auto xi = static_cast<Eigen::Index>(c.manifold().xi_index());
  SampledScalar out{c.grid(), std::vector<double>(c.size())};
  for (std::size_t i = 0; i < c.size(); ++i) { out.values[i] = std::acos(std::clamp(c.tangent()[i][xi], -1.0, 1.0)); }
  return out;
}

bool is_legendre(const Curve & c, double tol)
{
  const auto xi = static_cast<Eigen::Index>(c.manifold().xi_index());
  double worst  = 0.0;
  for (const auto & t : c.tangent()) { worst = std::max(worst, std::abs(t[xi])); }
  return worst < tol;
}

namespace {

template <class F>
SampledScalar along(const Curve & c, F f)
{
  SampledScalar out{c.grid(), std::vector<double>(c.size())};
  for (std::size_t i = 0; i < c.size(); ++i) { out.values[i] = f(c.tangent()[i], c.structure(i).h); }
  return out;
}

}  // namespace

SampledScalar legendre_scalar(const Curve & c)
{
  const Mat & phi = c.manifold().phi();
  return along(c, [&](const Vec & t, const Mat & h) { return t.dot(phi * (h * t)); });
}

SampledScalar tangent_h_scalar(const Curve & c)
{
  return along(c, [](const Vec & t, const Mat & h) { return t.dot(h * t); });
}

SampledScalar tangent_hh_scalar(const Curve & c)
{
  return along(c, [](const Vec & t, const Mat & h) { return (h * t).squaredNorm(); });
}

}  // namespace ccurves

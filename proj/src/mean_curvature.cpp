#include "ccurves/mean_curvature.hpp"

namespace ccurves {

namespace {

std::vector<double> zeros(std::size_t n) { return std::vector<double>(n, 0.0); }

std::vector<Vec> normal_part(std::span<const Vec> v, std::span<const Vec> T)
{
  std::vector<Vec> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) { out[i] = v[i] - v[i].dot(T[i]) * T[i]; }
  return out;
}

}  // namespace

MeanVectors mean_vectors_formula(const FrenetApparatus & f)
{
  if (f.order < 2) { throw GeodesicError("mean curvature vectors need a non-geodesic curve (order >= 2)"); }
  const std::size_t n = f.frames.front().size();
  const double h      = f.grid.step;
  const auto m        = f.frames.front().front().size();

  const auto & k1 = f.k(1);
  const auto k2   = f.order >= 3 ? f.k(2) : zeros(n);
  const auto k3   = f.order >= 4 ? f.k(3) : zeros(n);
  const auto d1   = central_diff(std::span<const double>(k1), h, 1);
  const auto dd1  = central_diff(std::span<const double>(k1), h, 2);
  const auto d2   = central_diff(std::span<const double>(k2), h, 1);

  const Vec zero = Vec::Zero(m);
  auto frame     = [&](std::size_t a, std::size_t i) -> const Vec & {
    return a <= f.order ? f.v(a)[i] : zero;
  };

  MeanVectors out;
  out.grid = f.grid;
  out.nabla_t_h.resize(n);
  out.delta_h.resize(n);
  out.nabla_perp_h.resize(n);
  out.delta_perp_h.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec & T  = frame(1, i);
    const Vec & v2 = frame(2, i);
    const Vec & v3 = frame(3, i);
    const Vec & v4 = frame(4, i);
    const double a = k1[i], b = k2[i], c = k3[i];

    const Vec perp_first = d1[i] * v2 + a * b * v3;
    const Vec perp_lap   = (a * b * b - dd1[i]) * v2 - (2.0 * d1[i] * b + a * d2[i]) * v3 - a * b * c * v4;

    out.nabla_t_h[i]    = -a * a * T + perp_first;
    out.nabla_perp_h[i] = perp_first;
    out.delta_perp_h[i] = perp_lap;
    out.delta_h[i]      = 3.0 * a * d1[i] * T + a * a * a * v2 + perp_lap;
  }
  return out;
}

MeanVectors mean_vectors_direct(const Curve & c)
{
  const auto & T = c.tangent();
  const auto H   = covariant_derivative(c, T);
  double peak    = 0.0;
  for (const auto & v : H) { peak = std::max(peak, v.norm()); }
  if (peak < 1e-8) { throw GeodesicError("mean curvature vectors need a non-geodesic curve"); }

  MeanVectors out;
  out.grid      = c.grid();
  out.nabla_t_h = covariant_derivative(c, H);
  out.delta_h   = covariant_derivative(c, out.nabla_t_h);
  for (auto & v : out.delta_h) { v = -v; }

  out.nabla_perp_h = normal_part(out.nabla_t_h, T);
  out.delta_perp_h = normal_part(covariant_derivative(c, out.nabla_perp_h), T);
  for (auto & v : out.delta_perp_h) { v = -v; }
  return out;
}

}  // namespace ccurves

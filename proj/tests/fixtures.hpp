#pragma once

// Synthetic Frenet data for the classifier: frames are assembled algebraically so that the
// selected mean curvature vector is exactly lambda xi, without integrating a curve.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ccurves/classifier.hpp"

namespace fixtures {

using ccurves::Grid;
using ccurves::Mat;
using ccurves::Vec;

/// Polynomial c0 + c1 s + c2 s^2 + ... with exact derivatives.
struct Poly
{
  std::vector<double> c;

  double operator()(double s, int deriv = 0) const
  {
    double v = 0.0;
    for (std::size_t n = c.size(); n-- > static_cast<std::size_t>(deriv);) {
      double coef = c[n];
      for (int d = 0; d < deriv; ++d) { coef *= static_cast<double>(n - static_cast<std::size_t>(d)); }
      v = v * s + coef;
    }
    return v;
  }
};

/// Householder matrix mapping e0 to the unit vector u (symmetric, so its first row is u too).
inline Mat reflector(const Vec & u)
{
  const auto n = u.size();
  Vec w        = Vec::Zero(n);
  w[0]         = 1.0;
  w -= u;
  if (w.norm() < 1e-14) { return Mat::Identity(n, n); }
  return Mat::Identity(n, n) - 2.0 * w * w.transpose() / w.squaredNorm();
}

inline Mat random_rotation(std::size_t m, std::uint64_t seed)
{
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  Mat a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) { a(i, j) = nd(gen); }
  }
  Eigen::HouseholderQR<Mat> qr(a);
  return qr.householderQ();
}

struct Synthetic
{
  std::size_t dim   = 5;
  std::size_t order = 4;
  Grid grid{0.0, 1e-3, 1001};
  std::vector<Poly> k;  ///< k1 .. k_{r-1}
  ccurves::ConditionKind kind = ccurves::ConditionKind::CProperTangent;
  double sign                 = 1.0;  ///< sign of lambda
  double g_t_ht               = 0.0;
  double g_ht_ht              = 0.0;
  std::uint64_t rotate_seed   = 0;  ///< 0 keeps xi = e0
};

/**
 * Coefficients of the condition vector on v2 .. v_r (the T-part must vanish). xi is chosen as
 * the normalised coefficient vector so the condition holds with lambda = sign * |coefficients|.
 */
inline std::vector<double> normal_coefficients(const Synthetic & sy, double s)
{
  auto K = [&](std::size_t a, int d) { return a <= sy.k.size() ? sy.k[a - 1](s, d) : 0.0; };
  const double k1 = K(1, 0), k2 = K(2, 0), k3 = K(3, 0);
  const double d1 = K(1, 1), dd1 = K(1, 2), d2 = K(2, 1);
  std::vector<double> c(sy.order - 1, 0.0);
  auto put = [&](std::size_t a, double v) {
    if (a <= sy.order) { c[a - 2] += v; }
  };
  using ccurves::ConditionKind;
  switch (sy.kind) {
  case ConditionKind::CParallelTangent:
  case ConditionKind::CParallelNormal:
    put(2, d1);
    put(3, k1 * k2);
    break;
  case ConditionKind::CProperTangent:
    put(2, k1 * k1 * k1);
    [[fallthrough]];
  case ConditionKind::CProperNormal:
    put(2, k1 * k2 * k2 - dd1);
    put(3, -(2.0 * d1 * k2 + k1 * d2));
    put(4, -k1 * k2 * k3);
    break;
  }
  return c;
}

inline ccurves::CurveProfile make(const Synthetic & sy)
{
  const std::size_t n = sy.grid.count;
  const auto m        = static_cast<Eigen::Index>(sy.dim);
  const Mat R         = sy.rotate_seed ? random_rotation(sy.dim, sy.rotate_seed) : Mat::Identity(m, m);

  ccurves::FrenetApparatus f;
  f.order = sy.order;
  f.grid  = sy.grid;
  f.frames.assign(sy.order, std::vector<Vec>(n));
  f.curvatures.assign(sy.order - 1, std::vector<double>(n));
  std::vector<double> g(n);

  for (std::size_t i = 0; i < n; ++i) {
    const double s = sy.grid[i];
    for (std::size_t a = 0; a + 1 < sy.order; ++a) { f.curvatures[a][i] = sy.k[a](s); }

    const auto coef = normal_coefficients(sy, s);
    Vec eta(static_cast<Eigen::Index>(coef.size()));
    for (std::size_t a = 0; a < coef.size(); ++a) { eta[static_cast<Eigen::Index>(a)] = coef[a]; }
    if (eta.norm() < 1e-300) {
      eta    = Vec::Zero(eta.size());
      eta[0] = 1.0;
    }
    eta *= sy.sign / eta.norm();
    const Mat Q = reflector(eta);

    // e0 is xi, e1 is T, e2 .. carry the rest of span{v2 .. v_r}.
    Vec T = Vec::Zero(m);
    T[1]  = 1.0;
    f.frames[0][i] = R * T;
    for (Eigen::Index a = 0; a < Q.cols(); ++a) {
      Vec v = Vec::Zero(m);
      v[0]  = Q(0, a);
      for (Eigen::Index b = 1; b < Q.rows(); ++b) { v[b + 1] = Q(b, a); }
      f.frames[static_cast<std::size_t>(a) + 1][i] = R * v;
    }
    g[i] = f.curvatures[0][i] * eta[0];
  }
  Vec xi = Vec::Zero(m);
  xi[0]  = 1.0;
  return ccurves::make_profile(std::move(f), R * xi, std::move(g), std::vector<double>(n, sy.g_t_ht),
                               std::vector<double>(n, sy.g_ht_ht));
}

}  // namespace fixtures

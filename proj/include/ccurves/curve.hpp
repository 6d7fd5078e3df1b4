#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ccurves/manifold.hpp"
#include "ccurves/numerics.hpp"

namespace ccurves {

class CurveError : public Error
{
public:
  using Error::Error;
};

/// Frenet extraction found forward residuals on both sides of the rank tolerance.
class AmbiguousOrderError : public Error
{
public:
  AmbiguousOrderError(std::size_t step, double s_lo, double s_hi);
  std::size_t step() const noexcept { return step_; }
  double s_lo() const noexcept { return s_lo_; }
  double s_hi() const noexcept { return s_hi_; }

private:
  std::size_t step_;
  double s_lo_, s_hi_;
};

/**
 * Unit-speed curve sampled on a uniform arc-length grid.
 *
 * The tangent is stored in frame components. Coordinates are required unless the manifold is
 * homogeneous; when present they must integrate the tangent (checked with central differences).
 */
class Curve
{
public:
  static constexpr double kUnitSpeedTol  = 1e-8;
  static constexpr double kCoordinateTol = 1e-6;
  static constexpr std::size_t kMinSamples = 6;

  Curve(std::shared_ptr<const FrameManifold> manifold, Grid grid, std::vector<Vec> coords, std::vector<Vec> tangent);

  const FrameManifold & manifold() const { return *manifold_; }
  const std::shared_ptr<const FrameManifold> & manifold_ptr() const { return manifold_; }
  const Grid & grid() const { return grid_; }
  std::size_t size() const { return tangent_.size(); }
  bool has_coords() const { return !coords_.empty(); }
  const std::vector<Vec> & coords() const { return coords_; }
  const std::vector<Vec> & tangent() const { return tangent_; }

  /// Connection and h at sample i.
  const StructureValues & structure(std::size_t i) const
  {
    return structure_.size() == 1 ? structure_.front() : structure_[i];
  }

private:
  std::shared_ptr<const FrameManifold> manifold_;
  Grid grid_;
  std::vector<Vec> coords_;
  std::vector<Vec> tangent_;
  std::vector<StructureValues> structure_;
};

/// (nabla_T V)^k = dV^k/ds + sum_ij T^i V^j omega^k_ij, sample by sample.
std::vector<Vec> covariant_derivative(const Curve & c, std::span<const Vec> field);

struct FrenetApparatus
{
  std::size_t order = 1;
  Grid grid;
  std::vector<std::vector<double>> curvatures;  ///< curvatures[a][i] = k_{a+1}(s_i)
  std::vector<std::vector<Vec>> frames;         ///< frames[a][i] = v_{a+1}(s_i); frames[0] is T
  std::vector<std::vector<double>> eta;         ///< eta[a][i] = eta(v_{a+1})(s_i)

  const std::vector<double> & k(std::size_t a) const { return curvatures.at(a - 1); }
  const std::vector<Vec> & v(std::size_t a) const { return frames.at(a - 1); }
};

struct FrenetOptions
{
  /// Absolute threshold on the forward residual; default 1e-8 for k1 and 1e-8 * max k1 after.
  std::optional<double> rank_tol;
};

FrenetApparatus frenet(const Curve & c, const FrenetOptions & opts = {});

/// alpha(s) = arccos g(T, xi).
SampledScalar contact_angle(const Curve & c);
bool is_legendre(const Curve & c, double tol = 1e-6);

/// g(T, phi h T) along the curve.
SampledScalar legendre_scalar(const Curve & c);

/// g(T, h T) and g(hT, hT) along the curve.
SampledScalar tangent_h_scalar(const Curve & c);
SampledScalar tangent_hh_scalar(const Curve & c);

}  // namespace ccurves

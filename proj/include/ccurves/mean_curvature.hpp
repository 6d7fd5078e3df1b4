#pragma once

#include <vector>

#include "ccurves/curve.hpp"

namespace ccurves {

/// Raised when an operation needs a non-geodesic curve (order r >= 2).
class GeodesicError : public Error
{
public:
  using Error::Error;
};

/// Derivatives of the mean curvature vector H = nabla_T T, frame components per sample.
struct MeanVectors
{
  Grid grid;
  std::vector<Vec> nabla_t_h;
  std::vector<Vec> delta_h;       ///< -nabla_T nabla_T nabla_T T
  std::vector<Vec> nabla_perp_h;  ///< normal part of nabla_T H
  std::vector<Vec> delta_perp_h;  ///< -nabla^perp_T nabla^perp_T H
};

/// Samples excluded at each end whenever interior values are compared.
inline constexpr std::size_t kEdgeSamples = 2;

/**
 * Assembles the four vectors from curvature functions and the Frenet frame:
 *
 *   nabla_T H        = -k1^2 T + k1' v2 + k1 k2 v3
 *   Delta H          = 3 k1 k1' T + (k1^3 + k1 k2^2 - k1'') v2 - (2 k1' k2 + k1 k2') v3 - k1 k2 k3 v4
 *   nabla^perp_T H   = k1' v2 + k1 k2 v3
 *   Delta^perp H     = (k1 k2^2 - k1'') v2 - (2 k1' k2 + k1 k2') v3 - k1 k2 k3 v4
 *
 * Terms beyond the osculating order are dropped. Derivatives of k_a use central_diff.
 */
MeanVectors mean_vectors_formula(const FrenetApparatus & f);

/// Same vectors by repeated covariant differentiation of the sampled tangent.
MeanVectors mean_vectors_direct(const Curve & c);

}  // namespace ccurves

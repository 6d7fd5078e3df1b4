#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccurves/classifier.hpp"
#include "ccurves/curve.hpp"
#include "ccurves/expr.hpp"

namespace ccurves {

/// Parameters outside the hypothesis of a curve family.
class HypothesisViolation : public Error
{
public:
  using Error::Error;
};

/// Integrated frame lost orthonormality beyond the drift limit.
class FrameDriftError : public Error
{
public:
  FrameDriftError(double s, double drift);
  double s() const noexcept { return s_; }
  double drift() const noexcept { return drift_; }

private:
  double s_, drift_;
};

struct FrenetInitialData
{
  std::shared_ptr<const FrameManifold> manifold;
  std::optional<Vec> p0;       ///< required unless the manifold is homogeneous
  std::vector<Vec> frame0;     ///< T, v2, ..., v_r at s0, frame components
  std::vector<Expr> curvatures;  ///< k_1 .. k_{r-1}, expressions in s
  double s0   = 0.0;
  double s1   = 1.0;
  double step = 1e-3;
};

struct IntegratedCurve
{
  Curve curve;
  FrenetApparatus frenet;  ///< prescribed curvatures with the integrated frames
};

inline constexpr double kFrameDriftLimit = 1e-6;

/**
 * RK4 on the joint system of coordinates and Frenet frame:
 *   x' = sum_j T^j E_j(x),   v_a' = -k_{a-1} v_{a-1} + k_a v_{a+1} - sum_ij T^i v_a^j omega_ij.
 * The frame is not re-orthogonalised; drift above kFrameDriftLimit raises FrameDriftError.
 */
IntegratedCurve integrate_frenet_curve(const FrenetInitialData & d);

/// Legendre curve (ln 2, 0, s / sqrt 2) on builtin_rkmn.
Curve build_example_1(double s0, double s1, double step);

/// Constant tangent -cos(theta) X - sin(theta) phi X on builtin_e2(c2); needs sin(theta)cos(theta) < 0.
Curve build_e2_circle(double c2, double theta, double s0, double s1, double step);

/// Constant tangent cos(theta) X + sin(theta) phi X on builtin_e2(c2); needs sin(theta)cos(theta) < 0.
Curve build_e2_helix(double c2, double theta, double s0, double s1, double step);

enum class Family
{
  Circle,
  Helix,
};

std::string_view family_name(Family f);
std::optional<Family> parse_family(std::string_view name);

struct SweepCell
{
  Family family{};
  double c2    = 0.0;
  double theta = 0.0;
  ConditionKind kind{};
  std::optional<ClassificationReport> report;
  std::string error;  ///< set when the cell could not be evaluated
};

struct SweepOptions
{
  double s0   = 0.0;
  double s1   = 1.0;
  double step = 1e-3;
  ClassifyOptions classify;
};

/// One cell per (c2, theta, kind), c2 outermost and kind innermost. Cells run concurrently.
std::vector<SweepCell> sweep(Family family, std::span<const double> c2s, std::span<const double> thetas,
                             std::span<const ConditionKind> kinds, const SweepOptions & opts = {});

/// family,c2,theta,kind,verdict,lambda_min,lambda_max,max_residual
void write_sweep_csv(std::ostream & out, const std::vector<SweepCell> & cells);

}  // namespace ccurves

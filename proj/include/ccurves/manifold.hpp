#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccurves/expr.hpp"
#include "ccurves/numerics.hpp"

namespace ccurves {

/// Invalid manifold definition; `path` names the offending field (e.g. "omega[1][2][0]").
class ManifoldError : public Error
{
public:
  ManifoldError(std::string path, const std::string & what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path))
  {}
  const std::string & path() const noexcept { return path_; }

private:
  std::string path_;
};

/// Connection coefficients and h evaluated at one point.
struct StructureValues
{
  std::size_t dim = 0;
  std::vector<double> omega;  ///< omega[(i*dim + j)*dim + k] = E_k-component of nabla_{E_i} E_j
  Mat h;

  double connection(std::size_t i, std::size_t j, std::size_t k) const { return omega[(i * dim + j) * dim + k]; }

  /// Frame components of nabla_u v for constant-component fields u, v.
  Vec nabla(const Vec & u, const Vec & v) const;
};

/**
 * Contact metric manifold given by an orthonormal frame E_0 .. E_{m-1}.
 *
 * The metric is the identity in the frame. Coordinate-dependent entries (frame fields,
 * connection coefficients, h) are expressions over the coordinate names. When the manifold
 * has no coordinates every entry must be constant (homogeneous mode).
 */
class FrameManifold
{
public:
  struct Metadata
  {
    Expr kappa, mu, nu;
  };

  struct Definition
  {
    std::string name;
    std::size_t dim = 0;
    std::vector<std::string> coords;
    std::optional<std::vector<Expr>> frame;  ///< row-major m x m; column j holds E_j
    std::vector<Expr> omega;                 ///< m^3, see StructureValues::omega
    Mat phi;
    std::size_t xi_index = 0;
    std::vector<Expr> h;  ///< row-major m x m
    std::optional<Metadata> metadata;
    std::map<std::string, double> parameters;  ///< already substituted; kept for provenance
  };

  /// Validates dimensions and the constant-matrix identities; throws ManifoldError.
  explicit FrameManifold(Definition def);

  const std::string & name() const { return def_.name; }
  std::size_t dim() const { return def_.dim; }
  const std::vector<std::string> & coords() const { return def_.coords; }
  bool has_coords() const { return !def_.coords.empty(); }
  bool homogeneous() const { return homogeneous_; }
  std::size_t xi_index() const { return def_.xi_index; }
  const Mat & phi() const { return def_.phi; }
  Vec xi() const;
  const std::optional<Metadata> & metadata() const { return def_.metadata; }
  const std::map<std::string, double> & parameters() const { return def_.parameters; }
  const Definition & definition() const { return def_; }

  const Expr & omega(std::size_t i, std::size_t j, std::size_t k) const
  {
    return def_.omega[(i * dim() + j) * dim() + k];
  }
  const Expr & h(std::size_t i, std::size_t j) const { return def_.h[i * dim() + j]; }
  const Expr & frame(std::size_t i, std::size_t j) const { return (*def_.frame)[i * dim() + j]; }

  /// Every connection/h entry evaluated at p (p is ignored in homogeneous mode).
  StructureValues structure_at(std::span<const double> p) const;

  /// Coordinate components of the frame at p; column j is E_j. Requires coordinates.
  Mat frame_at(std::span<const double> p) const;

  bool operator==(const FrameManifold & other) const;

private:
  Definition def_;
  bool homogeneous_ = false;
  std::optional<StructureValues> constant_;
};

/// The three-dimensional (kappa, mu, nu)-contact metric manifold on R^3, frame order (xi, X, phi X).
FrameManifold builtin_rkmn();

/// Left-invariant contact metric structure on E(2), frame order (X, phi X, xi); requires c2 > 0.
FrameManifold builtin_e2(double c2);

struct InvariantCheck
{
  std::string name;
  double max_violation = 0.0;
  bool pass            = true;
};

struct PointCheck
{
  std::vector<double> point;
  std::vector<InvariantCheck> checks;
  double h_norm = 0.0;
  bool pass     = true;
};

struct StructureReport
{
  std::vector<InvariantCheck> constant_checks;  ///< phi identities, checked once
  std::vector<PointCheck> points;
  std::vector<InvariantCheck> summary;  ///< per-invariant maximum over all points
  double min_h_norm = 0.0;              ///< h != 0 certifies a non-Sasakian structure
  bool non_sasakian = false;
  bool pass         = false;
};

/**
 * Pointwise structural self-check. Per point: h symmetric, h xi = 0, h phi = -phi h, metric
 * compatibility of the connection, g(X, phi Y) = d eta(X, Y) and, when coordinates exist,
 * torsion-freeness against finite-difference brackets of the frame fields (step `bracket_step`).
 */
StructureReport verify_structure(const FrameManifold & m,
                                 const std::vector<std::vector<double>> & points,
                                 double tol,
                                 double bracket_step = 1e-4);

struct GradXiSample
{
  std::vector<double> point;  ///< empty in homogeneous mode
  Vec direction;              ///< frame components
};

struct GradXiReport
{
  std::vector<double> violations;
  double max_violation = 0.0;
  bool pass            = false;
};

/// Checks nabla_u xi = -phi u - phi h u at every sample.
GradXiReport verify_grad_xi(const FrameManifold & m, const std::vector<GradXiSample> & samples, double tol);

/// Uniform points in [lo, hi]^n from a seeded 64-bit Mersenne twister (platform independent).
std::vector<std::vector<double>> random_points(std::size_t n, std::size_t count, std::uint64_t seed,
                                               double lo = -1.0, double hi = 1.0);

}  // namespace ccurves

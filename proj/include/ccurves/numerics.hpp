#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ccurves {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class SizeError : public Error
{
public:
  using Error::Error;
};

class IntegrationDiverged : public Error
{
public:
  IntegrationDiverged(double s, const std::string & what) : Error(what), s_(s) {}
  double s() const noexcept { return s_; }

private:
  double s_;
};

/// Uniform arc-length grid s_i = start + i * step, i = 0 .. count-1.
struct Grid
{
  double start = 0.0;
  double step  = 1.0;
  std::size_t count = 0;

  double operator[](std::size_t i) const { return start + static_cast<double>(i) * step; }
  double end() const { return (*this)[count - 1]; }
  std::size_t size() const { return count; }

  /// Grid covering [a, b] with a step no larger than `max_step` that divides the span exactly.
  static Grid covering(double a, double b, double max_step);

  bool same_as(const Grid & other, double rel = 1e-12) const;
};

template <class T>
struct Sampled
{
  Grid grid;
  std::vector<T> values;

  std::size_t size() const { return values.size(); }
  const T & operator[](std::size_t i) const { return values[i]; }
};

using SampledScalar = Sampled<double>;
using SampledVec    = Sampled<Vec>;

using Rhs          = std::function<Vec(double s, const Vec & state)>;
using InnerProduct = std::function<double(const Vec &, const Vec &)>;

/**
 * Classical fixed-step RK4 over [s0, s1].
 *
 * The step is shrunk, if necessary, so that it divides the span; the returned grid holds
 * both endpoints. Throws IntegrationDiverged when a non-finite state appears.
 */
SampledVec rk4_integrate(const Rhs & rhs, const Vec & state0, double s0, double s1, double step);

struct GramSchmidtResult
{
  std::vector<Vec> basis;  ///< orthonormal under the supplied inner product
  /// coefficients(k, j) = <v_k, u_j>; one row per processed input vector.
  Mat coefficients;
  std::size_t rank = 0;
};

double euclidean_inner(const Vec & a, const Vec & b);

/**
 * Modified Gram-Schmidt with one re-orthogonalisation pass.
 *
 * `tol` is relative to the norm of the first vector. The first vector whose residual falls
 * below it terminates the sweep; its coefficient row is still recorded.
 */
GramSchmidtResult gram_schmidt(std::span<const Vec> vectors,
                               const InnerProduct & inner = euclidean_inner,
                               double tol = 1e-8);

/// Fourth-order central differences, one-sided fourth-order stencils on the two end nodes.
SampledScalar central_diff(const SampledScalar & f, int order);
SampledVec central_diff(const SampledVec & f, int order);

/// Same stencils on raw values with a given step.
std::vector<double> central_diff(std::span<const double> f, double step, int order);
std::vector<Vec> central_diff(std::span<const Vec> f, double step, int order);

bool all_finite(const Vec & v);

}  // namespace ccurves

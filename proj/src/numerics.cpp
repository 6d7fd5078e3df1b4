#include "ccurves/numerics.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace ccurves {

Grid Grid::covering(double a, double b, double max_step)
{
  if (!(max_step > 0.0) || !std::isfinite(max_step)) { throw Error("step must be a positive finite number"); }
  if (!(b > a)) { throw Error("span must satisfy start < end"); }
  const double ratio = (b - a) / max_step;
  auto n             = static_cast<std::size_t>(std::ceil(ratio - 1e-9));
  if (n == 0) { n = 1; }
  return Grid{a, (b - a) / static_cast<double>(n), n + 1};
}

bool Grid::same_as(const Grid & other, double rel) const
{
  return count == other.count && std::abs(step - other.step) <= rel * std::abs(step) &&
         std::abs(start - other.start) <= rel * std::max(1.0, std::abs(start));
}

bool all_finite(const Vec & v) { return v.allFinite(); }

SampledVec rk4_integrate(const Rhs & rhs, const Vec & state0, double s0, double s1, double step)
{
  const Grid grid = Grid::covering(s0, s1, step);
  const double h  = grid.step;

  SampledVec out{grid, {}};
  out.values.reserve(grid.count);

  if (!all_finite(state0)) { throw IntegrationDiverged(s0, "non-finite initial state"); }
  Vec x = state0;
  out.values.push_back(x);

  for (std::size_t i = 0; i + 1 < grid.count; ++i) {
    const double s = grid[i];
    const Vec k1   = rhs(s, x);
    const Vec k2   = rhs(s + 0.5 * h, x + 0.5 * h * k1);
    const Vec k3   = rhs(s + 0.5 * h, x + 0.5 * h * k2);
    const Vec k4   = rhs(s + h, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!all_finite(x)) {
      std::ostringstream msg;
      msg << "integration diverged at s = " << grid[i + 1];
      throw IntegrationDiverged(grid[i + 1], msg.str());
    }
    out.values.push_back(x);
  }
  return out;
}

double euclidean_inner(const Vec & a, const Vec & b) { return a.dot(b); }

GramSchmidtResult gram_schmidt(std::span<const Vec> vectors, const InnerProduct & inner, double tol)
{
  GramSchmidtResult res;
  if (vectors.empty()) { return res; }
  const Eigen::Index dim = vectors.front().size();
  for (const auto & v : vectors) {
    if (v.size() != dim) { throw SizeError("gram_schmidt: vectors differ in dimension"); }
  }

  const double scale = std::sqrt(std::max(0.0, inner(vectors.front(), vectors.front())));
  const double cut   = tol * (scale > 0.0 ? scale : 1.0);

  res.coefficients = Mat::Zero(static_cast<Eigen::Index>(vectors.size()), dim);
  std::size_t processed = 0;
  for (const auto & v : vectors) {
    Vec w = v;
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(dim);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < res.basis.size(); ++j) {
        const double c = inner(w, res.basis[j]);
        w -= c * res.basis[j];
        coef[static_cast<Eigen::Index>(j)] += c;
      }
    }
    const double norm = std::sqrt(std::max(0.0, inner(w, w)));
    if (norm < cut || static_cast<Eigen::Index>(res.basis.size()) == dim) {
      res.coefficients.row(static_cast<Eigen::Index>(processed)) = coef.transpose();
      ++processed;
      break;
    }
    coef[static_cast<Eigen::Index>(res.basis.size())] = norm;
    res.coefficients.row(static_cast<Eigen::Index>(processed)) = coef.transpose();
    res.basis.push_back(w / norm);
    ++processed;
  }
  res.rank = res.basis.size();
  res.coefficients.conservativeResize(static_cast<Eigen::Index>(processed), dim);
  return res;
}

namespace {

// Stencil tables, coefficients over 12 (first derivative: / 12h, second: / 12h^2).
constexpr std::array<double, 5> kD1Interior{1.0, -8.0, 0.0, 8.0, -1.0};  // nodes i-2 .. i+2
constexpr std::array<double, 5> kD1Edge0{-25.0, 48.0, -36.0, 16.0, -3.0};
constexpr std::array<double, 5> kD1Edge1{-3.0, -10.0, 18.0, -6.0, 1.0};   // nodes 0 .. 4 at node 1
constexpr std::array<double, 5> kD2Interior{-1.0, 16.0, -30.0, 16.0, -1.0};
constexpr std::array<double, 6> kD2Edge0{45.0, -154.0, 214.0, -156.0, 61.0, -10.0};
constexpr std::array<double, 6> kD2Edge1{10.0, -15.0, -4.0, 14.0, -6.0, 1.0};  // nodes 0 .. 5 at node 1

template <class T>
T zero_like(const T & x)
{
  if constexpr (std::is_same_v<T, double>) {
    return 0.0;
  } else {
    return T::Zero(x.size());
  }
}

template <class T, std::size_t N>
T forward(std::span<const T> f, std::size_t first, const std::array<double, N> & c)
{
  T acc = zero_like(f[0]);
  for (std::size_t k = 0; k < N; ++k) { acc += c[k] * f[first + k]; }
  return acc;
}

template <class T, std::size_t N>
T backward(std::span<const T> f, std::size_t last, const std::array<double, N> & c)
{
  T acc = zero_like(f[0]);
  for (std::size_t k = 0; k < N; ++k) { acc += c[k] * f[last - k]; }
  return acc;
}

template <class T>
std::vector<T> diff_impl(std::span<const T> f, double h, int order)
{
  if (order != 1 && order != 2) { throw Error("central_diff: order must be 1 or 2"); }
  const std::size_t n   = f.size();
  const std::size_t min = order == 1 ? 5 : 6;
  if (n < min) {
    throw SizeError("central_diff: need at least " + std::to_string(min) + " samples, got " +
                    std::to_string(n));
  }
  std::vector<T> out(n, zero_like(f[0]));
  if (order == 1) {
    const double s = 1.0 / (12.0 * h);
    for (std::size_t i = 2; i + 2 < n; ++i) { out[i] = s * forward(f, i - 2, kD1Interior); }
    out[0]     = s * forward(f, 0, kD1Edge0);
    out[1]     = s * forward(f, 0, kD1Edge1);
    out[n - 1] = -s * backward(f, n - 1, kD1Edge0);
    out[n - 2] = -s * backward(f, n - 1, kD1Edge1);
  } else {
    const double s = 1.0 / (12.0 * h * h);
    for (std::size_t i = 2; i + 2 < n; ++i) { out[i] = s * forward(f, i - 2, kD2Interior); }
    out[0]     = s * forward(f, 0, kD2Edge0);
    out[1]     = s * forward(f, 0, kD2Edge1);
    out[n - 1] = s * backward(f, n - 1, kD2Edge0);
    out[n - 2] = s * backward(f, n - 1, kD2Edge1);
  }
  return out;
}

}  // namespace

std::vector<double> central_diff(std::span<const double> f, double step, int order)
{
  return diff_impl<double>(f, step, order);
}

std::vector<Vec> central_diff(std::span<const Vec> f, double step, int order)
{
  return diff_impl<Vec>(f, step, order);
}

SampledScalar central_diff(const SampledScalar & f, int order)
{
  return {f.grid, diff_impl<double>(f.values, f.grid.step, order)};
}

SampledVec central_diff(const SampledVec & f, int order)
{
  return {f.grid, diff_impl<Vec>(f.values, f.grid.step, order)};
}

}  // namespace ccurves

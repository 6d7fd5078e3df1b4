#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccurves/curve.hpp"
#include "ccurves/mean_curvature.hpp"

namespace ccurves {

enum class ConditionKind
{
  CParallelTangent,  ///< nabla_T H = lambda xi
  CProperTangent,    ///< Delta H = lambda xi
  CParallelNormal,   ///< nabla^perp_T H = lambda xi
  CProperNormal,     ///< Delta^perp H = lambda xi
};

inline constexpr ConditionKind kAllKinds[] = {ConditionKind::CParallelTangent, ConditionKind::CProperTangent,
                                              ConditionKind::CParallelNormal, ConditionKind::CProperNormal};

/// "c-parallel-tangent", "c-proper-tangent", "c-parallel-normal", "c-proper-normal".
std::string_view kind_name(ConditionKind k);
std::optional<ConditionKind> parse_kind(std::string_view name);

/**
 * Everything the classifier reads from a curve. Built from a sampled curve with profile(),
 * or assembled directly from synthetic Frenet data with make_profile().
 */
struct CurveProfile
{
  FrenetApparatus frenet;
  Vec xi;                          ///< Reeb field, frame components
  std::vector<double> g_t_phiht;   ///< g(T, phi h T)
  std::vector<double> g_t_ht;      ///< g(T, h T)
  std::vector<double> g_ht_ht;     ///< g(hT, hT)
  std::optional<MeanVectors> formula;  ///< present when the order is at least 2
  std::optional<MeanVectors> direct;   ///< covariant-differentiation route, curves only

  std::size_t size() const { return g_t_phiht.size(); }
  std::size_t first_interior() const { return kEdgeSamples; }
  std::size_t end_interior() const { return size() - kEdgeSamples; }
};

CurveProfile profile(const Curve & c, const FrenetOptions & opts = {});
CurveProfile make_profile(FrenetApparatus f, Vec xi, std::vector<double> g_t_phiht, std::vector<double> g_t_ht,
                          std::vector<double> g_ht_ht);

struct LambdaFit
{
  std::vector<double> lambda;    ///< g(V, xi)
  std::vector<double> residual;  ///< |V - lambda xi|
};

LambdaFit extract_lambda(std::span<const Vec> v, const Vec & xi);

struct ClassifyOptions
{
  double tol          = 1e-4;
  double lambda_floor = 1e-6;
};

enum class Verdict
{
  Holds,
  Fails,
};

std::string_view verdict_name(Verdict v);

/// Maxima and minima are taken over interior samples.
struct ClassificationReport
{
  ConditionKind kind{};
  Grid grid;
  std::vector<double> lambda;
  std::vector<double> residual;
  Verdict verdict      = Verdict::Fails;
  double max_residual  = 0.0;
  double lambda_min    = 0.0;
  double lambda_max    = 0.0;
  double min_abs_lambda = 0.0;
  bool lambda_nonzero  = false;
  ClassifyOptions options;
};

/// Selects the formula vector for `kind`; requires order >= 2.
const std::vector<Vec> & condition_vector(const CurveProfile & p, ConditionKind kind);

ClassificationReport classify(const CurveProfile & p, ConditionKind kind, const ClassifyOptions & opts = {});
ClassificationReport classify(const Curve & c, ConditionKind kind, const ClassifyOptions & opts = {});

/// max over interior samples of |k1 eta(v2) - g(T, phi h T)|.
double legendre_identity_violation(const CurveProfile & p);

enum class TheoremId
{
  T2_1,
  T2_2,
  T2_3,
  T2_4,
  T3_1,
  T3_2,
  T3_3,
  T3_4,
  T3_5,
  T3_6,
};

inline constexpr TheoremId kAllTheorems[] = {TheoremId::T2_1, TheoremId::T2_2, TheoremId::T2_3, TheoremId::T2_4,
                                             TheoremId::T3_1, TheoremId::T3_2, TheoremId::T3_3, TheoremId::T3_4,
                                             TheoremId::T3_5, TheoremId::T3_6};

std::string_view theorem_name(TheoremId id);  ///< "T2.1" ...
std::optional<TheoremId> parse_theorem(std::string_view name);

struct TheoremCheck
{
  std::string name;
  double max_violation = 0.0;
  double tol           = 0.0;
  bool pass() const { return max_violation < tol; }
};

struct TheoremReport
{
  TheoremId id{};
  std::vector<TheoremCheck> checks;
  bool pass       = false;
  bool degenerate = false;  ///< the identities hold only with lambda = 0
  std::string branch;       ///< empty for single-branch statements
  double sign     = 1.0;    ///< eta(v2) sign fixed at the first interior sample
  std::optional<ClassificationReport> condition;
};

/// The curve's osculating order does not match the statement's hypothesis.
class OrderMismatch : public Error
{
public:
  using Error::Error;
};

/// The condition a characterization starts from does not hold on the curve.
class ClassificationFailed : public Error
{
public:
  ClassificationFailed(ConditionKind kind, double max_residual, double min_abs_lambda);
  ConditionKind kind() const noexcept { return kind_; }

private:
  ConditionKind kind_;
};

/**
 * Evaluates the identities of one characterization at every interior sample.
 *
 * Signs left open by the statements are fixed by sigma = sign eta(v2) at the first interior
 * sample; with that choice k1 = sigma g(T, phi h T) and xi = sigma v2 whenever xi lies on v2.
 */
TheoremReport verify_theorem(TheoremId id, const CurveProfile & p, double tol = 1e-4,
                             const ClassifyOptions & opts = {});
TheoremReport verify_theorem(TheoremId id, const Curve & c, double tol = 1e-4, const ClassifyOptions & opts = {});

}  // namespace ccurves

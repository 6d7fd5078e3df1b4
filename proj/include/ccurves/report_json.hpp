#pragma once

#include <json.hpp>

#include "ccurves/classifier.hpp"
#include "ccurves/manifold.hpp"

namespace ccurves {

/// {kind, verdict, max_residual, lambda: {min, max, samples?}, checks: [...]}
nlohmann::json report_json(const ClassificationReport & r, bool with_samples = false);

/// {theorem, verdict, branch?, sign, max_residual, lambda: {...}, checks: [{name, max_violation, tol}]}
nlohmann::json report_json(const TheoremReport & r, bool with_samples = false);

nlohmann::json report_json(const StructureReport & r);

/// Order, curvature ranges and eta ranges; full samples on request.
nlohmann::json frenet_json(const FrenetApparatus & f, bool with_samples = false);

}  // namespace ccurves

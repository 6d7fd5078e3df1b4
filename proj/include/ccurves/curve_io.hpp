#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ccurves/curve.hpp"

namespace ccurves {

/**
 * Raw contents of a curve CSV.
 *
 * Layout: optional leading comment lines `# key=value key=value ...`, then the header
 * `s,<coord names...>,T1..Tm`, then one row per sample. Numbers use 17 significant digits so a
 * write/read cycle reproduces every double exactly.
 */
struct CurveTable
{
  std::map<std::string, std::string> meta;
  std::vector<std::string> coord_names;
  Grid grid;
  std::vector<Vec> coords;
  std::vector<Vec> tangent;
};

/// Metadata identifying the manifold of `c`: manifold=<name> plus one entry per parameter.
std::map<std::string, std::string> manifold_tag(const FrameManifold & m);

void write_curve_csv(std::ostream & out, const Curve & c, const std::map<std::string, std::string> & extra = {});
void write_curve_csv(const std::filesystem::path & path, const Curve & c,
                     const std::map<std::string, std::string> & extra = {});

CurveTable read_curve_table(std::istream & in);
CurveTable read_curve_table(const std::filesystem::path & path);

/// Validates the table against `m` (column names and count) and builds the curve.
Curve curve_from_table(const CurveTable & t, std::shared_ptr<const FrameManifold> m);

/// Recovers a uniform grid from sampled s values; throws CurveError if they are not uniform.
Grid grid_from_samples(std::span<const double> s);

std::string format_double(double v);

}  // namespace ccurves

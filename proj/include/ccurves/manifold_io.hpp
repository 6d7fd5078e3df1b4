#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccurves/manifold.hpp"

namespace ccurves {

/// Textual manifold description, one expression string per entry.
struct ManifoldText
{
  std::string name;
  std::size_t dim = 0;
  std::vector<std::string> coords;
  std::optional<std::vector<std::vector<std::string>>> frame;
  std::vector<std::vector<std::vector<std::string>>> omega;  ///< omega[i][j][k]: E_k-part of nabla_{E_i} E_j
  std::vector<std::vector<double>> phi;
  std::size_t xi_index = 0;
  std::vector<std::vector<std::string>> h;
  std::optional<std::array<std::string, 3>> metadata;  ///< kappa, mu, nu
  std::map<std::string, double> parameters;
};

/// Parses every expression, substitutes parameters (after applying `overrides`) and validates.
FrameManifold build_manifold(const ManifoldText & text, const std::map<std::string, double> & overrides = {});

ManifoldText manifold_text_from_json(const nlohmann::json & doc);

/// Reads a manifold spec document; see README for the schema.
FrameManifold load_manifold(const nlohmann::json & doc, const std::map<std::string, double> & overrides = {});
FrameManifold load_manifold_file(const std::filesystem::path & path,
                                 const std::map<std::string, double> & overrides = {});

/// Serialises with parameters already substituted; load_manifold(to_json(m)) == m.
nlohmann::json to_json(const FrameManifold & m);

}  // namespace ccurves

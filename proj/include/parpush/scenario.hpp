#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "parpush/hurwitz.hpp"
#include "parpush/parabolic.hpp"
#include "parpush/pushforward.hpp"
#include "parpush/torus.hpp"

namespace parpush {

inline constexpr std::string_view kFormatVersion = "parpush/1";

/// Self-describing scenario document: a base curve and up to five optional
/// sections. Residues are split by where their points live (a string point
/// is a base label, an object names a point of Y).
struct Scenario {
  MarkedCurve base;
  std::optional<CoveringMonodromy> covering;
  std::optional<UpstairsBundle> upstairs;
  std::optional<ParabolicBundle> downstairs;
  std::optional<ResidueData> residues_down;
  std::optional<UpstairsResidues> residues_up;
  std::optional<RamifiedTorusData> torus;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws Error(ParseError) with line/column for syntax errors and a JSON
/// path for schema errors. Mathematical inconsistencies in a well-formed
/// document (e.g. a failing monodromy relation) surface with their own
/// error codes.
Scenario parse_scenario(std::string_view text);

nlohmann::json to_json(const Scenario& s);

/// Two-space indented, trailing newline.
std::string dump_document(const nlohmann::json& doc);

namespace io {

nlohmann::json rational(const Rational& r);
nlohmann::json permutation(const Permutation& p);
nlohmann::json point(const YPoint& y);
nlohmann::json steps(const std::vector<FlagStep>& steps);
nlohmann::json bundle(const ParabolicBundle& e);
nlohmann::json residues(const ResidueData& down, const UpstairsResidues& up);
nlohmann::json torus(const RamifiedTorusData& t);
nlohmann::json assignment(const ReconstructionResult& rec);

}  // namespace io

}  // namespace parpush

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parpush/hurwitz.hpp"
#include "parpush/parabolic.hpp"
#include "parpush/pushforward.hpp"

namespace parpush {

/// Flag pieces of E_x lying in the summand W_k cut out by the extended
/// torus at one point y_k over x. `sheet` is any block of the cycle.
struct CycleSplit {
  int sheet = 0;
  std::vector<FlagStep> pieces;  // strictly increasing weights
  friend bool operator==(const CycleSplit&, const CycleSplit&) = default;
};

/// Combinatorial shadow of a ramified torus sub-bundle T of Ad(E)|_U:
/// the isotypical blocks of the generic fiber, their ranks, and the
/// monodromy of the blocks around the handles and the marked points.
///
/// Optional refinements read off the torus where it is known:
///  - orbit_degrees: degree of the summand of E belonging to each block
///    orbit (ordered by least block), needed when the orbits are several;
///  - fiber_splitting: how E's flag at a marked point distributes over the
///    summands W_k at that point.
struct RamifiedTorusData {
  MarkedCurve base;
  std::vector<long long> block_ranks;
  std::vector<Permutation> handles;
  std::map<std::string, Permutation> branch;
  std::optional<std::vector<long long>> orbit_degrees;
  std::map<std::string, std::vector<CycleSplit>> fiber_splitting;

  /// The block monodromy read as a covering (sheets = blocks).
  CoveringMonodromy as_covering() const;
  friend bool operator==(const RamifiedTorusData&, const RamifiedTorusData&) = default;
};

/// Relation, shapes, and rank preservation by every block permutation.
ValidationReport validate(const RamifiedTorusData& t);

/// Canonical torus of phi_* V: one block per sheet.
RamifiedTorusData torus_from_direct_image(const UpstairsBundle& u);

/// Where a downstairs piece went: the point y over x, the level c, and the
/// upstairs weight lambda with weight = (c + lambda) / b.
struct AssignmentEntry {
  Rational weight;
  long long dim = 0;
  YPoint point;
  int level = 0;
  Rational upstairs_weight;
  friend bool operator==(const AssignmentEntry&, const AssignmentEntry&) = default;
};

struct ReconstructionResult {
  CoveringMonodromy covering;
  UpstairsBundle upstairs;
  std::map<std::string, std::vector<AssignmentEntry>> assignment;
  /// Marked points where several exact covers exist (AmbiguousAssignment,
  /// reported here rather than thrown); the least one was taken.
  std::vector<std::string> ambiguous_points;
};

/// Upstairs flags at every point over x, one choice of exact cover.
using LocalAssignment = std::map<YPoint, WeightedFlag>;

/// Exact covers of E's pieces at x by the cycles of the block monodromy,
/// in increasing lexicographic order, at most `limit` of them.
std::vector<LocalAssignment> enumerate_local_assignments(const ParabolicBundle& e, const RamifiedTorusData& t,
                                                         const std::string& x, std::size_t limit);

/// Recovers (Y, phi, V_*) with phi_* V_* == E. Throws RankMismatch,
/// InvalidCovering, NoConsistentAssignment.
ReconstructionResult reconstruct(const ParabolicBundle& e, const RamifiedTorusData& t);

/// Residues upstairs of the connection induced on V_*. Throws
/// NotTorusPreserving when b*rho - c is not constant over the levels of
/// some upstairs step, MisalignedResidues when R does not fit E.
UpstairsResidues induce_connection(const ParabolicBundle& e, const ResidueData& r, const ReconstructionResult& rec);

struct RoundtripReport {
  bool ok = false;
  bool ambiguous = false;  // only set when fiber_splitting was not used
  std::string detail;
};

struct RoundtripOptions {
  /// When false, reconstruct without the fiber splitting. Ambiguous points
  /// then only require the original bundle to be among the exact covers.
  bool use_fiber_splitting = true;
};

RoundtripReport roundtrip_covering_report(const UpstairsBundle& u, RoundtripOptions options = {});
RoundtripReport roundtrip_connection_report(const UpstairsBundle& u, const UpstairsResidues& r);

bool verify_roundtrip_covering(const UpstairsBundle& u);
bool verify_roundtrip_connection(const UpstairsBundle& u, const UpstairsResidues& r);

}  // namespace parpush

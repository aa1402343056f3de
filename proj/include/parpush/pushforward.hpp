#pragma once

#include <map>
#include <vector>

#include "parpush/hurwitz.hpp"
#include "parpush/parabolic.hpp"

namespace parpush {

/// Parabolic bundle V_* on the covering curve Y. Components follow the
/// order of components(covering); flags sit at canonical points over
/// marked points of the base, absent entries meaning the trivial flag.
struct UpstairsBundle {
  CoveringMonodromy covering;
  std::vector<ComponentBundle> components;
  std::map<YPoint, WeightedFlag> flags;

  WeightedFlag flag_at(const YPoint& y) const;
  UpstairsBundle canonical() const;
  friend bool operator==(const UpstairsBundle&, const UpstairsBundle&) = default;
};

using UpstairsResidues = std::map<YPoint, std::vector<Rational>>;

/// Throws InvalidCovering, FlagOverUnmarkedPoint, MalformedBundle.
void check_well_formed(const UpstairsBundle& u);
UpstairsResidues canonical_residues(const UpstairsBundle& u, const UpstairsResidues& r);

Rational par_deg(const UpstairsBundle& u);
long long flag_end_degree(const UpstairsBundle& u);
/// Ohtsuki's identity on every component separately.
bool ohtsuki_check(const UpstairsBundle& u, const UpstairsResidues& r);
bool is_parabolic_connection(const UpstairsBundle& u, const UpstairsResidues& r);

/// Graded piece of the direct-image fiber coming from one cycle: the
/// vanishing-order level c, the upstairs flag step, its dimension and the
/// weight (c + lambda_step) / b.
struct LevelPiece {
  int level = 0;
  std::size_t step = 0;
  long long dim = 0;
  Rational weight;
  friend bool operator==(const LevelPiece&, const LevelPiece&) = default;
};

/// Pre-merge output of one cycle of length b, ordered by (level, step).
std::vector<LevelPiece> cycle_pieces(const WeightedFlag& flag, int b);

struct ResiduePiece {
  LevelPiece piece;
  Rational eigenvalue;  // (tau_step + c) / b
  friend bool operator==(const ResiduePiece&, const ResiduePiece&) = default;
};

std::vector<ResiduePiece> cycle_residue_pieces(const WeightedFlag& flag, const std::vector<Rational>& eigenvalues, int b);

/// Sorts pieces by weight and coalesces equal weights.
WeightedFlag merge_pieces(const std::vector<FlagStep>& pieces);

/// deg(phi_* V) from chi(Y, V) = chi(X, phi_* V), per component.
long long direct_image_degree(long long degree, long long rank, long long component_genus, int local_degree,
                              int base_genus);

struct PushOptions {
  bool keep_trivial = false;  // retain weight-0-only points downstairs
};

/// Direct image phi_* V_* on the base.
ParabolicBundle push_forward(const UpstairsBundle& u, PushOptions options = {});

/// Residues of phi_* D. Throws MergeConflict if two coalesced pieces of
/// equal weight carry different eigenvalues.
ResidueData push_forward_residues(const UpstairsBundle& u, const UpstairsResidues& r, PushOptions options = {});

/// is_parabolic_connection on the pushed pair. Precondition: the pair is a
/// parabolic connection upstairs.
bool verify_parabolicity(const UpstairsBundle& u, const UpstairsResidues& r);

/// Relabels sheets by pi (sheet i becomes pi(i)). Component order and
/// point names are recomputed canonically.
UpstairsBundle relabel(const UpstairsBundle& u, const Permutation& pi);
UpstairsResidues relabel(const UpstairsBundle& u, const UpstairsResidues& r, const Permutation& pi);

/// Rank of the component containing each sheet.
std::vector<long long> sheet_ranks(const UpstairsBundle& u);

}  // namespace parpush

#pragma once

#include <map>
#include <string>
#include <vector>

#include "parpush/hurwitz.hpp"
#include "parpush/rational.hpp"

namespace parpush {

/// One graded piece F_j / F_{j+1} of a flag and its weight.
struct FlagStep {
  long long dim = 0;
  Rational weight;
  friend bool operator==(const FlagStep&, const FlagStep&) = default;
};

/// Quasi-parabolic flag at a point, stored by graded dimensions.
/// Weights are strictly increasing in [0, 1); every dimension is positive.
class WeightedFlag {
 public:
  WeightedFlag() = default;
  /// Throws MalformedBundle if the invariants fail.
  explicit WeightedFlag(std::vector<FlagStep> steps);

  /// One step of weight 0 covering the whole fiber.
  static WeightedFlag trivial(long long rank);

  const std::vector<FlagStep>& steps() const { return steps_; }
  std::size_t size() const { return steps_.size(); }
  long long rank() const;
  bool is_trivial() const;
  std::vector<Rational> weights() const;

  friend bool operator==(const WeightedFlag&, const WeightedFlag&) = default;

 private:
  std::vector<FlagStep> steps_;
};

/// Bundle data on one connected curve: rank and degree.
struct ComponentBundle {
  long long rank = 1;
  long long degree = 0;
  friend bool operator==(const ComponentBundle&, const ComponentBundle&) = default;
};

/// Parabolic bundle on the (connected) base curve. Marked points without a
/// flag entry carry the trivial structure.
struct ParabolicBundle {
  MarkedCurve curve;
  long long rank = 1;
  long long degree = 0;
  std::map<std::string, WeightedFlag> flags;

  WeightedFlag flag_at(const std::string& label) const;
  /// Copy with trivial flags dropped, so equal bundles compare equal.
  ParabolicBundle canonical() const;
  friend bool operator==(const ParabolicBundle&, const ParabolicBundle&) = default;
};

/// Throws MalformedBundle / FlagOverUnmarkedPoint on inconsistent data.
void check_well_formed(const ParabolicBundle& e);

/// Residue eigenvalues per point, one per flag step, each acting as a scalar
/// on its graded piece. Points without an entry have zero residue.
using ResidueData = std::map<std::string, std::vector<Rational>>;

/// Equal residues compare equal after this: zero entries at unflagged points
/// are dropped.
ResidueData canonical_residues(const ParabolicBundle& e, const ResidueData& r);

/// dim E^c with E^c = F_{j(c)}, j(c) least with c <= weight_j. Throws
/// OutOfRange unless 0 <= c <= 1.
long long weighted_subspace_dim(const WeightedFlag& f, const Rational& c);

/// sum_j weight_j * dim_j
Rational weighted_trace(const WeightedFlag& f);
/// sum_j eigenvalue_j * dim_j; throws MisalignedResidues on length mismatch.
Rational residue_trace(const WeightedFlag& f, const std::vector<Rational>& eigenvalues);
/// Codimension of flag-preserving endomorphisms: sum_{a<b} d_a d_b.
long long flag_codimension(const WeightedFlag& f);

Rational par_deg(const ParabolicBundle& e);
long long flag_end_degree(const ParabolicBundle& e);
/// degree(E) == -sum of residue traces.
bool ohtsuki_check(const ParabolicBundle& e, const ResidueData& r);
/// Residue acts on every graded piece as its weight.
bool is_parabolic_connection(const ParabolicBundle& e, const ResidueData& r);

}  // namespace parpush

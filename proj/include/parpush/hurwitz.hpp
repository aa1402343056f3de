#pragma once

#include <compare>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace parpush {

/// Permutation of {0, ..., n-1}. Files use 1-indexed one-line notation;
/// the conversion happens at the I/O boundary.
///
/// Products read left to right: (p * q)(i) = q(p(i)), i.e. apply p first.
class Permutation {
 public:
  Permutation() = default;
  static Permutation identity(int n);
  /// Throws OutOfRange unless `images` is a permutation of 0..n-1.
  static Permutation from_images(std::vector<int> images);
  /// 1-indexed one-line notation, e.g. {2, 1, 3}.
  static Permutation from_one_line(const std::vector<int>& one_based);
  /// 1-indexed disjoint cycles, e.g. {{1, 2}, {3}}; unlisted points are fixed.
  static Permutation from_cycles(int n, const std::vector<std::vector<int>>& one_based_cycles);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& images() const { return images_; }
  std::vector<int> one_line() const;

  Permutation inverse() const;
  bool is_identity() const;
  /// Disjoint cycles (fixed points included), each starting at its least
  /// element, ordered by that element.
  std::vector<std::vector<int>> cycles() const;

  friend Permutation operator*(const Permutation& p, const Permutation& q);
  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> images_;
};

/// [a, b] = a b a^-1 b^-1 in the left-to-right product convention.
Permutation commutator(const Permutation& a, const Permutation& b);

struct MarkedCurve {
  int genus = 0;
  std::vector<std::string> marked_points;

  bool has_point(const std::string& label) const;
  friend bool operator==(const MarkedCurve&, const MarkedCurve&) = default;
};

/// Branched covering Y -> X presented by sheet monodromy. The relation
///   [a_1, b_1] ... [a_g, b_g] * s_1 ... s_n = 1
/// uses the order of base.marked_points for the s_j.
struct CoveringMonodromy {
  MarkedCurve base;
  int degree = 1;
  std::vector<Permutation> handles;  // a_1, b_1, ..., a_g, b_g
  std::map<std::string, Permutation> branch;

  /// Handles followed by branch permutations in marked-point order.
  std::vector<Permutation> generators() const;
  const Permutation& branch_at(const std::string& label) const;

  friend bool operator==(const CoveringMonodromy&, const CoveringMonodromy&) = default;
};

/// The trivial (degree 1) covering of `base`.
CoveringMonodromy identity_covering(const MarkedCurve& base);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const CoveringMonodromy& c);

/// Connected component of Y: a monodromy orbit of sheets.
struct CoverComponent {
  std::vector<int> sheets;  // ascending, 0-indexed
  int local_degree = 0;
  long long genus = 0;
  friend bool operator==(const CoverComponent&, const CoverComponent&) = default;
};

/// Components ordered by least sheet. Throws InvalidCovering for invalid
/// data and NonIntegralGenus when Riemann-Hurwitz gives no genus.
std::vector<CoverComponent> components(const CoveringMonodromy& c);

/// component index of every sheet, for the ordering of components().
std::vector<int> component_of_sheets(const CoveringMonodromy& c);

/// Point y_k over x: the sheets of one cycle of the branch permutation,
/// with multiplicity b_k = cycle length.
struct RamificationPoint {
  std::vector<int> sheets;  // cycle order, starting at the least sheet
  int multiplicity = 1;
};

/// One entry per cycle of the branch permutation at x, by least sheet.
/// Throws UnknownPoint when x is not marked on the base.
std::vector<RamificationPoint> ramification_profile(const CoveringMonodromy& c, const std::string& x);

/// sum over components of (2 - 2 g_c) == n (2 - 2 g_X) - sum (b - 1).
bool riemann_hurwitz_holds(const CoveringMonodromy& c);

/// Canonical name of a point of Y: (component, base label, least sheet of
/// its cycle).
struct YPoint {
  int component = 0;
  std::string over;
  int sheet = 0;  // 0-indexed least sheet of the cycle

  friend bool operator==(const YPoint&, const YPoint&) = default;
  friend auto operator<=>(const YPoint&, const YPoint&) = default;
};

/// Canonical point containing `sheet` over `over`. Throws UnknownPoint.
YPoint canonical_point(const CoveringMonodromy& c, const std::string& over, int sheet);

/// All points of Y over marked points, canonical order.
std::vector<YPoint> points_over_marked(const CoveringMonodromy& c);

/// Enumerates bijections pi of sheets with ranks_a[i] == ranks_b[pi(i)] and
/// pi(g_a(i)) == g_b(pi(i)) for every paired generator (g_a, g_b), by
/// backtracking over orbit representatives. The visitor returns true to
/// stop. Returns true iff the visitor stopped the search.
bool for_each_conjugator(std::span<const Permutation> gens_a, std::span<const Permutation> gens_b,
                         std::span<const long long> ranks_a, std::span<const long long> ranks_b,
                         const std::function<bool(const Permutation&)>& visit);

}  // namespace parpush

#include "parpush/torus.hpp"

#include <algorithm>
#include <set>

#include "parpush/error.hpp"

namespace parpush {

CoveringMonodromy RamifiedTorusData::as_covering() const {
  CoveringMonodromy c;
  c.base = base;
  c.degree = static_cast<int>(block_ranks.size());
  c.handles = handles;
  c.branch = branch;
  return c;
}

namespace {

std::vector<std::string> rank_violations(const RamifiedTorusData& t) {
  std::vector<std::string> out;
  const auto gens = t.as_covering().generators();
  const int n = static_cast<int>(t.block_ranks.size());
  for (const auto& g : gens) {
    if (g.size() != n) continue;  // reported by the covering check
    for (int i = 0; i < n; ++i) {
      if (t.block_ranks[static_cast<std::size_t>(g(i))] != t.block_ranks[static_cast<std::size_t>(i)]) {
        out.push_back("block monodromy sends block " + std::to_string(i + 1) + " to block " + std::to_string(g(i) + 1) +
                      " of different rank");
        return out;
      }
    }
  }
  return out;
}

}  // namespace

ValidationReport validate(const RamifiedTorusData& t) {
  ValidationReport report;
  if (t.block_ranks.empty()) {
    report.violations.emplace_back("torus has no blocks");
    return report;
  }
  for (std::size_t i = 0; i < t.block_ranks.size(); ++i) {
    if (t.block_ranks[i] <= 0) report.violations.push_back("block " + std::to_string(i + 1) + " has non-positive rank");
  }
  for (auto& v : validate(t.as_covering()).violations) report.violations.push_back(std::move(v));
  if (report.ok()) report.violations = rank_violations(t);
  return report;
}

RamifiedTorusData torus_from_direct_image(const UpstairsBundle& u) {
  check_well_formed(u);
  const auto& cov = u.covering;
  const auto comps = components(cov);

  RamifiedTorusData t;
  t.base = cov.base;
  t.block_ranks = sheet_ranks(u);
  t.handles = cov.handles;
  t.branch = cov.branch;

  std::vector<long long> degrees;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const auto& v = u.components[k];
    degrees.push_back(direct_image_degree(v.degree, v.rank, comps[k].genus, comps[k].local_degree, cov.base.genus));
  }
  t.orbit_degrees = std::move(degrees);

  const auto owner = component_of_sheets(cov);
  for (const auto& x : cov.base.marked_points) {
    std::vector<CycleSplit> splits;
    for (const auto& point : ramification_profile(cov, x)) {
      const YPoint y{owner[static_cast<std::size_t>(point.sheets.front())], x, point.sheets.front()};
      std::vector<FlagStep> pieces;
      for (const auto& p : cycle_pieces(u.flag_at(y), point.multiplicity)) pieces.push_back(FlagStep{p.dim, p.weight});
      splits.push_back(CycleSplit{y.sheet, merge_pieces(pieces).steps()});
    }
    t.fiber_splitting.emplace(x, std::move(splits));
  }
  return t;
}

namespace {

struct LocalCycle {
  YPoint point;
  int b = 1;
  long long rank = 1;
};

struct Skeleton {
  CoveringMonodromy covering;
  std::vector<CoverComponent> comps;
  std::vector<int> owner;
  std::vector<long long> comp_ranks;
};

Skeleton skeleton_of(const ParabolicBundle& e, const RamifiedTorusData& t) {
  check_well_formed(e);
  if (t.base != e.curve) {
    throw Error(ErrorCode::InvalidCovering, "torus monodromy is over a different marked curve");
  }
  long long total = 0;
  for (long long r : t.block_ranks) total += r;
  if (total != e.rank) {
    throw Error(ErrorCode::RankMismatch,
                "block ranks sum to " + std::to_string(total) + ", bundle has rank " + std::to_string(e.rank));
  }
  if (auto v = validate(t.as_covering()); !v.ok()) throw Error(ErrorCode::InvalidCovering, v.violations.front());
  if (auto v = rank_violations(t); !v.empty()) throw Error(ErrorCode::RankMismatch, v.front());

  Skeleton s;
  s.covering = t.as_covering();
  s.comps = components(s.covering);
  s.owner = component_of_sheets(s.covering);
  for (const auto& c : s.comps) s.comp_ranks.push_back(t.block_ranks[static_cast<std::size_t>(c.sheets.front())]);
  return s;
}

std::vector<LocalCycle> local_cycles(const Skeleton& s, const std::string& x) {
  std::vector<LocalCycle> out;
  for (const auto& point : ramification_profile(s.covering, x)) {
    const int comp = s.owner[static_cast<std::size_t>(point.sheets.front())];
    out.push_back(LocalCycle{YPoint{comp, x, point.sheets.front()}, point.multiplicity,
                             s.comp_ranks[static_cast<std::size_t>(comp)]});
  }
  return out;
}

std::map<Rational, long long> fiber_pieces(const ParabolicBundle& e, const std::string& x) {
  std::map<Rational, long long> out;
  const WeightedFlag flag = e.flag_at(x);
  for (const auto& step : flag.steps()) out[step.weight] += step.dim;
  return out;
}

// Backtracking exact cover of the weighted pieces of E_x. Per cycle of
// length b and rank r, an upstairs step (m, lambda) consumes m dimensions
// at each weight (c + lambda) / b, c = 0..b-1. Choices are tried so that
// the expanded lambda sequences of the cycles come out in increasing
// lexicographic order.
class ExactCoverSearch {
 public:
  ExactCoverSearch(std::vector<LocalCycle> cycles, std::map<Rational, long long> pieces, std::size_t limit)
      : cycles_(std::move(cycles)), remaining_(std::move(pieces)), limit_(limit) {}

  std::vector<LocalAssignment> run() {
    if (limit_ > 0) next_cycle(0);
    return std::move(found_);
  }

 private:
  long long available(const Rational& w) const {
    auto it = remaining_.find(w);
    return it == remaining_.end() ? 0 : it->second;
  }

  std::vector<Rational> candidates(const LocalCycle& cy) const {
    std::set<Rational> lambdas;
    for (const auto& [w, d] : remaining_) {
      if (d == 0) continue;
      const Rational lambda = (w * Rational(cy.b)).frac_part();
      bool all_levels = true;
      for (int c = 0; c < cy.b && all_levels; ++c) all_levels = available((Rational(c) + lambda) / Rational(cy.b)) > 0;
      if (all_levels) lambdas.insert(lambda);
    }
    return {lambdas.begin(), lambdas.end()};
  }

  bool next_cycle(std::size_t i) {
    if (i == cycles_.size()) {
      for (const auto& [w, d] : remaining_) {
        if (d != 0) return false;
      }
      found_.push_back(current_);
      return found_.size() >= limit_;
    }
    std::vector<FlagStep> steps;
    return choose(i, candidates(cycles_[i]), 0, cycles_[i].rank, steps);
  }

  bool choose(std::size_t i, const std::vector<Rational>& cands, std::size_t k, long long left,
              std::vector<FlagStep>& steps) {
    const LocalCycle& cy = cycles_[i];
    if (left == 0) {
      current_[cy.point] = WeightedFlag(steps);
      const bool stop = next_cycle(i + 1);
      current_.erase(cy.point);
      return stop;
    }
    if (k == cands.size()) return false;
    const Rational& lambda = cands[k];
    long long most = left;
    for (int c = 0; c < cy.b; ++c) most = std::min(most, available((Rational(c) + lambda) / Rational(cy.b)));
    for (long long m = most; m >= 0; --m) {
      if (m > 0) {
        for (int c = 0; c < cy.b; ++c) remaining_[(Rational(c) + lambda) / Rational(cy.b)] -= m;
        steps.push_back(FlagStep{m, lambda});
      }
      const bool stop = choose(i, cands, k + 1, left - m, steps);
      if (m > 0) {
        steps.pop_back();
        for (int c = 0; c < cy.b; ++c) remaining_[(Rational(c) + lambda) / Rational(cy.b)] += m;
      }
      if (stop) return true;
    }
    return false;
  }

  std::vector<LocalCycle> cycles_;
  std::map<Rational, long long> remaining_;
  std::size_t limit_;
  LocalAssignment current_;
  std::vector<LocalAssignment> found_;
};

// Inverts w = (c + lambda) / b on the pieces of one cycle.
WeightedFlag invert_split(const LocalCycle& cy, const std::vector<FlagStep>& pieces, const std::string& x) {
  std::map<Rational, std::vector<long long>> levels;
  for (const auto& p : pieces) {
    const Rational scaled = p.weight * Rational(cy.b);
    const Integer c = scaled.floor();
    auto& dims = levels.try_emplace(scaled.frac_part(), std::vector<long long>(static_cast<std::size_t>(cy.b), 0))
                     .first->second;
    dims[c.get_ui()] += p.dim;
  }
  std::vector<FlagStep> steps;
  long long rank = 0;
  for (const auto& [lambda, dims] : levels) {
    if (std::adjacent_find(dims.begin(), dims.end(), std::not_equal_to<>()) != dims.end()) {
      throw Error(ErrorCode::NoConsistentAssignment, "split pieces over '" + x + "' at sheet " +
                                                         std::to_string(cy.point.sheet + 1) +
                                                         " do not fill all levels of weight " + lambda.to_string());
    }
    steps.push_back(FlagStep{dims.front(), lambda});
    rank += dims.front();
  }
  if (rank != cy.rank) {
    throw Error(ErrorCode::NoConsistentAssignment, "split pieces over '" + x + "' at sheet " +
                                                       std::to_string(cy.point.sheet + 1) + " have rank " +
                                                       std::to_string(rank) + ", block rank is " + std::to_string(cy.rank));
  }
  return WeightedFlag(std::move(steps));
}

LocalAssignment assignment_from_split(const ParabolicBundle& e, const Skeleton& s, const std::string& x,
                                      const std::vector<CycleSplit>& splits) {
  const auto cycles = local_cycles(s, x);
  LocalAssignment out;
  std::vector<FlagStep> all;
  for (const auto& split : splits) {
    if (split.sheet < 0 || split.sheet >= s.covering.degree) {
      throw Error(ErrorCode::NoConsistentAssignment, "fiber splitting names block " + std::to_string(split.sheet + 1) +
                                                         ", which does not exist");
    }
    const YPoint y = canonical_point(s.covering, x, split.sheet);
    auto cy = std::find_if(cycles.begin(), cycles.end(), [&](const LocalCycle& c) { return c.point == y; });
    if (out.contains(y)) {
      throw Error(ErrorCode::NoConsistentAssignment, "fiber splitting over '" + x + "' lists a cycle twice");
    }
    out.emplace(y, invert_split(*cy, split.pieces, x));
    all.insert(all.end(), split.pieces.begin(), split.pieces.end());
  }
  if (out.size() != cycles.size()) {
    throw Error(ErrorCode::NoConsistentAssignment, "fiber splitting over '" + x + "' misses a cycle");
  }
  if (merge_pieces(all) != e.flag_at(x)) {
    throw Error(ErrorCode::NoConsistentAssignment, "fiber splitting over '" + x + "' does not add up to the flag of E");
  }
  return out;
}

}  // namespace

std::vector<LocalAssignment> enumerate_local_assignments(const ParabolicBundle& e, const RamifiedTorusData& t,
                                                         const std::string& x, std::size_t limit) {
  const Skeleton s = skeleton_of(e, t);
  if (!e.curve.has_point(x)) throw Error(ErrorCode::UnknownPoint, "'" + x + "' is not a marked point");
  return ExactCoverSearch(local_cycles(s, x), fiber_pieces(e, x), limit).run();
}

ReconstructionResult reconstruct(const ParabolicBundle& e, const RamifiedTorusData& t) {
  const Skeleton s = skeleton_of(e, t);

  ReconstructionResult rec;
  rec.covering = s.covering;
  rec.upstairs.covering = s.covering;

  std::vector<long long> summand_degrees;
  if (s.comps.size() == 1) {
    summand_degrees.push_back(e.degree);
  } else if (t.orbit_degrees && t.orbit_degrees->size() == s.comps.size()) {
    summand_degrees = *t.orbit_degrees;
    long long total = 0;
    for (long long d : summand_degrees) total += d;
    if (total != e.degree) {
      throw Error(ErrorCode::RankMismatch, "orbit degrees sum to " + std::to_string(total) + ", bundle has degree " +
                                               std::to_string(e.degree));
    }
  } else {
    throw Error(ErrorCode::RankMismatch, "block monodromy has " + std::to_string(s.comps.size()) +
                                             " orbits; their summand degrees are needed to split deg(E)");
  }
  for (std::size_t k = 0; k < s.comps.size(); ++k) {
    const long long r = s.comp_ranks[k];
    const auto& comp = s.comps[k];
    // Inverse of direct_image_degree.
    const long long deg = summand_degrees[k] - r * (1 - comp.genus) +
                          static_cast<long long>(comp.local_degree) * r * (1 - e.curve.genus);
    rec.upstairs.components.push_back(ComponentBundle{r, deg});
  }

  for (const auto& x : e.curve.marked_points) {
    LocalAssignment local;
    if (auto it = t.fiber_splitting.find(x); it != t.fiber_splitting.end()) {
      local = assignment_from_split(e, s, x, it->second);
    } else {
      auto found = ExactCoverSearch(local_cycles(s, x), fiber_pieces(e, x), 2).run();
      if (found.empty()) {
        throw Error(ErrorCode::NoConsistentAssignment,
                    "the flag over '" + x + "' cannot be distributed over the cycles of the block monodromy");
      }
      if (found.size() > 1) rec.ambiguous_points.push_back(x);
      local = std::move(found.front());
    }

    std::vector<AssignmentEntry> entries;
    for (const auto& cy : local_cycles(s, x)) {
      const WeightedFlag& flag = local.at(cy.point);
      for (const auto& step : flag.steps()) {
        for (int c = 0; c < cy.b; ++c) {
          entries.push_back(AssignmentEntry{(Rational(c) + step.weight) / Rational(cy.b), step.dim, cy.point, c, step.weight});
        }
      }
      if (!flag.is_trivial()) rec.upstairs.flags.emplace(cy.point, flag);
    }
    std::stable_sort(entries.begin(), entries.end(), [](const AssignmentEntry& a, const AssignmentEntry& b) {
      return std::tie(a.weight, a.point) < std::tie(b.weight, b.point);
    });
    rec.assignment.emplace(x, std::move(entries));
  }

  if (push_forward(rec.upstairs).canonical() != e.canonical()) {
    throw Error(ErrorCode::NoConsistentAssignment, "direct image of the reconstruction differs from E");
  }
  return rec;
}

UpstairsResidues induce_connection(const ParabolicBundle& e, const ResidueData& r, const ReconstructionResult& rec) {
  check_well_formed(e);
  std::map<std::string, std::map<Rational, Rational>> eigen_at;
  for (const auto& [label, eig] : r) {
    if (!e.curve.has_point(label)) {
      throw Error(ErrorCode::MisalignedResidues, "residue at '" + label + "', which is not a marked point");
    }
    if (eig.size() != e.flag_at(label).size()) {
      throw Error(ErrorCode::MisalignedResidues, "residue at '" + label + "' does not match its flag");
    }
  }
  for (const auto& x : e.curve.marked_points) {
    const WeightedFlag flag = e.flag_at(x);
    auto it = r.find(x);
    for (std::size_t j = 0; j < flag.size(); ++j) {
      eigen_at[x][flag.steps()[j].weight] = it == r.end() ? Rational(0) : it->second[j];
    }
  }

  UpstairsResidues out;
  for (const auto& x : e.curve.marked_points) {
    for (const auto& point : ramification_profile(rec.covering, x)) {
      const YPoint y = canonical_point(rec.covering, x, point.sheets.front());
      const int b = point.multiplicity;
      const WeightedFlag flag = rec.upstairs.flag_at(y);
      std::vector<Rational> taus;
      for (const auto& step : flag.steps()) {
        std::optional<Rational> tau;
        for (int c = 0; c < b; ++c) {
          const Rational w = (Rational(c) + step.weight) / Rational(b);
          auto found = eigen_at[x].find(w);
          if (found == eigen_at[x].end()) {
            throw Error(ErrorCode::MisalignedResidues, "no piece of weight " + w.to_string() + " over '" + x + "'");
          }
          const Rational candidate = Rational(b) * found->second - Rational(c);
          if (tau && *tau != candidate) {
            throw Error(ErrorCode::NotTorusPreserving,
                        "over '" + x + "' at sheet " + std::to_string(y.sheet + 1) + ": level 0 gives " +
                            tau->to_string() + ", level " + std::to_string(c) + " gives " + candidate.to_string());
          }
          tau = candidate;
        }
        taus.push_back(*tau);
      }
      out.emplace(y, std::move(taus));
    }
  }
  out = canonical_residues(rec.upstairs, out);

  if (canonical_residues(e, push_forward_residues(rec.upstairs, out)) != canonical_residues(e, r)) {
    throw Error(ErrorCode::NotTorusPreserving, "induced residues do not push forward to R");
  }
  return out;
}

namespace {

bool same_local_flags(const UpstairsBundle& a, const LocalAssignment& b, const std::string& x) {
  for (const auto& [y, flag] : b) {
    if (a.flag_at(y) != flag) return false;
  }
  return std::all_of(a.flags.begin(), a.flags.end(),
                     [&](const auto& kv) { return kv.first.over != x || b.contains(kv.first); });
}

}  // namespace

RoundtripReport roundtrip_covering_report(const UpstairsBundle& u, RoundtripOptions options) {
  RoundtripReport report;
  const ParabolicBundle e = push_forward(u);
  RamifiedTorusData t = torus_from_direct_image(u);
  if (!options.use_fiber_splitting) t.fiber_splitting.clear();
  const ReconstructionResult rec = reconstruct(e, t);
  report.ambiguous = !rec.ambiguous_points.empty();

  const auto gens_a = u.covering.generators();
  const auto gens_b = rec.covering.generators();
  const auto ranks_a = sheet_ranks(u);
  const UpstairsBundle target = rec.upstairs.canonical();

  bool conjugate = false;
  const bool exact = for_each_conjugator(gens_a, gens_b, ranks_a, t.block_ranks, [&](const Permutation& pi) {
    conjugate = true;
    return relabel(u, pi).canonical() == target;
  });
  if (exact) {
    report.ok = true;
    return report;
  }
  if (!conjugate) {
    report.detail = "reconstructed covering is not conjugate to the original";
    return report;
  }
  if (!report.ambiguous) {
    report.detail = "reconstructed bundle differs from the original under every relabeling";
    return report;
  }

  // Several exact covers exist: the original must be one of them.
  std::map<std::string, std::vector<LocalAssignment>> solutions;
  constexpr std::size_t kSolutionLimit = 1 << 16;
  for (const auto& x : e.curve.marked_points) solutions[x] = enumerate_local_assignments(e, t, x, kSolutionLimit);
  report.ok = for_each_conjugator(gens_a, gens_b, ranks_a, t.block_ranks, [&](const Permutation& pi) {
    const UpstairsBundle moved = relabel(u, pi);
    if (moved.components != rec.upstairs.components) return false;
    for (const auto& [x, sols] : solutions) {
      const bool listed = std::any_of(sols.begin(), sols.end(),
                                      [&](const LocalAssignment& s) { return same_local_flags(moved, s, x); });
      if (!listed) return false;
    }
    return true;
  });
  if (!report.ok) report.detail = "original bundle is not among the exact covers";
  return report;
}

RoundtripReport roundtrip_connection_report(const UpstairsBundle& u, const UpstairsResidues& r) {
  RoundtripReport report;
  const ResidueData pushed = push_forward_residues(u, r);
  const ParabolicBundle e = push_forward(u);
  const RamifiedTorusData t = torus_from_direct_image(u);
  const ReconstructionResult rec = reconstruct(e, t);
  const UpstairsResidues induced = induce_connection(e, pushed, rec);

  const UpstairsBundle target = rec.upstairs.canonical();
  report.ok = for_each_conjugator(u.covering.generators(), rec.covering.generators(), sheet_ranks(u), t.block_ranks,
                                  [&](const Permutation& pi) {
                                    if (relabel(u, pi).canonical() != target) return false;
                                    return canonical_residues(rec.upstairs, relabel(u, r, pi)) == induced;
                                  });
  if (!report.ok) report.detail = "induced connection differs from the original under every relabeling";
  return report;
}

bool verify_roundtrip_covering(const UpstairsBundle& u) { return roundtrip_covering_report(u).ok; }

bool verify_roundtrip_connection(const UpstairsBundle& u, const UpstairsResidues& r) {
  return roundtrip_connection_report(u, r).ok;
}

}  // namespace parpush

#include "parpush/pushforward.hpp"

#include <algorithm>

#include "parpush/error.hpp"

namespace parpush {

WeightedFlag UpstairsBundle::flag_at(const YPoint& y) const {
  auto it = flags.find(y);
  if (it != flags.end()) return it->second;
  return WeightedFlag::trivial(components.at(static_cast<std::size_t>(y.component)).rank);
}

UpstairsBundle UpstairsBundle::canonical() const {
  UpstairsBundle out = *this;
  std::erase_if(out.flags, [](const auto& kv) { return kv.second.is_trivial(); });
  return out;
}

namespace {

void check_point(const CoveringMonodromy& c, const YPoint& y, ErrorCode code) {
  if (!c.base.has_point(y.over)) {
    throw Error(ErrorCode::FlagOverUnmarkedPoint, "point over '" + y.over + "', which is not a marked point");
  }
  if (y.sheet < 0 || y.sheet >= c.degree || canonical_point(c, y.over, y.sheet) != y) {
    throw Error(code, "sheet " + std::to_string(y.sheet + 1) + " over '" + y.over +
                          "' does not name a canonical point of the covering");
  }
}

void check_residues(const UpstairsBundle& u, const UpstairsResidues& r) {
  for (const auto& [y, eig] : r) {
    check_point(u.covering, y, ErrorCode::MisalignedResidues);
    if (eig.size() != u.flag_at(y).size()) {
      throw Error(ErrorCode::MisalignedResidues, "residue over '" + y.over + "' at sheet " +
                                                     std::to_string(y.sheet + 1) + " does not match its flag");
    }
  }
}

std::vector<Rational> residue_at(const UpstairsResidues& r, const YPoint& y, std::size_t steps) {
  auto it = r.find(y);
  return it == r.end() ? std::vector<Rational>(steps) : it->second;
}

}  // namespace

void check_well_formed(const UpstairsBundle& u) {
  const auto report = validate(u.covering);
  if (!report.ok()) throw Error(ErrorCode::InvalidCovering, report.violations.front());
  const auto comps = components(u.covering);
  if (comps.size() != u.components.size()) {
    throw Error(ErrorCode::MalformedBundle, "covering has " + std::to_string(comps.size()) + " components, bundle lists " +
                                                std::to_string(u.components.size()));
  }
  for (const auto& c : u.components) {
    if (c.rank <= 0) throw Error(ErrorCode::MalformedBundle, "component rank must be positive");
  }
  for (const auto& [y, flag] : u.flags) {
    check_point(u.covering, y, ErrorCode::MalformedBundle);
    const long long r = u.components[static_cast<std::size_t>(y.component)].rank;
    if (flag.rank() != r) {
      throw Error(ErrorCode::MalformedBundle, "flag over '" + y.over + "' has rank " + std::to_string(flag.rank()) +
                                                  ", component has rank " + std::to_string(r));
    }
  }
}

UpstairsResidues canonical_residues(const UpstairsBundle& u, const UpstairsResidues& r) {
  UpstairsResidues out;
  for (const auto& [y, eig] : r) {
    auto it = u.flags.find(y);
    const bool flagged = it != u.flags.end() && !it->second.is_trivial();
    const bool zero = std::all_of(eig.begin(), eig.end(), [](const Rational& v) { return v.is_zero(); });
    if (flagged || !zero) out.emplace(y, eig);
  }
  return out;
}

Rational par_deg(const UpstairsBundle& u) {
  Rational d;
  for (const auto& c : u.components) d += Rational(c.degree);
  for (const auto& [y, flag] : u.flags) d += weighted_trace(flag);
  return d;
}

long long flag_end_degree(const UpstairsBundle& u) {
  long long d = 0;
  for (const auto& [y, flag] : u.flags) d -= flag_codimension(flag);
  return d;
}

bool ohtsuki_check(const UpstairsBundle& u, const UpstairsResidues& r) {
  check_residues(u, r);
  std::vector<Rational> traces(u.components.size());
  for (const auto& [y, eig] : r) traces[static_cast<std::size_t>(y.component)] += residue_trace(u.flag_at(y), eig);
  for (std::size_t k = 0; k < u.components.size(); ++k) {
    if (Rational(u.components[k].degree) != -traces[k]) return false;
  }
  return true;
}

bool is_parabolic_connection(const UpstairsBundle& u, const UpstairsResidues& r) {
  check_residues(u, r);
  for (const auto& y : points_over_marked(u.covering)) {
    const WeightedFlag flag = u.flag_at(y);
    const auto eig = residue_at(r, y, flag.size());
    for (std::size_t j = 0; j < flag.size(); ++j) {
      if (eig[j] != flag.steps()[j].weight) return false;
    }
  }
  return true;
}

std::vector<LevelPiece> cycle_pieces(const WeightedFlag& flag, int b) {
  if (b < 1) throw Error(ErrorCode::OutOfRange, "ramification index must be positive");
  std::vector<LevelPiece> out;
  for (int c = 0; c < b; ++c) {
    for (std::size_t d = 0; d < flag.size(); ++d) {
      const auto& step = flag.steps()[d];
      out.push_back(LevelPiece{c, d, step.dim, (Rational(c) + step.weight) / Rational(b)});
    }
  }
  return out;
}

std::vector<ResiduePiece> cycle_residue_pieces(const WeightedFlag& flag, const std::vector<Rational>& eigenvalues, int b) {
  if (eigenvalues.size() != flag.size()) {
    throw Error(ErrorCode::MisalignedResidues, "eigenvalue count does not match flag steps");
  }
  std::vector<ResiduePiece> out;
  for (auto& piece : cycle_pieces(flag, b)) {
    const Rational eig = (eigenvalues[piece.step] + Rational(piece.level)) / Rational(b);
    out.push_back(ResiduePiece{std::move(piece), eig});
  }
  return out;
}

WeightedFlag merge_pieces(const std::vector<FlagStep>& pieces) {
  std::map<Rational, long long> by_weight;
  for (const auto& p : pieces) by_weight[p.weight] += p.dim;
  std::vector<FlagStep> steps;
  for (const auto& [w, d] : by_weight) steps.push_back(FlagStep{d, w});
  return WeightedFlag(std::move(steps));
}

long long direct_image_degree(long long degree, long long rank, long long component_genus, int local_degree,
                              int base_genus) {
  return degree + rank * (1 - component_genus) - static_cast<long long>(local_degree) * rank * (1 - base_genus);
}

ParabolicBundle push_forward(const UpstairsBundle& u, PushOptions options) {
  check_well_formed(u);
  const auto& cov = u.covering;
  const auto comps = components(cov);
  const auto owner = component_of_sheets(cov);

  ParabolicBundle out;
  out.curve = cov.base;
  out.rank = 0;
  out.degree = 0;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const auto& v = u.components[k];
    out.rank += static_cast<long long>(comps[k].local_degree) * v.rank;
    out.degree += direct_image_degree(v.degree, v.rank, comps[k].genus, comps[k].local_degree, cov.base.genus);
  }

  for (const auto& x : cov.base.marked_points) {
    std::vector<FlagStep> pieces;
    for (const auto& point : ramification_profile(cov, x)) {
      const YPoint y{owner[static_cast<std::size_t>(point.sheets.front())], x, point.sheets.front()};
      for (const auto& p : cycle_pieces(u.flag_at(y), point.multiplicity)) pieces.push_back(FlagStep{p.dim, p.weight});
    }
    WeightedFlag merged = merge_pieces(pieces);
    if (options.keep_trivial || !merged.is_trivial()) out.flags.emplace(x, std::move(merged));
  }
  return out;
}

ResidueData push_forward_residues(const UpstairsBundle& u, const UpstairsResidues& r, PushOptions options) {
  check_well_formed(u);
  check_residues(u, r);
  const auto& cov = u.covering;
  const auto owner = component_of_sheets(cov);

  ResidueData out;
  for (const auto& x : cov.base.marked_points) {
    std::map<Rational, Rational> eigen_by_weight;
    for (const auto& point : ramification_profile(cov, x)) {
      const YPoint y{owner[static_cast<std::size_t>(point.sheets.front())], x, point.sheets.front()};
      const WeightedFlag flag = u.flag_at(y);
      for (const auto& rp : cycle_residue_pieces(flag, residue_at(r, y, flag.size()), point.multiplicity)) {
        auto [it, inserted] = eigen_by_weight.emplace(rp.piece.weight, rp.eigenvalue);
        if (!inserted && it->second != rp.eigenvalue) {
          throw Error(ErrorCode::MergeConflict, "pieces of weight " + rp.piece.weight.to_string() + " over '" + x +
                                                    "' carry eigenvalues " + it->second.to_string() + " and " +
                                                    rp.eigenvalue.to_string());
        }
      }
    }
    std::vector<Rational> eig;
    bool nonzero = false;
    for (const auto& [w, e] : eigen_by_weight) {
      eig.push_back(e);
      nonzero = nonzero || !e.is_zero();
    }
    const bool trivial_flag = eigen_by_weight.size() == 1 && eigen_by_weight.begin()->first.is_zero();
    if (options.keep_trivial || !trivial_flag || nonzero) out.emplace(x, std::move(eig));
  }
  return out;
}

bool verify_parabolicity(const UpstairsBundle& u, const UpstairsResidues& r) {
  return is_parabolic_connection(push_forward(u), push_forward_residues(u, r));
}

std::vector<long long> sheet_ranks(const UpstairsBundle& u) {
  const auto owner = component_of_sheets(u.covering);
  std::vector<long long> ranks(owner.size());
  for (std::size_t s = 0; s < owner.size(); ++s) ranks[s] = u.components.at(static_cast<std::size_t>(owner[s])).rank;
  return ranks;
}

namespace {

CoveringMonodromy relabel_covering(const CoveringMonodromy& c, const Permutation& pi) {
  const Permutation pi_inv = pi.inverse();
  CoveringMonodromy out;
  out.base = c.base;
  out.degree = c.degree;
  for (const auto& h : c.handles) out.handles.push_back(pi_inv * h * pi);
  for (const auto& [label, s] : c.branch) out.branch.emplace(label, pi_inv * s * pi);
  return out;
}

YPoint relabel_point(const CoveringMonodromy& relabeled, const YPoint& y, const Permutation& pi) {
  return canonical_point(relabeled, y.over, pi(y.sheet));
}

}  // namespace

UpstairsBundle relabel(const UpstairsBundle& u, const Permutation& pi) {
  UpstairsBundle out;
  out.covering = relabel_covering(u.covering, pi);
  const auto old_comps = components(u.covering);
  const auto new_owner = component_of_sheets(out.covering);
  out.components.resize(u.components.size());
  for (std::size_t k = 0; k < old_comps.size(); ++k) {
    const int moved = new_owner[static_cast<std::size_t>(pi(old_comps[k].sheets.front()))];
    out.components[static_cast<std::size_t>(moved)] = u.components[k];
  }
  for (const auto& [y, flag] : u.flags) out.flags.emplace(relabel_point(out.covering, y, pi), flag);
  return out;
}

UpstairsResidues relabel(const UpstairsBundle& u, const UpstairsResidues& r, const Permutation& pi) {
  const CoveringMonodromy relabeled = relabel_covering(u.covering, pi);
  UpstairsResidues out;
  for (const auto& [y, eig] : r) out.emplace(relabel_point(relabeled, y, pi), eig);
  return out;
}

}  // namespace parpush

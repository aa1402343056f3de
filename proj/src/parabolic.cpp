#include "parpush/parabolic.hpp"

#include <algorithm>

#include "parpush/error.hpp"

namespace parpush {

WeightedFlag::WeightedFlag(std::vector<FlagStep> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw Error(ErrorCode::MalformedBundle, "flag has no steps");
  for (std::size_t j = 0; j < steps_.size(); ++j) {
    if (steps_[j].dim <= 0) throw Error(ErrorCode::MalformedBundle, "flag step with non-positive dimension");
    if (steps_[j].weight < Rational(0) || steps_[j].weight >= Rational(1)) {
      throw Error(ErrorCode::MalformedBundle, "weight " + steps_[j].weight.to_string() + " outside [0, 1)");
    }
    if (j > 0 && steps_[j - 1].weight >= steps_[j].weight) {
      throw Error(ErrorCode::MalformedBundle, "weights are not strictly increasing");
    }
  }
}

WeightedFlag WeightedFlag::trivial(long long rank) { return WeightedFlag({FlagStep{rank, Rational(0)}}); }

long long WeightedFlag::rank() const {
  long long r = 0;
  for (const auto& s : steps_) r += s.dim;
  return r;
}

bool WeightedFlag::is_trivial() const { return steps_.size() == 1 && steps_[0].weight.is_zero(); }

std::vector<Rational> WeightedFlag::weights() const {
  std::vector<Rational> w;
  w.reserve(steps_.size());
  for (const auto& s : steps_) w.push_back(s.weight);
  return w;
}

WeightedFlag ParabolicBundle::flag_at(const std::string& label) const {
  auto it = flags.find(label);
  return it == flags.end() ? WeightedFlag::trivial(rank) : it->second;
}

ParabolicBundle ParabolicBundle::canonical() const {
  ParabolicBundle out = *this;
  std::erase_if(out.flags, [](const auto& kv) { return kv.second.is_trivial(); });
  return out;
}

void check_well_formed(const ParabolicBundle& e) {
  if (e.rank <= 0) throw Error(ErrorCode::MalformedBundle, "rank must be positive");
  for (const auto& [label, flag] : e.flags) {
    if (!e.curve.has_point(label)) {
      throw Error(ErrorCode::FlagOverUnmarkedPoint, "flag at '" + label + "', which is not a marked point");
    }
    if (flag.rank() != e.rank) {
      throw Error(ErrorCode::MalformedBundle, "flag at '" + label + "' has rank " + std::to_string(flag.rank()) +
                                                  ", bundle has rank " + std::to_string(e.rank));
    }
  }
}

ResidueData canonical_residues(const ParabolicBundle& e, const ResidueData& r) {
  ResidueData out;
  for (const auto& [label, eig] : r) {
    const bool flagged = e.flags.contains(label) && !e.flags.at(label).is_trivial();
    const bool zero = std::all_of(eig.begin(), eig.end(), [](const Rational& v) { return v.is_zero(); });
    if (flagged || !zero) out.emplace(label, eig);
  }
  return out;
}

long long weighted_subspace_dim(const WeightedFlag& f, const Rational& c) {
  if (c < Rational(0) || c > Rational(1)) {
    throw Error(ErrorCode::OutOfRange, "weighted subspace index " + c.to_string() + " outside [0, 1]");
  }
  long long dim = f.rank();
  for (const auto& step : f.steps()) {
    if (c <= step.weight) return dim;
    dim -= step.dim;
  }
  return 0;
}

Rational weighted_trace(const WeightedFlag& f) {
  Rational t;
  for (const auto& s : f.steps()) t += s.weight * Rational(s.dim);
  return t;
}

Rational residue_trace(const WeightedFlag& f, const std::vector<Rational>& eigenvalues) {
  if (eigenvalues.size() != f.size()) {
    throw Error(ErrorCode::MisalignedResidues, std::to_string(eigenvalues.size()) + " eigenvalues for " +
                                                   std::to_string(f.size()) + " flag steps");
  }
  Rational t;
  for (std::size_t j = 0; j < f.size(); ++j) t += eigenvalues[j] * Rational(f.steps()[j].dim);
  return t;
}

long long flag_codimension(const WeightedFlag& f) {
  long long codim = 0;
  long long above = 0;
  for (const auto& s : f.steps()) {
    codim += above * s.dim;
    above += s.dim;
  }
  return codim;
}

Rational par_deg(const ParabolicBundle& e) {
  Rational d(e.degree);
  for (const auto& [label, flag] : e.flags) d += weighted_trace(flag);
  return d;
}

long long flag_end_degree(const ParabolicBundle& e) {
  long long d = 0;
  for (const auto& [label, flag] : e.flags) d -= flag_codimension(flag);
  return d;
}

namespace {

void check_residue_points(const ParabolicBundle& e, const ResidueData& r) {
  for (const auto& [label, eig] : r) {
    if (!e.curve.has_point(label)) {
      throw Error(ErrorCode::MisalignedResidues, "residue at '" + label + "', which is not a marked point");
    }
  }
}

}  // namespace

bool ohtsuki_check(const ParabolicBundle& e, const ResidueData& r) {
  check_residue_points(e, r);
  Rational total;
  for (const auto& [label, eig] : r) total += residue_trace(e.flag_at(label), eig);
  return Rational(e.degree) == -total;
}

bool is_parabolic_connection(const ParabolicBundle& e, const ResidueData& r) {
  check_residue_points(e, r);
  bool ok = true;
  for (const auto& label : e.curve.marked_points) {
    const WeightedFlag flag = e.flag_at(label);
    auto it = r.find(label);
    const std::vector<Rational> eig = it == r.end() ? std::vector<Rational>(flag.size()) : it->second;
    if (eig.size() != flag.size()) {
      throw Error(ErrorCode::MisalignedResidues, "residue at '" + label + "' does not match its flag");
    }
    for (std::size_t j = 0; j < flag.size(); ++j) ok = ok && eig[j] == flag.steps()[j].weight;
  }
  return ok;
}

}  // namespace parpush

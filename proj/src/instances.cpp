#include "parpush/instances.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace parpush {

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
long long uniform(Rng& rng, long long lo, long long hi) { return std::uniform_int_distribution<long long>(lo, hi)(rng); }

}  // namespace

Permutation random_permutation(Rng& rng, int n) {
  std::vector<int> images(static_cast<std::size_t>(n));
  std::iota(images.begin(), images.end(), 0);
  std::shuffle(images.begin(), images.end(), rng);
  return Permutation::from_images(std::move(images));
}

CoveringMonodromy random_covering(Rng& rng, const InstanceParams& params) {
  CoveringMonodromy c;
  c.base.genus = uniform(rng, 0, params.max_base_genus);
  const int marked = uniform(rng, 1, params.max_marked_points);
  for (int i = 1; i <= marked; ++i) c.base.marked_points.push_back("x" + std::to_string(i));
  c.degree = uniform(rng, 1, params.max_degree);

  auto draw = [&] { return uniform(rng, 0, 3) == 0 ? Permutation::identity(c.degree) : random_permutation(rng, c.degree); };
  Permutation product = Permutation::identity(c.degree);
  for (int i = 0; i < c.base.genus; ++i) {
    Permutation a = draw();
    Permutation b = draw();
    product = product * commutator(a, b);
    c.handles.push_back(std::move(a));
    c.handles.push_back(std::move(b));
  }
  for (int i = 0; i + 1 < marked; ++i) {
    Permutation s = draw();
    product = product * s;
    c.branch.emplace(c.base.marked_points[static_cast<std::size_t>(i)], std::move(s));
  }
  c.branch.emplace(c.base.marked_points.back(), product.inverse());
  return c;
}

WeightedFlag random_flag(Rng& rng, long long rank, const InstanceParams& params) {
  std::set<Rational> pool;
  for (int q = 1; q <= params.max_denominator; ++q) {
    for (int p = 0; p < q; ++p) pool.insert(Rational::normalize(p, q));
  }
  const long long steps = uniform(rng, 1LL, std::min<long long>(rank, static_cast<long long>(pool.size())));
  std::vector<Rational> weights(pool.begin(), pool.end());
  std::shuffle(weights.begin(), weights.end(), rng);
  weights.resize(static_cast<std::size_t>(steps));
  std::sort(weights.begin(), weights.end());

  // Random composition of rank into `steps` positive parts.
  std::vector<long long> cuts(static_cast<std::size_t>(rank - 1));
  std::iota(cuts.begin(), cuts.end(), 1);
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(static_cast<std::size_t>(steps - 1));
  cuts.push_back(0);
  cuts.push_back(rank);
  std::sort(cuts.begin(), cuts.end());

  std::vector<FlagStep> out;
  for (std::size_t j = 0; j < weights.size(); ++j) out.push_back(FlagStep{cuts[j + 1] - cuts[j], weights[j]});
  return WeightedFlag(std::move(out));
}

UpstairsBundle random_upstairs(Rng& rng, const CoveringMonodromy& covering, const InstanceParams& params) {
  UpstairsBundle u;
  u.covering = covering;
  for (std::size_t k = 0; k < components(covering).size(); ++k) {
    u.components.push_back(
        ComponentBundle{uniform(rng, 1LL, params.max_rank), uniform(rng, -params.max_abs_degree, params.max_abs_degree)});
  }
  for (const auto& y : points_over_marked(covering)) {
    if (uniform(rng, 0, 1) == 0) continue;
    WeightedFlag flag = random_flag(rng, u.components[static_cast<std::size_t>(y.component)].rank, params);
    if (!flag.is_trivial()) u.flags.emplace(y, std::move(flag));
  }
  return u;
}

UpstairsResidues parabolic_residues(const UpstairsBundle& u) {
  UpstairsResidues r;
  for (const auto& [y, flag] : u.flags) r.emplace(y, flag.weights());
  return r;
}

UpstairsBundle make_ohtsuki_consistent(Rng& rng, UpstairsBundle u) {
  const auto points = points_over_marked(u.covering);
  for (std::size_t k = 0; k < u.components.size(); ++k) {
    std::vector<YPoint> on_component;
    std::copy_if(points.begin(), points.end(), std::back_inserter(on_component),
                 [&](const YPoint& y) { return y.component == static_cast<int>(k); });
    const long long rank = u.components[k].rank;
    if (!on_component.empty()) {
      const YPoint chosen = on_component[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(on_component.size()) - 1))];
      u.flags.erase(chosen);
      Rational rest;
      for (const auto& [y, flag] : u.flags) {
        if (y.component == static_cast<int>(k)) rest += weighted_trace(flag);
      }
      const Rational missing = (-rest).frac_part();
      if (!missing.is_zero()) {
        std::vector<FlagStep> steps;
        if (rank > 1) steps.push_back(FlagStep{rank - 1, Rational(0)});
        steps.push_back(FlagStep{1, missing});
        u.flags.emplace(chosen, WeightedFlag(std::move(steps)));
      }
    }
    Rational trace;
    for (const auto& [y, flag] : u.flags) {
      if (y.component == static_cast<int>(k)) trace += weighted_trace(flag);
    }
    // Components with no point over a marked point carry no flags: trace 0.
    u.components[k].degree = (-trace).floor().get_si();
  }
  return u;
}

UpstairsResidues shifted_residues(Rng& rng, const UpstairsBundle& u) {
  UpstairsResidues r;
  for (const auto& y : points_over_marked(u.covering)) {
    std::vector<Rational> eig = u.flag_at(y).weights();
    for (auto& e : eig) e += Rational(uniform(rng, -2, 2));
    r.emplace(y, std::move(eig));
  }
  return r;
}

}  // namespace parpush

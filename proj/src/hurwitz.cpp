#include "parpush/hurwitz.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "parpush/error.hpp"

namespace parpush {

Permutation Permutation::identity(int n) {
  Permutation p;
  p.images_.resize(static_cast<std::size_t>(n));
  std::iota(p.images_.begin(), p.images_.end(), 0);
  return p;
}

Permutation Permutation::from_images(std::vector<int> images) {
  const int n = static_cast<int>(images.size());
  std::vector<bool> seen(images.size(), false);
  for (int v : images) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) {
      throw Error(ErrorCode::OutOfRange, "not a permutation of 1.." + std::to_string(n));
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
  Permutation p;
  p.images_ = std::move(images);
  return p;
}

Permutation Permutation::from_one_line(const std::vector<int>& one_based) {
  std::vector<int> images(one_based.size());
  std::transform(one_based.begin(), one_based.end(), images.begin(), [](int v) { return v - 1; });
  return from_images(std::move(images));
}

Permutation Permutation::from_cycles(int n, const std::vector<std::vector<int>>& one_based_cycles) {
  std::vector<int> images(static_cast<std::size_t>(n), -1);
  for (const auto& cycle : one_based_cycles) {
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const int from = cycle[i] - 1;
      const int to = cycle[(i + 1) % cycle.size()] - 1;
      if (from < 0 || from >= n || to < 0 || to >= n || images[static_cast<std::size_t>(from)] != -1) {
        throw Error(ErrorCode::OutOfRange, "cycles are not disjoint within 1.." + std::to_string(n));
      }
      images[static_cast<std::size_t>(from)] = to;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (images[static_cast<std::size_t>(i)] == -1) images[static_cast<std::size_t>(i)] = i;
  }
  return from_images(std::move(images));
}

std::vector<int> Permutation::one_line() const {
  std::vector<int> out(images_.size());
  std::transform(images_.begin(), images_.end(), out.begin(), [](int v) { return v + 1; });
  return out;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.images_.resize(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) p.images_[static_cast<std::size_t>(images_[i])] = static_cast<int>(i);
  return p;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i] != static_cast<int>(i)) return false;
  }
  return true;
}

std::vector<std::vector<int>> Permutation::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(images_.size(), false);
  for (int start = 0; start < size(); ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    std::vector<int> cycle;
    for (int i = start; !seen[static_cast<std::size_t>(i)]; i = (*this)(i)) {
      seen[static_cast<std::size_t>(i)] = true;
      cycle.push_back(i);
    }
    out.push_back(std::move(cycle));
  }
  return out;
}

Permutation operator*(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) throw Error(ErrorCode::InvalidCovering, "product of permutations of different degree");
  Permutation r;
  r.images_.resize(p.images_.size());
  for (int i = 0; i < p.size(); ++i) r.images_[static_cast<std::size_t>(i)] = q(p(i));
  return r;
}

Permutation commutator(const Permutation& a, const Permutation& b) { return a * b * a.inverse() * b.inverse(); }

bool MarkedCurve::has_point(const std::string& label) const {
  return std::find(marked_points.begin(), marked_points.end(), label) != marked_points.end();
}

std::vector<Permutation> CoveringMonodromy::generators() const {
  std::vector<Permutation> gens = handles;
  for (const auto& label : base.marked_points) {
    if (auto it = branch.find(label); it != branch.end()) gens.push_back(it->second);
  }
  return gens;
}

const Permutation& CoveringMonodromy::branch_at(const std::string& label) const {
  auto it = branch.find(label);
  if (it == branch.end()) throw Error(ErrorCode::UnknownPoint, "no marked point '" + label + "'");
  return it->second;
}

CoveringMonodromy identity_covering(const MarkedCurve& base) {
  CoveringMonodromy c;
  c.base = base;
  c.degree = 1;
  c.handles.assign(static_cast<std::size_t>(2 * base.genus), Permutation::identity(1));
  for (const auto& label : base.marked_points) c.branch.emplace(label, Permutation::identity(1));
  return c;
}

ValidationReport validate(const CoveringMonodromy& c) {
  ValidationReport report;
  auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

  if (c.base.genus < 0) fail("base genus is negative");
  std::set<std::string> labels;
  for (const auto& label : c.base.marked_points) {
    if (!labels.insert(label).second) fail("marked point '" + label + "' listed twice");
  }
  if (c.degree < 1) {
    fail("degree must be positive");
    return report;
  }
  if (c.handles.size() != static_cast<std::size_t>(2 * std::max(c.base.genus, 0))) {
    fail("expected " + std::to_string(2 * c.base.genus) + " handle permutations, got " +
         std::to_string(c.handles.size()));
  }
  bool sizes_ok = true;
  for (std::size_t i = 0; i < c.handles.size(); ++i) {
    if (c.handles[i].size() != c.degree) {
      fail("handle permutation " + std::to_string(i + 1) + " has degree " + std::to_string(c.handles[i].size()));
      sizes_ok = false;
    }
  }
  for (const auto& label : c.base.marked_points) {
    auto it = c.branch.find(label);
    if (it == c.branch.end()) {
      fail("marked point '" + label + "' has no branch permutation");
      sizes_ok = false;
    } else if (it->second.size() != c.degree) {
      fail("branch permutation at '" + label + "' has degree " + std::to_string(it->second.size()));
      sizes_ok = false;
    }
  }
  for (const auto& [label, perm] : c.branch) {
    if (!labels.contains(label)) fail("branch permutation at unmarked point '" + label + "'");
  }
  if (!sizes_ok || c.handles.size() % 2 != 0) return report;

  Permutation product = Permutation::identity(c.degree);
  for (std::size_t i = 0; i < c.handles.size(); i += 2) product = product * commutator(c.handles[i], c.handles[i + 1]);
  for (const auto& label : c.base.marked_points) product = product * c.branch.at(label);
  if (!product.is_identity()) fail("monodromy relation fails: product of commutators and branch permutations is not the identity");
  return report;
}

namespace {

void require_valid(const CoveringMonodromy& c) {
  const auto report = validate(c);
  if (!report.ok()) throw Error(ErrorCode::InvalidCovering, report.violations.front());
}

std::vector<std::vector<int>> sheet_orbits(const CoveringMonodromy& c) {
  const auto gens = c.generators();
  std::vector<bool> seen(static_cast<std::size_t>(c.degree), false);
  std::vector<std::vector<int>> orbits;
  for (int start = 0; start < c.degree; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    std::vector<int> orbit{start};
    seen[static_cast<std::size_t>(start)] = true;
    for (std::size_t head = 0; head < orbit.size(); ++head) {
      for (const auto& g : gens) {
        const int next = g(orbit[head]);
        if (!seen[static_cast<std::size_t>(next)]) {
          seen[static_cast<std::size_t>(next)] = true;
          orbit.push_back(next);
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    orbits.push_back(std::move(orbit));
  }
  return orbits;
}

}  // namespace

std::vector<CoverComponent> components(const CoveringMonodromy& c) {
  require_valid(c);
  std::vector<CoverComponent> out;
  const auto orbits = sheet_orbits(c);
  std::vector<int> owner(static_cast<std::size_t>(c.degree));
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    for (int s : orbits[k]) owner[static_cast<std::size_t>(s)] = static_cast<int>(k);
  }
  std::vector<long long> ramification(orbits.size(), 0);
  for (const auto& [label, perm] : c.branch) {
    for (const auto& cycle : perm.cycles()) {
      ramification[static_cast<std::size_t>(owner[static_cast<std::size_t>(cycle.front())])] +=
          static_cast<long long>(cycle.size()) - 1;
    }
  }
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    const long long d = static_cast<long long>(orbits[k].size());
    const long long twice_genus = d * (2LL * c.base.genus - 2) + ramification[k] + 2;
    if (twice_genus < 0 || twice_genus % 2 != 0) {
      throw Error(ErrorCode::NonIntegralGenus, "component containing sheet " + std::to_string(orbits[k].front() + 1) +
                                                   " has 2g = " + std::to_string(twice_genus));
    }
    out.push_back(CoverComponent{orbits[k], static_cast<int>(d), twice_genus / 2});
  }
  return out;
}

std::vector<int> component_of_sheets(const CoveringMonodromy& c) {
  require_valid(c);
  std::vector<int> owner(static_cast<std::size_t>(c.degree));
  const auto orbits = sheet_orbits(c);
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    for (int s : orbits[k]) owner[static_cast<std::size_t>(s)] = static_cast<int>(k);
  }
  return owner;
}

std::vector<RamificationPoint> ramification_profile(const CoveringMonodromy& c, const std::string& x) {
  if (!c.base.has_point(x)) throw Error(ErrorCode::UnknownPoint, "'" + x + "' is not a marked point of the base");
  std::vector<RamificationPoint> out;
  for (auto& cycle : c.branch_at(x).cycles()) {
    const int b = static_cast<int>(cycle.size());
    out.push_back(RamificationPoint{std::move(cycle), b});
  }
  return out;
}

bool riemann_hurwitz_holds(const CoveringMonodromy& c) {
  const auto comps = components(c);
  long long lhs = 0;
  for (const auto& comp : comps) lhs += 2 - 2 * comp.genus;
  long long ramification = 0;
  for (const auto& [label, perm] : c.branch) {
    for (const auto& cycle : perm.cycles()) ramification += static_cast<long long>(cycle.size()) - 1;
  }
  return lhs == static_cast<long long>(c.degree) * (2 - 2LL * c.base.genus) - ramification;
}

YPoint canonical_point(const CoveringMonodromy& c, const std::string& over, int sheet) {
  if (!c.base.has_point(over)) throw Error(ErrorCode::UnknownPoint, "'" + over + "' is not a marked point of the base");
  if (sheet < 0 || sheet >= c.degree) {
    throw Error(ErrorCode::UnknownPoint, "sheet " + std::to_string(sheet + 1) + " out of range over '" + over + "'");
  }
  const Permutation& sigma = c.branch_at(over);
  int least = sheet;
  for (int i = sigma(sheet); i != sheet; i = sigma(i)) least = std::min(least, i);
  return YPoint{component_of_sheets(c)[static_cast<std::size_t>(least)], over, least};
}

std::vector<YPoint> points_over_marked(const CoveringMonodromy& c) {
  const auto owner = component_of_sheets(c);
  std::vector<YPoint> out;
  for (const auto& label : c.base.marked_points) {
    for (const auto& cycle : c.branch_at(label).cycles()) {
      out.push_back(YPoint{owner[static_cast<std::size_t>(cycle.front())], label, cycle.front()});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool for_each_conjugator(std::span<const Permutation> gens_a, std::span<const Permutation> gens_b,
                         std::span<const long long> ranks_a, std::span<const long long> ranks_b,
                         const std::function<bool(const Permutation&)>& visit) {
  const std::size_t n = ranks_a.size();
  if (ranks_b.size() != n || gens_a.size() != gens_b.size()) return false;
  for (std::size_t g = 0; g < gens_a.size(); ++g) {
    if (gens_a[g].size() != static_cast<int>(n) || gens_b[g].size() != static_cast<int>(n)) return false;
  }

  std::vector<int> image(n, -1);
  std::vector<bool> used(n, false);

  // Extends pi from root -> target along the orbit of root. On conflict the
  // partial assignment is rolled back and false returned.
  auto extend = [&](int root, int target, std::vector<int>& assigned) {
    std::deque<int> queue{root};
    image[static_cast<std::size_t>(root)] = target;
    used[static_cast<std::size_t>(target)] = true;
    assigned.push_back(root);
    while (!queue.empty()) {
      const int i = queue.front();
      queue.pop_front();
      const int pi_i = image[static_cast<std::size_t>(i)];
      for (std::size_t g = 0; g < gens_a.size(); ++g) {
        const int src = gens_a[g](i);
        const int dst = gens_b[g](pi_i);
        const int cur = image[static_cast<std::size_t>(src)];
        if (cur == dst) continue;
        if (cur != -1 || used[static_cast<std::size_t>(dst)] ||
            ranks_a[static_cast<std::size_t>(src)] != ranks_b[static_cast<std::size_t>(dst)]) {
          return false;
        }
        image[static_cast<std::size_t>(src)] = dst;
        used[static_cast<std::size_t>(dst)] = true;
        assigned.push_back(src);
        queue.push_back(src);
      }
    }
    return true;
  };
  auto rollback = [&](const std::vector<int>& assigned) {
    for (int i : assigned) {
      used[static_cast<std::size_t>(image[static_cast<std::size_t>(i)])] = false;
      image[static_cast<std::size_t>(i)] = -1;
    }
  };

  auto search = [&](auto&& self, std::size_t from) -> bool {
    std::size_t root = from;
    while (root < n && image[root] != -1) ++root;
    if (root == n) return visit(Permutation::from_images(image));
    for (std::size_t target = 0; target < n; ++target) {
      if (used[target] || ranks_a[root] != ranks_b[target]) continue;
      std::vector<int> assigned;
      const bool ok = extend(static_cast<int>(root), static_cast<int>(target), assigned);
      if (ok && self(self, root + 1)) return true;
      rollback(assigned);
    }
    return false;
  };
  return search(search, 0);
}

}  // namespace parpush

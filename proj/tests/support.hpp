#pragma once

#include <string>
#include <utility>
#include <vector>

#include "parpush/hurwitz.hpp"
#include "parpush/parabolic.hpp"
#include "parpush/pushforward.hpp"
#include "parpush/rational.hpp"

namespace parpush::test {

inline Rational q(const char* text) { return Rational::parse(text); }

inline std::vector<Rational> qs(std::initializer_list<const char*> texts) {
  std::vector<Rational> out;
  for (const char* t : texts) out.push_back(q(t));
  return out;
}

inline WeightedFlag flag(std::initializer_list<std::pair<long long, const char*>> steps) {
  std::vector<FlagStep> out;
  for (const auto& [d, w] : steps) out.push_back(FlagStep{d, q(w)});
  return WeightedFlag(std::move(out));
}

inline MarkedCurve curve(int genus, std::vector<std::string> points) { return MarkedCurve{genus, std::move(points)}; }

/// Degree-2 cover of P^1 branched over 0 and inf.
inline CoveringMonodromy squaring() {
  CoveringMonodromy c;
  c.base = curve(0, {"0", "inf"});
  c.degree = 2;
  c.branch.emplace("0", Permutation::from_cycles(2, {{1, 2}}));
  c.branch.emplace("inf", Permutation::from_cycles(2, {{1, 2}}));
  return c;
}

inline UpstairsBundle line_bundle(const CoveringMonodromy& c, long long degree = 0) {
  UpstairsBundle u;
  u.covering = c;
  for (std::size_t k = 0; k < components(c).size(); ++k) u.components.push_back(ComponentBundle{1, degree});
  return u;
}

}  // namespace parpush::test

#include <doctest.h>

#include <random>
#include <set>

#include "parpush/error.hpp"
#include "parpush/instances.hpp"
#include "support.hpp"

using namespace parpush;
using parpush::test::curve;

namespace {

CoveringMonodromy trivial_cover(int genus, int degree, std::vector<std::string> points) {
  CoveringMonodromy c;
  c.base = curve(genus, std::move(points));
  c.degree = degree;
  for (int i = 0; i < 2 * genus; ++i) c.handles.push_back(Permutation::identity(degree));
  for (const auto& x : c.base.marked_points) c.branch.emplace(x, Permutation::identity(degree));
  return c;
}

CoveringMonodromy conjugate(const CoveringMonodromy& c, const Permutation& pi) {
  CoveringMonodromy out = c;
  for (auto& h : out.handles) h = pi.inverse() * h * pi;
  for (auto& [x, s] : out.branch) s = pi.inverse() * s * pi;
  return out;
}

}  // namespace

TEST_CASE("permutations") {
  const auto p = Permutation::from_cycles(4, {{1, 3}, {2, 4}});
  CHECK(p.one_line() == std::vector<int>{3, 4, 1, 2});
  CHECK((p * p).is_identity());
  CHECK(Permutation::from_one_line({2, 3, 1}).cycles() == std::vector<std::vector<int>>{{0, 1, 2}});
  CHECK_THROWS_AS(Permutation::from_one_line({1, 1}), Error);
  CHECK_THROWS_AS(Permutation::from_cycles(3, {{1, 4}}), Error);
  CHECK_THROWS_AS(Permutation::from_cycles(3, {{1, 2}, {2, 3}}), Error);
}

TEST_CASE("validate") {
  CHECK(validate(test::squaring()).ok());

  CoveringMonodromy one_branch;
  one_branch.base = curve(0, {"0"});
  one_branch.degree = 2;
  one_branch.branch.emplace("0", Permutation::from_cycles(2, {{1, 2}}));
  CHECK_FALSE(validate(one_branch).ok());
  CHECK_THROWS_AS(components(one_branch), Error);

  CHECK(validate(identity_covering(curve(2, {"p", "q"}))).ok());
  CHECK(validate(identity_covering(curve(0, {}))).ok());

  CoveringMonodromy missing = test::squaring();
  missing.branch.erase("inf");
  CHECK_FALSE(validate(missing).ok());

  CoveringMonodromy wrong_size = test::squaring();
  wrong_size.branch.at("inf") = Permutation::identity(3);
  CHECK_FALSE(validate(wrong_size).ok());
}

TEST_CASE("components and genera") {
  const auto sq = components(test::squaring());
  REQUIRE(sq.size() == 1);
  CHECK(sq[0].genus == 0);
  CHECK(sq[0].local_degree == 2);

  const auto two = components(trivial_cover(0, 2, {"0", "inf"}));
  REQUIRE(two.size() == 2);
  CHECK(two[0].genus == 0);
  CHECK(two[1].genus == 0);
  CHECK(two[0].sheets == std::vector<int>{0});

  const auto tori = components(trivial_cover(1, 2, {}));
  REQUIRE(tori.size() == 2);
  CHECK(tori[0].genus == 1);
  CHECK(tori[1].genus == 1);

  // Hyperelliptic genus 2: six branch points of a double cover of P^1.
  CoveringMonodromy hyper;
  hyper.base = curve(0, {"a", "b", "c", "d", "e", "f"});
  hyper.degree = 2;
  for (const auto& x : hyper.base.marked_points) hyper.branch.emplace(x, Permutation::from_cycles(2, {{1, 2}}));
  CHECK(components(hyper).at(0).genus == 2);
}

TEST_CASE("ramification profile") {
  CoveringMonodromy c = trivial_cover(0, 3, {"x", "y", "z"});
  c.branch.at("x") = Permutation::from_cycles(3, {{1, 2, 3}});
  c.branch.at("y") = Permutation::from_cycles(3, {{1, 3, 2}});
  auto px = ramification_profile(c, "x");
  REQUIRE(px.size() == 1);
  CHECK(px[0].multiplicity == 3);
  CHECK(ramification_profile(c, "z").size() == 3);
  CHECK_THROWS_AS(ramification_profile(c, "w"), Error);

  CoveringMonodromy d = trivial_cover(0, 3, {"x", "y"});
  d.branch.at("x") = Permutation::from_cycles(3, {{1, 2}});
  d.branch.at("y") = Permutation::from_cycles(3, {{1, 2}});
  auto pd = ramification_profile(d, "x");
  REQUIRE(pd.size() == 2);
  CHECK(pd[0].multiplicity == 2);
  CHECK(pd[1].multiplicity == 1);
  CHECK(components(d).size() == 2);
}

TEST_CASE("odd total ramification never reaches the genus formula") {
  // Parity of the relation forces sum(b - 1) even, so a lone transposition
  // is caught as an invalid relation first.
  CoveringMonodromy c = trivial_cover(0, 2, {"x"});
  c.branch.at("x") = Permutation::from_cycles(2, {{1, 2}});
  try {
    components(c);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidCovering);
  }
}

TEST_CASE("property: random Hurwitz data gives consistent components") {
  Rng rng(3);
  InstanceParams params;
  params.max_degree = 6;
  for (int trial = 0; trial < 300; ++trial) {
    const CoveringMonodromy c = random_covering(rng, params);
    REQUIRE(validate(c).ok());
    const auto comps = components(c);
    int total = 0;
    for (const auto& k : comps) {
      total += k.local_degree;
      CHECK(k.genus >= 0);
    }
    CHECK(total == c.degree);
    CHECK(riemann_hurwitz_holds(c));

    // Multiplicities over x inside a component add up to its local degree.
    const auto owner = component_of_sheets(c);
    for (const auto& x : c.base.marked_points) {
      std::vector<int> sum(comps.size(), 0);
      for (const auto& p : ramification_profile(c, x)) sum[static_cast<std::size_t>(owner[p.sheets[0]])] += p.multiplicity;
      for (std::size_t k = 0; k < comps.size(); ++k) CHECK(sum[k] == comps[k].local_degree);
    }

    // Relabeling the sheets permutes components but keeps their data.
    const Permutation pi = random_permutation(rng, c.degree);
    auto relabeled = components(conjugate(c, pi));
    REQUIRE(relabeled.size() == comps.size());
    std::multiset<std::pair<int, long long>> a, b;
    for (const auto& k : comps) a.emplace(k.local_degree, k.genus);
    for (const auto& k : relabeled) b.emplace(k.local_degree, k.genus);
    CHECK(a == b);
    for (const auto& k : relabeled) {
      std::vector<int> image;
      for (int s : k.sheets) image.push_back(pi.inverse()(s));
      std::sort(image.begin(), image.end());
      CHECK(std::find_if(comps.begin(), comps.end(), [&](const CoverComponent& o) { return o.sheets == image; }) !=
            comps.end());
    }
  }
}

TEST_CASE("conjugator search respects ranks") {
  const auto a = Permutation::from_cycles(3, {{1, 2}});
  const auto b = Permutation::from_cycles(3, {{2, 3}});
  std::vector<Permutation> ga{a}, gb{b};
  std::vector<long long> ra{1, 1, 2}, rb{2, 1, 1};
  int found = 0;
  for_each_conjugator(ga, gb, ra, rb, [&](const Permutation& pi) {
    ++found;
    CHECK(a * pi == pi * b);
    for (int i = 0; i < 3; ++i) CHECK(ra[i] == rb[pi(i)]);
    return false;
  });
  CHECK(found == 2);
  std::vector<long long> bad{1, 1, 1};
  CHECK_FALSE(for_each_conjugator(ga, gb, ra, bad, [](const Permutation&) { return true; }));
}

#include <doctest.h>

#include "parpush/error.hpp"
#include "parpush/instances.hpp"
#include "parpush/torus.hpp"
#include "support.hpp"

using namespace parpush;
using parpush::test::flag;
using parpush::test::q;
using parpush::test::qs;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::ParseError;
}

RamifiedTorusData two_blocks() {
  RamifiedTorusData t;
  t.base = test::curve(0, {"0", "inf"});
  t.block_ranks = {1, 1};
  t.branch.emplace("0", Permutation::from_cycles(2, {{1, 2}}));
  t.branch.emplace("inf", Permutation::from_cycles(2, {{1, 2}}));
  return t;
}

ParabolicBundle half_weights() {
  const auto half = flag({{1, "0"}, {1, "1/2"}});
  return ParabolicBundle{test::curve(0, {"0", "inf"}), 2, -1, {{"0", half}, {"inf", half}}};
}

}  // namespace

TEST_CASE("torus of a direct image") {
  const auto id = torus_from_direct_image([] {
    UpstairsBundle u = test::line_bundle(identity_covering(test::curve(0, {"x"})));
    u.components[0].rank = 3;
    return u;
  }());
  CHECK(id.block_ranks == std::vector<long long>{3});
  CHECK(id.branch.at("x").is_identity());

  const auto sq = torus_from_direct_image(test::line_bundle(test::squaring()));
  CHECK(sq.block_ranks == std::vector<long long>{1, 1});
  CHECK(sq.branch.at("0") == Permutation::from_cycles(2, {{1, 2}}));
  CHECK(validate(sq).ok());
}

TEST_CASE("reconstruct the squaring map") {
  RamifiedTorusData t = two_blocks();
  const auto rec = reconstruct(half_weights(), t);
  CHECK(rec.covering == test::squaring());
  CHECK(rec.upstairs.components == std::vector<ComponentBundle>{{1, 0}});
  CHECK(rec.upstairs.canonical().flags.empty());
  CHECK(rec.ambiguous_points.empty());
  CHECK(push_forward(rec.upstairs) == half_weights());
}

TEST_CASE("full block with trivial monodromy gives the identity covering") {
  const ParabolicBundle e{test::curve(1, {"p"}), 2, 5, {{"p", flag({{1, "1/7"}, {1, "3/7"}})}}};
  RamifiedTorusData t;
  t.base = e.curve;
  t.block_ranks = {2};
  t.handles = {Permutation::identity(1), Permutation::identity(1)};
  t.branch.emplace("p", Permutation::identity(1));
  const auto rec = reconstruct(e, t);
  CHECK(rec.covering.degree == 1);
  CHECK(rec.upstairs.components == std::vector<ComponentBundle>{{2, 5}});
  CHECK(rec.upstairs.flag_at(YPoint{0, "p", 0}) == e.flag_at("p"));
}

TEST_CASE("thirds on a 3-cycle come from weight 0") {
  const ParabolicBundle e{test::curve(0, {"x", "y"}), 3, -2,
                          {{"x", flag({{1, "0"}, {1, "1/3"}, {1, "2/3"}})}, {"y", flag({{1, "0"}, {1, "1/3"}, {1, "2/3"}})}}};
  RamifiedTorusData t;
  t.base = e.curve;
  t.block_ranks = {1, 1, 1};
  t.branch.emplace("x", Permutation::from_cycles(3, {{1, 2, 3}}));
  t.branch.emplace("y", Permutation::from_cycles(3, {{1, 3, 2}}));
  const auto rec = reconstruct(e, t);
  CHECK(rec.upstairs.canonical().flags.empty());
  CHECK(rec.upstairs.components.at(0).degree == 0);
  for (const auto& a : rec.assignment.at("x")) {
    CHECK(a.upstairs_weight == Rational(0));
    CHECK(a.weight * Rational(3) == Rational(a.level));
  }
}

TEST_CASE("reconstruction failures") {
  // Weights that no 2-cycle can produce.
  const ParabolicBundle bad{test::curve(0, {"0", "inf"}), 2, -1,
                            {{"0", flag({{1, "0"}, {1, "1/3"}})}, {"inf", flag({{1, "0"}, {1, "1/2"}})}}};
  CHECK(code_of([&] { reconstruct(bad, two_blocks()); }) == ErrorCode::NoConsistentAssignment);

  RamifiedTorusData wrong_rank = two_blocks();
  wrong_rank.block_ranks = {1, 2};
  CHECK(code_of([&] { reconstruct(half_weights(), wrong_rank); }) == ErrorCode::RankMismatch);

  RamifiedTorusData too_big = two_blocks();
  too_big.block_ranks = {2, 2};
  CHECK(code_of([&] { reconstruct(half_weights(), too_big); }) == ErrorCode::RankMismatch);

  ParabolicBundle shifted = half_weights();
  shifted.degree = 0;
  CHECK(reconstruct(shifted, two_blocks()).upstairs.components.at(0).degree == 1);

  // Disconnected block orbits need their degrees.
  RamifiedTorusData split;
  split.base = test::curve(0, {"x"});
  split.block_ranks = {1, 1};
  split.branch.emplace("x", Permutation::identity(2));
  const ParabolicBundle e2{split.base, 2, 3, {}};
  CHECK(code_of([&] { reconstruct(e2, split); }) == ErrorCode::RankMismatch);
  split.orbit_degrees = std::vector<long long>{1, 2};
  const auto rec = reconstruct(e2, split);
  CHECK(rec.upstairs.components == std::vector<ComponentBundle>{{1, 1}, {1, 2}});
}

TEST_CASE("ambiguous covers are reported, least one taken") {
  // Étale two blocks over x: weights {0, 1/2} split 1+1 either way.
  RamifiedTorusData t;
  t.base = test::curve(0, {"x"});
  t.block_ranks = {1, 1};
  t.branch.emplace("x", Permutation::identity(2));
  t.orbit_degrees = std::vector<long long>{0, -1};
  const ParabolicBundle e{t.base, 2, -1, {{"x", flag({{1, "0"}, {1, "1/2"}})}}};
  const auto rec = reconstruct(e, t);
  CHECK(rec.ambiguous_points == std::vector<std::string>{"x"});
  CHECK(push_forward(rec.upstairs) == e);
  CHECK(enumerate_local_assignments(e, t, "x", 10).size() == 2);

  // A fiber splitting resolves it.
  t.fiber_splitting["x"] = {CycleSplit{0, {FlagStep{1, q("1/2")}}}, CycleSplit{1, {FlagStep{1, q("0")}}}};
  const auto pinned = reconstruct(e, t);
  CHECK(pinned.ambiguous_points.empty());
  CHECK(pinned.upstairs.flag_at(YPoint{0, "x", 0}) == flag({{1, "1/2"}}));
}

TEST_CASE("induced connections") {
  const auto rec = reconstruct(half_weights(), two_blocks());
  const ResidueData r{{"0", qs({"0", "1/2"})}, {"inf", qs({"0", "1/2"})}};
  const auto up = induce_connection(half_weights(), r, rec);
  for (const auto& [y, eig] : up) {
    for (const auto& e : eig) CHECK(e == Rational(0));
  }

  const ResidueData off{{"0", qs({"0", "1/3"})}, {"inf", qs({"0", "1/2"})}};
  CHECK(code_of([&] { induce_connection(half_weights(), off, rec); }) == ErrorCode::NotTorusPreserving);
  const ResidueData short_list{{"0", qs({"0"})}};
  CHECK(code_of([&] { induce_connection(half_weights(), short_list, rec); }) == ErrorCode::MisalignedResidues);
}

TEST_CASE("property: eigenvalue inversion is exact") {
  for (int b = 1; b <= 6; ++b) {
    for (int p = -13; p <= 13; ++p) {
      for (int d = 1; d <= 6; ++d) {
        const Rational tau = Rational::normalize(p, d);
        for (int c = 0; c < b; ++c) {
          const Rational rho = (tau + Rational(c)) / Rational(b);
          CHECK(Rational(b) * rho - Rational(c) == tau);
        }
      }
    }
  }
}

TEST_CASE("property: round trips on random instances") {
  Rng rng(31);
  InstanceParams params;
  params.max_degree = 5;
  params.max_denominator = 6;
  int ambiguous = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const CoveringMonodromy c = random_covering(rng, params);
    const UpstairsBundle u = make_ohtsuki_consistent(rng, random_upstairs(rng, c, params));
    const RamifiedTorusData t = torus_from_direct_image(u);
    REQUIRE(validate(t).ok());
    for (const auto& h : t.as_covering().generators()) {
      for (std::size_t i = 0; i < t.block_ranks.size(); ++i) CHECK(t.block_ranks[i] == t.block_ranks[h(static_cast<int>(i))]);
    }
    const ParabolicBundle e = push_forward(u);
    const auto rec = reconstruct(e, t);
    CHECK(push_forward(rec.upstairs) == e);
    CHECK(verify_roundtrip_covering(u));
    CHECK(verify_roundtrip_connection(u, parabolic_residues(u)));
    const auto hint_free = roundtrip_covering_report(u, RoundtripOptions{false});
    CAPTURE(hint_free.detail);
    CHECK(hint_free.ok);
    ambiguous += hint_free.ambiguous ? 1 : 0;
  }
  MESSAGE("hint-free ambiguous instances: " << ambiguous << " / 150");
}

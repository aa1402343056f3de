#include <doctest.h>

#include <algorithm>

#include "parpush/error.hpp"
#include "parpush/instances.hpp"
#include "support.hpp"

using namespace parpush;
using parpush::test::flag;
using parpush::test::q;
using parpush::test::qs;

namespace {

CoveringMonodromy single_cycle(int b) {
  // One point of multiplicity b over x, étale elsewhere except over x'.
  CoveringMonodromy c;
  c.base = test::curve(0, {"x", "x'"});
  c.degree = b;
  std::vector<int> cycle(static_cast<std::size_t>(b));
  for (int i = 0; i < b; ++i) cycle[static_cast<std::size_t>(i)] = i + 1;
  const auto s = Permutation::from_cycles(b, {cycle});
  c.branch.emplace("x", s);
  c.branch.emplace("x'", s.inverse());
  return c;
}

CoveringMonodromy hyperelliptic(int genus) {
  CoveringMonodromy c;
  std::vector<std::string> points;
  for (int i = 0; i < 2 * genus + 2; ++i) points.push_back("p" + std::to_string(i));
  c.base = test::curve(0, points);
  c.degree = 2;
  for (const auto& x : points) c.branch.emplace(x, Permutation::from_cycles(2, {{1, 2}}));
  return c;
}

YPoint over(const CoveringMonodromy& c, const std::string& x, int sheet = 0) { return canonical_point(c, x, sheet); }

}  // namespace

TEST_CASE("identity covering pushes forward to itself") {
  const auto c = identity_covering(test::curve(1, {"p", "q"}));
  UpstairsBundle u;
  u.covering = c;
  u.components = {ComponentBundle{2, -3}};
  u.flags.emplace(over(c, "p"), flag({{1, "0"}, {1, "2/5"}}));
  const ParabolicBundle e = push_forward(u);
  CHECK(e.rank == 2);
  CHECK(e.degree == -3);
  CHECK(e.flags.size() == 1);
  CHECK(e.flag_at("p") == flag({{1, "0"}, {1, "2/5"}}));

  const UpstairsResidues r{{over(c, "p"), qs({"7", "-1/3"})}};
  const auto down = push_forward_residues(u, r);
  CHECK(down.at("p") == qs({"7", "-1/3"}));
}

TEST_CASE("a triple point divides weights by three") {
  const auto c = single_cycle(3);
  UpstairsBundle u = test::line_bundle(c);
  u.flags.emplace(over(c, "x"), flag({{1, "1/4"}}));
  const ParabolicBundle e = push_forward(u);
  CHECK(e.rank == 3);
  CHECK(e.flag_at("x") == flag({{1, "1/12"}, {1, "5/12"}, {1, "3/4"}}));
  CHECK(e.flag_at("x'") == flag({{1, "0"}, {1, "1/3"}, {1, "2/3"}}));
}

TEST_CASE("squaring map, trivial line bundle") {
  const auto c = test::squaring();
  const UpstairsBundle u = test::line_bundle(c);
  const ParabolicBundle e = push_forward(u);
  const auto half = flag({{1, "0"}, {1, "1/2"}});
  CHECK(e.rank == 2);
  CHECK(e.degree == -1);
  CHECK(e.flag_at("0") == half);
  CHECK(e.flag_at("inf") == half);
  CHECK(par_deg(e) == Rational(0));

  const UpstairsResidues zero{{over(c, "0"), qs({"0"})}, {over(c, "inf"), qs({"0"})}};
  const ResidueData r = push_forward_residues(u, zero);
  CHECK(r.at("0") == qs({"0", "1/2"}));
  CHECK(r.at("inf") == qs({"0", "1/2"}));
  CHECK(ohtsuki_check(e, r));
  CHECK(verify_parabolicity(u, zero));
  // Absent residue entries mean zero residue.
  CHECK(push_forward_residues(u, {}) == r);
}

TEST_CASE("hyperelliptic structure sheaf has degree -(g+1)") {
  // Independent fact: phi_* O_Y = O + O(-g-1) for a hyperelliptic curve.
  for (int g = 0; g <= 4; ++g) {
    const auto c = hyperelliptic(g);
    CHECK(components(c).at(0).genus == g);
    CHECK(push_forward(test::line_bundle(c)).degree == -(g + 1));
  }
}

TEST_CASE("étale covers pass residues and weights through") {
  CoveringMonodromy c;
  c.base = test::curve(1, {"x"});
  c.degree = 3;
  const auto a = Permutation::from_cycles(3, {{1, 2, 3}});
  c.handles = {a, Permutation::identity(3)};
  c.branch.emplace("x", Permutation::identity(3));
  REQUIRE(components(c).size() == 1);
  UpstairsBundle u = test::line_bundle(c);
  u.components[0] = ComponentBundle{2, 1};
  u.flags.emplace(over(c, "x", 0), flag({{1, "0"}, {1, "1/3"}}));
  u.flags.emplace(over(c, "x", 1), flag({{2, "1/3"}}));
  const UpstairsResidues r = parabolic_residues(u);
  const ParabolicBundle e = push_forward(u);
  CHECK(e.rank == 6);
  CHECK(e.degree == 1);  // étale: chi and degree both multiply compatibly
  CHECK(e.flag_at("x") == flag({{3, "0"}, {3, "1/3"}}));
  CHECK(push_forward_residues(u, r).at("x") == qs({"0", "1/3"}));
  CHECK(verify_parabolicity(u, r));
}

TEST_CASE("different eigenvalues on one merged weight are a conflict") {
  CoveringMonodromy c;
  c.base = test::curve(0, {"x"});
  c.degree = 2;
  c.branch.emplace("x", Permutation::identity(2));
  const UpstairsBundle u = test::line_bundle(c);
  const UpstairsResidues r{{over(c, "x", 0), qs({"0"})}, {over(c, "x", 1), qs({"1"})}};
  try {
    push_forward_residues(u, r);
    FAIL("expected MergeConflict");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MergeConflict);
  }
}

TEST_CASE("keep_trivial retains weight-0-only points") {
  CoveringMonodromy c;
  c.base = test::curve(0, {"x", "y"});
  c.degree = 2;
  c.branch.emplace("x", Permutation::identity(2));
  c.branch.emplace("y", Permutation::identity(2));
  const UpstairsBundle u = test::line_bundle(c);
  CHECK(push_forward(u).flags.empty());
  const auto kept = push_forward(u, PushOptions{true});
  CHECK(kept.flags.size() == 2);
  CHECK(kept.flag_at("x") == WeightedFlag::trivial(2));
  CHECK(kept.canonical() == push_forward(u));
}

TEST_CASE("malformed upstairs data") {
  const auto c = test::squaring();
  UpstairsBundle u = test::line_bundle(c);
  u.flags.emplace(YPoint{0, "0", 1}, flag({{1, "1/2"}}));  // sheet 2 is not the least sheet of its cycle
  CHECK_THROWS_AS(check_well_formed(u), Error);
  UpstairsBundle v = test::line_bundle(c);
  v.flags.emplace(over(c, "0"), flag({{1, "0"}, {1, "1/2"}}));  // rank 2 flag on a line bundle
  CHECK_THROWS_AS(check_well_formed(v), Error);
  UpstairsBundle w = test::line_bundle(c);
  w.components.push_back(ComponentBundle{1, 0});
  CHECK_THROWS_AS(check_well_formed(w), Error);
}

TEST_CASE("property: per-cycle pieces follow (c + lambda) / b level by level") {
  Rng rng(21);
  InstanceParams params;
  for (int b = 1; b <= 5; ++b) {
    for (int trial = 0; trial < 40; ++trial) {
      const WeightedFlag f = random_flag(rng, 1 + trial % 3, params);
      const auto pieces = cycle_pieces(f, b);
      REQUIRE(pieces.size() == static_cast<std::size_t>(b) * f.size());
      for (int c = 0; c < b; ++c) {
        std::vector<Rational> level;
        for (const auto& p : pieces) {
          if (p.level == c) level.push_back(p.weight * Rational(b) - Rational(c));
        }
        CHECK(level == f.weights());
      }
    }
  }
}

TEST_CASE("property: bookkeeping on random instances") {
  Rng rng(22);
  InstanceParams params;
  for (int trial = 0; trial < 300; ++trial) {
    const CoveringMonodromy c = random_covering(rng, params);
    const UpstairsBundle u = random_upstairs(rng, c, params);
    const ParabolicBundle e = push_forward(u);
    check_well_formed(e);

    const auto comps = components(c);
    long long rank = 0;
    for (std::size_t k = 0; k < comps.size(); ++k) rank += comps[k].local_degree * u.components[k].rank;
    CHECK(e.rank == rank);
    CHECK(par_deg(e) == par_deg(u));

    // Euler characteristics agree: chi(Y, V) = chi(X, phi_* V).
    long long chi_up = 0;
    for (std::size_t k = 0; k < comps.size(); ++k) chi_up += u.components[k].degree + u.components[k].rank * (1 - comps[k].genus);
    CHECK(chi_up == e.degree + e.rank * (1 - c.base.genus));

    // Relabeling sheets does not change the direct image.
    const Permutation pi = random_permutation(rng, c.degree);
    CHECK(push_forward(relabel(u, pi)) == e);

    // Residues: sort-then-map equals map-then-sort.
    const UpstairsResidues r = parabolic_residues(u);
    const ResidueData down = push_forward_residues(u, r);
    for (const auto& [x, f] : e.flags) {
      std::vector<std::pair<Rational, Rational>> mapped;
      for (const auto& rp : ramification_profile(c, x)) {
        const YPoint y = canonical_point(c, x, rp.sheets.front());
        const WeightedFlag up = u.flag_at(y);
        for (const auto& piece : cycle_residue_pieces(up, up.weights(), rp.multiplicity)) {
          mapped.emplace_back(piece.piece.weight, piece.eigenvalue);
        }
      }
      std::sort(mapped.begin(), mapped.end());
      mapped.erase(std::unique(mapped.begin(), mapped.end()), mapped.end());
      std::vector<Rational> eig;
      for (const auto& [w, ev] : mapped) eig.push_back(ev);
      CHECK(down.at(x) == eig);
    }
  }
}

TEST_CASE("property: connections stay parabolic and Ohtsuki survives") {
  Rng rng(23);
  InstanceParams params;
  for (int trial = 0; trial < 300; ++trial) {
    const CoveringMonodromy c = random_covering(rng, params);
    const UpstairsBundle u = make_ohtsuki_consistent(rng, random_upstairs(rng, c, params));
    const UpstairsResidues r = parabolic_residues(u);
    REQUIRE(is_parabolic_connection(u, r));
    REQUIRE(ohtsuki_check(u, r));
    const ParabolicBundle e = push_forward(u);
    const ResidueData down = push_forward_residues(u, r);
    CHECK(is_parabolic_connection(e, down));
    CHECK(ohtsuki_check(e, down));
    CHECK(par_deg(e) == Rational(0));

    // Non-parabolic residues (shifted by integers) still satisfy Ohtsuki
    // downstairs when they do upstairs.
    const UpstairsResidues shifted = shifted_residues(rng, u);
    try {
      const ResidueData sd = push_forward_residues(u, shifted);
      if (ohtsuki_check(u, shifted)) CHECK(ohtsuki_check(e, sd));
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::MergeConflict);
    }
  }
}

#include <doctest.h>

#include <sstream>

#include "parpush/cli.hpp"
#include "parpush/error.hpp"
#include "parpush/instances.hpp"
#include "parpush/scenario.hpp"
#include "support.hpp"

using namespace parpush;

namespace {

const char* kSquaring = R"({
  "version": "parpush/1",
  "base": {"genus": 0, "marked_points": ["0", "inf"]},
  "covering": {"degree": 2, "handles": [], "branch": {"0": [[1, 2]], "inf": [2, 1]}},
  "upstairs": {"components": [{"rank": 1, "degree": 0}]}
})";

std::string error_text(std::string_view doc, ErrorCode* code = nullptr) {
  try {
    parse_scenario(doc);
  } catch (const Error& e) {
    if (code) *code = e.code();
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parse a scenario") {
  const Scenario s = parse_scenario(kSquaring);
  REQUIRE(s.covering);
  CHECK(*s.covering == test::squaring());
  REQUIRE(s.upstairs);
  CHECK(s.upstairs->components == std::vector<ComponentBundle>{{1, 0}});
}

TEST_CASE("syntax errors carry line and column") {
  ErrorCode code{};
  const std::string msg = error_text("{\n  \"version\": \"parpush/1\",\n  \"base\": {,}\n}", &code);
  CHECK(code == ErrorCode::ParseError);
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK(msg.find("column") != std::string::npos);
}

TEST_CASE("schema errors carry a JSON path") {
  ErrorCode code{};
  std::string doc = kSquaring;
  doc.replace(doc.find("\"degree\": 2"), 11, "\"degree\": \"2\"");
  CHECK(error_text(doc, &code).find("/covering/degree") != std::string::npos);
  CHECK(code == ErrorCode::ParseError);

  std::string unknown = kSquaring;
  unknown.replace(unknown.find("\"upstairs\""), 10, "\"upstream\"");
  CHECK(error_text(unknown).find("unknown key 'upstream'") != std::string::npos);

  CHECK(error_text(R"({"version": "parpush/2", "base": {"genus": 0, "marked_points": []}})").find("/version") !=
        std::string::npos);

  std::string bad_weight = R"({"version": "parpush/1", "base": {"genus": 0, "marked_points": ["x"]},
    "downstairs": {"rank": 1, "degree": 0, "flags": [{"point": "x", "steps": [{"dim": 1, "weight": "1/0"}]}]}})";
  CHECK(error_text(bad_weight).find("/downstairs/flags/0/steps/0/weight") != std::string::npos);

  std::string off_base = R"({"version": "parpush/1", "base": {"genus": 0, "marked_points": ["x"]},
    "downstairs": {"rank": 1, "degree": 0, "flags": [{"point": "y", "steps": [{"dim": 1, "weight": "1/2"}]}]}})";
  error_text(off_base, &code);
  CHECK(code == ErrorCode::FlagOverUnmarkedPoint);

  std::string missing = R"({"version": "parpush/1", "base": {"genus": 0, "marked_points": ["x"]},
    "upstairs": {"components": [{"rank": 1, "degree": 0}]}})";
  error_text(missing, &code);
  CHECK(code == ErrorCode::MissingSection);
}

TEST_CASE("property: emitted documents re-parse to equal data") {
  Rng rng(51);
  InstanceParams params;
  for (int trial = 0; trial < 150; ++trial) {
    const CoveringMonodromy c = random_covering(rng, params);
    const UpstairsBundle u = random_upstairs(rng, c, params);
    Scenario s{c.base, c, u, push_forward(u), {}, {}, torus_from_direct_image(u)};
    s.residues_down = push_forward_residues(u, parabolic_residues(u));
    s.residues_up = parabolic_residues(u);
    const std::string text = dump_document(to_json(s));
    const Scenario back = parse_scenario(text);
    CHECK(back == s);
    CHECK(dump_document(to_json(back)) == text);
  }
}

TEST_CASE("exit codes and messages") {
  CHECK(cli::exit_code_for(ErrorCode::ParseError) == 2);
  CHECK(cli::exit_code_for(ErrorCode::MissingSection) == 2);
  CHECK(cli::exit_code_for(ErrorCode::NoConsistentAssignment) == 1);
  CHECK(cli::exit_code_for(ErrorCode::NotTorusPreserving) == 1);
  CHECK(cli::format_flag(test::flag({{1, "0"}, {2, "1/2"}})) == "1,2@0/1,1/2");

  const Scenario s = parse_scenario(kSquaring);
  cli::Options options;
  CHECK(cli::run_on_scenario("pardeg", s, options).text == "0/1\n");
  CHECK(cli::run_on_scenario("roundtrip", s, options).exit_code == 0);
  CHECK_THROWS_AS(cli::run_on_scenario("reconstruct", s, options), Error);

  options.command = "validate";
  options.file = "/nonexistent/scenario.json";
  std::ostringstream out, err;
  CHECK(cli::run(options, out, err) == 2);
  CHECK(err.str().rfind("error: ParseError:", 0) == 0);
}

#include <iostream>

#include <CLI11.hpp>

#include "parpush/cli.hpp"

int main(int argc, char** argv) {
  parpush::cli::Options options;
  CLI::App app{"parpush: direct images of parabolic bundles and connections under branched coverings"};
  app.require_subcommand(1);

  struct Entry {
    const char* name;
    const char* help;
  };
  const Entry file_commands[] = {
      {"validate", "check Hurwitz data, genera, and bundle data"},
      {"direct-image", "push the upstairs bundle (and residues) down to the base"},
      {"pardeg", "parabolic degree"},
      {"torus", "ramified torus of the direct image"},
      {"reconstruct", "recover covering and upstairs bundle from downstairs + torus"},
      {"roundtrip", "push forward, reconstruct, and compare up to relabeling"},
      {"oracle", "compare closed-form weights and residues against Laurent models"},
  };
  std::string file;
  std::string all;
  std::string out;
  for (const auto& entry : file_commands) {
    CLI::App* sub = app.add_subcommand(entry.name, entry.help);
    auto* file_opt = sub->add_option("file", file, "scenario document");
    auto* all_opt = sub->add_option("--all", all, "run on every *.json in a directory");
    file_opt->excludes(all_opt);
    sub->add_option("--out", out, "write the result document here (a directory with --all)");
    sub->add_flag("--keep-trivial", options.keep_trivial, "keep weight-0-only points downstairs");
    sub->add_option("--precision", options.precision, "Laurent truncation order for the oracle")
        ->check(CLI::PositiveNumber);
    sub->callback([&options, sub] { options.command = sub->get_name(); });
  }
  CLI::App* check = app.add_subcommand("check", "randomized property sweep");
  check->add_option("--seed", options.seed, "random seed");
  check->add_option("--count", options.count, "number of instances")->check(CLI::PositiveNumber);
  check->add_option("--out", out, "write the report document here");
  check->callback([&options] { options.command = "check"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : parpush::cli::kMalformedInput;
  }
  if (!file.empty()) options.file = file;
  if (!all.empty()) options.all = all;
  if (!out.empty()) options.out = out;
  return parpush::cli::run(options, std::cout, std::cerr);
}

#include "parpush/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "parpush/instances.hpp"
#include "parpush/pushforward.hpp"
#include "parpush/torus.hpp"

namespace parpush::cli {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string format_eigenvalues(const std::vector<Rational>& eig) {
  std::vector<std::string> parts;
  for (const auto& e : eig) parts.push_back(e.to_string());
  return "{" + join(parts, ",") + "}";
}

std::string format_point(const YPoint& y) {
  return "y[" + std::to_string(y.component) + "]:" + y.over + "/" + std::to_string(y.sheet + 1);
}

std::string format_perm(const Permutation& p) {
  std::vector<std::string> parts;
  for (int v : p.one_line()) parts.push_back(std::to_string(v));
  return "[" + join(parts, " ") + "]";
}

const CoveringMonodromy& need_covering(const Scenario& s) {
  if (!s.covering) throw Error(ErrorCode::MissingSection, "this command needs a 'covering' section");
  return *s.covering;
}

const UpstairsBundle& need_upstairs(const Scenario& s) {
  if (!s.upstairs) throw Error(ErrorCode::MissingSection, "this command needs an 'upstairs' section");
  return *s.upstairs;
}

const ParabolicBundle& need_downstairs(const Scenario& s) {
  if (!s.downstairs) throw Error(ErrorCode::MissingSection, "this command needs a 'downstairs' section");
  return *s.downstairs;
}

const RamifiedTorusData& need_torus(const Scenario& s) {
  if (!s.torus) throw Error(ErrorCode::MissingSection, "this command needs a 'torus' section");
  return *s.torus;
}

void print_bundle(std::ostream& os, const ParabolicBundle& e) {
  os << "rank " << e.rank << "  degree " << e.degree << "\n";
  for (const auto& label : e.curve.marked_points) {
    if (auto it = e.flags.find(label); it != e.flags.end()) os << "  " << label << "  " << format_flag(it->second) << "\n";
  }
}

void print_upstairs(std::ostream& os, const UpstairsBundle& u) {
  const auto comps = components(u.covering);
  for (std::size_t k = 0; k < comps.size(); ++k) {
    std::vector<std::string> sheets;
    for (int s : comps[k].sheets) sheets.push_back(std::to_string(s + 1));
    os << "component " << k << "  sheets {" << join(sheets, ",") << "}  genus " << comps[k].genus << "  rank "
       << u.components[k].rank << "  degree " << u.components[k].degree << "\n";
  }
  for (const auto& [y, flag] : u.flags) os << "  " << format_point(y) << "  " << format_flag(flag) << "\n";
}

void print_covering(std::ostream& os, const CoveringMonodromy& c) {
  os << "covering degree " << c.degree << "\n";
  for (std::size_t i = 0; i < c.handles.size(); ++i) {
    os << "  " << (i % 2 ? "b" : "a") << (i / 2 + 1) << "  " << format_perm(c.handles[i]) << "\n";
  }
  for (const auto& label : c.base.marked_points) {
    if (auto it = c.branch.find(label); it != c.branch.end()) os << "  " << label << "  " << format_perm(it->second) << "\n";
  }
}

json to_document(const Scenario& s, const std::string& command, json result) {
  json doc = to_json(s);
  doc["command"] = command;
  doc["result"] = std::move(result);
  return doc;
}

CommandOutput cmd_validate(const Scenario& s) {
  std::ostringstream os;
  json result;
  std::vector<std::string> violations;
  os << "base genus " << s.base.genus << "  marked {" << join(s.base.marked_points, ",") << "}\n";
  if (s.covering) {
    auto report = validate(*s.covering);
    if (report.ok()) {
      const auto comps = components(*s.covering);
      json cs = json::array();
      for (const auto& c : comps) {
        std::vector<int> sheets;
        for (int sh : c.sheets) sheets.push_back(sh + 1);
        cs.push_back(json{{"sheets", sheets}, {"local_degree", c.local_degree}, {"genus", c.genus}});
        os << "component sheets {" << join([&] {
          std::vector<std::string> p;
          for (int sh : sheets) p.push_back(std::to_string(sh));
          return p;
        }(), ",") << "}  local degree " << c.local_degree << "  genus " << c.genus << "\n";
      }
      result["components"] = cs;
      result["riemann_hurwitz"] = riemann_hurwitz_holds(*s.covering);
      if (!riemann_hurwitz_holds(*s.covering)) report.violations.push_back("Riemann-Hurwitz count fails");
    }
    for (auto& v : report.violations) violations.push_back("covering: " + v);
  }
  if (s.upstairs) {
    result["upstairs_par_deg"] = par_deg(*s.upstairs).to_string();
    os << "upstairs par-deg " << par_deg(*s.upstairs) << "  flag-end degree " << flag_end_degree(*s.upstairs) << "\n";
    if (s.residues_up) {
      const bool ohtsuki = ohtsuki_check(*s.upstairs, *s.residues_up);
      const bool parabolic = is_parabolic_connection(*s.upstairs, *s.residues_up);
      result["upstairs_ohtsuki"] = ohtsuki;
      result["upstairs_parabolic_connection"] = parabolic;
      os << "upstairs residues  ohtsuki " << (ohtsuki ? "yes" : "no") << "  parabolic " << (parabolic ? "yes" : "no")
         << "\n";
    }
  }
  if (s.downstairs) {
    result["downstairs_par_deg"] = par_deg(*s.downstairs).to_string();
    os << "downstairs par-deg " << par_deg(*s.downstairs) << "  flag-end degree " << flag_end_degree(*s.downstairs)
       << "\n";
    if (s.residues_down) {
      const bool ohtsuki = ohtsuki_check(*s.downstairs, *s.residues_down);
      const bool parabolic = is_parabolic_connection(*s.downstairs, *s.residues_down);
      result["downstairs_ohtsuki"] = ohtsuki;
      result["downstairs_parabolic_connection"] = parabolic;
      os << "downstairs residues  ohtsuki " << (ohtsuki ? "yes" : "no") << "  parabolic " << (parabolic ? "yes" : "no")
         << "\n";
    }
  }
  if (s.torus) {
    for (auto& v : validate(*s.torus).violations) violations.push_back("torus: " + v);
  }
  for (const auto& v : violations) os << "violation: " << v << "\n";
  const bool valid = violations.empty();
  os << (valid ? "valid" : "invalid") << "\n";
  result["valid"] = valid;
  result["violations"] = violations;
  return CommandOutput{valid ? kSuccess : kMathFailure, os.str(), to_document(s, "validate", std::move(result))};
}

CommandOutput cmd_direct_image(Scenario s, const Options& options) {
  const UpstairsBundle& u = need_upstairs(s);
  const PushOptions push{options.keep_trivial};
  s.downstairs = push_forward(u, push);
  json result;
  std::ostringstream os;
  print_bundle(os, *s.downstairs);
  os << "par-deg " << par_deg(*s.downstairs) << "\n";
  result["par_deg"] = par_deg(*s.downstairs).to_string();
  if (s.residues_up) {
    s.residues_down = push_forward_residues(u, *s.residues_up, push);
    for (const auto& [label, eig] : *s.residues_down) os << "  residue " << label << "  " << format_eigenvalues(eig) << "\n";
    if (is_parabolic_connection(u, *s.residues_up)) {
      const bool kept = verify_parabolicity(u, *s.residues_up);
      result["parabolic_connection_preserved"] = kept;
      os << "parabolic connection preserved: " << (kept ? "yes" : "no") << "\n";
      if (!kept) return CommandOutput{kMathFailure, os.str(), to_document(s, "direct-image", std::move(result))};
    }
  }
  return CommandOutput{kSuccess, os.str(), to_document(s, "direct-image", std::move(result))};
}

CommandOutput cmd_pardeg(const Scenario& s) {
  const bool down = s.downstairs.has_value();
  const Rational d = down ? par_deg(*s.downstairs) : par_deg(need_upstairs(s));
  json result{{"par_deg", d.to_string()}, {"of", down ? "downstairs" : "upstairs"}};
  return CommandOutput{kSuccess, d.to_string() + "\n", to_document(s, "pardeg", std::move(result))};
}

CommandOutput cmd_torus(Scenario s, const Options& options) {
  const UpstairsBundle& u = need_upstairs(s);
  s.torus = torus_from_direct_image(u);
  s.downstairs = push_forward(u, PushOptions{options.keep_trivial});
  if (s.residues_up) s.residues_down = push_forward_residues(u, *s.residues_up, PushOptions{options.keep_trivial});
  std::ostringstream os;
  std::vector<std::string> ranks;
  for (long long r : s.torus->block_ranks) ranks.push_back(std::to_string(r));
  os << "blocks " << s.torus->block_ranks.size() << "  ranks {" << join(ranks, ",") << "}\n";
  for (const auto& label : s.base.marked_points) {
    if (auto it = s.torus->branch.find(label); it != s.torus->branch.end()) {
      os << "  " << label << "  " << format_perm(it->second) << "\n";
    }
  }
  json result{{"blocks", s.torus->block_ranks.size()}};
  return CommandOutput{kSuccess, os.str(), to_document(s, "torus", std::move(result))};
}

CommandOutput cmd_reconstruct(Scenario s) {
  const ParabolicBundle& e = need_downstairs(s);
  const RamifiedTorusData& t = need_torus(s);
  const ReconstructionResult rec = reconstruct(e, t);
  s.covering = rec.covering;
  s.upstairs = rec.upstairs;
  std::ostringstream os;
  print_covering(os, rec.covering);
  print_upstairs(os, rec.upstairs);
  json result = io::assignment(rec);
  if (s.residues_down) {
    s.residues_up = induce_connection(e, *s.residues_down, rec);
    for (const auto& [y, eig] : *s.residues_up) os << "  residue " << format_point(y) << "  " << format_eigenvalues(eig) << "\n";
  }
  for (const auto& x : rec.ambiguous_points) os << "ambiguous at " << x << " (least exact cover taken)\n";
  return CommandOutput{kSuccess, os.str(), to_document(s, "reconstruct", std::move(result))};
}

CommandOutput cmd_roundtrip(const Scenario& s) {
  const UpstairsBundle& u = need_upstairs(s);
  const RoundtripReport report = s.residues_up ? roundtrip_connection_report(u, *s.residues_up) : roundtrip_covering_report(u);
  std::ostringstream os;
  os << (s.residues_up ? "connection" : "covering") << " round-trip: " << (report.ok ? "ok" : "FAILED") << "\n";
  if (!report.detail.empty()) os << report.detail << "\n";
  json result{{"ok", report.ok}, {"detail", report.detail}, {"kind", s.residues_up ? "connection" : "covering"}};
  return CommandOutput{report.ok ? kSuccess : kMathFailure, os.str(), to_document(s, "roundtrip", std::move(result))};
}

CommandOutput cmd_oracle(const Scenario& s, const Options& options) {
  const UpstairsBundle& u = need_upstairs(s);
  const CoveringMonodromy& c = need_covering(s);
  std::ostringstream os;
  json points = json::array();
  bool all_agree = true;
  for (const auto& x : c.base.marked_points) {
    for (const auto& rp : ramification_profile(c, x)) {
      const YPoint y = canonical_point(c, x, rp.sheets.front());
      const WeightedFlag flag = u.flag_at(y);
      const long long r = flag.rank();
      const int b = rp.multiplicity;

      const auto closed = cycle_pieces(flag, b);
      const auto brute = oracle::filtration_dims(r, b, flag);
      bool weights_agree = closed.size() == brute.pieces.size();
      for (std::size_t i = 0; weights_agree && i < closed.size(); ++i) {
        const auto& p = closed[i];
        const auto& q = brute.pieces[i];
        weights_agree = p.level == q.level && p.step == q.step && p.dim == q.dim && p.weight == q.weight;
      }
      for (int l = 0; l <= b; ++l) {
        weights_agree = weights_agree && brute.filtration_dims[static_cast<std::size_t>(l)] == (b - l) * r;
      }
      json entry{{"point", io::point(y)}, {"multiplicity", b}, {"weights_agree", weights_agree}};
      os << format_point(y) << "  b=" << b << "  weights " << (weights_agree ? "agree" : "DIFFER");

      if (s.residues_up) {
        std::vector<Rational> eig(flag.size(), Rational(0));
        if (auto it = s.residues_up->find(y); it != s.residues_up->end()) eig = it->second;
        std::vector<Rational> taus;
        std::vector<Rational> expected;
        for (const auto& rp_piece : cycle_residue_pieces(flag, eig, b)) {
          for (long long d = 0; d < rp_piece.piece.dim; ++d) expected.push_back(rp_piece.eigenvalue);
        }
        for (std::size_t j = 0; j < flag.size(); ++j) {
          for (long long d = 0; d < flag.steps()[j].dim; ++d) taus.push_back(eig[j]);
        }
        std::sort(expected.begin(), expected.end());
        const auto spectrum =
            oracle::residue_spectrum(oracle::pushforward(oracle::LaurentModel::diagonal(taus, options.precision), b));
        const bool residues_agree = spectrum == expected;
        json spec = json::array();
        for (const auto& e : spectrum) spec.push_back(io::rational(e));
        entry["residues_agree"] = residues_agree;
        entry["oracle_spectrum"] = spec;
        os << "  residues " << (residues_agree ? "agree" : "DIFFER") << " " << format_eigenvalues(spectrum);
        all_agree = all_agree && residues_agree;
      }
      os << "\n";
      all_agree = all_agree && weights_agree;
      points.push_back(std::move(entry));
    }
  }
  os << (all_agree ? "oracle agrees" : "oracle DISAGREES") << "\n";
  json result{{"agree", all_agree}, {"points", points}, {"precision", options.precision}};
  return CommandOutput{all_agree ? kSuccess : kMathFailure, os.str(), to_document(s, "oracle", std::move(result))};
}

CommandOutput run_file(const std::filesystem::path& path, const Options& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return run_on_scenario(options.command, parse_scenario(buffer.str()), options);
}

void write_document(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  out << dump_document(doc);
}

/// Runs one unit of work, turning module errors into exit codes.
int guarded(const std::function<CommandOutput()>& work, const std::optional<std::filesystem::path>& out_path,
            std::ostream& out, std::ostream& err, const std::string& prefix) {
  try {
    CommandOutput result = work();
    out << result.text;
    if (out_path) write_document(*out_path, result.document);
    return result.exit_code;
  } catch (const Error& e) {
    err << prefix << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::MissingSection:
    case ErrorCode::MalformedBundle:
    case ErrorCode::UnknownPoint:
    case ErrorCode::FlagOverUnmarkedPoint:
    case ErrorCode::MisalignedResidues:
    case ErrorCode::OutOfRange:
    case ErrorCode::DivisionByZero:
      return kMalformedInput;
    default:
      return kMathFailure;
  }
}

std::string format_flag(const WeightedFlag& flag) {
  std::vector<std::string> dims;
  std::vector<std::string> weights;
  for (const auto& s : flag.steps()) {
    dims.push_back(std::to_string(s.dim));
    weights.push_back(s.weight.to_string());
  }
  return join(dims, ",") + "@" + join(weights, ",");
}

CommandOutput run_on_scenario(const std::string& command, const Scenario& s, const Options& options) {
  if (command == "validate") return cmd_validate(s);
  if (command == "direct-image") return cmd_direct_image(s, options);
  if (command == "pardeg") return cmd_pardeg(s);
  if (command == "torus") return cmd_torus(s, options);
  if (command == "reconstruct") return cmd_reconstruct(s);
  if (command == "roundtrip") return cmd_roundtrip(s);
  if (command == "oracle") return cmd_oracle(s, options);
  throw Error(ErrorCode::ParseError, "unknown command '" + command + "'");
}

CommandOutput run_property_sweep(const Options& options) {
  Rng rng(options.seed);
  InstanceParams params;
  long long parabolic = 0, ohtsuki = 0, pardeg = 0, covering = 0, connection = 0;
  json failures = json::array();
  for (int i = 0; i < options.count; ++i) {
    const CoveringMonodromy c = random_covering(rng, params);
    const UpstairsBundle u = make_ohtsuki_consistent(rng, random_upstairs(rng, c, params));
    const UpstairsResidues r = parabolic_residues(u);
    const ParabolicBundle e = push_forward(u);
    const ResidueData re = push_forward_residues(u, r);
    auto fail = [&](long long& counter, const char* what) {
      ++counter;
      failures.push_back(json{{"instance", i}, {"property", what}, {"scenario", to_json(Scenario{c.base, c, u, {}, {}, r, {}})}});
    };
    if (!is_parabolic_connection(e, re)) fail(parabolic, "parabolic connection preserved");
    if (ohtsuki_check(u, r) && !ohtsuki_check(e, re)) fail(ohtsuki, "ohtsuki identity preserved");
    if (par_deg(e) != par_deg(u)) fail(pardeg, "par-deg conserved");
    if (!verify_roundtrip_covering(u)) fail(covering, "covering round-trip");
    if (!verify_roundtrip_connection(u, r)) fail(connection, "connection round-trip");
  }
  std::ostringstream os;
  os << "instances " << options.count << "  seed " << options.seed << "\n";
  os << "parabolic connection preserved  failures " << parabolic << "\n";
  os << "ohtsuki identity preserved      failures " << ohtsuki << "\n";
  os << "par-deg conserved               failures " << pardeg << "\n";
  os << "covering round-trip             failures " << covering << "\n";
  os << "connection round-trip           failures " << connection << "\n";
  const bool ok = failures.empty();
  json doc{{"version", kFormatVersion},
           {"command", "check"},
           {"result", json{{"seed", options.seed}, {"count", options.count}, {"ok", ok}, {"failures", failures}}}};
  return CommandOutput{ok ? kSuccess : kMathFailure, os.str(), std::move(doc)};
}

int run(const Options& options, std::ostream& out, std::ostream& err) {
  if (options.command == "check") {
    return guarded([&] { return run_property_sweep(options); }, options.out, out, err, "");
  }
  if (options.all) {
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(*options.all, ec)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    if (ec) {
      err << "error: ParseError: cannot list " << options.all->string() << "\n";
      return kMalformedInput;
    }
    std::sort(files.begin(), files.end());
    if (options.out) std::filesystem::create_directories(*options.out);
    int worst = kSuccess;
    for (const auto& f : files) {
      out << "== " << f.filename().string() << "\n";
      std::optional<std::filesystem::path> target;
      if (options.out) target = *options.out / (f.stem().string() + "." + options.command + ".json");
      worst = std::max(worst, guarded([&] { return run_file(f, options); }, target, out, err, f.filename().string() + ": "));
    }
    return worst;
  }
  if (!options.file) {
    err << "error: ParseError: no scenario file given\n";
    return kMalformedInput;
  }
  return guarded([&] { return run_file(*options.file, options); }, options.out, out, err, "");
}

}  // namespace parpush::cli

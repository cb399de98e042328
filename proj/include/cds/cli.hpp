#pragma once

// Command dispatch for the `cds` tool. run() never calls exit(); it returns
//   0  pass / feasible
//   1  fail / infeasible (report on stdout)
//   2  usage, file or format error (message on stderr)

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cds/entropy_oracle.hpp"
#include "cds/instance.hpp"
#include "cds/report.hpp"
#include "cds/scheme.hpp"
#include "cds/shannon_lp.hpp"
#include "cds/synthesis.hpp"

namespace cds::cli {

using nlohmann::ordered_json;

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Largest ground set (secret plus vertices) for which `audit` solves the
/// entropy LP on its own; bigger instances report the universal 1/2.
inline constexpr std::size_t kAuditLpGroundLimit = 7;

/// Unreadable or unwritable file.
class FileError : public Error {
 public:
  using Error::Error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw FileError("cannot write " + path);
}

inline CdsInstance load_instance(const std::string& path) {
  try {
    return parse_instance(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path, e);
  }
}

inline LinearScheme load_scheme(const std::string& path) {
  try {
    return parse_scheme(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path, e);
  }
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    if (cur.empty()) throw InstanceError("empty name in list '" + s + "'");
    out.push_back(cur);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON fragments

inline ordered_json rational_json(const Rational& r) {
  const mpz_class& n = r.get_num();
  const mpz_class& d = r.get_den();
  if (n.fits_slong_p() && d.fits_slong_p()) return {{"num", n.get_si()}, {"den", d.get_si()}};
  return {{"num", n.get_str()}, {"den", d.get_str()}};
}

inline ordered_json feasibility_json(const CdsInstance& inst, const Feasibility& f,
                                     const std::vector<std::string>& eliminated) {
  ordered_json j;
  j["feasible"] = f.feasible;
  j["eliminated"] = eliminated;
  if (f.feasible) {
    j["capacity"] = rational_json(make_rational(1, 2));
  } else {
    ordered_json w;
    if (f.edge) w["edge"] = {inst.name(f.edge->first), inst.name(f.edge->second)};
    if (f.path) w["path"] = vertex_names(inst, f.path->vertices);
    j["witness"] = w;
  }
  return j;
}

inline ordered_json verification_json(const CdsInstance& inst, const VerificationReport& rep) {
  ordered_json j;
  j["pass"] = rep.pass;
  j["secret_length"] = rep.secret_length;
  j["vertices"] = ordered_json::array();
  for (const auto& v : rep.vertices) {
    j["vertices"].push_back(
        {{"vertex", inst.name(v.vertex)}, {"leakage", v.leakage}, {"required", v.required}, {"secure", v.secure}});
  }
  j["edges"] = ordered_json::array();
  for (const auto& e : rep.edges) {
    j["edges"].push_back({{"edge", {inst.name(e.a), inst.name(e.b)}},
                          {"kind", edge_kind_name(e.kind)},
                          {"information", e.information},
                          {"ok", e.ok}});
  }
  return j;
}

inline ordered_json oracle_json(const CdsInstance& inst, const OracleComparison& cmp) {
  ordered_json j;
  j["agree"] = cmp.agree();
  j["realizations"] = cmp.rows;
  j["edges"] = ordered_json::array();
  for (const auto& e : cmp.edges) {
    j["edges"].push_back({{"edge", {inst.name(e.a), inst.name(e.b)}}, {"oracle", e.oracle_ok}, {"rank", e.rank_ok}});
  }
  return j;
}

inline ordered_json rates_json(const RateReport& r) {
  ordered_json j;
  j["rate"] = rational_json(r.rate);
  j["randomness_rate"] = r.randomness_rate ? rational_json(*r.randomness_rate) : ordered_json(nullptr);
  j["bounds"] = {rational_json(r.lower), rational_json(r.upper)};
  return j;
}

inline ordered_json alignment_json(const CdsInstance& inst, const AlignmentReport& rep) {
  ordered_json j;
  j["consistent"] = rep.consistent();
  j["qualified"] = ordered_json::array();
  for (const auto& q : rep.qualified) {
    j["qualified"].push_back({{"edge", {inst.name(q.a), inst.name(q.b)}}, {"noise_overlap", q.alpha}});
  }
  j["unqualified"] = ordered_json::array();
  for (const auto& u : rep.unqualified) {
    j["unqualified"].push_back({{"edge", {inst.name(u.a), inst.name(u.b)}}, {"aligned", u.aligned}});
  }
  j["paths"] = ordered_json::array();
  for (const auto& p : rep.paths) j["paths"].push_back({{"path", p.path}, {"common_noise_lower_bound", p.alpha_star}});
  return j;
}

inline ordered_json audit_json(const AuditReport& rep) {
  ordered_json j;
  j["pass"] = rep.pass;
  j["lemmas"] = ordered_json::array();
  for (const auto& l : rep.lemmas) {
    j["lemmas"].push_back({{"lemma", l.lemma},
                           {"statement", l.statement},
                           {"passed", l.passed},
                           {"vacuous", l.vacuous},
                           {"checks", l.checks},
                           {"offending", l.offending}});
  }
  return j;
}

// ---------------------------------------------------------------------------
// Commands

struct Options {
  bool json = false;
  std::string instance;
  std::string scheme;
  std::string output;
  std::string vertices;
  std::string dump_lp;
  std::string demo;
  std::string directory = ".";
  std::vector<std::string> paths;
  bool reduce = false;
  bool oracle = false;
  bool certificate = false;
  bool no_bound = false;
};

struct Result {
  int code = kExitPass;
  std::string text;
  ordered_json json;
};

inline Result cmd_check(const Options& o) {
  const CdsInstance inst = load_instance(o.instance);
  const Normalized norm = normalize_degenerate(inst);
  const Feasibility f = norm.instance.vertex_count() == 0 ? Feasibility{} : half_rate_feasible(norm.instance);
  Result r;
  r.code = f.feasible ? kExitPass : kExitFail;
  r.text = render_feasibility(norm.instance, f, norm.eliminated);
  r.json = feasibility_json(norm.instance, f, norm.eliminated);
  return r;
}

inline Result cmd_synth(const Options& o) {
  const CdsInstance inst = load_instance(o.instance);
  const Normalized norm = normalize_degenerate(inst);
  if (norm.instance.vertex_count() > 0) {
    const Feasibility f = half_rate_feasible(norm.instance);
    if (!f.feasible) {
      return {kExitFail, render_feasibility(norm.instance, f, norm.eliminated),
              feasibility_json(norm.instance, f, norm.eliminated)};
    }
  }
  const NormalizedSynthesis syn = synthesize_normalized(inst, o.reduce);
  if (!verify_linear(inst, syn.scheme).pass) throw SchemeError("synthesized scheme failed verification");
  const std::string text = to_text(syn.scheme);
  Result r;
  r.json["feasible"] = true;
  r.json["eliminated"] = syn.eliminated;
  r.json["modulus"] = syn.scheme.modulus();
  r.json["secret_length"] = syn.scheme.secret_length();
  r.json["noise_length"] = syn.scheme.noise_length();
  if (!o.output.empty()) {
    write_file(o.output, text);
    std::ostringstream os;
    os << "wrote " << o.output << " (p = " << syn.scheme.modulus() << ", L = " << syn.scheme.secret_length()
       << ", L_Z = " << syn.scheme.noise_length() << ")\n";
    r.text = os.str();
    r.json["output"] = o.output;
  } else {
    r.text = text;
    r.json["scheme"] = text;
  }
  return r;
}

inline Result cmd_verify(const Options& o) {
  const CdsInstance inst = load_instance(o.instance);
  const LinearScheme sch = load_scheme(o.scheme);
  const VerificationReport rep = verify_linear(inst, sch);
  Result r;
  r.text = render_verification(inst, rep);
  r.json = verification_json(inst, rep);
  bool ok = rep.pass;
  if (o.oracle) {
    const OracleComparison cmp = oracle_compare(inst, sch, rep, enumeration_budget_from_env());
    r.text += render_oracle(inst, cmp);
    r.json["oracle"] = oracle_json(inst, cmp);
    ok = ok && cmp.agree();
  }
  r.code = ok ? kExitPass : kExitFail;
  return r;
}

inline Result cmd_bound(const Options& o) {
  const CdsInstance inst = load_instance(o.instance);
  const std::vector<std::string> keep = o.vertices.empty() ? std::vector<std::string>{} : split_list(o.vertices);
  const ShannonBound b = keep.empty() ? shannon_bound(inst) : shannon_bound_restricted(inst, keep);
  Result r;
  r.text = render_bound(b, keep);
  r.json["rate_bound"] = rational_json(b.rate);
  r.json["secret_entropy"] = rational_json(b.secret_entropy);
  r.json["ground_set"] = b.lp.ground();
  r.json["constraints"] = b.lp.constraints().size();
  r.json["degenerate"] = b.degenerate;
  if (o.certificate) {
    const DualCertificate cert = dual_certificate(b.solution, b.lp);
    r.text += cert.text;
    ordered_json lines = ordered_json::array();
    for (const auto& l : cert.lines) {
      lines.push_back({{"weight", rational_json(l.weight)},
                       {"label", b.lp.constraints()[l.constraint].label},
                       {"constraint", b.lp.format(b.lp.constraints()[l.constraint])}});
    }
    r.json["certificate"] = lines;
  }
  if (!o.dump_lp.empty()) write_file(o.dump_lp, b.lp.dump());
  return r;
}

inline Result cmd_audit(const Options& o) {
  const CdsInstance inst = load_instance(o.instance);
  const LinearScheme sch = load_scheme(o.scheme);
  std::vector<std::vector<std::string>> paths;
  for (const auto& p : o.paths) paths.push_back(split_list(p));

  Result r;
  const VerificationReport ver = verify_linear(inst, sch);
  r.text = render_verification(inst, ver);
  r.json["verification"] = verification_json(inst, ver);

  const AlignmentReport align = alignment_report(inst, sch, paths);
  r.text += render_alignment(inst, align);
  r.json["alignment"] = alignment_json(inst, align);

  bool audit_ok = true;
  bool half_rate = true;
  for (const auto& n : inst.names()) half_rate = half_rate && sch.signal(n).length() == sch.secret_length();
  if (half_rate) {
    const AuditReport audit = lemma_audit(inst, tabulate(sch, enumeration_budget_from_env()), sch.secret_length());
    r.text += render_audit(audit);
    r.json["lemmas"] = audit_json(audit);
    audit_ok = audit.pass;
  } else {
    r.text += "lemma audit: skipped (signals longer than L)\n";
    r.json["lemmas"] = nullptr;
  }

  if (ver.pass) {
    std::optional<Rational> converse;
    if (!o.no_bound && inst.vertex_count() + 1 <= kAuditLpGroundLimit) converse = shannon_bound(inst).rate;
    const RateReport rates = rate_report(inst, sch, converse);
    r.text += render_rates(rates);
    r.json["rates"] = rates_json(rates);
  } else {
    r.json["rates"] = nullptr;
  }
  r.code = ver.pass && audit_ok ? kExitPass : kExitFail;
  return r;
}

inline Result cmd_demo(const Options& o) {
  CdsInstance inst = o.demo == "fig2" ? builtin_fig2_instance() : builtin_example1_instance();
  LinearScheme sch = o.demo == "fig2" ? builtin_fig2_scheme() : synthesize_half_rate(inst);
  std::error_code ec;
  std::filesystem::create_directories(o.directory, ec);
  if (ec) throw FileError("cannot create directory " + o.directory);
  const std::string base = (std::filesystem::path(o.directory) / o.demo).string();
  write_file(base + ".instance", to_text(inst));
  write_file(base + ".scheme", to_text(sch));
  Result r;
  r.text = "wrote " + base + ".instance\nwrote " + base + ".scheme\n";
  r.json["instance"] = base + ".instance";
  r.json["scheme"] = base + ".scheme";
  return r;
}

/// Runs one command. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conditional disclosure of secrets: feasibility, synthesis, verification and bounds", "cds"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json, "Emit machine-readable JSON");

  auto* check = app.add_subcommand("check", "Decide whether rate 1/2 is achievable");
  check->add_option("instance", o.instance, "Instance file")->required();

  auto* synth = app.add_subcommand("synth", "Synthesize a rate-1/2 linear scheme");
  synth->add_option("instance", o.instance, "Instance file")->required();
  synth->add_flag("--reduce-randomness", o.reduce, "Use two noise symbols instead of one per component");
  synth->add_option("-o,--output", o.output, "Write the scheme here instead of stdout");

  auto* verify = app.add_subcommand("verify", "Verify a linear scheme by rank");
  verify->add_option("instance", o.instance, "Instance file")->required();
  verify->add_option("scheme", o.scheme, "Scheme file")->required();
  verify->add_flag("--oracle", o.oracle, "Cross-check every edge by exhaustive enumeration");

  auto* bound = app.add_subcommand("bound", "Shannon-type upper bound on the rate");
  bound->add_option("instance", o.instance, "Instance file")->required();
  bound->add_option("--vertices", o.vertices, "Comma-separated vertex subset");
  bound->add_flag("--certificate", o.certificate, "Print the dual certificate");
  bound->add_option("--dump-lp", o.dump_lp, "Write the LP, one constraint per line");

  auto* audit = app.add_subcommand("audit", "Lemma, alignment and rate report for a scheme");
  audit->add_option("instance", o.instance, "Instance file")->required();
  audit->add_option("scheme", o.scheme, "Scheme file")->required();
  audit->add_option("--path", o.paths, "Comma-separated path for a common-noise bound (repeatable)");
  audit->add_flag("--no-bound", o.no_bound, "Skip the LP; use 1/2 as the upper bound");

  auto* demo = app.add_subcommand("demo", "Write a built-in instance and scheme");
  demo->add_option("name", o.demo, "fig2 or example1")->required()->check(CLI::IsMember({"fig2", "example1"}));
  demo->add_option("-d,--dir", o.directory, "Output directory");

  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) {
    sub->add_flag("--json", o.json, "Emit machine-readable JSON");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  Result r;
  try {
    if (check->parsed()) {
      r = cmd_check(o);
    } else if (synth->parsed()) {
      r = cmd_synth(o);
    } else if (verify->parsed()) {
      r = cmd_verify(o);
    } else if (bound->parsed()) {
      r = cmd_bound(o);
    } else if (audit->parsed()) {
      r = cmd_audit(o);
    } else {
      r = cmd_demo(o);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (o.json) {
    ordered_json j;
    j["command"] = app.get_subcommands().front()->get_name();
    j["exit_code"] = r.code;
    for (auto& [k, v] : r.json.items()) j[k] = v;
    out << j.dump(2) << "\n";
  } else {
    out << r.text;
  }
  return r.code;
}

}  // namespace cds::cli

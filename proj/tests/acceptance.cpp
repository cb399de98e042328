// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "cds/cli.hpp"
#include "cds/entropy_oracle.hpp"
#include "cds/report.hpp"
#include "cds/shannon_lp.hpp"
#include "cds/synthesis.hpp"
#include "support.hpp"

using namespace cds;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void require(Outcome& o, bool cond, const std::string& what) {
  if (!cond && o.pass) {
    o.pass = false;
    o.detail = what;
  }
}

std::string run_check(const CdsInstance& inst) {
  const Normalized norm = normalize_degenerate(inst);
  return render_feasibility(norm.instance, half_rate_feasible(norm.instance), norm.eliminated);
}

bool oracle_valid(const CdsInstance& inst, const LinearScheme& sch) {
  const SchemeTable t = tabulate(sch);
  for (const auto& e : inst.edges()) {
    const std::string a = inst.name(e.a), b = inst.name(e.b);
    if (!(e.kind == EdgeKind::kQualified ? check_correct(t, a, b) : check_secure(t, a, b))) return false;
  }
  for (VertexId v = 0; v < inst.vertex_count(); ++v) {
    if (has_unqualified_edge(inst, v) && !check_secure(t, std::vector<std::string>{inst.name(v)})) return false;
  }
  return true;
}

// Shared by criteria 4 and 9; solved once.
std::optional<ShannonBound> fig2_bound;

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  const std::string fig2 = run_check(builtin_fig2_instance());
  const auto t1 = Clock::now();
  const std::string ex1 = run_check(builtin_example1_instance());
  const auto t2 = Clock::now();
  require(o, fig2 == "INFEASIBLE\nwitness edge: {B2,A2}\nunqualified path: (B2,A1,B3,A2)\n", "fig2 output: " + fig2);
  require(o, ex1 == "FEASIBLE (capacity = 1/2)\n", "example1 output: " + ex1);
  require(o, t1 - t0 < std::chrono::seconds(1) && t2 - t1 < std::chrono::seconds(1), "too slow");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const CdsInstance ex1 = builtin_example1_instance();
  const LinearScheme sch = synthesize_half_rate(ex1);
  require(o, sch.modulus() == 5, "p != 5");
  require(o, verify_linear(ex1, sch).pass, "verify_linear failed");
  require(o, rate_report(ex1, sch).rate == make_rational(1, 2), "R != 1/2");
  require(o, oracle_valid(ex1, sch), "oracle rejected the scheme");
  const LinearScheme red = reduce_randomness(ex1, sch);
  require(o, red.noise_length() == 2, "reduced L_Z != 2");
  require(o, verify_linear(ex1, red).pass && oracle_valid(ex1, red), "reduced scheme invalid");
  require(o, rate_report(ex1, red).randomness_rate == make_rational(1, 2), "R_Z != 1/2");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const CdsInstance inst = builtin_fig2_instance();
  const LinearScheme sch = builtin_fig2_scheme();
  require(o, sch.secret_length() == 4 && sch.noise_length() == 9, "L or L_Z wrong");
  for (const auto& [name, code] : sch.signals()) require(o, code.length() == 5, "N != 5 at " + name);
  require(o, verify_linear(inst, sch).pass, "verify_linear failed");
  require(o, rate_report(inst, sch).rate == make_rational(2, 5), "R != 2/5");
  require(o, tabulate(sch).rows() == 8192, "table size");
  require(o, oracle_valid(inst, sch), "oracle rejected the scheme");
  return o;
}

Outcome criterion4() {
  Outcome o;
  fig2_bound = shannon_bound(builtin_fig2_instance());
  require(o, fig2_bound->rate == make_rational(5, 12), "bound = " + to_string(fig2_bound->rate));
  try {
    const DualCertificate cert = dual_certificate(fig2_bound->solution, fig2_bound->lp);
    require(o, cert.bound == make_rational(5, 6), "certificate bound " + to_string(cert.bound));
    std::ostringstream d;
    d << fig2_bound->lp.variable_count() << " variables, " << fig2_bound->lp.constraints().size() << " constraints, "
      << cert.lines.size() << " certificate lines";
    o.detail = d.str();
  } catch (const Error& e) {
    require(o, false, std::string("certificate: ") + e.what());
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  const ShannonBound b = shannon_bound(parse_instance("q A1 B1\nu A1 B2\n"));
  require(o, b.rate == make_rational(1, 2), "bound = " + to_string(b.rate));
  require(o, dual_certificate(b.solution, b.lp).bound == 1, "certificate");
  return o;
}

Outcome criterion6() {
  Outcome o;
  const AlignmentReport fig2 = alignment_report(builtin_fig2_instance(), builtin_fig2_scheme());
  for (const auto& q : fig2.qualified) require(o, q.alpha == 4, "fig2 qualified overlap != 4");
  for (const auto& u : fig2.unqualified) require(o, u.aligned, "fig2 unqualified edge not aligned");
  testkit::Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    const auto c = testkit::random_verified_scheme(rng);
    require(o, alignment_report(c.instance, c.scheme).consistent(),
            "random scheme " + std::to_string(i) + ":\n" + to_text(c.instance) + to_text(c.scheme));
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  testkit::Rng rng(7);
  int valid = 0;
  for (int i = 0; i < 500; ++i) {
    CdsInstance inst;
    LinearScheme sch(2, 1, 0);
    if (i % 4 == 0) {
      auto c = testkit::random_verified_scheme(rng);
      inst = std::move(c.instance);
      sch = std::move(c.scheme);
    } else {
      inst = testkit::random_instance(rng, 5);
      sch = testkit::random_scheme(rng, inst, rng() % 2 ? 3 : 2, 1 + rng() % 2, rng() % 4, 3);
    }
    const VerificationReport rep = verify_linear(inst, sch);
    valid += rep.pass;
    const SchemeTable t = tabulate(sch);
    for (const auto& e : rep.edges) {
      const std::string a = inst.name(e.a), b = inst.name(e.b);
      const bool oracle = e.kind == EdgeKind::kQualified ? check_correct(t, a, b) : check_secure(t, a, b);
      require(o, oracle == e.ok, "scheme " + std::to_string(i) + " edge " + inst.edge_label(e.a, e.b));
    }
  }
  if (o.pass) o.detail = std::to_string(valid) + " of 500 valid";
  return o;
}

Outcome criterion8() {
  Outcome o;
  testkit::Rng rng(8);
  std::size_t largest = 0;
  for (int i = 0; i < 100; ++i) {
    const CdsInstance inst = testkit::random_feasible_instance(rng, 10);
    largest = std::max(largest, inst.vertex_count());
    const LinearScheme sch = synthesize_half_rate(inst);
    const SchemeTable t = tabulate(sch, std::uint64_t{1} << 22);
    const AuditReport rep = lemma_audit(inst, t, 1);
    require(o, rep.pass, "instance " + std::to_string(i) + ":\n" + to_text(inst));
    // The identities are integer equalities: every joint entropy is exact and equals a rank.
    for (const auto& name : inst.names()) {
      const EntropyValue h = joint_entropy_value(t, {name, "S"});
      require(o, h.exact && static_cast<std::size_t>(*h.exact) == linear_joint_rank(sch, {name}, true),
              "entropy of " + name + " is not an exact rank");
    }
    for (const auto& e : inst.edges()) {
      const EntropyValue h = joint_entropy_value(t, {inst.name(e.a), inst.name(e.b)});
      require(o, h.exact && static_cast<std::size_t>(*h.exact) == linear_joint_rank(sch, {inst.name(e.a), inst.name(e.b)}),
              "pair entropy is not an exact rank");
    }
  }
  if (o.pass) o.detail = "largest instance " + std::to_string(largest) + " vertices";
  return o;
}

Outcome criterion9() {
  Outcome o;
  if (!fig2_bound) fig2_bound = shannon_bound(builtin_fig2_instance());
  const RateReport r = rate_report(builtin_fig2_instance(), builtin_fig2_scheme(), fig2_bound->rate);
  require(o, r.lower == make_rational(2, 5), "lower " + to_string(r.lower));
  require(o, r.upper == make_rational(5, 12), "upper " + to_string(r.upper));
  require(o, r.lower < r.upper, "no strict gap");
  if (o.pass) o.detail = render_rates(r).substr(0, render_rates(r).size() - 1);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"feasibility check", criterion1},        {"half-rate synthesis", criterion2},
      {"rate-2/5 scheme", criterion3},          {"Shannon bound 5/12", criterion4},
      {"Shannon bound 1/2", criterion5},        {"alignment consistency", criterion6},
      {"oracle equivalence", criterion7},       {"lemma audit", criterion8},
      {"bounds ordering", criterion9}};
  const std::array<double, 9> limits{2, 1, 5, 60, 1, 0, 60, 0, 0};  // seconds, 0 = none

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limits[i] > 0 && secs >= limits[i]) require(o, false, "runtime limit exceeded");
    failures += !o.pass;
    std::printf("criterion %zu: %s  %-22s %7.2fs%s%s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, secs,
                o.detail.empty() ? "" : "  ", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

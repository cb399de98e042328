#pragma once

// Line-stable text rendering of every report type. Vertices appear in name
// order and edges in instance order; rationals print as p/q.

#include <sstream>
#include <string>
#include <vector>

#include "cds/entropy_oracle.hpp"
#include "cds/instance.hpp"
#include "cds/rational.hpp"
#include "cds/scheme.hpp"
#include "cds/shannon_lp.hpp"

namespace cds {

inline std::string join_names(const std::vector<std::string>& names, const char* sep = ",") {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += sep;
    out += n;
  }
  return out;
}

inline std::vector<std::string> vertex_names(const CdsInstance& inst, const std::vector<VertexId>& ids) {
  std::vector<std::string> out;
  for (VertexId v : ids) out.push_back(inst.name(v));
  return out;
}

inline std::string render_feasibility(const CdsInstance& inst, const Feasibility& f,
                                      const std::vector<std::string>& eliminated = {}) {
  std::ostringstream os;
  if (!eliminated.empty()) os << "eliminated: " << join_names(eliminated) << "\n";
  if (f.feasible) {
    os << "FEASIBLE (capacity = 1/2)\n";
    return os.str();
  }
  os << "INFEASIBLE\n";
  if (f.edge) os << "witness edge: " << inst.edge_label(f.edge->first, f.edge->second) << "\n";
  if (f.path) os << "unqualified path: (" << join_names(vertex_names(inst, f.path->vertices)) << ")\n";
  return os.str();
}

inline std::string render_verification(const CdsInstance& inst, const VerificationReport& rep) {
  std::ostringstream os;
  os << "verification: " << (rep.pass ? "PASS" : "FAIL") << " (L = " << rep.secret_length << ")\n";
  for (const auto& v : rep.vertices) {
    os << "vertex " << inst.name(v.vertex) << ": leakage " << v.leakage;
    if (!v.required) {
      os << " (unconstrained)";
    } else {
      os << (v.secure ? " ok" : " LEAK");
    }
    os << "\n";
  }
  for (const auto& e : rep.edges) {
    os << "edge " << inst.edge_label(e.a, e.b) << " " << edge_kind_name(e.kind) << ": information " << e.information;
    if (e.kind == EdgeKind::kQualified) os << " of " << rep.secret_length;
    os << (e.ok ? " ok" : " FAIL") << "\n";
  }
  return os.str();
}

struct OracleEdge {
  VertexId a, b;
  EdgeKind kind;
  bool oracle_ok;
  bool rank_ok;
};

struct OracleComparison {
  std::uint64_t rows = 0;
  std::vector<OracleEdge> edges;
  bool agree() const {
    for (const auto& e : edges) {
      if (e.oracle_ok != e.rank_ok) return false;
    }
    return true;
  }
};

/// Enumerates every realization of (s, z) and rechecks each edge.
inline OracleComparison oracle_compare(const CdsInstance& inst, const LinearScheme& sch, const VerificationReport& rep,
                                       std::uint64_t budget) {
  const SchemeTable table = tabulate(sch, budget);
  OracleComparison out;
  out.rows = table.rows();
  for (const auto& e : rep.edges) {
    const std::string a = inst.name(e.a), b = inst.name(e.b);
    const bool ok = e.kind == EdgeKind::kQualified ? check_correct(table, a, b) : check_secure(table, a, b);
    out.edges.push_back({e.a, e.b, e.kind, ok, e.ok});
  }
  return out;
}

inline std::string render_oracle(const CdsInstance& inst, const OracleComparison& cmp) {
  std::ostringstream os;
  os << "oracle: " << (cmp.agree() ? "AGREES" : "DISAGREES") << " (" << cmp.rows << " realizations)\n";
  for (const auto& e : cmp.edges) {
    os << "oracle edge " << inst.edge_label(e.a, e.b) << " "
       << (e.kind == EdgeKind::kQualified ? "correct " : "secure ") << (e.oracle_ok ? "yes" : "no")
       << (e.oracle_ok == e.rank_ok ? "" : " (rank verdict differs)") << "\n";
  }
  return os.str();
}

inline std::string render_rates(const RateReport& r) {
  std::ostringstream os;
  os << "R = " << to_string(r.rate) << ", R_Z = " << (r.randomness_rate ? to_string(*r.randomness_rate) : "none")
     << ", bounds [" << to_string(r.lower) << ", " << to_string(r.upper) << "]\n";
  return os.str();
}

inline std::string render_alignment(const CdsInstance& inst, const AlignmentReport& rep) {
  std::ostringstream os;
  os << "alignment: " << (rep.consistent() ? "consistent" : "INCONSISTENT") << " (L = " << rep.secret_length
     << ")\n";
  for (const auto& q : rep.qualified) {
    os << "noise overlap " << inst.edge_label(q.a, q.b) << " = " << q.alpha
       << (q.alpha >= rep.secret_length ? "" : " (below L)") << "\n";
  }
  for (const auto& u : rep.unqualified) {
    os << "signal alignment " << inst.edge_label(u.a, u.b) << " " << (u.aligned ? "aligned" : "VIOLATED") << "\n";
  }
  for (const auto& p : rep.paths) {
    os << "path (" << join_names(p.path) << ") common noise >= " << p.alpha_star << "\n";
  }
  return os.str();
}

inline std::string render_audit(const AuditReport& rep) {
  std::ostringstream os;
  os << "lemma audit: " << (rep.pass ? "PASS" : "FAIL") << "\n";
  for (const auto& l : rep.lemmas) {
    os << "lemma " << l.lemma << " " << (l.passed ? (l.vacuous ? "vacuous" : "pass") : "FAIL") << " (" << l.checks
       << " checks): " << l.statement;
    if (!l.passed) os << " [at " << join_names(l.offending) << "]";
    os << "\n";
  }
  return os.str();
}

inline std::string render_bound(const ShannonBound& b, const std::vector<std::string>& vertices = {}) {
  std::ostringstream os;
  os << to_string(b.rate) << "\n";
  os << "H(S) <= " << to_string(b.secret_entropy) << " over " << b.lp.size() << " variables, "
     << b.lp.variable_count() << " subsets, " << b.lp.constraints().size() << " constraints\n";
  if (!vertices.empty()) os << "restricted to: " << join_names(vertices) << "\n";
  if (b.degenerate) os << "degenerate: no decoding constraint bounds H(S); value is the cap\n";
  return os.str();
}

}  // namespace cds

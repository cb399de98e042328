#pragma once

// Shannon-type converse bounds. One LP variable per nonempty subset of the
// ground set {S} u V, constrained by the elemental inequalities and the
// decoding/security equalities of each edge, with every signal entropy capped
// at 1. The optimum of H(S) divided by 2 bounds the symmetric rate.

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cds/error.hpp"
#include "cds/instance.hpp"
#include "cds/rational.hpp"
#include "cds/simplex.hpp"

namespace cds {

inline constexpr std::size_t kDefaultGroundSetLimit = 12;

/// Ground set larger than the configured limit.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

using SubsetMask = std::uint32_t;

struct EntropyTerm {
  SubsetMask subset;
  Rational coef;
};

struct EntropyConstraint {
  std::vector<EntropyTerm> terms;
  Relation relation = Relation::kGreaterEqual;
  Rational rhs;
  std::string label;
};

class EntropyLp {
 public:
  explicit EntropyLp(std::vector<std::string> ground) : ground_(std::move(ground)) {
    if (ground_.empty() || ground_.size() > 31) throw SizeLimitError("ground set size out of range");
  }

  const std::vector<std::string>& ground() const { return ground_; }
  std::size_t size() const { return ground_.size(); }
  std::size_t variable_count() const { return (std::size_t{1} << ground_.size()) - 1; }
  SubsetMask full() const { return static_cast<SubsetMask>(variable_count()); }

  const std::vector<EntropyConstraint>& constraints() const { return constraints_; }
  const std::vector<EntropyTerm>& objective() const { return objective_; }

  void add(EntropyConstraint c) {
    for (const auto& t : c.terms) check_mask(t.subset);
    constraints_.push_back(std::move(c));
  }
  void add(const std::vector<EntropyConstraint>& cs) {
    for (const auto& c : cs) add(c);
  }
  void maximize(std::vector<EntropyTerm> obj) {
    for (const auto& t : obj) check_mask(t.subset);
    objective_ = std::move(obj);
  }

  /// Comma-joined names in ground-set order, e.g. "S,A1,B1".
  std::string subset_names(SubsetMask m) const {
    std::string out;
    for (std::size_t i = 0; i < ground_.size(); ++i) {
      if (m >> i & 1u) {
        if (!out.empty()) out += ',';
        out += ground_[i];
      }
    }
    return out;
  }

  std::string format_terms(const std::vector<EntropyTerm>& terms) const {
    std::string out;
    for (const auto& t : terms) {
      if (sgn(t.coef) == 0) continue;
      const bool neg = sgn(t.coef) < 0;
      const Rational mag = abs(t.coef);
      if (out.empty()) {
        if (neg) out += "-";
      } else {
        out += neg ? " - " : " + ";
      }
      if (mag != 1) out += to_string(mag) + " ";
      out += "H(" + subset_names(t.subset) + ")";
    }
    return out.empty() ? "0" : out;
  }

  std::string format(const EntropyConstraint& c) const {
    return format_terms(c.terms) + " " + relation_symbol(c.relation) + " " + to_string(c.rhs);
  }

  /// One constraint per line, objective first as a comment.
  std::string dump() const {
    std::ostringstream os;
    os << "# maximize " << format_terms(objective_) << "\n";
    for (const auto& c : constraints_) os << format(c) << "\n";
    return os.str();
  }

  LinearProgram program() const {
    LinearProgram lp;
    lp.num_vars = variable_count();
    for (const auto& t : objective_) lp.objective.push_back({t.subset - 1, t.coef});
    lp.constraints.reserve(constraints_.size());
    for (const auto& c : constraints_) {
      LpConstraint row;
      row.relation = c.relation;
      row.rhs = c.rhs;
      for (const auto& t : c.terms) row.terms.push_back({t.subset - 1, t.coef});
      lp.constraints.push_back(std::move(row));
    }
    return lp;
  }

 private:
  void check_mask(SubsetMask m) const {
    if (m == 0 || m > full()) throw Error("subset index out of range");
  }

  std::vector<std::string> ground_;
  std::vector<EntropyConstraint> constraints_;
  std::vector<EntropyTerm> objective_;
};

namespace detail {

inline std::vector<std::string> default_ground_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back("X" + std::to_string(i));
  return out;
}

inline void add_term(std::vector<EntropyTerm>& terms, SubsetMask m, long coef) {
  if (m == 0) return;  // H(empty) = 0
  for (auto& t : terms) {
    if (t.subset == m) {
      t.coef += coef;
      return;
    }
  }
  terms.push_back({m, Rational(coef)});
}

inline void drop_zeros(std::vector<EntropyTerm>& terms) {
  std::erase_if(terms, [](const EntropyTerm& t) { return sgn(t.coef) == 0; });
}

}  // namespace detail

/// H(X_i | rest) >= 0 for each i, then I(X_i; X_j | X_K) >= 0 for i < j and
/// K ranging over subsets of the remaining elements.
inline std::vector<EntropyConstraint> elemental_inequalities(std::size_t n, std::size_t limit = kDefaultGroundSetLimit,
                                                             const std::vector<std::string>& names = {}) {
  if (n < 2 || n > limit) {
    throw SizeLimitError("ground set size " + std::to_string(n) + " outside [2, " + std::to_string(limit) + "]");
  }
  const std::vector<std::string> label_names = names.empty() ? detail::default_ground_names(n) : names;
  if (label_names.size() != n) throw Error("name list does not match ground set size");
  auto join = [&](SubsetMask m) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) {
      if (m >> i & 1u) s += (s.empty() ? "" : ",") + label_names[i];
    }
    return s;
  };

  const SubsetMask all = (SubsetMask{1} << n) - 1;
  std::vector<EntropyConstraint> out;
  for (std::size_t i = 0; i < n; ++i) {
    const SubsetMask rest = all & ~(SubsetMask{1} << i);
    EntropyConstraint c;
    detail::add_term(c.terms, all, 1);
    detail::add_term(c.terms, rest, -1);
    c.label = "H(" + label_names[i] + "|" + join(rest) + ") >= 0";
    out.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const SubsetMask bi = SubsetMask{1} << i, bj = SubsetMask{1} << j;
      const SubsetMask others = all & ~bi & ~bj;
      // Enumerate every K within `others`, including the empty set.
      SubsetMask k = 0;
      for (;;) {
        EntropyConstraint c;
        detail::add_term(c.terms, bi | k, 1);
        detail::add_term(c.terms, bj | k, 1);
        detail::add_term(c.terms, bi | bj | k, -1);
        detail::add_term(c.terms, k, -1);
        c.label = "I(" + label_names[i] + ";" + label_names[j] + (k ? "|" + join(k) : "") + ") >= 0";
        out.push_back(std::move(c));
        if (k == others) break;
        k = (k - others) & others;
      }
    }
  }
  return out;
}

/// Ground set used for an instance: S first, then vertices in name order.
inline std::vector<std::string> entropy_ground_set(const CdsInstance& inst) {
  std::vector<std::string> g{"S"};
  for (const auto& n : inst.names()) g.push_back(n);
  return g;
}

inline SubsetMask vertex_bit(VertexId v) { return SubsetMask{1} << (v + 1); }
inline constexpr SubsetMask kSecretBit = 1;

/// One equality per edge, then H(v) <= 1 per vertex.
inline std::vector<EntropyConstraint> cds_constraints(const CdsInstance& inst,
                                                      std::size_t limit = kDefaultGroundSetLimit) {
  if (inst.vertex_count() == 0) return {};
  if (inst.vertex_count() + 1 > limit) {
    throw SizeLimitError("ground set has " + std::to_string(inst.vertex_count() + 1) + " variables (limit " +
                         std::to_string(limit) + "); restrict to a vertex subset");
  }
  std::vector<EntropyConstraint> out;
  for (const auto& e : inst.edges()) {
    const SubsetMask pair = vertex_bit(e.a) | vertex_bit(e.b);
    EntropyConstraint c;
    c.relation = Relation::kEqual;
    detail::add_term(c.terms, pair | kSecretBit, 1);
    detail::add_term(c.terms, pair, -1);
    if (e.kind == EdgeKind::kQualified) {
      c.label = "decode " + inst.edge_label(e.a, e.b);
    } else {
      detail::add_term(c.terms, kSecretBit, -1);
      c.label = "secure " + inst.edge_label(e.a, e.b);
    }
    out.push_back(std::move(c));
  }
  for (VertexId v = 0; v < inst.vertex_count(); ++v) {
    EntropyConstraint c;
    c.relation = Relation::kLessEqual;
    c.rhs = 1;
    detail::add_term(c.terms, vertex_bit(v), 1);
    c.label = "size H(" + inst.name(v) + ") <= 1";
    out.push_back(std::move(c));
  }
  return out;
}

/// Elemental + edge constraints + cap H(S) <= n, maximizing H(S).
inline EntropyLp build_shannon_lp(const CdsInstance& inst, std::size_t limit = kDefaultGroundSetLimit) {
  if (inst.vertex_count() == 0) throw InstanceError("instance has no vertices");
  EntropyLp lp(entropy_ground_set(inst));
  lp.add(elemental_inequalities(lp.size(), limit, lp.ground()));
  lp.add(cds_constraints(inst, limit));
  EntropyConstraint cap;
  cap.relation = Relation::kLessEqual;
  cap.rhs = static_cast<long>(lp.size());
  cap.terms.push_back({kSecretBit, Rational(1)});
  cap.label = "cap H(S) <= " + std::to_string(lp.size());
  lp.add(std::move(cap));
  lp.maximize({{kSecretBit, Rational(1)}});
  return lp;
}

struct ShannonBound {
  Rational rate;            // optimum / 2
  Rational secret_entropy;  // optimum of H(S)
  bool degenerate = false;  // no qualified edge, or only the cap binds
  EntropyLp lp;
  LpSolution solution;
};

inline ShannonBound shannon_bound(const CdsInstance& inst, std::size_t limit = kDefaultGroundSetLimit) {
  EntropyLp lp = build_shannon_lp(inst, limit);
  LpSolution sol = simplex_solve_dual(lp.program());
  if (sol.status != LpStatus::kOptimal) {
    throw Error(std::string("entropy LP is ") + status_name(sol.status));
  }
  ShannonBound out{sol.value / 2, sol.value, false, std::move(lp), std::move(sol)};
  out.degenerate =
      inst.count_edges(EdgeKind::kQualified) == 0 || out.secret_entropy == static_cast<long>(out.lp.size());
  return out;
}

/// Bound for the sub-instance induced by `vertices`.
inline ShannonBound shannon_bound_restricted(const CdsInstance& inst, const std::vector<std::string>& vertices,
                                             std::size_t limit = kDefaultGroundSetLimit) {
  return shannon_bound(inst.induced(vertices), limit);
}

struct CertificateLine {
  Rational weight;
  std::size_t constraint;
};

struct DualCertificate {
  Rational bound;                    // objective <= bound
  std::vector<CertificateLine> lines;
  std::vector<EntropyTerm> slack;    // (sum of weighted rows) - objective, all coefficients >= 0
  std::string text;
};

/// Combines the constraints with the dual weights and checks, in exact
/// arithmetic, that the combination dominates the objective and sums to the
/// optimum. Throws if any check fails.
inline DualCertificate dual_certificate(const LpSolution& sol, const EntropyLp& lp) {
  if (sol.status != LpStatus::kOptimal) throw Error("certificate requires an optimal solution");
  const auto& cons = lp.constraints();
  if (sol.duals.size() != cons.size()) throw Error("dual vector does not match constraint count");

  DualCertificate cert;
  std::map<SubsetMask, Rational> combo;
  Rational total = 0;
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const Rational& y = sol.duals[i];
    if (sgn(y) == 0) continue;
    const auto rel = cons[i].relation;
    if ((rel == Relation::kLessEqual && sgn(y) < 0) || (rel == Relation::kGreaterEqual && sgn(y) > 0)) {
      throw Error("dual multiplier has the wrong sign for constraint " + std::to_string(i));
    }
    for (const auto& t : cons[i].terms) combo[t.subset] += y * t.coef;
    total += y * cons[i].rhs;
    cert.lines.push_back({y, i});
  }
  for (const auto& t : lp.objective()) combo[t.subset] -= t.coef;
  for (const auto& [mask, coef] : combo) {
    if (sgn(coef) < 0) throw Error("weighted sum does not dominate the objective at H(" + lp.subset_names(mask) + ")");
    if (sgn(coef) > 0) cert.slack.push_back({mask, coef});
  }
  if (total != sol.value) throw Error("weighted right-hand sides do not reproduce the optimum");
  cert.bound = total;

  std::ostringstream os;
  os << "bound: " << lp.format_terms(lp.objective()) << " <= " << to_string(total) << "\n";
  for (const auto& l : cert.lines) {
    const auto& c = cons[l.constraint];
    os << "  " << to_string(l.weight) << " x [" << c.label << "]  " << lp.format(c) << "\n";
  }
  if (!cert.slack.empty()) os << "  minus nonnegative: " << lp.format_terms(cert.slack) << "\n";
  os << "sum: " << lp.format_terms(lp.objective()) << " <= " << to_string(total) << "\n";
  cert.text = os.str();
  return cert;
}

}  // namespace cds

#pragma once

// Ground truth by enumeration: every (s, z) realization is listed once, which
// is exactly the uniform i.i.d. distribution of secret and noise. Decodability
// and security are then decided combinatorially, with no entropies involved.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cds/error.hpp"
#include "cds/instance.hpp"
#include "cds/scheme.hpp"

namespace cds {

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 20;

/// Budget from CDS_ENUM_BUDGET when set to a positive integer.
inline std::uint64_t enumeration_budget_from_env() {
  if (const char* env = std::getenv("CDS_ENUM_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefaultEnumerationBudget;
}

namespace detail {

// p^e, or nullopt once it passes `cap`.
inline std::optional<std::uint64_t> bounded_pow(std::uint64_t p, std::size_t e, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (r > cap / p) return std::nullopt;
    r *= p;
  }
  return r;
}

}  // namespace detail

/// Value of every signal for every (s, z). Row r encodes s = r / p^L_Z and
/// z = r mod p^L_Z, both read as base-p digit strings (first symbol most
/// significant). Signal values are base-p codes of their N_v symbols.
class SchemeTable {
 public:
  SchemeTable(std::uint32_t p, std::size_t secret_length, std::size_t noise_length, std::uint64_t budget)
      : p_(p), secret_length_(secret_length), noise_length_(noise_length) {
    if (secret_length == 0) throw SchemeError("secret length must be at least 1");
    auto total = detail::bounded_pow(p, secret_length + noise_length, budget);
    if (!total) {
      throw BudgetError("enumeration of " + std::to_string(p) + "^" + std::to_string(secret_length + noise_length) +
                        " realizations exceeds budget " + std::to_string(budget));
    }
    rows_ = *total;
    noise_rows_ = *detail::bounded_pow(p, noise_length, budget);
  }

  /// Adds a signal given its value code for every row (total map).
  void add_signal(const std::string& name, std::size_t length, std::vector<std::uint64_t> values) {
    if (values.size() != rows_) throw SchemeError("signal " + name + " is not defined on every realization");
    if (!detail::bounded_pow(p_, length, UINT64_MAX / p_)) throw BudgetError("signal " + name + " is too long to encode");
    if (index_.count(name)) throw SchemeError("duplicate signal " + name);
    index_[name] = names_.size();
    names_.push_back(name);
    lengths_.push_back(length);
    values_.push_back(std::move(values));
  }

  std::uint32_t modulus() const { return p_; }
  std::size_t secret_length() const { return secret_length_; }
  std::size_t noise_length() const { return noise_length_; }
  std::uint64_t rows() const { return rows_; }
  std::uint64_t secret_code(std::uint64_t row) const { return row / noise_rows_; }
  std::uint64_t noise_code(std::uint64_t row) const { return row % noise_rows_; }
  const std::vector<std::string>& signal_names() const { return names_; }
  bool has_signal(const std::string& name) const { return index_.count(name) != 0; }

  std::size_t signal_length(const std::string& name) const { return lengths_[slot(name)]; }
  const std::vector<std::uint64_t>& values(const std::string& name) const { return values_[slot(name)]; }

  /// Range of a variable's codes: "S", "Z" or a signal name.
  std::uint64_t radix(const std::string& var) const {
    if (var == "S") return rows_ / noise_rows_;
    if (var == "Z") return noise_rows_;
    return *detail::bounded_pow(p_, signal_length(var), UINT64_MAX);
  }

  std::uint64_t value(const std::string& var, std::uint64_t row) const {
    if (var == "S") return secret_code(row);
    if (var == "Z") return noise_code(row);
    return values_[slot(var)][row];
  }

 private:
  std::size_t slot(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw SchemeError("table has no signal " + name);
    return it->second;
  }

  std::uint32_t p_;
  std::size_t secret_length_;
  std::size_t noise_length_;
  std::uint64_t rows_ = 0;
  std::uint64_t noise_rows_ = 1;
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::size_t> lengths_;
  std::vector<std::vector<std::uint64_t>> values_;
};

inline SchemeTable tabulate(const LinearScheme& sch, std::uint64_t budget = kDefaultEnumerationBudget) {
  const std::uint32_t p = sch.modulus();
  const std::size_t l = sch.secret_length(), lz = sch.noise_length();
  SchemeTable table(p, l, lz, budget);
  std::vector<Residue> input(l + lz);
  for (const auto& [name, code] : sch.signals()) {
    const GfMatrix joint = code.joint();
    std::vector<std::uint64_t> values(table.rows());
    for (std::uint64_t r = 0; r < table.rows(); ++r) {
      // Base-p digits of r, most significant first: s_1..s_L, z_1..z_LZ.
      std::uint64_t rest = r;
      for (std::size_t i = input.size(); i-- > 0;) {
        input[i] = static_cast<Residue>(rest % p);
        rest /= p;
      }
      std::uint64_t v = 0;
      for (std::size_t k = 0; k < joint.rows(); ++k) {
        Residue acc = 0;
        auto row = joint.row(k);
        for (std::size_t j = 0; j < row.size(); ++j) acc = gf::add(acc, gf::mul(row[j], input[j], p), p);
        v = v * p + acc;
      }
      values[r] = v;
    }
    table.add_signal(name, code.length(), std::move(values));
  }
  return table;
}

namespace detail {

// One 64-bit key per row for the joint value of `vars`. Mixed radix when it
// fits, otherwise a dense relabeling through a map.
inline std::vector<std::uint64_t> joint_keys(const SchemeTable& t, const std::vector<std::string>& vars) {
  std::vector<std::uint64_t> keys(t.rows(), 0);
  bool fits = true;
  {
    std::uint64_t span = 1;
    for (const auto& v : vars) {
      const std::uint64_t r = t.radix(v);
      if (span > UINT64_MAX / r) {
        fits = false;
        break;
      }
      span *= r;
    }
  }
  if (fits) {
    for (const auto& v : vars) {
      const std::uint64_t r = t.radix(v);
      for (std::uint64_t row = 0; row < t.rows(); ++row) keys[row] = keys[row] * r + t.value(v, row);
    }
    return keys;
  }
  std::map<std::vector<std::uint64_t>, std::uint64_t> label;
  std::vector<std::uint64_t> tuple(vars.size());
  for (std::uint64_t row = 0; row < t.rows(); ++row) {
    for (std::size_t i = 0; i < vars.size(); ++i) tuple[i] = t.value(vars[i], row);
    keys[row] = label.try_emplace(tuple, label.size()).first->second;
  }
  return keys;
}

inline std::vector<std::uint64_t> support_counts(std::vector<std::uint64_t> keys) {
  std::sort(keys.begin(), keys.end());
  std::vector<std::uint64_t> counts;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    counts.push_back(j - i);
    i = j;
  }
  return counts;
}

}  // namespace detail

/// True iff the secret is a function of the joint value of the signals.
inline bool check_correct(const SchemeTable& t, const std::vector<std::string>& signals) {
  const auto keys = detail::joint_keys(t, signals);
  std::unordered_map<std::uint64_t, std::uint64_t> secret_of;
  for (std::uint64_t row = 0; row < t.rows(); ++row) {
    auto [it, fresh] = secret_of.try_emplace(keys[row], t.secret_code(row));
    if (!fresh && it->second != t.secret_code(row)) return false;
  }
  return true;
}

inline bool check_correct(const SchemeTable& t, const std::string& v, const std::string& u) {
  return check_correct(t, std::vector<std::string>{v, u});
}

/// True iff the secret and the signals are independent:
/// count(s, w) * total == count(s) * count(w) for every s and w.
inline bool check_secure(const SchemeTable& t, const std::vector<std::string>& signals) {
  const auto keys = detail::joint_keys(t, signals);
  const std::uint64_t secrets = t.radix("S");
  const std::uint64_t per_secret = t.rows() / secrets;  // count(s), uniform
  std::unordered_map<std::uint64_t, std::uint64_t> count_w;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> count_sw;
  for (std::uint64_t row = 0; row < t.rows(); ++row) {
    ++count_w[keys[row]];
    ++count_sw[{keys[row], t.secret_code(row)}];
  }
  for (const auto& [w, cw] : count_w) {
    for (std::uint64_t s = 0; s < secrets; ++s) {
      auto it = count_sw.find({w, s});
      const std::uint64_t csw = it == count_sw.end() ? 0 : it->second;
      if (static_cast<unsigned __int128>(csw) * t.rows() != static_cast<unsigned __int128>(per_secret) * cw) {
        return false;
      }
    }
  }
  return true;
}

inline bool check_secure(const SchemeTable& t, const std::string& v, const std::string& u) {
  return check_secure(t, std::vector<std::string>{v, u});
}

/// Entropy of a set of variables in p-ary units. `exact` is set when the
/// joint distribution is uniform on p^k points (always the case for linear
/// schemes), and then value == k.
struct EntropyValue {
  double value = 0;
  std::optional<long long> exact;
};

inline EntropyValue joint_entropy_value(const SchemeTable& t, const std::vector<std::string>& vars) {
  if (vars.empty()) throw SchemeError("entropy of an empty variable set");
  const auto counts = detail::support_counts(detail::joint_keys(t, vars));
  const double total = static_cast<double>(t.rows());
  const double log_p = std::log(static_cast<double>(t.modulus()));
  EntropyValue out;
  for (std::uint64_t c : counts) {
    const double q = static_cast<double>(c) / total;
    out.value -= q * std::log(q) / log_p;
  }
  if (std::all_of(counts.begin(), counts.end(), [&](std::uint64_t c) { return c == counts.front(); })) {
    std::uint64_t support = counts.size();
    long long k = 0;
    while (support % t.modulus() == 0) {
      support /= t.modulus();
      ++k;
    }
    if (support == 1) out.exact = k;
  }
  return out;
}

/// Shannon entropy (base p) of the selected variables: "S", "Z", signal names.
inline double joint_entropy(const SchemeTable& t, const std::vector<std::string>& vars) {
  return joint_entropy_value(t, vars).value;
}

// ---------------------------------------------------------------------------
// Lemma audit for rate-1/2 schemes

struct LemmaResult {
  int lemma = 0;
  std::string statement;
  bool passed = true;
  bool vacuous = true;
  std::size_t checks = 0;
  /// Vertex set of the first failing identity.
  std::vector<std::string> offending{};
};

struct AuditReport {
  std::vector<LemmaResult> lemmas;
  bool pass = true;
};

namespace detail {

class EntropyProbe {
 public:
  explicit EntropyProbe(const SchemeTable& t) : t_(t) {}

  // H(vars) or H(vars | S).
  EntropyValue h(std::vector<std::string> vars, bool given_secret = false) const {
    if (!given_secret) return joint_entropy_value(t_, vars);
    vars.push_back("S");
    EntropyValue joint = joint_entropy_value(t_, vars);
    const auto l = static_cast<long long>(t_.secret_length());
    EntropyValue out{joint.value - static_cast<double>(l), std::nullopt};
    if (joint.exact) out.exact = *joint.exact - l;
    return out;
  }

  static bool equal(const EntropyValue& a, long long target) {
    if (a.exact) return *a.exact == target;
    return std::abs(a.value - static_cast<double>(target)) <= 1e-9;
  }

  static bool at_most(const EntropyValue& a, long long target) {
    if (a.exact) return *a.exact <= target;
    return a.value <= static_cast<double>(target) + 1e-9;
  }

 private:
  const SchemeTable& t_;
};

inline void record(LemmaResult& r, bool ok, std::vector<std::string> vertices) {
  r.vacuous = false;
  ++r.checks;
  if (!ok && r.passed) {
    r.passed = false;
    r.offending = std::move(vertices);
  }
}

}  // namespace detail

/// Largest qualified component whose subsets are enumerated in full.
inline constexpr std::size_t kMaxAuditSubsetBlock = 12;

/// Evaluates the entropy identities every rate-1/2 scheme must satisfy.
/// Requires every signal to be exactly L symbols long.
inline AuditReport lemma_audit(const CdsInstance& inst, const SchemeTable& table, std::size_t secret_length) {
  if (table.secret_length() != secret_length) throw SchemeError("table secret length differs from L");
  for (const auto& n : inst.names()) {
    if (!table.has_signal(n)) throw SchemeError("table has no signal for vertex " + n);
    if (table.signal_length(n) != secret_length) {
      throw SchemeError("lemma audit presupposes rate 1/2: signal " + n + " has N = " +
                        std::to_string(table.signal_length(n)) + " != L = " + std::to_string(secret_length));
    }
  }
  const auto l = static_cast<long long>(secret_length);
  const detail::EntropyProbe probe(table);
  const Partition qc = qualified_components(inst);

  LemmaResult l1{1, "H(v) = H(v|S) = L for every vertex on a qualified edge"};
  LemmaResult l2{2, "H(v,u|S) = L for every qualified edge"};
  LemmaResult l3{3, "H(V_q|S) = L for every nonempty subset of a qualified component"};
  LemmaResult l4{4, "H(v,u) = L for every unqualified edge inside a qualified component"};
  LemmaResult l5{5, "H(v_1,v_P) <= L for every unqualified path inside a qualified component"};

  for (VertexId v = 0; v < inst.vertex_count(); ++v) {
    const auto& adj = inst.neighbors(v);
    if (std::none_of(adj.begin(), adj.end(), [](const Neighbor& n) { return n.kind == EdgeKind::kQualified; })) continue;
    const std::vector<std::string> vs{inst.name(v)};
    detail::record(l1, probe.equal(probe.h(vs), l) && probe.equal(probe.h(vs, true), l), vs);
  }
  for (const auto& e : inst.edges()) {
    if (e.kind != EdgeKind::kQualified) continue;
    const std::vector<std::string> vs{inst.name(e.a), inst.name(e.b)};
    detail::record(l2, probe.equal(probe.h(vs, true), l), vs);
  }
  for (const auto& block : qc.blocks) {
    if (block.size() < 2) continue;  // no qualified edge
    if (block.size() <= kMaxAuditSubsetBlock) {
      for (std::uint32_t mask = 1; mask < (1u << block.size()); ++mask) {
        std::vector<std::string> vs;
        for (std::size_t i = 0; i < block.size(); ++i) {
          if (mask & (1u << i)) vs.push_back(inst.name(block[i]));
        }
        detail::record(l3, probe.equal(probe.h(vs, true), l), vs);
      }
    } else {
      std::vector<std::string> vs;
      for (VertexId v : block) vs.push_back(inst.name(v));
      detail::record(l3, probe.equal(probe.h(vs, true), l), vs);
    }
  }
  for (const auto& block : qc.blocks) {
    const Partition inner = detail::components(inst, block, EdgeKind::kUnqualified);
    for (const auto& e : inst.edges()) {
      if (e.kind != EdgeKind::kUnqualified) continue;
      if (!std::binary_search(block.begin(), block.end(), e.a) || !std::binary_search(block.begin(), block.end(), e.b)) {
        continue;
      }
      const std::vector<std::string> vs{inst.name(e.a), inst.name(e.b)};
      detail::record(l4, probe.equal(probe.h(vs), l), vs);
    }
    // An unqualified path joins v_1 and v_P iff they share an unqualified component.
    for (const auto& comp : inner.blocks) {
      for (std::size_t i = 0; i < comp.size(); ++i) {
        for (std::size_t j = i + 1; j < comp.size(); ++j) {
          const std::vector<std::string> vs{inst.name(comp[i]), inst.name(comp[j])};
          detail::record(l5, probe.at_most(probe.h(vs), l), vs);
        }
      }
    }
  }

  AuditReport rep;
  rep.lemmas = {l1, l2, l3, l4, l5};
  rep.pass = std::all_of(rep.lemmas.begin(), rep.lemmas.end(), [](const LemmaResult& r) { return r.passed; });
  return rep;
}

}  // namespace cds

#pragma once

// Linear CDS schemes: every signal is v = F_v s + H_v z over GF(p). All
// correctness, security and alignment questions reduce to ranks.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cds/error.hpp"
#include "cds/gf_matrix.hpp"
#include "cds/instance.hpp"
#include "cds/rational.hpp"

namespace cds {

struct SignalCode {
  GfMatrix secret;  // F_v, N_v x L
  GfMatrix noise;   // H_v, N_v x L_Z

  std::size_t length() const { return secret.rows(); }
  GfMatrix joint() const { return hstack(secret, noise); }
};

class LinearScheme {
 public:
  LinearScheme(std::uint32_t p, std::size_t secret_length, std::size_t noise_length)
      : p_(p), secret_length_(secret_length), noise_length_(noise_length) {
    if (!is_prime(p) || p >= kMaxModulus) throw SchemeError("field modulus must be a small prime");
    if (secret_length == 0) throw SchemeError("secret length must be at least 1");
  }

  std::uint32_t modulus() const { return p_; }
  std::size_t secret_length() const { return secret_length_; }
  std::size_t noise_length() const { return noise_length_; }

  void set_signal(const std::string& name, GfMatrix secret, GfMatrix noise) {
    if (secret.modulus() != p_ || noise.modulus() != p_) throw SchemeError("signal " + name + ": field mismatch");
    if (secret.cols() != secret_length_ || noise.cols() != noise_length_) {
      throw SchemeError("signal " + name + ": precoding width does not match secret/noise length");
    }
    if (secret.rows() != noise.rows()) throw SchemeError("signal " + name + ": F and H row counts differ");
    signals_.insert_or_assign(name, SignalCode{std::move(secret), std::move(noise)});
  }

  bool has_signal(std::string_view name) const { return signals_.find(name) != signals_.end(); }

  const SignalCode& signal(std::string_view name) const {
    auto it = signals_.find(name);
    if (it == signals_.end()) throw SchemeError("scheme has no signal " + std::string(name));
    return it->second;
  }

  const std::map<std::string, SignalCode, NaturalLess>& signals() const { return signals_; }

  friend bool operator==(const LinearScheme& a, const LinearScheme& b) {
    if (a.p_ != b.p_ || a.secret_length_ != b.secret_length_ || a.noise_length_ != b.noise_length_ ||
        a.signals_.size() != b.signals_.size()) {
      return false;
    }
    for (const auto& [name, code] : a.signals_) {
      auto it = b.signals_.find(name);
      if (it == b.signals_.end() || !(it->second.secret == code.secret) || !(it->second.noise == code.noise)) {
        return false;
      }
    }
    return true;
  }

 private:
  std::uint32_t p_;
  std::size_t secret_length_;
  std::size_t noise_length_;
  std::map<std::string, SignalCode, NaturalLess> signals_;
};

// ---------------------------------------------------------------------------
// Scheme file format

inline LinearScheme parse_scheme(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;

  auto next_tokens = [&](std::vector<std::string>& tok) {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::istringstream ls(line);
      tok.clear();
      for (std::string t; ls >> t;) tok.push_back(t);
      if (!tok.empty() && tok[0][0] != '#') return true;
    }
    return false;
  };
  auto number = [&](const std::string& s) -> long long {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      throw ParseError(lineno, "expected a number, got `" + s + "`");
    }
    if (used != s.size() || v < 0) throw ParseError(lineno, "expected a non-negative number, got `" + s + "`");
    return v;
  };
  auto keyed = [&](const char* key) -> long long {
    std::vector<std::string> tok;
    if (!next_tokens(tok)) throw ParseError(lineno, std::string("missing `") + key + "` line");
    if (tok.size() != 2 || tok[0] != key) throw ParseError(lineno, std::string("expected `") + key + " <n>`");
    return number(tok[1]);
  };

  std::vector<std::string> tok;
  if (!next_tokens(tok) || tok.size() != 2 || tok[0] != "cds-scheme" || tok[1] != "v1") {
    throw ParseError(lineno, "expected header `cds-scheme v1`");
  }
  const long long p = keyed("field");
  const long long secret = keyed("secret");
  const long long noise = keyed("noise");
  if (p >= kMaxModulus || !is_prime(static_cast<std::uint32_t>(p))) {
    throw ParseError(lineno - 2, "field modulus must be a prime below 65536");
  }
  if (secret < 1) throw ParseError(lineno - 1, "secret length must be at least 1");
  LinearScheme sch(static_cast<std::uint32_t>(p), static_cast<std::size_t>(secret), static_cast<std::size_t>(noise));

  while (next_tokens(tok)) {
    if (tok.size() != 3 || tok[0] != "signal") throw ParseError(lineno, "expected `signal <name> <N>`");
    const std::string name = tok[1];
    if (sch.has_signal(name)) throw ParseError(lineno, "duplicate signal " + name);
    const auto rows = static_cast<std::size_t>(number(tok[2]));
    std::vector<std::vector<long long>> f(rows), h(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      if (!next_tokens(tok)) throw ParseError(lineno, "signal " + name + " is missing rows");
      // F: d1 .. dL | H: e1 .. eLZ
      if (tok.empty() || tok[0] != "F:") throw ParseError(lineno, "row must start with `F:`");
      auto bar = std::find(tok.begin(), tok.end(), "|");
      if (bar == tok.end() || bar + 1 == tok.end() || *(bar + 1) != "H:") {
        throw ParseError(lineno, "row must contain `| H:`");
      }
      for (auto it = tok.begin() + 1; it != bar; ++it) f[r].push_back(number(*it));
      for (auto it = bar + 2; it != tok.end(); ++it) h[r].push_back(number(*it));
      if (f[r].size() != sch.secret_length() || h[r].size() != sch.noise_length()) {
        throw ParseError(lineno, "row width does not match secret/noise length");
      }
      for (long long v : f[r]) {
        if (v >= p) throw ParseError(lineno, "digit out of range for field " + std::to_string(p));
      }
      for (long long v : h[r]) {
        if (v >= p) throw ParseError(lineno, "digit out of range for field " + std::to_string(p));
      }
    }
    sch.set_signal(name, GfMatrix::from_rows(sch.modulus(), f, sch.secret_length()),
                   GfMatrix::from_rows(sch.modulus(), h, sch.noise_length()));
  }
  return sch;
}

inline std::string to_text(const LinearScheme& sch) {
  std::ostringstream os;
  os << "cds-scheme v1\nfield " << sch.modulus() << "\nsecret " << sch.secret_length() << "\nnoise "
     << sch.noise_length() << "\n";
  for (const auto& [name, code] : sch.signals()) {
    os << "signal " << name << " " << code.length() << "\n";
    for (std::size_t r = 0; r < code.length(); ++r) {
      os << "F:";
      for (Residue e : code.secret.row(r)) os << " " << e;
      os << " | H:";
      for (Residue e : code.noise.row(r)) os << " " << e;
      os << "\n";
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Rank-based verification

struct VertexVerdict {
  VertexId vertex;
  bool secure;
  std::size_t leakage;  // rank([F|H]) - rank(H)
  /// Only vertices touching an unqualified edge carry a security constraint.
  bool required;
};

struct EdgeVerdict {
  VertexId a;
  VertexId b;
  EdgeKind kind;
  bool ok;
  /// rank of stacked [F|H] minus rank of stacked H: the secret symbols the
  /// pair reveals. Qualified edges need all L; unqualified edges need 0.
  std::size_t information;
};

struct VerificationReport {
  std::size_t secret_length = 0;
  std::vector<VertexVerdict> vertices;
  std::vector<EdgeVerdict> edges;
  bool pass = true;
};

namespace detail {

inline void require_signals(const CdsInstance& inst, const LinearScheme& sch) {
  for (const auto& n : inst.names()) {
    if (!sch.has_signal(n)) throw SchemeError("scheme has no signal for vertex " + n);
  }
}

}  // namespace detail

/// Secret information revealed by a set of signals, in p-ary symbols.
inline std::size_t revealed_information(const LinearScheme& sch, const std::vector<std::string>& names) {
  GfMatrix joint(sch.modulus(), 0, sch.secret_length() + sch.noise_length());
  GfMatrix noise(sch.modulus(), 0, sch.noise_length());
  for (const auto& n : names) {
    const auto& code = sch.signal(n);
    joint = vstack(joint, code.joint());
    noise = vstack(noise, code.noise);
  }
  return rank(joint) - rank(noise);
}

/// Rank of the joint linear map of the chosen signals, optionally together
/// with S and Z themselves. For uniform (s, z) this is their joint entropy.
inline std::size_t linear_joint_rank(const LinearScheme& sch, const std::vector<std::string>& names,
                                     bool with_secret = false, bool with_noise = false) {
  const std::size_t l = sch.secret_length(), lz = sch.noise_length();
  GfMatrix joint(sch.modulus(), 0, l + lz);
  for (const auto& n : names) joint = vstack(joint, sch.signal(n).joint());
  std::vector<Residue> row(l + lz);
  if (with_secret) {
    for (std::size_t i = 0; i < l; ++i) {
      std::fill(row.begin(), row.end(), 0);
      row[i] = 1;
      joint.append_row(row);
    }
  }
  if (with_noise) {
    for (std::size_t i = 0; i < lz; ++i) {
      std::fill(row.begin(), row.end(), 0);
      row[l + i] = 1;
      joint.append_row(row);
    }
  }
  return rank(joint);
}

inline VerificationReport verify_linear(const CdsInstance& inst, const LinearScheme& sch) {
  detail::require_signals(inst, sch);
  VerificationReport rep;
  rep.secret_length = sch.secret_length();
  for (VertexId v = 0; v < inst.vertex_count(); ++v) {
    const std::size_t leak = revealed_information(sch, {inst.name(v)});
    const bool required = has_unqualified_edge(inst, v);
    rep.vertices.push_back({v, leak == 0, leak, required});
    if (required && leak != 0) rep.pass = false;
  }
  for (const auto& e : inst.edges()) {
    const std::size_t info = revealed_information(sch, {inst.name(e.a), inst.name(e.b)});
    const bool ok = e.kind == EdgeKind::kQualified ? info == sch.secret_length() : info == 0;
    rep.edges.push_back({e.a, e.b, e.kind, ok, info});
    if (!ok) rep.pass = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Alignment analysis

inline std::size_t noise_overlap_dim(const LinearScheme& sch, std::string_view v, std::string_view u) {
  return rowspace_intersection_dim(sch.signal(v).noise, sch.signal(u).noise);
}

struct SignalAlignment {
  bool aligned = true;
  /// Combination (x, y) with x H_v = y H_u but x F_v != y F_u.
  std::optional<std::pair<std::vector<Residue>, std::vector<Residue>>> violation;
};

/// Wherever combinations of the two signals cancel the noise, they must also
/// cancel the secret: x H_v = y H_u implies x F_v = y F_u.
inline SignalAlignment check_signal_alignment(const LinearScheme& sch, std::string_view v, std::string_view u) {
  const auto& cv = sch.signal(v);
  const auto& cu = sch.signal(u);
  const std::uint32_t p = sch.modulus();
  const GfMatrix kernel = left_kernel(vstack(cv.noise, scaled(cu.noise, p - 1)));
  SignalAlignment out;
  for (std::size_t k = 0; k < kernel.rows(); ++k) {
    auto row = kernel.row(k);
    std::vector<Residue> x(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(cv.length()));
    std::vector<Residue> y(row.begin() + static_cast<std::ptrdiff_t>(cv.length()), row.end());
    if (row_times(x, cv.secret) != row_times(y, cu.secret)) {
      out.aligned = false;
      out.violation = std::pair(std::move(x), std::move(y));
      return out;
    }
  }
  return out;
}

/// Lower bound on the dimension shared by all noise spaces along a path:
/// sum of consecutive overlaps minus (pairs - 1) * N. May be negative.
inline long long path_overlap_lower_bound(const CdsInstance& inst, const LinearScheme& sch,
                                          const std::vector<std::string>& path) {
  if (path.size() < 2) throw InstanceError("a path needs at least two vertices");
  const std::size_t n = sch.signal(path.front()).length();
  for (const auto& v : path) {
    if (sch.signal(v).length() != n) throw SchemeError("path signals must have equal length");
  }
  long long total = 0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!inst.edge_kind(inst.id(path[i]), inst.id(path[i + 1]))) {
      throw InstanceError(path[i] + " and " + path[i + 1] + " are not adjacent");
    }
    total += static_cast<long long>(noise_overlap_dim(sch, path[i], path[i + 1]));
  }
  return total - static_cast<long long>(path.size() - 2) * static_cast<long long>(n);
}

/// Exact dimension of the intersection of all listed noise row spaces.
inline std::size_t common_noise_dim(const LinearScheme& sch, const std::vector<std::string>& names) {
  if (names.empty()) return 0;
  GfMatrix acc = sch.signal(names.front()).noise;
  for (std::size_t i = 1; i < names.size(); ++i) acc = rowspace_intersection_basis(acc, sch.signal(names[i]).noise);
  return rank(acc);
}

struct AlignmentReport {
  struct Overlap {
    VertexId a, b;
    std::size_t alpha;
  };
  struct Aligned {
    VertexId a, b;
    bool aligned;
  };
  struct PathBound {
    std::vector<std::string> path;
    long long alpha_star;
  };
  std::size_t secret_length = 0;
  std::vector<Overlap> qualified;
  std::vector<Aligned> unqualified;
  std::vector<PathBound> paths;

  /// Every qualified overlap reaches L and every unqualified edge is aligned.
  bool consistent() const {
    return std::all_of(qualified.begin(), qualified.end(), [&](const Overlap& o) { return o.alpha >= secret_length; }) &&
           std::all_of(unqualified.begin(), unqualified.end(), [](const Aligned& a) { return a.aligned; });
  }
};

inline AlignmentReport alignment_report(const CdsInstance& inst, const LinearScheme& sch,
                                        const std::vector<std::vector<std::string>>& paths = {}) {
  detail::require_signals(inst, sch);
  AlignmentReport rep;
  rep.secret_length = sch.secret_length();
  for (const auto& e : inst.edges()) {
    if (e.kind == EdgeKind::kQualified) {
      rep.qualified.push_back({e.a, e.b, noise_overlap_dim(sch, inst.name(e.a), inst.name(e.b))});
    } else {
      rep.unqualified.push_back({e.a, e.b, check_signal_alignment(sch, inst.name(e.a), inst.name(e.b)).aligned});
    }
  }
  for (const auto& p : paths) rep.paths.push_back({p, path_overlap_lower_bound(inst, sch, p)});
  return rep;
}

// ---------------------------------------------------------------------------
// Rates

struct RateReport {
  Rational rate;                            // L / (2 max N_v)
  std::optional<Rational> randomness_rate;  // L / L_Z; absent when L_Z = 0
  Rational lower;                           // best verified achievable rate
  Rational upper;                           // best known converse
};

/// Rates of a verified scheme; the converse defaults to the universal 1/2.
inline RateReport rate_report(const CdsInstance& inst, const LinearScheme& sch,
                              const std::optional<Rational>& converse = std::nullopt) {
  if (!verify_linear(inst, sch).pass) throw SchemeError("rate report requires a verified scheme");
  std::size_t max_len = 0;
  for (const auto& n : inst.names()) max_len = std::max(max_len, sch.signal(n).length());
  if (max_len == 0) throw SchemeError("all signals are empty");
  RateReport rep;
  rep.rate = Rational(static_cast<long>(sch.secret_length()), static_cast<long>(2 * max_len));
  rep.rate.canonicalize();
  if (sch.noise_length() > 0) {
    Rational rz(static_cast<long>(sch.secret_length()), static_cast<long>(sch.noise_length()));
    rz.canonicalize();
    rep.randomness_rate = rz;
  }
  rep.lower = rep.rate;
  rep.upper = converse.value_or(make_rational(1, 2));
  if (rep.lower > rep.upper) {
    throw SchemeError("achieved rate " + to_string(rep.lower) + " exceeds converse " + to_string(rep.upper));
  }
  return rep;
}

}  // namespace cds

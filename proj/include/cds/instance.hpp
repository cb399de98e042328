#pragma once

// A CDS instance as a labeled graph: one vertex per signal, qualified edges
// where the referee must decode the secret and unqualified edges where the
// pair must reveal nothing.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cds/error.hpp"

namespace cds {

using VertexId = std::size_t;

enum class EdgeKind { kQualified, kUnqualified };
enum class Side { kA, kB, kNone };

inline char edge_kind_letter(EdgeKind k) { return k == EdgeKind::kQualified ? 'q' : 'u'; }
inline const char* edge_kind_name(EdgeKind k) {
  return k == EdgeKind::kQualified ? "qualified" : "unqualified";
}

/// Orders names by alternating text and number runs, so A2 < A10.
struct NaturalLess {
  using is_transparent = void;

  bool operator()(std::string_view a, std::string_view b) const {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
      const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
      if (da && db) {
        std::size_t ie = i, je = j;
        while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
        while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
        std::string_view na = a.substr(i, ie - i), nb = b.substr(j, je - j);
        while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
        while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
        if (na.size() != nb.size()) return na.size() < nb.size();
        if (na != nb) return na < nb;
        i = ie;
        j = je;
      } else {
        if (a[i] != b[j]) return a[i] < b[j];
        ++i;
        ++j;
      }
    }
    if (a.size() - i != b.size() - j) return a.size() - i < b.size() - j;
    return a < b;
  }
};

struct EdgeSpec {
  std::string a;
  std::string b;
  EdgeKind kind;
};

/// Endpoints stored with a < b (name order).
struct Edge {
  VertexId a;
  VertexId b;
  EdgeKind kind;
};

struct Neighbor {
  VertexId vertex;
  EdgeKind kind;
};

/// Disjoint vertex blocks, each sorted; blocks ordered by their first vertex.
struct Partition {
  std::vector<std::vector<VertexId>> blocks;

  std::size_t block_of(VertexId v) const {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (std::binary_search(blocks[i].begin(), blocks[i].end(), v)) return i;
    }
    throw InstanceError("vertex not covered by partition");
  }
};

struct PathWitness {
  std::vector<VertexId> vertices;
  EdgeKind kind = EdgeKind::kUnqualified;
  /// Edge joining the first and last vertex, when the path certifies one.
  std::optional<std::pair<VertexId, VertexId>> closing_edge;

  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
};

class CdsInstance {
 public:
  enum class Mode { kBipartite, kGeneral };

  CdsInstance() = default;

  /// Vertices are implied by the edges. Throws InstanceError on self-loops,
  /// duplicate pairs, bad names, or (bipartite mode) same-side edges.
  explicit CdsInstance(const std::vector<EdgeSpec>& edges, Mode mode = Mode::kBipartite) : mode_(mode) {
    std::set<std::string, NaturalLess> names;
    for (const auto& e : edges) {
      check_name(e.a);
      check_name(e.b);
      if (e.a == e.b) throw InstanceError("self-loop on " + e.a);
      if (mode_ == Mode::kBipartite && e.a[0] == e.b[0]) {
        throw InstanceError("edge {" + e.a + "," + e.b + "} joins two vertices on side " + e.a.substr(0, 1));
      }
      names.insert(e.a);
      names.insert(e.b);
    }
    names_.assign(names.begin(), names.end());
    for (VertexId v = 0; v < names_.size(); ++v) index_[names_[v]] = v;
    adjacency_.resize(names_.size());

    std::set<std::pair<VertexId, VertexId>> seen;
    for (const auto& e : edges) {
      VertexId a = index_.at(e.a), b = index_.at(e.b);
      if (a > b) std::swap(a, b);
      if (!seen.insert({a, b}).second) {
        throw InstanceError("duplicate edge {" + names_[a] + "," + names_[b] + "}");
      }
      edges_.push_back({a, b, e.kind});
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& x, const Edge& y) { return std::pair(x.a, x.b) < std::pair(y.a, y.b); });
    for (const auto& e : edges_) {
      adjacency_[e.a].push_back({e.b, e.kind});
      adjacency_[e.b].push_back({e.a, e.kind});
    }
    for (auto& adj : adjacency_) {
      std::sort(adj.begin(), adj.end(), [](const Neighbor& x, const Neighbor& y) { return x.vertex < y.vertex; });
    }
  }

  Mode mode() const { return mode_; }
  bool general() const { return mode_ == Mode::kGeneral; }
  std::size_t vertex_count() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(VertexId v) const { return names_.at(v); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Neighbor>& neighbors(VertexId v) const { return adjacency_.at(v); }

  std::optional<VertexId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  VertexId id(std::string_view name) const {
    if (auto v = find(name)) return *v;
    throw InstanceError("unknown vertex " + std::string(name));
  }

  Side side(VertexId v) const {
    if (mode_ == Mode::kGeneral) return Side::kNone;
    return names_.at(v)[0] == 'A' ? Side::kA : Side::kB;
  }

  std::optional<EdgeKind> edge_kind(VertexId a, VertexId b) const {
    for (const auto& n : adjacency_.at(a)) {
      if (n.vertex == b) return n.kind;
    }
    return std::nullopt;
  }

  std::size_t count_edges(EdgeKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(edges_.begin(), edges_.end(), [kind](const Edge& e) { return e.kind == kind; }));
  }

  std::vector<EdgeSpec> edge_specs() const {
    std::vector<EdgeSpec> out;
    for (const auto& e : edges_) out.push_back({names_[e.a], names_[e.b], e.kind});
    return out;
  }

  /// Subgraph induced on the named vertices. Vertices left without edges drop out.
  CdsInstance induced(const std::vector<std::string>& keep) const {
    std::set<VertexId> ids;
    for (const auto& n : keep) ids.insert(id(n));
    std::vector<EdgeSpec> kept;
    for (const auto& e : edges_) {
      if (ids.count(e.a) && ids.count(e.b)) kept.push_back({names_[e.a], names_[e.b], e.kind});
    }
    return CdsInstance(kept, mode_);
  }

  std::string edge_label(VertexId a, VertexId b) const { return "{" + names_[a] + "," + names_[b] + "}"; }

 private:
  void check_name(const std::string& n) const {
    if (n.empty()) throw InstanceError("empty vertex name");
    if (mode_ == Mode::kBipartite) {
      bool ok = n.size() >= 2 && (n[0] == 'A' || n[0] == 'B') &&
                std::all_of(n.begin() + 1, n.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
      if (!ok) throw InstanceError("vertex " + n + " has no side label (expected A<k> or B<k>)");
      return;
    }
    bool ok = (std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_') &&
              std::all_of(n.begin(), n.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
    if (!ok) throw InstanceError("invalid vertex identifier " + n);
    // S and Z name the secret and noise in entropy expressions.
    if (n == "S" || n == "Z") throw InstanceError("vertex name " + n + " is reserved");
  }

  Mode mode_ = Mode::kBipartite;
  std::vector<std::string> names_;
  std::map<std::string, VertexId, std::less<>> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

// ---------------------------------------------------------------------------
// Instance file format

inline CdsInstance parse_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  bool content_seen = false;
  CdsInstance::Mode mode = CdsInstance::Mode::kBipartite;
  std::vector<EdgeSpec> edges;
  std::vector<std::size_t> edge_lines;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#') continue;

    if (tok[0] == "cds-instance") {
      if (header_seen || content_seen) throw ParseError(lineno, "header must be the first line");
      if (tok.size() < 2 || tok[1] != "v1") throw ParseError(lineno, "unsupported instance version");
      if (tok.size() == 3 && tok[2] == "general") {
        mode = CdsInstance::Mode::kGeneral;
      } else if (tok.size() != 2) {
        throw ParseError(lineno, "unexpected token in header");
      }
      header_seen = true;
      continue;
    }
    content_seen = true;
    if (tok.size() != 3 || (tok[0] != "q" && tok[0] != "u")) {
      throw ParseError(lineno, "expected `q <v> <u>` or `u <v> <u>`");
    }
    edges.push_back({tok[1], tok[2], tok[0] == "q" ? EdgeKind::kQualified : EdgeKind::kUnqualified});
    edge_lines.push_back(lineno);
  }

  // Re-validate edge by edge so errors point at the offending line.
  std::vector<EdgeSpec> prefix;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    prefix.push_back(edges[i]);
    try {
      CdsInstance probe(prefix, mode);
    } catch (const InstanceError& e) {
      throw ParseError(edge_lines[i], e.what());
    }
  }
  return CdsInstance(edges, mode);
}

inline std::string to_text(const CdsInstance& inst) {
  std::ostringstream os;
  os << "cds-instance v1" << (inst.general() ? " general" : "") << "\n";
  for (const auto& e : inst.edges()) {
    os << edge_kind_letter(e.kind) << " " << inst.name(e.a) << " " << inst.name(e.b) << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Predicates

struct DegeneracyCheck {
  bool non_degenerate = true;
  std::vector<VertexId> violators;
};

inline bool has_unqualified_edge(const CdsInstance& inst, VertexId v) {
  const auto& adj = inst.neighbors(v);
  return std::any_of(adj.begin(), adj.end(), [](const Neighbor& n) { return n.kind == EdgeKind::kUnqualified; });
}

/// Every vertex must touch at least one unqualified edge.
inline DegeneracyCheck is_non_degenerate(const CdsInstance& inst) {
  DegeneracyCheck out;
  for (VertexId v = 0; v < inst.vertex_count(); ++v) {
    if (!has_unqualified_edge(inst, v)) out.violators.push_back(v);
  }
  out.non_degenerate = out.violators.empty();
  return out;
}

struct Normalized {
  CdsInstance instance;
  /// Names of removed vertices; each carries the secret itself as its signal.
  std::vector<std::string> eliminated;
};

/// Removes vertices that carry no security constraint, until none remain.
inline Normalized normalize_degenerate(const CdsInstance& inst) {
  Normalized out{inst, {}};
  for (;;) {
    const auto check = is_non_degenerate(out.instance);
    if (check.non_degenerate) break;
    std::set<VertexId> drop(check.violators.begin(), check.violators.end());
    std::vector<std::string> keep;
    for (VertexId v = 0; v < out.instance.vertex_count(); ++v) {
      if (drop.count(v)) {
        out.eliminated.push_back(out.instance.name(v));
      } else {
        keep.push_back(out.instance.name(v));
      }
    }
    out.instance = out.instance.induced(keep);
  }
  return out;
}

namespace detail {

// Components of the subgraph on `members` using edges of one kind.
inline Partition components(const CdsInstance& inst, const std::vector<VertexId>& members, EdgeKind kind) {
  std::vector<bool> in_set(inst.vertex_count(), false), seen(inst.vertex_count(), false);
  for (VertexId v : members) in_set[v] = true;
  Partition out;
  for (VertexId start : members) {
    if (seen[start]) continue;
    std::vector<VertexId> block;
    std::queue<VertexId> q;
    q.push(start);
    seen[start] = true;
    while (!q.empty()) {
      VertexId v = q.front();
      q.pop();
      block.push_back(v);
      for (const auto& n : inst.neighbors(v)) {
        if (n.kind == kind && in_set[n.vertex] && !seen[n.vertex]) {
          seen[n.vertex] = true;
          q.push(n.vertex);
        }
      }
    }
    std::sort(block.begin(), block.end());
    out.blocks.push_back(std::move(block));
  }
  std::sort(out.blocks.begin(), out.blocks.end());
  return out;
}

inline std::vector<VertexId> all_vertices(const CdsInstance& inst) {
  std::vector<VertexId> v(inst.vertex_count());
  for (VertexId i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

}  // namespace detail

inline Partition qualified_components(const CdsInstance& inst) {
  return detail::components(inst, detail::all_vertices(inst), EdgeKind::kQualified);
}

/// Unqualified components of the subgraph induced on one qualified component.
inline Partition unqualified_components_within(const CdsInstance& inst, std::vector<VertexId> block) {
  std::sort(block.begin(), block.end());
  const Partition q = qualified_components(inst);
  if (std::find(q.blocks.begin(), q.blocks.end(), block) == q.blocks.end()) {
    throw InstanceError("vertex set is not a qualified component");
  }
  return detail::components(inst, block, EdgeKind::kUnqualified);
}

/// Shortest unqualified path from s to t staying inside `block`. Neighbors are
/// expanded in name order, so ties resolve toward smaller names.
inline PathWitness unqualified_path(const CdsInstance& inst, const std::vector<VertexId>& block, VertexId s,
                                    VertexId t) {
  std::vector<bool> in_block(inst.vertex_count(), false);
  for (VertexId v : block) in_block.at(v) = true;
  if (s >= inst.vertex_count() || t >= inst.vertex_count() || !in_block[s] || !in_block[t]) {
    throw InstanceError("path endpoints must lie in the block");
  }
  std::vector<std::optional<VertexId>> parent(inst.vertex_count());
  std::vector<bool> seen(inst.vertex_count(), false);
  std::queue<VertexId> q;
  q.push(s);
  seen[s] = true;
  while (!q.empty() && !seen[t]) {
    VertexId v = q.front();
    q.pop();
    for (const auto& n : inst.neighbors(v)) {
      if (n.kind == EdgeKind::kUnqualified && in_block[n.vertex] && !seen[n.vertex]) {
        seen[n.vertex] = true;
        parent[n.vertex] = v;
        q.push(n.vertex);
      }
    }
  }
  if (!seen[t]) {
    throw InstanceError("no unqualified path from " + inst.name(s) + " to " + inst.name(t));
  }
  PathWitness path;
  path.kind = EdgeKind::kUnqualified;
  for (VertexId v = t;; v = *parent[v]) {
    path.vertices.push_back(v);
    if (v == s) break;
  }
  std::reverse(path.vertices.begin(), path.vertices.end());
  return path;
}

struct Feasibility {
  bool feasible = true;
  /// Internal qualified edge, oriented like the witness path (first, last).
  std::optional<std::pair<VertexId, VertexId>> edge;
  std::optional<PathWitness> path;
};

/// Half-rate condition: no qualified edge joins two vertices of one
/// unqualified component inside its qualified component. The first offending
/// edge in edge order is reported, with a path running from its later-named
/// endpoint to its earlier-named one.
inline Feasibility half_rate_feasible(const CdsInstance& inst) {
  const auto check = is_non_degenerate(inst);
  if (!check.non_degenerate) {
    std::string list;
    for (VertexId v : check.violators) list += " " + inst.name(v);
    throw InstanceError("instance is degenerate (normalize first); no unqualified edge at:" + list);
  }
  const Partition qc = qualified_components(inst);
  std::vector<std::size_t> qblock(inst.vertex_count()), ublock(inst.vertex_count());
  std::vector<Partition> inner;
  for (std::size_t m = 0; m < qc.blocks.size(); ++m) {
    inner.push_back(detail::components(inst, qc.blocks[m], EdgeKind::kUnqualified));
    for (std::size_t i = 0; i < inner.back().blocks.size(); ++i) {
      for (VertexId v : inner.back().blocks[i]) {
        qblock[v] = m;
        ublock[v] = i;
      }
    }
  }
  for (const auto& e : inst.edges()) {
    if (e.kind != EdgeKind::kQualified || ublock[e.a] != ublock[e.b]) continue;
    Feasibility out;
    out.feasible = false;
    out.edge = std::pair(e.b, e.a);
    out.path = unqualified_path(inst, qc.blocks[qblock[e.a]], e.b, e.a);
    out.path->closing_edge = out.edge;
    return out;
  }
  return {};
}

}  // namespace cds

#pragma once

// Random generators and brute-force reference implementations shared by the
// test suites. Nothing here calls the library routine it is used to check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cds/gf_matrix.hpp"
#include "cds/instance.hpp"
#include "cds/scheme.hpp"

namespace cds::testkit {

using Rng = std::mt19937_64;

inline GfMatrix random_matrix(Rng& rng, std::uint32_t p, std::size_t rows, std::size_t cols) {
  std::uniform_int_distribution<Residue> d(0, p - 1);
  std::vector<Residue> e(rows * cols);
  for (auto& x : e) x = d(rng);
  return GfMatrix(p, rows, cols, std::move(e));
}

/// p^rank by counting distinct row combinations.
inline std::size_t brute_force_rank(const GfMatrix& m) {
  const std::uint32_t p = m.modulus();
  std::set<std::vector<Residue>> span;
  std::vector<Residue> coef(m.rows(), 0);
  for (;;) {
    std::vector<Residue> v(m.cols(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) v[j] = (v[j] + coef[i] * m(i, j)) % p;
    }
    span.insert(v);
    std::size_t k = 0;
    while (k < coef.size() && ++coef[k] == p) coef[k++] = 0;
    if (k == coef.size()) break;
  }
  std::size_t r = 0;
  for (std::size_t size = span.size(); size > 1; size /= p) ++r;
  return r;
}

/// Random bipartite (or general) instance on at most `max_vertices` names.
/// Each candidate pair is absent, qualified or unqualified.
inline CdsInstance random_instance(Rng& rng, std::size_t max_vertices, bool general = false, double density = 0.5,
                                   double qualified_share = 0.5) {
  std::uniform_real_distribution<double> u(0, 1);
  for (;;) {
    std::vector<std::string> names;
    if (general) {
      const std::size_t n = 2 + rng() % (max_vertices - 1);
      for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
    } else {
      const std::size_t n = 2 + rng() % (max_vertices - 1);
      const std::size_t a = 1 + rng() % (n - 1);
      for (std::size_t i = 1; i <= a; ++i) names.push_back("A" + std::to_string(i));
      for (std::size_t i = 1; i <= n - a; ++i) names.push_back("B" + std::to_string(i));
    }
    std::vector<EdgeSpec> edges;
    for (std::size_t i = 0; i < names.size(); ++i) {
      for (std::size_t j = i + 1; j < names.size(); ++j) {
        if (!general && names[i][0] == names[j][0]) continue;
        if (u(rng) >= density) continue;
        edges.push_back({names[i], names[j], u(rng) < qualified_share ? EdgeKind::kQualified : EdgeKind::kUnqualified});
      }
    }
    if (edges.empty()) continue;
    return CdsInstance(edges, general ? CdsInstance::Mode::kGeneral : CdsInstance::Mode::kBipartite);
  }
}

/// Independent feasibility reference: for each qualified edge {v,u}, search
/// all simple unqualified paths from v to u inside the qualified component
/// (components found by repeated relaxation, paths by exhaustive DFS).
inline bool brute_force_feasible(const CdsInstance& inst) {
  const std::size_t n = inst.vertex_count();
  std::vector<std::size_t> comp(n);
  for (std::size_t i = 0; i < n; ++i) comp[i] = i;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : inst.edges()) {
      if (e.kind != EdgeKind::kQualified) continue;
      const std::size_t lo = std::min(comp[e.a], comp[e.b]);
      if (comp[e.a] != lo || comp[e.b] != lo) {
        comp[e.a] = comp[e.b] = lo;
        changed = true;
      }
    }
  }
  auto adjacent = [&](VertexId x, VertexId y) {
    auto k = inst.edge_kind(x, y);
    return k && *k == EdgeKind::kUnqualified;
  };
  for (const auto& e : inst.edges()) {
    if (e.kind != EdgeKind::kQualified) continue;
    std::vector<bool> used(n, false);
    bool found = false;
    auto dfs = [&](auto&& self, VertexId x) -> void {
      if (found) return;
      if (x == e.b) {
        found = true;
        return;
      }
      used[x] = true;
      for (VertexId y = 0; y < n; ++y) {
        if (!used[y] && comp[y] == comp[e.a] && adjacent(x, y)) self(self, y);
      }
      used[x] = false;
    };
    dfs(dfs, e.a);
    if (found) return false;
  }
  return true;
}

/// Feasible, non-degenerate instance: random graph, normalized, with
/// offending qualified edges dropped until the condition holds.
inline CdsInstance random_feasible_instance(Rng& rng, std::size_t max_vertices) {
  for (;;) {
    CdsInstance inst = random_instance(rng, max_vertices, false, 0.6, 0.45);
    for (int round = 0; round < 64; ++round) {
      inst = normalize_degenerate(inst).instance;
      if (inst.vertex_count() < 2) break;
      const Feasibility f = half_rate_feasible(inst);
      if (f.feasible) {
        if (inst.count_edges(EdgeKind::kQualified) > 0) return inst;
        break;
      }
      std::vector<EdgeSpec> kept;
      for (const auto& e : inst.edge_specs()) {
        const bool drop = e.kind == EdgeKind::kQualified &&
                          ((inst.id(e.a) == f.edge->first && inst.id(e.b) == f.edge->second) ||
                           (inst.id(e.a) == f.edge->second && inst.id(e.b) == f.edge->first));
        if (!drop) kept.push_back(e);
      }
      inst = CdsInstance(kept);
    }
  }
}

/// Arbitrary linear scheme for `inst` (not necessarily valid).
inline LinearScheme random_scheme(Rng& rng, const CdsInstance& inst, std::uint32_t p, std::size_t l, std::size_t lz,
                                  std::size_t max_len) {
  LinearScheme sch(p, l, lz);
  for (const auto& name : inst.names()) {
    const std::size_t n = 1 + rng() % max_len;
    sch.set_signal(name, random_matrix(rng, p, n, l), random_matrix(rng, p, n, lz));
  }
  return sch;
}

/// Random non-degenerate instance with at least one qualified edge.
inline CdsInstance random_nondegenerate_instance(Rng& rng, std::size_t max_vertices) {
  for (;;) {
    const CdsInstance inst = normalize_degenerate(random_instance(rng, max_vertices, false, 0.7)).instance;
    if (inst.vertex_count() >= 2 && inst.count_edges(EdgeKind::kQualified) > 0) return inst;
  }
}

struct VerifiedCase {
  CdsInstance instance;
  LinearScheme scheme;
};

/// Rejection-samples a scheme that passes verify_linear, with p in {2,3},
/// L <= 2, L_Z <= 4 and every N_v <= 3.
inline VerifiedCase random_verified_scheme(Rng& rng) {
  for (;;) {
    const CdsInstance inst = random_nondegenerate_instance(rng, 4);
    const std::uint32_t p = rng() % 2 == 0 ? 2 : 3;
    const std::size_t l = 1 + rng() % 2;
    const std::size_t lz = 1 + rng() % 4;
    for (int attempt = 0; attempt < 200; ++attempt) {
      LinearScheme sch = random_scheme(rng, inst, p, l, lz, 3);
      if (verify_linear(inst, sch).pass) return {inst, std::move(sch)};
    }
  }
}

/// Uniformly random invertible n x n matrix.
inline GfMatrix random_invertible(Rng& rng, std::uint32_t p, std::size_t n) {
  for (;;) {
    GfMatrix m = random_matrix(rng, p, n, n);
    if (rank(m) == n) return m;
  }
}

/// T * m for square T.
inline GfMatrix left_multiply(const GfMatrix& t, const GfMatrix& m) {
  GfMatrix out(m.modulus(), t.rows(), m.cols());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const auto r = row_times(t.row(i), m);
    for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = r[j];
  }
  return out;
}

/// Joint output symbols of `names` for every (s, z), by direct evaluation.
/// Entry k pairs the secret digits with the concatenated signal symbols.
inline std::vector<std::pair<std::vector<Residue>, std::vector<Residue>>> enumerate_outputs(
    const LinearScheme& sch, const std::vector<std::string>& names) {
  const std::uint32_t p = sch.modulus();
  const std::size_t l = sch.secret_length(), lz = sch.noise_length();
  std::vector<std::pair<std::vector<Residue>, std::vector<Residue>>> out;
  std::vector<Residue> x(l + lz, 0);
  for (;;) {
    std::vector<Residue> sym;
    for (const auto& n : names) {
      const auto& code = sch.signal(n);
      for (std::size_t r = 0; r < code.length(); ++r) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < l; ++j) acc += std::uint64_t{code.secret(r, j)} * x[j];
        for (std::size_t j = 0; j < lz; ++j) acc += std::uint64_t{code.noise(r, j)} * x[l + j];
        sym.push_back(static_cast<Residue>(acc % p));
      }
    }
    out.emplace_back(std::vector<Residue>(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(l)), std::move(sym));
    std::size_t k = x.size();
    while (k > 0 && ++x[k - 1] == p) x[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

/// The outputs determine s.
inline bool brute_force_decodable(const LinearScheme& sch, const std::vector<std::string>& names) {
  std::map<std::vector<Residue>, std::vector<Residue>> seen;
  for (const auto& [s, w] : enumerate_outputs(sch, names)) {
    auto [it, fresh] = seen.emplace(w, s);
    if (!fresh && it->second != s) return false;
  }
  return true;
}

/// The output distribution is the same for every s.
inline bool brute_force_independent(const LinearScheme& sch, const std::vector<std::string>& names) {
  std::map<std::vector<Residue>, std::map<std::vector<Residue>, std::size_t>> by_secret;
  for (const auto& [s, w] : enumerate_outputs(sch, names)) ++by_secret[s][w];
  for (const auto& [s, dist] : by_secret) {
    if (dist != by_secret.begin()->second) return false;
  }
  return true;
}

}  // namespace cds::testkit

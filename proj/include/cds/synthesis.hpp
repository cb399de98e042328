#pragma once

// Scheme construction: the rate-1/2 scalar scheme for instances meeting the
// half-rate condition, its two-symbol randomness variant, and the built-in
// six-vertex instance with its rate-2/5 scheme.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cds/error.hpp"
#include "cds/gf_matrix.hpp"
#include "cds/instance.hpp"
#include "cds/scheme.hpp"

namespace cds {

/// Raised when the half-rate condition fails; carries the witness.
class InfeasibleError : public InstanceError {
 public:
  InfeasibleError(const CdsInstance& inst, Feasibility witness)
      : InstanceError("half-rate condition violated by internal qualified edge " +
                      inst.edge_label(witness.edge->first, witness.edge->second)),
        witness_(std::move(witness)) {}

  const Feasibility& witness() const { return witness_; }

 private:
  Feasibility witness_;
};

struct SynthesisPlan {
  std::uint32_t p = 2;
  Partition components;               // qualified components, m = position + 1
  std::vector<Partition> unqualified;  // per component, i = position + 1
  std::vector<std::size_t> component_of;  // 1-based m per vertex
  std::vector<std::size_t> index_of;      // 1-based i per vertex

  std::size_t component_count() const { return components.blocks.size(); }

  std::size_t max_unqualified() const {
    std::size_t u = 0;
    for (const auto& part : unqualified) u = std::max(u, part.blocks.size());
    return u;
  }
};

/// Plans the scalar scheme. Coefficients i run 1..U_m, so p must exceed
/// max U_m; with `reduced`, p must also exceed M - 2.
inline SynthesisPlan plan_half_rate(const CdsInstance& inst, bool reduced = false) {
  Feasibility f = half_rate_feasible(inst);  // throws on degenerate input
  if (!f.feasible) throw InfeasibleError(inst, std::move(f));
  SynthesisPlan plan;
  plan.components = qualified_components(inst);
  plan.component_of.assign(inst.vertex_count(), 0);
  plan.index_of.assign(inst.vertex_count(), 0);
  for (std::size_t m = 0; m < plan.components.blocks.size(); ++m) {
    plan.unqualified.push_back(detail::components(inst, plan.components.blocks[m], EdgeKind::kUnqualified));
    const auto& blocks = plan.unqualified.back().blocks;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      for (VertexId v : blocks[i]) {
        plan.component_of[v] = m + 1;
        plan.index_of[v] = i + 1;
      }
    }
  }
  std::size_t bound = plan.max_unqualified();
  const std::size_t m_count = plan.component_count();
  if (reduced && m_count >= 2) bound = std::max(bound, m_count - 2);
  plan.p = next_prime_above(static_cast<std::uint32_t>(bound));
  return plan;
}

/// Signal of a vertex in unqualified component i of qualified component m is
/// s + i z_m: L = 1, L_Z = M, every N_v = 1.
inline LinearScheme synthesize_half_rate(const CdsInstance& inst) {
  const SynthesisPlan plan = plan_half_rate(inst);
  const std::size_t m_count = plan.component_count();
  LinearScheme sch(plan.p, 1, m_count);
  for (VertexId v = 0; v < inst.vertex_count(); ++v) {
    GfMatrix noise(plan.p, 1, m_count);
    noise.at(0, plan.component_of[v] - 1) = static_cast<Residue>(plan.index_of[v] % plan.p);
    sch.set_signal(inst.name(v), GfMatrix::from_rows(plan.p, {{1}}), std::move(noise));
  }
  return sch;
}

/// Replaces z_m (m >= 3) by z_1 + (m - 2) z_2 so only two noise symbols are
/// drawn. The input must be the scheme synthesize_half_rate builds for `inst`.
inline LinearScheme reduce_randomness(const CdsInstance& inst, const LinearScheme& sch) {
  if (!(sch == synthesize_half_rate(inst))) {
    throw SchemeError("reduce_randomness expects the synthesized half-rate scheme of this instance");
  }
  const SynthesisPlan plan = plan_half_rate(inst, /*reduced=*/true);
  const std::size_t m_count = plan.component_count();
  if (m_count <= 2) return sch;
  const std::uint32_t p = plan.p;
  LinearScheme out(p, 1, 2);
  for (VertexId v = 0; v < inst.vertex_count(); ++v) {
    const std::size_t m = plan.component_of[v];
    const Residue i = static_cast<Residue>(plan.index_of[v] % p);
    GfMatrix noise(p, 1, 2);
    if (m == 1) {
      noise.at(0, 0) = i;
    } else if (m == 2) {
      noise.at(0, 1) = i;
    } else {
      noise.at(0, 0) = i;
      noise.at(0, 1) = gf::mul(i, static_cast<Residue>((m - 2) % p), p);
    }
    out.set_signal(inst.name(v), GfMatrix::from_rows(p, {{1}}), std::move(noise));
  }
  return out;
}

struct NormalizedSynthesis {
  LinearScheme scheme;
  std::vector<std::string> eliminated;
};

/// Synthesis for possibly degenerate instances: vertices without any
/// unqualified edge are removed first and then send the secret itself.
inline NormalizedSynthesis synthesize_normalized(const CdsInstance& inst, bool reduce = false) {
  Normalized norm = normalize_degenerate(inst);
  std::optional<LinearScheme> core;
  if (norm.instance.vertex_count() > 0) {
    core = synthesize_half_rate(norm.instance);
    if (reduce) core = reduce_randomness(norm.instance, *core);
  }
  const std::uint32_t p = core ? core->modulus() : 2;
  const std::size_t lz = core ? core->noise_length() : 0;
  LinearScheme sch(p, 1, lz);
  if (core) {
    for (const auto& [name, code] : core->signals()) sch.set_signal(name, code.secret, code.noise);
  }
  for (const auto& name : norm.eliminated) {
    sch.set_signal(name, GfMatrix::from_rows(p, {{1}}), GfMatrix(p, 1, lz));
  }
  return {std::move(sch), std::move(norm.eliminated)};
}

// ---------------------------------------------------------------------------
// Built-in instances

/// Complete bipartite 3x3 graph: qualified path A1 B1 A2 B2 A3 B3, every
/// other pair unqualified.
inline CdsInstance builtin_fig2_instance() {
  using K = EdgeKind;
  return CdsInstance({{"A1", "B1", K::kQualified},
                      {"B1", "A2", K::kQualified},
                      {"A2", "B2", K::kQualified},
                      {"B2", "A3", K::kQualified},
                      {"A3", "B3", K::kQualified},
                      {"B2", "A1", K::kUnqualified},
                      {"A1", "B3", K::kUnqualified},
                      {"B3", "A2", K::kUnqualified},
                      {"B1", "A3", K::kUnqualified}});
}

/// Two qualified components ({A1..A3, B1..B3} and {A4, B4}) satisfying the
/// half-rate condition; needs GF(5).
inline CdsInstance builtin_example1_instance() {
  using K = EdgeKind;
  return CdsInstance({{"A1", "B1", K::kQualified},
                      {"B1", "A2", K::kQualified},
                      {"A2", "B2", K::kQualified},
                      {"B2", "A3", K::kQualified},
                      {"A3", "B3", K::kQualified},
                      {"A4", "B4", K::kQualified},
                      {"B1", "A3", K::kUnqualified},
                      {"A2", "B3", K::kUnqualified},
                      {"A1", "B4", K::kUnqualified},
                      {"B3", "A4", K::kUnqualified},
                      {"B2", "A4", K::kUnqualified}});
}

// ---------------------------------------------------------------------------
// The rate-2/5 scheme on the six-vertex instance
//
// Vertex k along the qualified path A1 B1 A2 B2 A3 B3 sends five bits; bit j
// is c_k(j) . s + z_{(k+j) mod 9}, so consecutive vertices share four noise
// bits. Secret rows are 4-bit masks, bit t standing for s_{t+1}.

inline constexpr std::size_t kFig2Vertices = 6;
inline constexpr std::size_t kFig2Width = 5;
inline constexpr std::size_t kFig2Noise = 9;
inline constexpr std::size_t kFig2Secret = 4;

using Fig2Rows = std::array<std::array<std::uint8_t, kFig2Width>, kFig2Vertices>;

inline const std::array<const char*, kFig2Vertices>& fig2_path_order() {
  static const std::array<const char*, kFig2Vertices> order{"A1", "B1", "A2", "B2", "A3", "B3"};
  return order;
}

/// Output of search_fig2_secret_rows(), frozen.
inline constexpr Fig2Rows kFig2SecretRows = {{
    {0, 0, 0, 0, 0},  // A1: z0..z4
    {1, 2, 4, 8, 0},  // B1: z1..z5
    {1, 2, 4, 8, 0},  // A2: z2..z6
    {0, 0, 1, 1, 0},  // B2: z3..z7
    {8, 0, 2, 4, 0},  // A3: z4..z8
    {8, 0, 0, 1, 0},  // B3: z5..z8, z0
}};

inline LinearScheme fig2_scheme_from_rows(const Fig2Rows& rows) {
  LinearScheme sch(2, kFig2Secret, kFig2Noise);
  for (std::size_t k = 0; k < kFig2Vertices; ++k) {
    GfMatrix f(2, kFig2Width, kFig2Secret), h(2, kFig2Width, kFig2Noise);
    for (std::size_t j = 0; j < kFig2Width; ++j) {
      for (std::size_t t = 0; t < kFig2Secret; ++t) f.at(j, t) = (rows[k][j] >> t) & 1u;
      h.at(j, (k + j) % kFig2Noise) = 1;
    }
    sch.set_signal(fig2_path_order()[k], std::move(f), std::move(h));
  }
  return sch;
}

namespace detail {

// Cell (k, j) holds c_k at noise index (k + j) mod 9.
struct Fig2Cell {
  std::size_t k;
  std::size_t j;
};

struct Fig2Link {
  std::size_t other;   // cell index
  std::uint8_t delta;  // this = other ^ delta
};

inline std::size_t fig2_cell(std::size_t k, std::size_t noise_index) {
  const std::size_t j = (noise_index + kFig2Noise - k) % kFig2Noise;
  return j < kFig2Width ? k * kFig2Width + j : SIZE_MAX;
}

inline bool gf2_independent(std::vector<std::uint8_t> rows) {
  std::size_t r = 0;
  for (std::size_t bit = 0; bit < kFig2Secret; ++bit) {
    std::size_t sel = r;
    while (sel < rows.size() && !((rows[sel] >> bit) & 1u)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != r && ((rows[i] >> bit) & 1u)) rows[i] ^= rows[r];
    }
    ++r;
  }
  return r == rows.size();
}

}  // namespace detail

/// Depth-first search, in cell order with values ascending, for secret rows
/// meeting the alignment constraints; the first candidate that passes
/// verify_linear on the instance is returned.
///
/// Constraints: unqualified pairs carry equal secret rows on shared noise
/// bits; c_{B1} is s4 at z4 and 0 at z5; c_{B1} - c_{A2} on z2..z5 is
/// (s1+s2, s2+s3, s3+s4, s4); every qualified pair's four difference rows on
/// shared noise bits are independent.
inline std::optional<Fig2Rows> search_fig2_secret_rows() {
  constexpr std::size_t cells = kFig2Vertices * kFig2Width;
  std::array<std::vector<detail::Fig2Link>, cells> links;
  std::array<std::optional<std::uint8_t>, cells> fixed;

  // Equalities from unqualified edges (path positions).
  const std::array<std::pair<std::size_t, std::size_t>, 4> unqualified{{{0, 3}, {0, 5}, {2, 5}, {1, 4}}};
  for (auto [x, y] : unqualified) {
    for (std::size_t idx = 0; idx < kFig2Noise; ++idx) {
      const std::size_t cx = detail::fig2_cell(x, idx), cy = detail::fig2_cell(y, idx);
      if (cx != SIZE_MAX && cy != SIZE_MAX) {
        links[std::max(cx, cy)].push_back({std::min(cx, cy), 0});
      }
    }
  }
  fixed[detail::fig2_cell(1, 4)] = 0b1000;
  fixed[detail::fig2_cell(1, 5)] = 0;
  const std::array<std::uint8_t, 4> decoded{0b0011, 0b0110, 0b1100, 0b1000};
  for (std::size_t i = 0; i < 4; ++i) {
    links[detail::fig2_cell(2, 2 + i)].push_back({detail::fig2_cell(1, 2 + i), decoded[i]});
  }

  // Qualified pairs (k, k + 1) and their shared noise indices.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> qualified;
  for (std::size_t k = 0; k + 1 < kFig2Vertices; ++k) {
    std::vector<std::pair<std::size_t, std::size_t>> shared;
    for (std::size_t idx = 0; idx < kFig2Noise; ++idx) {
      const std::size_t a = detail::fig2_cell(k, idx), b = detail::fig2_cell(k + 1, idx);
      if (a != SIZE_MAX && b != SIZE_MAX) shared.emplace_back(a, b);
    }
    qualified.push_back(std::move(shared));
  }

  const CdsInstance inst = builtin_fig2_instance();
  std::array<std::uint8_t, cells> value{};
  std::array<bool, cells> assigned{};

  auto consistent = [&](std::size_t cell) {
    for (const auto& l : links[cell]) {
      if (value[cell] != (value[l.other] ^ l.delta)) return false;
    }
    if (fixed[cell] && value[cell] != *fixed[cell]) return false;
    for (const auto& shared : qualified) {
      std::vector<std::uint8_t> diffs;
      bool touches = false;
      for (auto [a, b] : shared) {
        if (a == cell || b == cell) touches = true;
        if (assigned[a] && assigned[b]) diffs.push_back(value[a] ^ value[b]);
      }
      if (touches && !detail::gf2_independent(diffs)) return false;
    }
    return true;
  };

  auto to_rows = [&] {
    Fig2Rows rows{};
    for (std::size_t c = 0; c < cells; ++c) rows[c / kFig2Width][c % kFig2Width] = value[c];
    return rows;
  };

  std::optional<Fig2Rows> found;
  auto dfs = [&](auto&& self, std::size_t cell) -> bool {
    if (cell == cells) {
      const Fig2Rows rows = to_rows();
      if (!verify_linear(inst, fig2_scheme_from_rows(rows)).pass) return false;
      found = rows;
      return true;
    }
    for (unsigned v = 0; v < (1u << kFig2Secret); ++v) {
      value[cell] = static_cast<std::uint8_t>(v);
      assigned[cell] = true;
      if (consistent(cell) && self(self, cell + 1)) return true;
      assigned[cell] = false;
    }
    return false;
  };
  dfs(dfs, 0);
  return found;
}

inline LinearScheme builtin_fig2_scheme() { return fig2_scheme_from_rows(kFig2SecretRows); }

}  // namespace cds

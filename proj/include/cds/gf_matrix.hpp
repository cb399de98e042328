#pragma once

// Dense matrices over a prime field GF(p) and the exact row-space
// operations the scheme verifier is built on.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cds/error.hpp"

namespace cds {

using Residue = std::uint32_t;

/// Moduli are restricted to small primes so products fit in 64 bits.
inline constexpr std::uint32_t kMaxModulus = 1u << 16;

inline bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Smallest prime strictly greater than n.
inline std::uint32_t next_prime_above(std::uint32_t n) {
  std::uint32_t c = n + 1;
  while (!is_prime(c)) ++c;
  return c;
}

namespace gf {

inline Residue add(Residue a, Residue b, std::uint32_t p) { return (a + b) % p; }
inline Residue sub(Residue a, Residue b, std::uint32_t p) { return (a + p - b) % p; }
inline Residue mul(Residue a, Residue b, std::uint32_t p) {
  return static_cast<Residue>((std::uint64_t{a} * b) % p);
}
inline Residue neg(Residue a, std::uint32_t p) { return (p - a) % p; }

inline Residue inv(Residue a, std::uint32_t p) {
  // Fermat: a^(p-2)
  Residue result = 1;
  Residue base = a % p;
  std::uint32_t e = p - 2;
  while (e) {
    if (e & 1u) result = mul(result, base, p);
    base = mul(base, base, p);
    e >>= 1;
  }
  return result;
}

/// Reduce an arbitrary integer into [0, p).
inline Residue reduce(long long v, std::uint32_t p) {
  long long r = v % static_cast<long long>(p);
  if (r < 0) r += p;
  return static_cast<Residue>(r);
}

}  // namespace gf

/// Dense row-major matrix over GF(p). Zero rows or zero columns are legal.
class GfMatrix {
 public:
  GfMatrix() : GfMatrix(2, 0, 0) {}

  GfMatrix(std::uint32_t p, std::size_t rows, std::size_t cols)
      : p_(p), rows_(rows), cols_(cols), data_(rows * cols, 0) {
    check_modulus(p);
  }

  GfMatrix(std::uint32_t p, std::size_t rows, std::size_t cols, std::vector<Residue> entries)
      : p_(p), rows_(rows), cols_(cols), data_(std::move(entries)) {
    check_modulus(p);
    if (data_.size() != rows_ * cols_) {
      throw DimensionError("entry count does not match " + std::to_string(rows_) + "x" +
                           std::to_string(cols_));
    }
    for (Residue e : data_) {
      if (e >= p_) throw DimensionError("entry out of range for modulus " + std::to_string(p_));
    }
  }

  /// Build from nested rows; entries may be any integers and are reduced mod p.
  static GfMatrix from_rows(std::uint32_t p, std::initializer_list<std::initializer_list<long long>> rows) {
    std::vector<std::vector<long long>> v;
    for (const auto& r : rows) v.emplace_back(r);
    return from_rows(p, v);
  }

  static GfMatrix from_rows(std::uint32_t p, const std::vector<std::vector<long long>>& rows,
                            std::optional<std::size_t> cols = std::nullopt) {
    check_modulus(p);
    std::size_t c = cols.value_or(rows.empty() ? 0 : rows.front().size());
    GfMatrix m(p, rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw DimensionError("ragged row " + std::to_string(i));
      for (std::size_t j = 0; j < c; ++j) m.at(i, j) = gf::reduce(rows[i][j], p);
    }
    return m;
  }

  static GfMatrix identity(std::uint32_t p, std::size_t n) {
    GfMatrix m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  std::uint32_t modulus() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Residue operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Residue& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const Residue> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<Residue> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  const std::vector<Residue>& entries() const { return data_; }

  /// Rows [first, first + count).
  GfMatrix row_block(std::size_t first, std::size_t count) const {
    GfMatrix out(p_, count, cols_);
    std::copy_n(data_.begin() + first * cols_, count * cols_, out.data_.begin());
    return out;
  }

  void append_row(std::span<const Residue> r) {
    if (r.size() != cols_) throw DimensionError("appended row has wrong length");
    for (Residue e : r) {
      if (e >= p_) throw DimensionError("entry out of range");
    }
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }

  friend bool operator==(const GfMatrix& a, const GfMatrix& b) {
    return a.p_ == b.p_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend std::ostream& operator<<(std::ostream& os, const GfMatrix& m) {
    os << "GF(" << m.p_ << ")[";
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? "; " : "");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? " " : "") << m(i, j);
    }
    return os << "]";
  }

 private:
  static void check_modulus(std::uint32_t p) {
    if (p >= kMaxModulus || !is_prime(p)) {
      throw DimensionError("modulus " + std::to_string(p) + " is not a supported prime");
    }
  }

  std::uint32_t p_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Residue> data_;
};

struct RrefResult {
  GfMatrix reduced;
  std::vector<std::size_t> pivots;
};

namespace detail {

inline void require_same_field(const GfMatrix& a, const GfMatrix& b) {
  if (a.modulus() != b.modulus()) {
    throw DimensionError("modulus mismatch: " + std::to_string(a.modulus()) + " vs " +
                         std::to_string(b.modulus()));
  }
}

// row[dst] -= factor * row[src]
inline void axpy_rows(GfMatrix& m, std::size_t dst, std::size_t src, Residue factor) {
  const std::uint32_t p = m.modulus();
  auto d = m.row(dst);
  auto s = m.row(src);
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (s[j]) d[j] = gf::sub(d[j], gf::mul(factor, s[j], p), p);
  }
}

}  // namespace detail

/// Reduced row echelon form. Pivot choice: leftmost column with a nonzero
/// entry at or below the current row, first such row.
inline RrefResult rref(const GfMatrix& m) {
  GfMatrix r = m;
  const std::uint32_t p = r.modulus();
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t col = 0; col < r.cols() && lead < r.rows(); ++col) {
    std::size_t sel = lead;
    while (sel < r.rows() && r(sel, col) == 0) ++sel;
    if (sel == r.rows()) continue;
    if (sel != lead) {
      auto a = r.row(sel);
      auto b = r.row(lead);
      std::swap_ranges(a.begin(), a.end(), b.begin());
    }
    const Residue scale = gf::inv(r(lead, col), p);
    for (auto& e : r.row(lead)) e = gf::mul(e, scale, p);
    for (std::size_t i = 0; i < r.rows(); ++i) {
      if (i != lead && r(i, col) != 0) detail::axpy_rows(r, i, lead, r(i, col));
    }
    pivots.push_back(col);
    ++lead;
  }
  return {std::move(r), std::move(pivots)};
}

inline std::size_t rank(const GfMatrix& m) { return rref(m).pivots.size(); }

inline GfMatrix transpose(const GfMatrix& m) {
  GfMatrix t(m.modulus(), m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) t.at(j, i) = m(i, j);
  }
  return t;
}

/// a over b.
inline GfMatrix vstack(const GfMatrix& a, const GfMatrix& b) {
  detail::require_same_field(a, b);
  if (a.cols() != b.cols()) throw DimensionError("vstack: column counts differ");
  std::vector<Residue> e = a.entries();
  e.insert(e.end(), b.entries().begin(), b.entries().end());
  return GfMatrix(a.modulus(), a.rows() + b.rows(), a.cols(), std::move(e));
}

/// [a | b].
inline GfMatrix hstack(const GfMatrix& a, const GfMatrix& b) {
  detail::require_same_field(a, b);
  if (a.rows() != b.rows()) throw DimensionError("hstack: row counts differ");
  GfMatrix out(a.modulus(), a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::copy(a.row(i).begin(), a.row(i).end(), out.row(i).begin());
    std::copy(b.row(i).begin(), b.row(i).end(), out.row(i).begin() + a.cols());
  }
  return out;
}

inline GfMatrix scaled(const GfMatrix& m, Residue factor) {
  GfMatrix out = m;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (auto& e : out.row(i)) e = gf::mul(e, factor, m.modulus());
  }
  return out;
}

/// Row vector times matrix.
inline std::vector<Residue> row_times(std::span<const Residue> x, const GfMatrix& m) {
  if (x.size() != m.rows()) throw DimensionError("row_times: length mismatch");
  const std::uint32_t p = m.modulus();
  std::vector<Residue> out(m.cols(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (!x[i]) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] = gf::add(out[j], gf::mul(x[i], m(i, j), p), p);
  }
  return out;
}

/// Basis of {x : x * m = 0}, one vector per row; rows(m) - rank(m) rows.
inline GfMatrix left_kernel(const GfMatrix& m) {
  const std::uint32_t p = m.modulus();
  // x * m = 0  <=>  m^T * x^T = 0: null space of m^T.
  RrefResult r = rref(transpose(m));
  const std::size_t n = m.rows();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : r.pivots) is_pivot[c] = true;
  GfMatrix basis(p, 0, n);
  std::vector<Residue> x(n);
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::fill(x.begin(), x.end(), 0);
    x[free] = 1;
    for (std::size_t k = 0; k < r.pivots.size(); ++k) x[r.pivots[k]] = gf::neg(r.reduced(k, free), p);
    basis.append_row(x);
  }
  return basis;
}

/// dim(rowspan(a) ∩ rowspan(b)) = rank(a) + rank(b) - rank([a; b]).
inline std::size_t rowspace_intersection_dim(const GfMatrix& a, const GfMatrix& b) {
  detail::require_same_field(a, b);
  if (a.cols() != b.cols()) throw DimensionError("intersection: column counts differ");
  return rank(a) + rank(b) - rank(vstack(a, b));
}

/// Basis of rowspan(a) ∩ rowspan(b), returned in reduced row echelon form.
inline GfMatrix rowspace_intersection_basis(const GfMatrix& a, const GfMatrix& b) {
  detail::require_same_field(a, b);
  if (a.cols() != b.cols()) throw DimensionError("intersection: column counts differ");
  const std::uint32_t p = a.modulus();
  // (x, y) with x*a - y*b = 0 gives the common vector x*a.
  GfMatrix kernel = left_kernel(vstack(a, scaled(b, p - 1)));
  GfMatrix common(p, 0, a.cols());
  for (std::size_t k = 0; k < kernel.rows(); ++k) {
    auto x = kernel.row(k).subspan(0, a.rows());
    common.append_row(row_times(x, a));
  }
  RrefResult r = rref(common);
  return r.reduced.row_block(0, r.pivots.size());
}

/// True when v lies in rowspan(m).
inline bool in_rowspace(std::span<const Residue> v, const GfMatrix& m) {
  GfMatrix one(m.modulus(), 0, m.cols());
  one.append_row(v);
  return rank(vstack(m, one)) == rank(m);
}

}  // namespace cds

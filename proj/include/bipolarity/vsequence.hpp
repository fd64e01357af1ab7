#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bipolarity/cfk.hpp"

namespace bipolarity::cfk {

/// The truncation sequence V_s of a knot-like complex, stored on the
/// window [s_lo, s_hi] given by the Alexander-vs-algebraic spread.
/// Outside the window V is forced: V = 0 above, slope -1 below. The dual
/// sequence is H_s = V_{-s}.
struct VSequence {
  int s_lo = 0;
  int s_hi = 0;
  std::vector<int> values;

  int V(int s) const {
    if (s > s_hi) return 0;
    if (s < s_lo) return values.front() + (s_lo - s);
    return values[std::size_t(s - s_lo)];
  }
  int H(int s) const { return V(-s); }

  /// Smallest s >= 0 with V_s = 0 (V vanishes from here on).
  int s_max() const {
    int s = std::max(s_lo, 0);
    while (V(s) != 0) ++s;
    return s;
  }
};

namespace detail {

using Bitvec = std::vector<std::uint64_t>;

inline void set_bit(Bitvec& v, std::size_t k) {
  if (v.size() <= k / 64) v.resize(k / 64 + 1, 0);
  v[k / 64] |= std::uint64_t(1) << (k % 64);
}

inline void xor_assign(Bitvec& a, const Bitvec& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t w = 0; w < b.size(); ++w) a[w] ^= b[w];
}

inline bool is_zero(const Bitvec& v) {
  for (std::uint64_t w : v)
    if (w) return false;
  return true;
}

/// Index of the highest set bit; call only on nonzero vectors.
inline std::size_t leading_bit(const Bitvec& v) {
  for (std::size_t w = v.size(); w-- > 0;)
    if (v[w]) return w * 64 + (63 - std::size_t(__builtin_clzll(v[w])));
  throw std::logic_error("leading_bit: zero vector");
}

inline bool test_bit(const Bitvec& v, std::size_t k) {
  return k / 64 < v.size() && (v[k / 64] >> (k % 64)) & 1;
}

/// Reduced row set over F_2, keyed by leading bit.
class RowSpace {
public:
  void insert(Bitvec v) {
    reduce(v);
    if (!is_zero(v)) rows_.emplace(leading_bit(v), std::move(v));
  }
  void reduce(Bitvec& v) const {
    while (!is_zero(v)) {
      auto it = rows_.find(leading_bit(v));
      if (it == rows_.end()) return;
      xor_assign(v, it->second);
    }
  }
  std::size_t rank() const { return rows_.size(); }

private:
  std::map<std::size_t, Bitvec> rows_;
};

/// U-tower homology of the truncated module with basis U^(n0[g]+t) * g,
/// t in [0, N), grading maslov[g] - 2*(n0[g] + t). Multiplication by U
/// shifts t by 1; stability of a class is probed through depth T.
class TowerCalc {
public:
  TowerCalc(const FilteredComplex& C, std::vector<int> n0, int N, int T)
      : C_(C), n0_(std::move(n0)), N_(N), T_(T), adj_(C.size()) {
    for (const auto& [a, b] : C.diff) adj_[a].push_back(b);
    for (std::size_t g = 0; g < C.size(); ++g)
      for (int t = 0; t < N_; ++t)
        bygrad_[C_.gens[g].maslov - 2 * (n0_[g] + t)].push_back(
            {g, t});
  }

  int top_basis_grading() const {
    return bygrad_.empty() ? 0 : bygrad_.rbegin()->first;
  }

  /// Highest grading in [lo, hi] carrying a cycle that survives U^T
  /// modulo boundaries; nullopt when none does.
  std::optional<int> tower_top(int lo, int hi) {
    for (int d = hi; d >= lo; --d)
      if (stable_rank(d) >= 1) return d;
    return std::nullopt;
  }

  /// Dimension of the image of U^T on homology at grading d.
  std::size_t stable_rank(int d) {
    std::vector<Bitvec> kernel = kernel_at(d);
    if (kernel.empty()) return 0;
    RowSpace boundaries = image_into(d - 2 * T_);
    const auto& bas = basis(d);
    RowSpace stable;
    for (const Bitvec& combo : kernel) {
      Bitvec v;
      for (std::size_t k = 0; k < bas.size(); ++k) {
        if (!test_bit(combo, k)) continue;
        auto [g, t] = bas[k];
        if (t + T_ < N_) set_bit(v, index_in(d - 2 * T_, g, t + T_));
      }
      boundaries.reduce(v);
      stable.insert(std::move(v));
    }
    return stable.rank();
  }

private:
  using BasisElem = std::pair<std::size_t, int>;  // (generator, U-power offset)

  const std::vector<BasisElem>& basis(int d) {
    static const std::vector<BasisElem> kEmpty;
    auto it = bygrad_.find(d);
    return it == bygrad_.end() ? kEmpty : it->second;
  }

  std::size_t index_in(int d, std::size_t g, int t) {
    auto& idx = index_cache_[d];
    if (idx.empty())
      for (std::size_t k = 0; k < basis(d).size(); ++k) idx[basis(d)[k]] = k;
    auto it = idx.find({g, t});
    if (it == idx.end()) throw std::logic_error("TowerCalc: basis lookup miss");
    return it->second;
  }

  /// Differential of basis element (g, t) at grading d, as a vector over
  /// the basis at d-1. Images pushed past the truncation depth are dropped.
  Bitvec boundary_row(int d, std::size_t g, int t) {
    Bitvec v;
    for (std::size_t h : adj_[g]) {
      int tt = t + n0_[g] - n0_[h];
      if (tt >= 0 && tt < N_) set_bit(v, index_in(d - 1, h, tt));
    }
    return v;
  }

  /// Kernel of the differential at grading d, as combination vectors over
  /// the basis at d.
  std::vector<Bitvec> kernel_at(int d) {
    const auto& bas = basis(d);
    std::map<std::size_t, std::pair<Bitvec, Bitvec>> pivots;  // row, combo
    std::vector<Bitvec> kernel;
    for (std::size_t k = 0; k < bas.size(); ++k) {
      Bitvec r = boundary_row(d, bas[k].first, bas[k].second);
      Bitvec c;
      set_bit(c, k);
      while (!is_zero(r)) {
        std::size_t h = leading_bit(r);
        auto it = pivots.find(h);
        if (it == pivots.end()) {
          pivots.emplace(h, std::make_pair(std::move(r), std::move(c)));
          r.clear();
          c.clear();
          break;
        }
        xor_assign(r, it->second.first);
        xor_assign(c, it->second.second);
      }
      if (!c.empty() && is_zero(r)) kernel.push_back(std::move(c));
    }
    return kernel;
  }

  /// Row space of all differentials landing in grading d.
  RowSpace image_into(int d) {
    RowSpace out;
    for (const BasisElem& e : basis(d + 1))
      out.insert(boundary_row(d + 1, e.first, e.second));
    return out;
  }

  const FilteredComplex& C_;
  std::vector<int> n0_;
  int N_, T_;
  std::vector<std::vector<std::size_t>> adj_;
  std::map<int, std::vector<BasisElem>> bygrad_;
  std::map<int, std::map<BasisElem, std::size_t>> index_cache_;
};

struct TowerParams {
  int N, T, window_lo;
};

inline TowerParams tower_params(const FilteredComplex& C, int filt_spread,
                                int s_abs, int extra_depth) {
  int spread = filt_spread + s_abs + 2;
  int N = int(C.size()) + spread + 8 + extra_depth;
  int min_m = C.gens.front().maslov;
  for (const Generator& g : C.gens) min_m = std::min(min_m, g.maslov);
  return {N, N / 2, min_m - 2 * (spread + 4)};
}

inline int filtration_spread(const FilteredComplex& C) {
  int imin = C.gens.front().i, imax = imin;
  int jmin = C.gens.front().j, jmax = jmin;
  for (const Generator& g : C.gens) {
    imin = std::min(imin, g.i);
    imax = std::max(imax, g.i);
    jmin = std::min(jmin, g.j);
    jmax = std::max(jmax, g.j);
  }
  return (imax - imin) + (jmax - jmin);
}

/// Tower-top grading of the subcomplex with minimal U-powers n0.
inline int tower_top_grading(const FilteredComplex& C,
                             const std::vector<int>& n0, int filt_spread,
                             int s_abs, int extra_depth) {
  TowerParams P = tower_params(C, filt_spread, s_abs, extra_depth);
  TowerCalc calc(C, n0, P.N, P.T);
  std::optional<int> mu = calc.tower_top(P.window_lo, calc.top_basis_grading());
  if (!mu)
    throw std::invalid_argument(
        "v_sequence: no surviving tower class in the grading window");
  return *mu;
}

}  // namespace detail

/// V_s for every s in the natural window, by exact F_2 linear algebra on
/// the truncated subcomplexes {max(i, j - s) <= 0} and {i <= 0}:
///   V_s = (mu_B - mu_A(s)) / 2
/// where mu are the tower-top gradings. extra_depth deepens the truncation
/// (the result must not change; used by stability checks).
///
/// Rejects complexes whose stable homology is not a single tower
/// (rank 1 in each surviving grading class).
inline VSequence v_sequence(const FilteredComplex& C, int extra_depth = 0) {
  C.validate();
  if (C.gens.empty())
    throw std::invalid_argument("v_sequence: empty complex");
  const int fspread = detail::filtration_spread(C);

  std::vector<int> n0B(C.size());
  for (std::size_t g = 0; g < C.size(); ++g) n0B[g] = C.gens[g].i;

  // single-tower gate on {i <= 0}: rank 1 along the tower parity, 0 off it
  detail::TowerParams PB = detail::tower_params(C, fspread, 0, extra_depth);
  detail::TowerCalc calcB(C, n0B, PB.N, PB.T);
  std::optional<int> muB =
      calcB.tower_top(PB.window_lo, calcB.top_basis_grading());
  if (!muB)
    throw std::invalid_argument(
        "v_sequence: complex has no surviving tower; not knot-like");
  for (int r = 0; r < 4; ++r) {
    if (calcB.stable_rank(*muB - 2 * r) != 1)
      throw std::invalid_argument(
          "v_sequence: stable homology rank != 1; not knot-like");
    if (calcB.stable_rank(*muB - 2 * r - 1) != 0)
      throw std::invalid_argument(
          "v_sequence: stable homology in off-parity grading; not knot-like");
  }

  VSequence out;
  {
    int lo = C.gens.front().j - C.gens.front().i, hi = lo;
    for (const Generator& g : C.gens) {
      lo = std::min(lo, g.j - g.i);
      hi = std::max(hi, g.j - g.i);
    }
    out.s_lo = lo;
    out.s_hi = hi;
  }
  for (int s = out.s_lo; s <= out.s_hi; ++s) {
    std::vector<int> n0A(C.size());
    for (std::size_t g = 0; g < C.size(); ++g)
      n0A[g] = std::max(C.gens[g].i, C.gens[g].j - s);
    int muA = detail::tower_top_grading(C, n0A, fspread, std::abs(s),
                                        extra_depth);
    if ((*muB - muA) % 2 != 0)
      throw std::logic_error("v_sequence: tower gradings have mixed parity");
    out.values.push_back((*muB - muA) / 2);
  }

  // structural checks on the computed sequence
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    if (out.values[k] < 0)
      throw std::logic_error("v_sequence: negative V value");
    if (k + 1 < out.values.size()) {
      int drop = out.values[k] - out.values[k + 1];
      if (drop < 0 || drop > 1)
        throw std::logic_error("v_sequence: V must step down by 0 or 1");
    }
  }
  if (out.values.back() != 0)
    throw std::logic_error("v_sequence: V must vanish at the top of the window");
  for (int s = std::max(out.s_lo, -out.s_hi);
       s <= std::min(out.s_hi, -out.s_lo); ++s) {
    if (out.V(-s) - out.V(s) != s)
      throw std::invalid_argument(
          "v_sequence: derived H-sequence inconsistent (H_s - V_s != s)");
  }
  return out;
}

}  // namespace bipolarity::cfk

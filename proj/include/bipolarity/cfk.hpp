#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace bipolarity::cfk {

using ordered_json = nlohmann::ordered_json;

/// A generator of a bifiltered complex over the two-element field:
/// algebraic filtration i, Alexander filtration j, Maslov grading.
struct Generator {
  int i = 0;
  int j = 0;
  int maslov = 0;
  friend bool operator==(const Generator& a, const Generator& b) {
    return a.i == b.i && a.j == b.j && a.maslov == b.maslov;
  }
};

/// Finite bifiltered chain complex over F_2. The differential is a set of
/// (source, target) generator index pairs; every arrow must weakly drop
/// both filtrations, strictly drop at least one, and drop Maslov by 1.
struct FilteredComplex {
  std::vector<Generator> gens;
  std::vector<std::pair<std::size_t, std::size_t>> diff;  // sorted, unique

  std::size_t size() const { return gens.size(); }

  void canonicalize() {
    std::sort(diff.begin(), diff.end());
    diff.erase(std::unique(diff.begin(), diff.end()), diff.end());
  }

  /// Throws if the complex violates any structural requirement
  /// (index range, filtration monotonicity, Maslov drop, d^2 = 0).
  void validate() const {
    for (const auto& [a, b] : diff) {
      if (a >= gens.size() || b >= gens.size())
        throw std::invalid_argument("FilteredComplex: arrow index out of range");
      const Generator& s = gens[a];
      const Generator& t = gens[b];
      if (t.i > s.i || t.j > s.j)
        throw std::invalid_argument(
            "FilteredComplex: arrow increases a filtration level");
      if (t.i == s.i && t.j == s.j)
        throw std::invalid_argument(
            "FilteredComplex: arrow must strictly drop a filtration level");
      if (t.maslov != s.maslov - 1)
        throw std::invalid_argument(
            "FilteredComplex: arrow must drop Maslov grading by 1");
    }
    // d^2 = 0 over F_2: two-step path counts must all be even
    std::vector<std::vector<std::size_t>> adj(gens.size());
    for (const auto& [a, b] : diff) adj[a].push_back(b);
    for (std::size_t a = 0; a < gens.size(); ++a) {
      std::map<std::size_t, int> counts;
      for (std::size_t b : adj[a])
        for (std::size_t c : adj[b]) counts[c] ^= 1;
      for (const auto& [c, parity] : counts)
        if (parity)
          throw std::invalid_argument("FilteredComplex: d^2 != 0");
    }
  }
};

/// The 1-generator complex of the trivial knot.
inline FilteredComplex unknot_complex() {
  FilteredComplex C;
  C.gens.push_back({0, 0, 0});
  return C;
}

/// Zigzag staircase complex from a palindromic step vector of even length:
/// horizontal steps at even positions, vertical steps at odd positions.
/// Odd-index generators are the arrow sources. steps = {1,1} is the
/// 3-generator trefoil-type staircase; steps = {} is the unknot.
inline FilteredComplex staircase(const std::vector<int>& steps) {
  if (steps.empty()) return unknot_complex();
  if (steps.size() % 2 != 0)
    throw std::invalid_argument("staircase: step vector must have even length");
  for (int s : steps)
    if (s <= 0)
      throw std::invalid_argument("staircase: steps must be positive");
  std::vector<int> rev(steps.rbegin(), steps.rend());
  if (rev != steps)
    throw std::invalid_argument("staircase: step vector must be palindromic");

  FilteredComplex C;
  int vertical_total = 0;
  for (std::size_t t = 1; t < steps.size(); t += 2) vertical_total += steps[t];
  int x = 0, y = vertical_total;
  C.gens.push_back({x, y, 0});
  for (std::size_t t = 0; t < steps.size(); ++t) {
    if (t % 2 == 0)
      x += steps[t];
    else
      y -= steps[t];
    int m = (t % 2 == 0) ? C.gens.back().maslov + 1 : C.gens.back().maslov - 1;
    C.gens.push_back({x, y, m});
  }
  for (std::size_t t = 1; t < C.gens.size(); t += 2) {
    C.diff.push_back({t, t - 1});
    C.diff.push_back({t, t + 1});
  }
  C.canonicalize();
  C.validate();
  return C;
}

/// Tensor product over F_2: generator pairs, filtrations and Maslov add,
/// Leibniz differential (no signs in characteristic 2). Models connected sum.
inline FilteredComplex tensor(const FilteredComplex& A,
                              const FilteredComplex& B) {
  FilteredComplex C;
  const std::size_t nb = B.size();
  C.gens.reserve(A.size() * nb);
  for (const Generator& ga : A.gens)
    for (const Generator& gb : B.gens)
      C.gens.push_back({ga.i + gb.i, ga.j + gb.j, ga.maslov + gb.maslov});
  auto at = [nb](std::size_t a, std::size_t b) { return a * nb + b; };
  for (const auto& [a, a2] : A.diff)
    for (std::size_t b = 0; b < nb; ++b)
      C.diff.push_back({at(a, b), at(a2, b)});
  for (const auto& [b, b2] : B.diff)
    for (std::size_t a = 0; a < A.size(); ++a)
      C.diff.push_back({at(a, b), at(a, b2)});
  C.canonicalize();
  C.validate();
  return C;
}

/// Mirror image: negate both filtrations and the grading, transpose arrows.
inline FilteredComplex mirror(const FilteredComplex& A) {
  FilteredComplex C;
  C.gens.reserve(A.size());
  for (const Generator& g : A.gens) C.gens.push_back({-g.i, -g.j, -g.maslov});
  for (const auto& [a, b] : A.diff) C.diff.push_back({b, a});
  C.canonicalize();
  C.validate();
  return C;
}

/// Orientation reversal of the underlying knot: swap the two filtrations.
inline FilteredComplex reverse(const FilteredComplex& A) {
  FilteredComplex C = A;
  for (Generator& g : C.gens) std::swap(g.i, g.j);
  C.canonicalize();
  C.validate();
  return C;
}

/// k-fold connected sum of the configured doubling-pattern model.
/// The default model is the trefoil-type staircase {1,1}; any valid
/// complex (for instance one loaded from a data file) may be substituted.
inline FilteredComplex model_D_k(int k) {
  if (k < 1) throw std::invalid_argument("model_D_k: k must be positive");
  FilteredComplex model = staircase({1, 1});
  FilteredComplex C = model;
  for (int t = 1; t < k; ++t) C = tensor(C, model);
  return C;
}

inline FilteredComplex model_D_k(int k, const FilteredComplex& model) {
  if (k < 1) throw std::invalid_argument("model_D_k: k must be positive");
  model.validate();
  FilteredComplex C = model;
  for (int t = 1; t < k; ++t) C = tensor(C, model);
  return C;
}

/// JSON shape:
/// {"generators":[{"i":..,"j":..,"maslov":..},...],
///  "differential":[[src,dst],...]}
/// Canonical ordering makes the round trip byte-exact.
inline ordered_json complex_to_json(const FilteredComplex& C) {
  ordered_json j;
  j["generators"] = ordered_json::array();
  for (const Generator& g : C.gens)
    j["generators"].push_back({{"i", g.i}, {"j", g.j}, {"maslov", g.maslov}});
  j["differential"] = ordered_json::array();
  std::vector<std::pair<std::size_t, std::size_t>> d = C.diff;
  std::sort(d.begin(), d.end());
  for (const auto& [a, b] : d) j["differential"].push_back({a, b});
  return j;
}

inline FilteredComplex complex_from_json(const ordered_json& j) {
  FilteredComplex C;
  if (!j.contains("generators") || !j.contains("differential"))
    throw std::invalid_argument("complex_from_json: missing fields");
  for (const auto& g : j.at("generators"))
    C.gens.push_back({g.at("i").get<int>(), g.at("j").get<int>(),
                      g.at("maslov").get<int>()});
  for (const auto& e : j.at("differential")) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("complex_from_json: bad differential entry");
    C.diff.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()});
  }
  C.canonicalize();
  C.validate();
  return C;
}

}  // namespace bipolarity::cfk

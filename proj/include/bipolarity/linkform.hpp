#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bipolarity/numtheory.hpp"
#include "bipolarity/rational.hpp"

namespace bipolarity::linkform {

using numtheory::u64;

/// An element of Z_m x Z_m, components reduced mod m.
using Element = std::pair<u64, u64>;

/// The group Z_m x Z_m carrying the linking form
///   lambda((x1,x2),(y1,y2)) = a*(x1*y1 + x2*y2)/m  in Q/Z,
/// parameterized by a unit a mod m.
struct LinkingGroup {
  u64 m = 1;
  u64 unit = 1;

  LinkingGroup() = default;
  LinkingGroup(u64 m_, u64 unit_ = 1) : m(m_), unit(unit_ % m_) {
    if (m == 0) throw std::invalid_argument("LinkingGroup: m must be positive");
    if (std::gcd(unit_, m) != 1)
      throw std::invalid_argument("LinkingGroup: unit must be coprime to m");
    if (m == 1) unit = 0;  // trivial group; all values are 0 in Q/Z anyway
  }

  Element reduce(Element e) const { return {e.first % m, e.second % m}; }
};

struct LinkingForm {
  LinkingGroup group;

  explicit LinkingForm(LinkingGroup g) : group(g) {}

  /// Value of the form in Q/Z, represented in [0, 1).
  Rational operator()(Element u, const Element v) const {
    u = group.reduce(u);
    const Element w = group.reduce(v);
    // products stay within 128 bits for any 64-bit m via Rational's checks;
    // reduce the dot product mod m first to keep numerators small
    const u64 m = group.m;
    using u128 = unsigned __int128;
    u128 dot = u128(u.first) * w.first + u128(u.second) * w.second;
    u64 num = u64((u128(group.unit % m) * (dot % m)) % m);
    return Rational(std::int64_t(num), std::int64_t(m)).mod_one();
  }

  bool vanishes(Element u, Element v) const { return (*this)(u, v).is_zero(); }
};

/// An order-m subgroup of Z_m x Z_m on which the linking form vanishes.
/// Stored by a generating set; when the subgroup is cyclic of the shape
/// <(1,b)> the root b is also recorded.
struct Metabolizer {
  u64 m = 1;
  std::vector<Element> generators;
  bool has_root = false;
  u64 root = 0;  // meaningful only when has_root

  /// Full element list, sorted; size must equal m for a genuine metabolizer.
  std::vector<Element> elements() const {
    std::set<Element> seen{{0, 0}};
    std::vector<Element> frontier{{0, 0}};
    while (!frontier.empty()) {
      Element x = frontier.back();
      frontier.pop_back();
      for (const Element& g : generators) {
        Element y{(x.first + g.first) % m, (x.second + g.second) % m};
        if (seen.insert(y).second) frontier.push_back(y);
      }
    }
    return {seen.begin(), seen.end()};
  }
};

inline bool same_subgroup(const Metabolizer& A, const Metabolizer& B) {
  return A.m == B.m && A.elements() == B.elements();
}

/// Sum of divisors; also the number of order-m subgroups of Z_m x Z_m.
inline u64 sigma(u64 m) {
  u64 s = 0;
  for (u64 d = 1; d * d <= m; ++d) {
    if (m % d) continue;
    s += d;
    if (d != m / d) s += m / d;
  }
  return s;
}

/// Metabolizers predicted by the structure theory for odd squarefree m:
/// one subgroup <(1,b)> per solution of b^2 + 1 == 0 (mod m).
inline std::vector<Metabolizer> structured_metabolizers(
    const numtheory::Factorization& f) {
  if (f.m % 2 == 0)
    throw std::invalid_argument("structured_metabolizers: m must be odd");
  if (!f.squarefree())
    throw std::invalid_argument(
        "structured_metabolizers: m must be squarefree");
  numtheory::RootSet rs = numtheory::sqrt_minus_one(f);
  std::vector<Metabolizer> out;
  for (u64 b : rs.roots) {
    Metabolizer M;
    M.m = f.m;
    M.generators = {{1 % f.m, b}};
    M.has_root = true;
    M.root = b;
    out.push_back(std::move(M));
  }
  return out;
}

inline std::vector<Metabolizer> structured_metabolizers(u64 m) {
  return structured_metabolizers(numtheory::factor(m));
}

namespace detail {

/// All order-m subgroups of Z_m x Z_m: one per Hermite triple (a, b, d)
/// with a*d = m, a | m, 0 <= b < d, rows (a, b) and (0, d).
inline std::vector<Metabolizer> subgroups_of_order_m(u64 m) {
  std::vector<Metabolizer> subs;
  for (u64 a = 1; a <= m; ++a) {
    if (m % a) continue;
    u64 d = m / a;
    for (u64 b = 0; b < d; ++b) {
      Metabolizer M;
      M.m = m;
      M.generators = {{a % m, b % m}, {0, d % m}};
      subs.push_back(std::move(M));
    }
  }
  return subs;
}

}  // namespace detail

/// Exhaustive metabolizer search, independent of the structure theory:
/// enumerates every order-m subgroup and keeps those on which the form
/// vanishes. Guarded to small m; refuses rather than truncating.
inline std::vector<Metabolizer> brute_force_metabolizers(
    const LinkingGroup& G) {
  constexpr u64 kMaxM = 512;
  if (G.m > kMaxM)
    throw std::invalid_argument(
        "brute_force_metabolizers: m too large for exhaustive enumeration");
  LinkingForm lambda(G);
  std::vector<Metabolizer> subs = detail::subgroups_of_order_m(G.m);
  if (subs.size() != sigma(G.m))
    throw std::logic_error(
        "brute_force_metabolizers: subgroup enumeration incomplete");
  std::vector<Metabolizer> out;
  for (Metabolizer& M : subs) {
    if (M.elements().size() != M.m)
      throw std::logic_error("brute_force_metabolizers: wrong subgroup order");
    // bilinearity: vanishing on generator pairs implies vanishing on H x H
    bool ok = true;
    for (const Element& g1 : M.generators)
      for (const Element& g2 : M.generators)
        if (!lambda.vanishes(g1, g2)) {
          ok = false;
          break;
        }
    if (!ok) continue;
    // recover the <(1,b)> shape when present
    for (const Element& e : M.elements()) {
      if (e.first == 1 % G.m) {
        M.has_root = true;
        M.root = e.second;
        M.generators = {e};
        break;
      }
    }
    out.push_back(std::move(M));
  }
  return out;
}

/// CRT projections of a metabolizer over m = m1*m2 (coprime) onto the
/// component forms. The component linking groups carry the partial-fraction
/// units a*(m2^{-1} mod m1) and a*(m1^{-1} mod m2), so that
/// a/m = a1/m1 + a2/m2 in Q/Z and vanishing is preserved both ways.
struct SplitResult {
  LinkingGroup group1, group2;
  Metabolizer part1, part2;
};

inline SplitResult split_metabolizer(const LinkingGroup& G, u64 m1, u64 m2,
                                     const Metabolizer& M) {
  if (m1 == 0 || m2 == 0 || m1 * m2 != G.m)
    throw std::invalid_argument("split_metabolizer: m1*m2 must equal m");
  if (std::gcd(m1, m2) != 1)
    throw std::invalid_argument("split_metabolizer: moduli must be coprime");
  if (M.m != G.m)
    throw std::invalid_argument("split_metabolizer: metabolizer/group mismatch");
  auto inv_mod = [](u64 x, u64 mod) {
    if (mod == 1) return u64(0);
    std::int64_t t = 0, newt = 1, r = std::int64_t(mod),
                 newr = std::int64_t(x % mod);
    while (newr != 0) {
      std::int64_t qq = r / newr;
      std::swap(t -= qq * newt, newt);
      std::swap(r -= qq * newr, newr);
    }
    if (r != 1) throw std::invalid_argument("split_metabolizer: not a unit");
    return u64(t < 0 ? t + std::int64_t(mod) : t);
  };
  SplitResult out;
  out.group1 = LinkingGroup(m1, m1 == 1 ? 1 : (G.unit * inv_mod(m2, m1)) % m1);
  out.group2 = LinkingGroup(m2, m2 == 1 ? 1 : (G.unit * inv_mod(m1, m2)) % m2);
  out.part1.m = m1;
  out.part2.m = m2;
  for (const Element& g : M.generators) {
    out.part1.generators.push_back({g.first % m1, g.second % m1});
    out.part2.generators.push_back({g.first % m2, g.second % m2});
  }
  auto tag_root = [](Metabolizer& P) {
    for (const Element& e : P.elements())
      if (e.first == 1 % P.m) {
        P.has_root = true;
        P.root = e.second;
        break;
      }
  };
  tag_root(out.part1);
  tag_root(out.part2);
  return out;
}

/// Inverse of split_metabolizer: CRT lift of component metabolizers into
/// Z_{m1*m2} x Z_{m1*m2}.
inline Metabolizer direct_sum_metabolizer(const Metabolizer& A, u64 m1,
                                          const Metabolizer& B, u64 m2) {
  if (std::gcd(m1, m2) != 1)
    throw std::invalid_argument("direct_sum_metabolizer: moduli not coprime");
  if (A.m != m1 || B.m != m2)
    throw std::invalid_argument("direct_sum_metabolizer: modulus mismatch");
  u64 m = m1 * m2;
  // c1 == 1 mod m1, 0 mod m2; c2 the other way around
  u64 c1 = 0, c2 = 0;
  for (u64 t = 0; t < m1; ++t)
    if ((t * m2) % m1 == 1 % m1) {
      c1 = (t * m2) % m;
      break;
    }
  for (u64 t = 0; t < m2; ++t)
    if ((t * m1) % m2 == 1 % m2) {
      c2 = (t * m1) % m;
      break;
    }
  Metabolizer out;
  out.m = m;
  for (const Element& g : A.generators)
    out.generators.push_back({(g.first * c1) % m, (g.second * c1) % m});
  for (const Element& g : B.generators)
    out.generators.push_back({(g.first * c2) % m, (g.second * c2) % m});
  for (const Element& e : out.elements())
    if (e.first == 1 % m) {
      out.has_root = true;
      out.root = e.second;
      break;
    }
  return out;
}

}  // namespace bipolarity::linkform

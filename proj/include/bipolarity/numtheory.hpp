#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bipolarity::numtheory {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

/// Deterministic Miller-Rabin, valid for the whole 64-bit range
/// (sprp base set 2, 325, 9375, 28178, 450775, 9780504, 1795265022).
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull,
                1795265022ull}) {
    u64 x = powmod(a % n, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Complete prime factorization of m, primes ascending.
struct Factorization {
  u64 m = 1;
  std::vector<std::pair<u64, int>> factors;  // (prime, exponent)

  bool squarefree() const {
    for (const auto& [p, e] : factors)
      if (e > 1) return false;
    return true;
  }

  /// Number of prime factors counted with multiplicity.
  int big_omega() const {
    int total = 0;
    for (const auto& [p, e] : factors) total += e;
    return total;
  }

  u64 product() const {
    u64 r = 1;
    for (const auto& [p, e] : factors)
      for (int i = 0; i < e; ++i) r *= p;
    return r;
  }
};

namespace detail {

// Pollard-Brent rho with a fixed parameter sweep, so results are
// reproducible run to run. Input must be composite and odd.
inline u64 pollard_brent(u64 n) {
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1;
    u64 saved = 0;
    auto step = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    for (u64 len = 1; d == 1; len *= 2) {
      y = x;
      for (u64 i = 0; i < len && d == 1; i += 128) {
        saved = x;
        u64 prod = 1;
        u64 block = std::min<u64>(128, len - i);
        for (u64 j = 0; j < block; ++j) {
          x = step(x);
          u64 diff = x > y ? x - y : y - x;
          prod = mulmod(prod, diff ? diff : 1, n);
        }
        d = std::gcd(prod, n);
      }
    }
    if (d != n) return d;
    // backtrack one block to isolate the factor
    u64 x2 = saved;
    do {
      x2 = (mulmod(x2, x2, n) + c) % n;
      u64 diff = x2 > y ? x2 - y : y - x2;
      d = std::gcd(diff ? diff : n, n);
    } while (d == 1);
    if (d != n) return d;
  }
}

inline void factor_into(u64 n, std::vector<u64>& primes) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  u64 d = pollard_brent(n);
  factor_into(d, primes);
  factor_into(n / d, primes);
}

}  // namespace detail

inline Factorization factor(u64 m) {
  if (m == 0) throw std::invalid_argument("factor: input must be positive");
  Factorization f;
  f.m = m;
  std::vector<u64> primes;
  for (u64 p : {2ull, 3ull, 5ull}) {
    while (m % p == 0) {
      primes.push_back(p);
      m /= p;
    }
  }
  for (u64 p = 7; p < 100000 && p * p <= m; p += 2) {
    while (m % p == 0) {
      primes.push_back(p);
      m /= p;
    }
  }
  detail::factor_into(m, primes);
  std::sort(primes.begin(), primes.end());
  for (u64 p : primes) {
    if (!f.factors.empty() && f.factors.back().first == p)
      ++f.factors.back().second;
    else
      f.factors.emplace_back(p, 1);
  }
  return f;
}

/// All solutions of b^2 + 1 == 0 (mod m), sorted ascending.
struct RootSet {
  u64 m = 1;
  std::vector<u64> roots;
  bool empty() const { return roots.empty(); }
};

namespace detail {

// Square root of -1 modulo an odd prime p with p == 1 (mod 4):
// z^((p-1)/4) for the smallest quadratic nonresidue z.
inline u64 sqrt_minus_one_mod_prime(u64 p) {
  u64 z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  return powmod(z, (p - 1) / 4, p);
}

}  // namespace detail

inline RootSet sqrt_minus_one(const Factorization& f) {
  if (f.m % 2 == 0)
    throw std::invalid_argument("sqrt_minus_one: modulus must be odd");
  if (!f.squarefree())
    throw std::invalid_argument("sqrt_minus_one: modulus must be squarefree");
  RootSet rs;
  rs.m = f.m;
  std::vector<u64> roots{0};  // residues mod the partial product
  u64 partial = 1;
  for (const auto& [p, e] : f.factors) {
    if (p % 4 == 3) return rs;  // no solution modulo p
    u64 rp = detail::sqrt_minus_one_mod_prime(p);
    std::vector<u64> next;
    next.reserve(roots.size() * 2);
    // CRT: x == r (mod partial), x == +-rp (mod p)
    u64 inv = powmod(partial % p, p - 2, p);
    for (u64 r : roots) {
      for (u64 s : {rp, p - rp}) {
        u64 t = mulmod((s + p - r % p) % p, inv, p);
        next.push_back(r + partial * t);
      }
    }
    partial *= p;
    roots = std::move(next);
  }
  std::sort(roots.begin(), roots.end());
  rs.roots = std::move(roots);
  return rs;
}

inline RootSet sqrt_minus_one(u64 m) { return sqrt_minus_one(factor(m)); }

/// A candidate member of the coprime family: n together with m = 4n^2 + 1,
/// the admissibility verdict (m squarefree with at most two prime factors)
/// and the n > 20 gate tracked separately.
struct FamilyCandidate {
  u64 n = 0;
  u64 m = 0;
  bool admissible = false;
  bool beyond_twenty = false;

  friend bool operator==(const FamilyCandidate&,
                         const FamilyCandidate&) = default;
};

/// m = 4n^2 + 1, exact for n up to 2^30.
inline u64 family_modulus(u64 n) {
  if (n > (u64(1) << 30))
    throw std::overflow_error("family_modulus: n exceeds exact 64-bit range");
  return 4 * n * n + 1;
}

inline FamilyCandidate is_admissible(u64 n) {
  if (n == 0) throw std::invalid_argument("is_admissible: n must be positive");
  FamilyCandidate c;
  c.n = n;
  c.m = family_modulus(n);
  Factorization f = factor(c.m);
  c.admissible = f.squarefree() && f.big_omega() <= 2;
  c.beyond_twenty = n > 20;
  return c;
}

/// Greedy ascending selection of admissible candidates with n > 20 whose
/// moduli 4n^2+1 are pairwise coprime. May return fewer than `count`.
inline std::vector<FamilyCandidate> find_family(u64 n_lo, u64 n_hi,
                                                std::size_t count) {
  if (n_lo > n_hi)
    throw std::invalid_argument("find_family: empty range");
  std::vector<FamilyCandidate> picked;
  for (u64 n = n_lo; n <= n_hi && picked.size() < count; ++n) {
    if (n <= 20) continue;
    FamilyCandidate c = is_admissible(n);
    if (!c.admissible) continue;
    bool coprime = true;
    for (const auto& other : picked) {
      if (std::gcd(c.m, other.m) != 1) {
        coprime = false;
        break;
      }
    }
    if (coprime) picked.push_back(c);
  }
  return picked;
}

}  // namespace bipolarity::numtheory

#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bipolarity/numtheory.hpp"
#include "bipolarity/rational.hpp"
#include "bipolarity/vsequence.hpp"

namespace bipolarity::dinv {

using numtheory::u64;
using i64 = std::int64_t;
using ordered_json = nlohmann::ordered_json;

/// Label of the spin^c structure s_0 + x * PD[mu] on a space with
/// H_1 of order m; x = 0 is the spin-induced structure.
struct SpinCLabel {
  u64 m = 1;
  u64 x = 0;
  SpinCLabel(u64 m_, u64 x_) : m(m_), x(x_ % m_) {
    if (m == 0) throw std::invalid_argument("SpinCLabel: m must be positive");
  }
  SpinCLabel conjugate() const { return SpinCLabel(m, (m - x) % m); }
};

namespace detail {
inline i64 floordiv(i64 a, i64 b) {
  i64 q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
}  // namespace detail

/// Correction term of the surgery space L(p, q) at spin^c index i, by the
/// standard recursion
///   d(p,q,i) = ((2i+1-p-q)^2 - pq) / (4pq) - d(q, p mod q, i mod q)
/// with d(1,0,0) = 0. Exact; terminates by Euclidean descent.
inline Rational lens_d(i64 p, i64 q, i64 i) {
  if (p < 1) throw std::invalid_argument("lens_d: p must be positive");
  if (p > (i64(1) << 30)) throw std::overflow_error("lens_d: p too large");
  if (i < 0 || i >= p) throw std::invalid_argument("lens_d: index out of range");
  q %= p;
  if (q < 0) q += p;
  if (p == 1) return Rational(0);
  if (std::gcd(p, q) != 1)
    throw std::invalid_argument("lens_d: p and q must be coprime");
  i64 t = 2 * i + 1 - p - q;
  return Rational(t * t - p * q, 4 * p * q) - lens_d(q, p % q, i % q);
}

/// Correction term of positive p/q surgery (p, q > 0) at index i, from the
/// mapping-cone reduction: the lens value minus twice the V/H truncation
/// at the indexed Alexander levels. H_s = V_{-s}.
inline Rational surgery_d(const cfk::VSequence& V, i64 p, i64 q, i64 i) {
  if (p < 1 || q < 1)
    throw std::invalid_argument("surgery_d: p and q must be positive");
  if (std::gcd(p, q) != 1)
    throw std::invalid_argument("surgery_d: p and q must be coprime");
  if (i < 0 || i >= p)
    throw std::invalid_argument("surgery_d: index out of range");
  int corr = std::max(V.V(int(detail::floordiv(i, q))),
                      V.H(int(detail::floordiv(i - p, q))));
  return lens_d(p, q, i) - Rational(2 * corr);
}

/// The unique self-conjugate surgery index for odd p: the fixed point of
/// i <-> p + q - 1 - i (mod p). This is where s_0 sits.
inline i64 self_conjugate_index(i64 p, i64 q) {
  if (p < 1 || p % 2 == 0)
    throw std::invalid_argument("self_conjugate_index: p must be odd");
  i64 inv2 = (p + 1) / 2;  // 2 * inv2 == p + 1 == 1 (mod p)
  i64 r = ((p + q - 1) % p) * inv2 % p;
  return r;
}

/// d-invariants of a space with cyclic H_1 of order m, indexed by the
/// group label x of s_x = s_0 + x * PD[mu].
struct CorrectionTable {
  u64 m = 1;
  std::vector<Rational> d;

  const Rational& at(u64 x) const { return d[std::size_t(x % m)]; }

  void validate() const {
    if (m == 0 || d.size() != m)
      throw std::invalid_argument("CorrectionTable: size mismatch");
    for (u64 x = 0; x < m; ++x) {
      if (d[x] != d[(m - x) % m])
        throw std::invalid_argument(
            "CorrectionTable: conjugation symmetry d(x) = d(m-x) violated");
      u64 den = u64(d[x].den());
      if ((4 * m) % den != 0)
        throw std::invalid_argument(
            "CorrectionTable: denominator does not divide 4m");
    }
  }
};

inline CorrectionTable zero_table(u64 m) {
  if (m == 0) throw std::invalid_argument("zero_table: m must be positive");
  CorrectionTable T;
  T.m = m;
  T.d.assign(std::size_t(m), Rational(0));
  return T;
}

/// Table of p/q-surgery correction terms relabeled to group labels: the
/// affine identification i = (x + i0) mod p puts s_0 at the self-conjugate
/// index i0, so the table is conjugation-symmetric in x.
inline CorrectionTable build_table(const cfk::VSequence& V, i64 p, i64 q) {
  if (p < 1 || p % 2 == 0)
    throw std::invalid_argument("build_table: p must be odd and positive");
  i64 i0 = self_conjugate_index(p, q);
  CorrectionTable T;
  T.m = u64(p);
  T.d.reserve(std::size_t(p));
  for (i64 x = 0; x < p; ++x) T.d.push_back(surgery_d(V, p, q, (x + i0) % p));
  T.validate();
  return T;
}

enum class Pairing {
  CoprimeProduct,  // CRT labels: x <-> (x mod m1, x mod m2)
  Aligned          // same m, pointwise sum (the two-sided pairing over one n)
};

/// Connected-sum additivity of correction terms under a declared spin^c
/// pairing.
inline CorrectionTable d_sum(const CorrectionTable& T1,
                             const CorrectionTable& T2, Pairing mode) {
  T1.validate();
  T2.validate();
  CorrectionTable out;
  if (mode == Pairing::CoprimeProduct) {
    if (std::gcd(T1.m, T2.m) != 1)
      throw std::invalid_argument("d_sum: moduli must be coprime");
    out.m = T1.m * T2.m;
    out.d.reserve(std::size_t(out.m));
    for (u64 x = 0; x < out.m; ++x)
      out.d.push_back(T1.at(x % T1.m) + T2.at(x % T2.m));
  } else {
    if (T1.m != T2.m)
      throw std::invalid_argument("d_sum: aligned pairing needs equal moduli");
    out.m = T1.m;
    out.d.reserve(std::size_t(out.m));
    for (u64 x = 0; x < out.m; ++x) out.d.push_back(T1.at(x) + T2.at(x));
  }
  out.validate();
  return out;
}

/// Reindexing x -> b*x by a unit b; permutes the table values.
inline CorrectionTable relabel(const CorrectionTable& T, u64 b) {
  if (std::gcd(b % T.m, T.m) != 1 && T.m != 1)
    throw std::invalid_argument("relabel: b must be a unit mod m");
  CorrectionTable out;
  out.m = T.m;
  out.d.reserve(std::size_t(T.m));
  using u128 = unsigned __int128;
  for (u64 x = 0; x < T.m; ++x)
    out.d.push_back(T.at(u64(u128(b % T.m) * x % T.m)));
  return out;
}

/// Consistency gate used before connected-sum obstruction runs: a table
/// from a smooth-concordance-order-two knot must vanish at s_0.
inline bool assert_order_two_vanishing(const CorrectionTable& T) {
  return T.at(0).is_zero();
}

/// JSON shape: {"m": m, "entries": [{"x":..,"num":..,"den":..}, ...]},
/// entries ascending in x, fractions reduced.
inline ordered_json table_to_json(const CorrectionTable& T) {
  ordered_json j;
  j["m"] = T.m;
  j["entries"] = ordered_json::array();
  for (u64 x = 0; x < T.m; ++x)
    j["entries"].push_back(
        {{"x", x}, {"num", T.d[x].num()}, {"den", T.d[x].den()}});
  return j;
}

inline CorrectionTable table_from_json(const ordered_json& j) {
  if (!j.contains("m") || !j.contains("entries"))
    throw std::invalid_argument("table_from_json: missing fields");
  CorrectionTable T;
  T.m = j.at("m").get<u64>();
  if (T.m == 0) throw std::invalid_argument("table_from_json: m must be positive");
  T.d.assign(std::size_t(T.m), Rational(0));
  std::vector<bool> seen(std::size_t(T.m), false);
  for (const auto& e : j.at("entries")) {
    u64 x = e.at("x").get<u64>();
    if (x >= T.m || seen[std::size_t(x)])
      throw std::invalid_argument("table_from_json: bad or repeated index");
    seen[std::size_t(x)] = true;
    i64 num = e.at("num").get<i64>();
    i64 den = e.at("den").get<i64>();
    if (den <= 0)
      throw std::invalid_argument("table_from_json: denominator must be positive");
    Rational r(num, den);
    if (r.num() != num || r.den() != den)
      throw std::invalid_argument("table_from_json: fraction not reduced");
    T.d[std::size_t(x)] = r;
  }
  for (bool s : seen)
    if (!s) throw std::invalid_argument("table_from_json: missing index");
  T.validate();
  return T;
}

}  // namespace bipolarity::dinv

#pragma once

#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bipolarity/bipolar_cert.hpp"
#include "bipolarity/cfk.hpp"
#include "bipolarity/dinv.hpp"
#include "bipolarity/numtheory.hpp"
#include "bipolarity/obstruction.hpp"
#include "bipolarity/vsequence.hpp"

namespace bipolarity::pipeline {

using numtheory::u64;
using ordered_json = nlohmann::ordered_json;

/// Everything a full run needs. The surgery order p is always 4n^2+1 (the
/// branched-cover homology order); the slope denominator q follows the
/// configured rule. Reports echo the configuration so runs are auditable.
struct PipelineConfig {
  u64 n_lo = 21;
  u64 n_hi = 120;
  u64 family_size = 0;         // 0 = every admissible n in range
  std::string d_model_path;    // empty = built-in {1,1} staircase model
  std::string q_rule = "2n";   // "2n" | "explicit"
  u64 q_explicit = 0;          // used when q_rule == "explicit"
  u64 unit_a = 1;              // linking-form unit (verdicts are independent)
  u64 k_max = 0;               // 0 = floor(n/4)
  std::string output_dir = ".";

  ordered_json to_json() const {
    ordered_json j;
    j["n_lo"] = n_lo;
    j["n_hi"] = n_hi;
    j["family_size"] = family_size;
    j["d_model_path"] = d_model_path;
    j["q_rule"] = q_rule;
    j["q_explicit"] = q_explicit;
    j["unit_a"] = unit_a;
    j["k_max"] = k_max;
    j["output_dir"] = output_dir;
    return j;
  }

  static PipelineConfig from_json(const ordered_json& j) {
    PipelineConfig c;
    if (j.contains("n_lo")) c.n_lo = j.at("n_lo").get<u64>();
    if (j.contains("n_hi")) c.n_hi = j.at("n_hi").get<u64>();
    if (j.contains("family_size")) c.family_size = j.at("family_size").get<u64>();
    if (j.contains("d_model_path"))
      c.d_model_path = j.at("d_model_path").get<std::string>();
    if (j.contains("q_rule")) c.q_rule = j.at("q_rule").get<std::string>();
    if (j.contains("q_explicit")) c.q_explicit = j.at("q_explicit").get<u64>();
    if (j.contains("unit_a")) c.unit_a = j.at("unit_a").get<u64>();
    if (j.contains("k_max")) c.k_max = j.at("k_max").get<u64>();
    if (j.contains("output_dir"))
      c.output_dir = j.at("output_dir").get<std::string>();
    if (c.q_rule != "2n" && c.q_rule != "explicit")
      throw std::invalid_argument("PipelineConfig: unknown q_rule");
    if (c.q_rule == "explicit" && c.q_explicit == 0)
      throw std::invalid_argument("PipelineConfig: explicit q must be positive");
    return c;
  }
};

inline PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  ordered_json j = ordered_json::parse(in);
  return PipelineConfig::from_json(j);
}

inline u64 slope_q(const PipelineConfig& cfg, u64 n) {
  return cfg.q_rule == "2n" ? 2 * n : cfg.q_explicit;
}

/// The two correction tables of the pair of branched covers at (n, k),
/// with provenance stamps describing exactly which recipe produced them.
struct TablePair {
  dinv::CorrectionTable T_D;
  dinv::CorrectionTable T_U;
  std::vector<std::string> provenance;
};

/// Compute both tables for K(n, k) from the surgery recipe: order
/// p = 4n^2+1 and slope denominator q on both sides. The pattern side's
/// surgery companion is the k-fold pattern model tensored with its
/// orientation reverse; the companion-only side's is trivial.
inline TablePair build_tables(u64 n, u64 k, const cfk::FilteredComplex& d_model,
                              u64 q, bool default_model) {
  if (k == 0) throw std::invalid_argument("build_tables: k must be positive");
  const u64 p = numtheory::family_modulus(n);
  if (q == 0 || std::gcd(p, q) != 1)
    throw std::invalid_argument("build_tables: q must be positive and coprime to 4n^2+1");
  cfk::FilteredComplex pattern = cfk::model_D_k(int(k), d_model);
  cfk::FilteredComplex companion = cfk::tensor(pattern, cfk::reverse(pattern));
  cfk::VSequence V_D = cfk::v_sequence(companion);
  cfk::VSequence V_U = cfk::v_sequence(cfk::unknot_complex());
  TablePair out;
  out.T_D = dinv::build_table(V_D, std::int64_t(p), std::int64_t(q));
  out.T_U = dinv::build_table(V_U, std::int64_t(p), std::int64_t(q));
  out.provenance.push_back(
      "recipe: p/q surgery with p = 4n^2+1 = " + std::to_string(p) +
      ", q = " + std::to_string(q) + " on both sides");
  out.provenance.push_back(
      "pattern-side companion: " + std::to_string(k) +
      "-fold pattern model tensored with its orientation reverse (" +
      std::to_string(companion.size()) + " generators)");
  out.provenance.push_back(
      default_model
          ? "model assumption: doubling pattern modeled by the {1,1} "
            "staircase (stable model; acyclic summands cannot shift V)"
          : "pattern model ingested from file");
  out.provenance.push_back("companion-only side: trivial companion complex");
  return out;
}

struct PipelineEntry {
  u64 n = 0;
  u64 m = 0;
  u64 k = 0;  // chosen k; 0 when no k in range was obstructed
  std::vector<u64> roots;
  std::optional<bipolar_cert::ZeroNegativityCertificate> certificate;
  obstruction::ObstructionReport report;

  ordered_json to_json() const {
    ordered_json j;
    j["n"] = n;
    j["m"] = m;
    j["k"] = k;
    j["roots"] = roots;
    j["certificate"] =
        certificate ? certificate->to_json() : ordered_json(nullptr);
    j["report"] = report.to_json();
    return j;
  }
};

struct FamilyReport {
  PipelineConfig config;
  std::vector<PipelineEntry> entries;
  std::vector<std::string> notes;
  bool all_obstructed = false;

  ordered_json to_json() const {
    ordered_json j;
    j["config"] = config.to_json();
    j["notes"] = notes;
    j["all_obstructed"] = all_obstructed;
    j["entries"] = ordered_json::array();
    for (const PipelineEntry& e : entries) j["entries"].push_back(e.to_json());
    return j;
  }
};

/// Full run: admissible-n family search with pairwise coprime moduli, then
/// per n the smallest k in [1, n/4] whose averaging decision is Obstructed,
/// with its 0-negativity certificate. Deterministic: ascending n, ascending
/// k, no randomness.
inline FamilyReport run_pipeline(const PipelineConfig& cfg) {
  if (cfg.n_lo > cfg.n_hi)
    throw std::invalid_argument("run_pipeline: empty n range");
  cfk::FilteredComplex d_model;
  bool default_model = cfg.d_model_path.empty();
  if (default_model) {
    d_model = cfk::staircase({1, 1});
  } else {
    std::ifstream in(cfg.d_model_path);
    if (!in)
      throw std::invalid_argument("run_pipeline: cannot open model file: " +
                                  cfg.d_model_path);
    d_model = cfk::complex_from_json(ordered_json::parse(in));
  }

  FamilyReport F;
  F.config = cfg;
  F.notes.push_back(default_model
                        ? "doubling pattern modeled by the {1,1} staircase "
                          "(declared modeling assumption)"
                        : "doubling pattern model ingested from " +
                              cfg.d_model_path);
  F.notes.push_back("q rule: " + cfg.q_rule);

  u64 want = cfg.family_size == 0 ? std::numeric_limits<u64>::max()
                                  : cfg.family_size;
  std::vector<numtheory::FamilyCandidate> family =
      numtheory::find_family(cfg.n_lo, cfg.n_hi, want);

  bool all_ok = !family.empty();
  for (const numtheory::FamilyCandidate& cand : family) {
    PipelineEntry entry;
    entry.n = cand.n;
    entry.m = cand.m;
    numtheory::RootSet roots =
        numtheory::sqrt_minus_one(numtheory::factor(cand.m));
    entry.roots = roots.roots;
    const u64 q = slope_q(cfg, cand.n);
    const u64 k_cap = cfg.k_max == 0 ? cand.n / 4
                                     : std::min(cfg.k_max, cand.n / 4);
    bool found = false;
    for (u64 k = 1; k <= k_cap && !found; ++k) {
      TablePair tp = build_tables(cand.n, k, d_model, q, default_model);
      // order-two consistency gate before any verdict
      dinv::CorrectionTable combined =
          dinv::d_sum(tp.T_D, tp.T_U, dinv::Pairing::Aligned);
      if (!dinv::assert_order_two_vanishing(combined))
        throw std::logic_error(
            "run_pipeline: recipe produced d(s_0) != 0 for an order-two knot");
      obstruction::ObstructionReport R =
          obstruction::averaging_decision(tp.T_D, tp.T_U, roots);
      R.provenance = tp.provenance;
      if (R.verdict == obstruction::Verdict::Obstructed) {
        entry.k = k;
        entry.certificate = bipolar_cert::certify_zero_bipolar(cand.n, k);
        entry.report = std::move(R);
        found = true;
      } else if (k == k_cap) {
        entry.k = 0;
        entry.report = std::move(R);
        entry.report.notes.push_back(
            "no k in [1, n/4] was obstructed under this recipe");
      }
    }
    if (!found) all_ok = false;
    F.entries.push_back(std::move(entry));
  }
  F.all_obstructed = all_ok;
  return F;
}

}  // namespace bipolarity::pipeline

// Acceptance runner: one line per criterion, PASS/FAIL with elapsed time.
// Criterion 8 drives the installed command-line binary end to end; pass its
// path as argv[1]. Exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "bipolarity/bipolarity.hpp"
#include "support/dense_homology.hpp"
#include "support/table_gen.hpp"

namespace fs = std::filesystem;
using namespace bipolarity;
using numtheory::u64;
using nlohmann::ordered_json;

namespace {

int g_failures = 0;

void criterion(int id, const std::string& name, double limit_s,
               const std::function<void(std::vector<std::string>&)>& body) {
  std::vector<std::string> problems;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(problems);
  } catch (const std::exception& e) {
    problems.push_back(std::string("exception: ") + e.what());
  }
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (elapsed > limit_s)
    problems.push_back("time limit exceeded: " + std::to_string(elapsed) +
                       "s > " + std::to_string(limit_s) + "s");
  std::ostringstream line;
  line.setf(std::ios::fixed);
  line.precision(1);
  if (problems.empty()) {
    line << "[PASS] " << id << ". " << name << " (" << elapsed << "s, limit "
         << limit_s << "s)";
  } else {
    ++g_failures;
    line << "[FAIL] " << id << ". " << name << " (" << elapsed << "s)";
    for (std::size_t p = 0; p < problems.size() && p < 4; ++p)
      line << "\n         - " << problems[p];
    if (problems.size() > 4)
      line << "\n         - (" << problems.size() - 4 << " more)";
  }
  std::cout << line.str() << std::endl;
}

void expect(std::vector<std::string>& problems, bool ok, const std::string& msg) {
  if (!ok) problems.push_back(msg);
}

int run_command(const std::string& cmd) {
  int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// ---------------------------------------------------------------- criteria

void c1_sqrt_minus_one(std::vector<std::string>& problems) {
  constexpr u64 kMax = 100000;
  // independent squarefree sieve
  std::vector<bool> squarefree(kMax + 1, true);
  for (u64 d = 2; d * d <= kMax; ++d)
    for (u64 v = d * d; v <= kMax; v += d * d) squarefree[v] = false;

  u64 checked = 0;
  for (u64 m = 1; m <= kMax; m += 2) {
    if (!squarefree[m]) continue;
    std::vector<u64> brute;
    for (u64 b = 0; b < m; ++b)
      if ((b * b + 1) % m == 0) brute.push_back(b);
    numtheory::RootSet rs = numtheory::sqrt_minus_one(m);
    if (rs.roots != brute) {
      problems.push_back("mismatch at m = " + std::to_string(m));
      if (problems.size() > 3) return;
    }
    ++checked;
  }
  expect(problems, checked > 20000, "suspiciously few moduli checked");

  // family moduli always contain the canonical roots 2n and m - 2n
  for (u64 n = 1; 4 * n * n + 1 <= kMax; ++n) {
    u64 m = 4 * n * n + 1;
    if (!squarefree[m]) continue;
    auto roots = numtheory::sqrt_minus_one(m).roots;
    bool has = std::count(roots.begin(), roots.end(), (2 * n) % m) &&
               std::count(roots.begin(), roots.end(), m - 2 * n);
    expect(problems, has,
           "2n or m-2n missing from roots at n = " + std::to_string(n));
  }

  expect(problems,
         numtheory::sqrt_minus_one(1765).roots ==
             std::vector<u64>{42, 748, 1017, 1723},
         "root set of 1765 is wrong");
  expect(problems,
         numtheory::sqrt_minus_one(65).roots == std::vector<u64>{8, 18, 47, 57},
         "root set of 65 is wrong");
}

void c2_metabolizer_equivalence(std::vector<std::string>& problems) {
  auto same_sets = [](std::vector<linkform::Metabolizer> a,
                      std::vector<linkform::Metabolizer> b) {
    if (a.size() != b.size()) return false;
    for (const auto& m1 : a) {
      bool found = false;
      for (const auto& m2 : b) found = found || linkform::same_subgroup(m1, m2);
      if (!found) return false;
    }
    return true;
  };

  for (u64 m = 1; m <= 200; m += 2) {
    if (!numtheory::factor(m).squarefree()) continue;
    auto structured = linkform::structured_metabolizers(m);
    for (u64 a : {u64(1), u64(2)}) {
      if (m > 1 && std::gcd(a, m) != 1) continue;
      auto brute =
          linkform::brute_force_metabolizers(linkform::LinkingGroup(m, a));
      if (!same_sets(structured, brute)) {
        problems.push_back("oracle disagreement at m = " + std::to_string(m) +
                           ", unit " + std::to_string(a));
        if (problems.size() > 3) return;
      }
    }
  }

  // splitting is a bijection onto pairs of factor metabolizers
  for (auto [m1, m2] : {std::pair<u64, u64>{5, 13}, std::pair<u64, u64>{5, 17}}) {
    u64 m = m1 * m2;
    linkform::LinkingGroup G(m, 1);
    auto mets = linkform::structured_metabolizers(m);
    auto f1 = linkform::structured_metabolizers(m1);
    auto f2 = linkform::structured_metabolizers(m2);
    expect(problems, mets.size() == f1.size() * f2.size(),
           "metabolizer count is not multiplicative for m = " +
               std::to_string(m));
    std::set<std::pair<u64, u64>> images;
    for (const auto& M : mets) {
      linkform::SplitResult s = linkform::split_metabolizer(G, m1, m2, M);
      // parts land in the factor lists
      bool p1 = false, p2 = false;
      for (const auto& F : f1) p1 = p1 || linkform::same_subgroup(F, s.part1);
      for (const auto& F : f2) p2 = p2 || linkform::same_subgroup(F, s.part2);
      expect(problems, p1 && p2, "split parts are not factor metabolizers");
      expect(problems, s.part1.has_root && s.part2.has_root,
             "split parts lost the root form");
      images.insert({s.part1.root, s.part2.root});
      // and the split reconstructs the original subgroup
      expect(problems,
             linkform::same_subgroup(
                 linkform::direct_sum_metabolizer(s.part1, m1, s.part2, m2), M),
             "direct sum does not reconstruct the metabolizer");
    }
    expect(problems, images.size() == mets.size(),
           "splitting is not injective for m = " + std::to_string(m));
  }
}

void c3_lens_properties(std::vector<std::string>& problems) {
  for (std::int64_t p = 1; p <= 30; ++p) {
    for (std::int64_t q = 1; q < std::max<std::int64_t>(p, 2); ++q) {
      if (p > 1 && std::gcd(p, q) != 1) continue;
      for (std::int64_t i = 0; i < p; ++i) {
        Rational d = dinv::lens_d(p, q, i);
        if (d != dinv::lens_d(p, q, (p + q - 1 - i) % p)) {
          problems.push_back("conjugation failure at " + std::to_string(p) +
                             "/" + std::to_string(q));
          return;
        }
        if (p > 1 && d != -dinv::lens_d(p, p - q, (p - 1 - i) % p)) {
          problems.push_back("negation failure at " + std::to_string(p) + "/" +
                             std::to_string(q));
          return;
        }
        if ((4 * p * q) % d.den() != 0) {
          problems.push_back("denominator failure at " + std::to_string(p) +
                             "/" + std::to_string(q));
          return;
        }
      }
    }
  }
}

void c4_surgery_formula(std::vector<std::string>& problems) {
  cfk::VSequence Vz = cfk::v_sequence(cfk::unknot_complex());
  for (std::int64_t p = 1; p <= 30; ++p)
    for (std::int64_t q = 1; q < std::max<std::int64_t>(p, 2); ++q) {
      if (p > 1 && std::gcd(p, q) != 1) continue;
      for (std::int64_t i = 0; i < p; ++i)
        if (dinv::surgery_d(Vz, p, q, i) != dinv::lens_d(p, q, i)) {
          problems.push_back("zero-V reduction failed at p = " +
                             std::to_string(p) + ", q = " + std::to_string(q));
          return;
        }
    }

  cfk::FilteredComplex C = cfk::staircase({1, 1});
  cfk::VSequence V = cfk::v_sequence(C);
  expect(problems, dinv::surgery_d(V, 1, 1, 0) == Rational(-2),
         "+1-surgery on the staircase is not the -2 sphere");

  // independent route: large integer surgery via the dense homology oracle
  testsupport::DenseOracle oracle(C);
  for (std::int64_t N : {5, 7, 9}) {
    for (std::int64_t i = 0; i < N; ++i) {
      Rational expected = dinv::lens_d(N, 1, i) -
                          Rational(2 * std::max(oracle.v(int(i)),
                                                oracle.v(int(N - i))));
      if (dinv::surgery_d(V, N, 1, i) != expected) {
        problems.push_back("large-surgery cross-check failed at N = " +
                           std::to_string(N) + ", i = " + std::to_string(i));
        return;
      }
    }
  }
}

void c5_v_sequences(std::vector<std::string>& problems) {
  cfk::VSequence V1 = cfk::v_sequence(cfk::staircase({1, 1}));
  expect(problems, V1.V(0) == 1, "staircase V_0 != 1");

  for (int k = 1; k <= 4; ++k) {
    cfk::FilteredComplex C = cfk::model_D_k(k);
    cfk::VSequence V = cfk::v_sequence(C);
    int expected = (k + 1) / 2;
    expect(problems, V.V(0) == expected,
           "V_0 of the " + std::to_string(k) + "-fold sum is " +
               std::to_string(V.V(0)) + ", expected " +
               std::to_string(expected));
    // stable under deepening the truncation by 2
    cfk::VSequence Vdeep = cfk::v_sequence(C, 2);
    expect(problems, V.values == Vdeep.values && V.s_lo == Vdeep.s_lo,
           "V-sequence not stable under truncation depth +2 at k = " +
               std::to_string(k));
    // independent dense-elimination oracle agrees at the center
    expect(problems, testsupport::dense_v(C, 0) == expected,
           "dense oracle disagrees at k = " + std::to_string(k));
  }
}

void c6_averaging_replication(std::vector<std::string>& problems) {
  std::mt19937_64 rng(0x5eed2026);
  const u64 moduli[3] = {5, 13, 65};
  std::map<u64, std::vector<u64>> roots;
  for (u64 m : moduli) roots[m] = numtheory::sqrt_minus_one(m).roots;

  for (int rep = 0; rep < 10000; ++rep) {
    u64 m = moduli[rep % 3];
    const auto& rs = roots[m];
    std::uniform_int_distribution<std::size_t> pick(0, rs.size() - 1);
    u64 b1 = rs[pick(rng)], b2 = rs[pick(rng)];
    auto [T_D, T_U] = testsupport::hypothesis_pair(m, b1, b2, rng);
    obstruction::AveragingImplication a =
        obstruction::check_averaging_implication(T_D, T_U, b1, b2);
    if (!(a.lower_hypothesis && a.upper_hypothesis && a.applicable &&
          a.relabel_sums_match && a.total_is_zero && a.pointwise_identity &&
          a.implication_holds)) {
      problems.push_back("replication failure at rep " + std::to_string(rep) +
                         ", m = " + std::to_string(m) +
                         ", b1 = " + std::to_string(b1) +
                         ", b2 = " + std::to_string(b2));
      if (problems.size() > 3) return;
    }
  }
}

void c7_connected_sum(std::vector<std::string>& problems) {
  auto lens_table = [](std::int64_t p, std::int64_t q) {
    return dinv::build_table(cfk::v_sequence(cfk::unknot_complex()), p, q);
  };
  auto spike = [](u64 m, u64 x0, int v) {
    dinv::CorrectionTable T;
    T.m = m;
    T.d.assign(std::size_t(m), Rational(0));
    T.d[std::size_t(x0 % m)] = Rational(v);
    T.d[std::size_t((m - x0) % m)] = Rational(v);
    return T;
  };
  // n = 1, 2, 3 give pairwise coprime moduli 5, 17, 37
  obstruction::Summand A{obstruction::KnotDescriptor(1, 1), lens_table(5, 2),
                         lens_table(5, 2), numtheory::sqrt_minus_one(5)};
  obstruction::Summand B{obstruction::KnotDescriptor(2, 1), lens_table(17, 4),
                         lens_table(17, 4), numtheory::sqrt_minus_one(17)};
  obstruction::Summand C{obstruction::KnotDescriptor(3, 1), spike(37, 1, 1),
                         dinv::zero_table(37), numtheory::sqrt_minus_one(37)};
  std::vector<obstruction::Summand> base{A, B, C};

  // the reference per-factor verdicts
  std::map<u64, obstruction::Verdict> solo;
  for (const auto& S : base)
    solo[S.knot.n] =
        obstruction::averaging_decision(S.T_D, S.T_U, S.roots).verdict;

  std::vector<std::size_t> perm{0, 1, 2};
  obstruction::ConnectedSumOptions opts;
  opts.check_all_positions = true;
  do {
    std::vector<obstruction::Summand> order;
    for (std::size_t t : perm) order.push_back(base[t]);
    obstruction::ObstructionReport R =
        obstruction::connected_sum_decision(order, opts);
    expect(problems, R.verdict == solo[order[0].knot.n],
           "verdict differs from the first summand's own decision");
    expect(problems, R.position_verdicts.size() == 3,
           "missing per-position verdicts");
    for (const auto& [n, v] : R.position_verdicts)
      expect(problems, v == solo[n],
             "position verdict changed for n = " + std::to_string(n));
  } while (std::next_permutation(perm.begin(), perm.end()));
}

void c8_pipeline(std::vector<std::string>& problems, const std::string& cli) {
  if (cli.empty()) {
    problems.push_back("no CLI binary path supplied (argv[1])");
    return;
  }
  fs::path scratch =
      fs::temp_directory_path() /
      ("bipolarity_accept_" + std::to_string(::getpid()));
  fs::create_directories(scratch);
  fs::path rundir = scratch / "run";

  // full family run, twice into the same location, byte-identical reports
  std::string rep1, rep2;
  for (int pass = 0; pass < 2; ++pass) {
    int rc = run_command("\"" + cli + "\" pipeline --lo 21 --hi 120 --out \"" +
                         rundir.string() + "\" > \"" +
                         (scratch / "pipeline.log").string() + "\" 2>&1");
    if (rc != 0) {
      problems.push_back("pipeline exited with " + std::to_string(rc) +
                         ", log at " + (scratch / "pipeline.log").string());
      return;
    }
    (pass == 0 ? rep1 : rep2) = slurp(rundir / "family_report.json");
  }
  expect(problems, !rep1.empty(), "family_report.json missing or empty");
  expect(problems, rep1 == rep2, "pipeline output is not deterministic");

  ordered_json F = ordered_json::parse(rep1);
  expect(problems, F.at("all_obstructed").get<bool>(),
         "not every family member was obstructed");
  const auto& entries = F.at("entries");
  expect(problems, !entries.empty(), "empty family over n in [21, 120]");

  cfk::FilteredComplex model = cfk::staircase({1, 1});
  for (const auto& e : entries) {
    u64 n = e.at("n").get<u64>(), k = e.at("k").get<u64>();
    if (k == 0 || e.at("certificate").is_null() ||
        e.at("report").at("verdict") != "Obstructed") {
      problems.push_back("entry n = " + std::to_string(n) +
                         " lacks a certificate or an obstructed report");
      continue;
    }
    expect(problems, n >= 4 * k,
           "certificate issued outside n >= 4k at n = " + std::to_string(n));
    // internal consistency: rebuild the tables and re-verify every witness
    pipeline::TablePair tp = pipeline::build_tables(n, k, model, 2 * n, true);
    tp.T_D.validate();
    tp.T_U.validate();
    expect(problems, tp.T_D.at(0).is_zero() && tp.T_U.at(0).is_zero(),
           "spin-structure value nonzero at n = " + std::to_string(n));
    obstruction::ObstructionReport R;
    R.m = e.at("m").get<u64>();
    for (const auto& w : e.at("report").at("witnesses"))
      R.witnesses.push_back(
          {w.at("b").get<u64>(), w.at("x").get<u64>(),
           Rational(w.at("num").get<std::int64_t>(),
                    w.at("den").get<std::int64_t>())});
    expect(problems, !R.witnesses.empty(),
           "no witnesses recorded at n = " + std::to_string(n));
    expect(problems, obstruction::verify_witnesses(R, tp.T_D, tp.T_U),
           "witness re-verification failed at n = " + std::to_string(n));
  }
  std::cout << "         (k-count bound check is informational: genuine "
               "pattern tables are an external input)\n";

  // CLI contract: precondition and inconclusive exit codes
  expect(problems,
         run_command("\"" + cli + "\" certify --n 3 --k 1 --out \"" +
                     scratch.string() + "\" > /dev/null 2>&1") == 2,
         "certify with n < 4k should exit 2");
  {
    std::ofstream d(scratch / "zd.json"), u(scratch / "zu.json");
    d << dinv::table_to_json(dinv::zero_table(5)).dump();
    u << dinv::table_to_json(dinv::zero_table(5)).dump();
  }
  expect(problems,
         run_command("\"" + cli + "\" obstruct --d-table \"" +
                     (scratch / "zd.json").string() + "\" --u-table \"" +
                     (scratch / "zu.json").string() + "\" --out \"" +
                     scratch.string() + "\" > /dev/null 2>&1") == 3,
         "obstruct on all-zero tables should exit 3 (inconclusive)");

  std::error_code ec;
  fs::remove_all(scratch, ec);
}

void c9_certificates(std::vector<std::string>& problems) {
  for (u64 n = 4; n <= 200; ++n)
    for (u64 k = 1; 4 * k <= n; ++k) {
      bipolar_cert::ZeroNegativityCertificate c =
          bipolar_cert::certify_zero_bipolar(n, k);
      if (c.blowdown_count != n - 3 * k ||
          c.blowdown_count != c.pattern_blowdowns + c.twist_blowdowns ||
          c.pattern_blowdowns != k || c.twist_blowdowns != n - 4 * k ||
          c.residual_negative_crossings != 2 * (n - 4 * k)) {
        problems.push_back("count identity failed at n = " + std::to_string(n) +
                           ", k = " + std::to_string(k));
        return;
      }
    }
  bool threw = false;
  try {
    bipolar_cert::certify_zero_bipolar(19, 5);
  } catch (const std::invalid_argument&) {
    threw = true;
  }
  expect(problems, threw, "n < 4k was not refused");
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "";
  // the CLI honors this variable; keep the run hermetic
  ::unsetenv("BIPOLARITY_OUTPUT_DIR");

  std::cout << "acceptance criteria\n===================\n";
  criterion(1, "square roots of -1 match brute force to 1e5", 60,
            [](auto& p) { c1_sqrt_minus_one(p); });
  criterion(2, "metabolizer oracles agree to m = 200, splitting bijection", 120,
            [](auto& p) { c2_metabolizer_equivalence(p); });
  criterion(3, "lens recursion property suite to p = 30", 10,
            [](auto& p) { c3_lens_properties(p); });
  criterion(4, "surgery formula: lens reduction and homology cross-check", 30,
            [](auto& p) { c4_surgery_formula(p); });
  criterion(5, "truncation sequences of iterated staircase sums", 60,
            [](auto& p) { c5_v_sequences(p); });
  criterion(6, "averaging chain replication, 10^4 constrained pairs", 60,
            [](auto& p) { c6_averaging_replication(p); });
  criterion(7, "connected-sum reduction soundness and position independence",
            30, [](auto& p) { c7_connected_sum(p); });
  criterion(8, "end-to-end pipeline over n in [21, 120]", 600,
            [&](auto& p) { c8_pipeline(p, cli); });
  criterion(9, "certificate arithmetic across the full grid", 1,
            [](auto& p) { c9_certificates(p); });

  if (g_failures == 0) {
    std::cout << "all acceptance criteria satisfied\n";
    return 0;
  }
  std::cout << g_failures << " criterion(s) failed\n";
  return 1;
}

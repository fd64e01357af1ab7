// Command-line front end: family search, metabolizer listings, correction
// tables, obstruction reports, 0-negativity certificates, and the full
// family pipeline.
//
// Exit codes: 0 success / obstructed, 2 precondition violation,
// 3 inconclusive-only outcome.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bipolarity/bipolarity.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPrecondition = 2;
constexpr int kExitInconclusive = 3;

using namespace bipolarity;
using nlohmann::ordered_json;

std::string output_dir(const std::string& flag_value) {
  if (const char* env = std::getenv("BIPOLARITY_OUTPUT_DIR"); env && *env)
    return env;
  return flag_value;
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& contents) {
  std::filesystem::create_directories(dir);
  std::filesystem::path p = std::filesystem::path(dir) / name;
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << contents;
  std::cout << "wrote " << p.string() << "\n";
}

ordered_json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return ordered_json::parse(in);
}

int cmd_search(numtheory::u64 lo, numtheory::u64 hi, numtheory::u64 count) {
  auto family = numtheory::find_family(lo, hi, count);
  for (const auto& c : family) {
    auto f = numtheory::factor(c.m);
    std::cout << "n = " << c.n << "  m = 4n^2+1 = " << c.m << "  factors =";
    for (auto [p, e] : f.factors)
      std::cout << " " << p << (e > 1 ? "^" + std::to_string(e) : "");
    std::cout << "\n";
  }
  std::cout << family.size() << " admissible n with pairwise coprime moduli\n";
  return family.empty() ? kExitInconclusive : kExitOk;
}

int cmd_metabolizers(numtheory::u64 m, numtheory::u64 unit, bool brute) {
  std::vector<linkform::Metabolizer> mets;
  if (brute) {
    mets = linkform::brute_force_metabolizers(linkform::LinkingGroup(m, unit));
    std::cout << "exhaustive search over all order-" << m << " subgroups\n";
  } else {
    mets = linkform::structured_metabolizers(m);
    std::cout << "structured enumeration via roots of b^2 + 1 = 0 (mod " << m
              << ")\n";
  }
  for (const auto& M : mets) {
    if (M.has_root)
      std::cout << "  <(1," << M.root << ")>  (root b = " << M.root << ")\n";
    else {
      std::cout << "  generators:";
      for (auto [x, y] : M.generators) std::cout << " (" << x << "," << y << ")";
      std::cout << "\n";
    }
  }
  std::cout << mets.size() << " metabolizer(s)\n";
  return kExitOk;
}

int cmd_dtable(const pipeline::PipelineConfig& cfg, numtheory::u64 n,
               numtheory::u64 k, const std::string& outdir) {
  cfk::FilteredComplex model = cfg.d_model_path.empty()
                                   ? cfk::staircase({1, 1})
                                   : cfk::complex_from_json(
                                         parse_file(cfg.d_model_path));
  pipeline::TablePair tp = pipeline::build_tables(
      n, k, model, pipeline::slope_q(cfg, n), cfg.d_model_path.empty());
  std::string base = "dtable_n" + std::to_string(n) + "_k" + std::to_string(k);
  write_file(outdir, base + "_pattern.json", dinv::table_to_json(tp.T_D).dump(2) + "\n");
  write_file(outdir, base + "_companion.json", dinv::table_to_json(tp.T_U).dump(2) + "\n");
  for (const std::string& s : tp.provenance) std::cout << "  " << s << "\n";
  std::cout << "m = " << tp.T_D.m << ", d(s_0) pattern side = "
            << tp.T_D.at(0).str() << ", companion side = " << tp.T_U.at(0).str()
            << "\n";
  return kExitOk;
}

int report_and_exit_code(const obstruction::ObstructionReport& R,
                         const std::string& outdir, const std::string& name) {
  write_file(outdir, name, R.to_json().dump(2) + "\n");
  std::cout << "verdict: " << obstruction::verdict_name(R.verdict) << "\n";
  for (const auto& w : R.witnesses)
    std::cout << "  root b = " << w.b << ": violated at x = " << w.x
              << " with value " << w.value << "\n";
  for (auto b : R.satisfied_roots)
    std::cout << "  root b = " << b << " satisfies the identity everywhere\n";
  return R.verdict == obstruction::Verdict::Obstructed ? kExitOk
                                                       : kExitInconclusive;
}

int cmd_obstruct(const pipeline::PipelineConfig& cfg, numtheory::u64 n,
                 numtheory::u64 k, const std::string& d_file,
                 const std::string& u_file, const std::string& outdir) {
  dinv::CorrectionTable T_D, T_U;
  std::vector<std::string> provenance;
  if (!d_file.empty() || !u_file.empty()) {
    if (d_file.empty() || u_file.empty())
      throw std::invalid_argument("obstruct: supply both table files or neither");
    T_D = dinv::table_from_json(parse_file(d_file));
    T_U = dinv::table_from_json(parse_file(u_file));
    if (T_D.m != T_U.m)
      throw std::invalid_argument("obstruct: ingested tables disagree on m");
    provenance.push_back("tables ingested from " + d_file + " and " + u_file);
    if (n == 0) {
      // recover n from m = 4n^2+1 when possible
      for (numtheory::u64 t = 1; 4 * t * t + 1 <= T_D.m; ++t)
        if (4 * t * t + 1 == T_D.m) {
          n = t;
          break;
        }
    }
  } else {
    if (n == 0 || k == 0)
      throw std::invalid_argument(
          "obstruct: need --n and --k when computing tables internally");
    cfk::FilteredComplex model = cfg.d_model_path.empty()
                                     ? cfk::staircase({1, 1})
                                     : cfk::complex_from_json(
                                           parse_file(cfg.d_model_path));
    pipeline::TablePair tp = pipeline::build_tables(
        n, k, model, pipeline::slope_q(cfg, n), cfg.d_model_path.empty());
    T_D = std::move(tp.T_D);
    T_U = std::move(tp.T_U);
    provenance = std::move(tp.provenance);
    provenance.push_back("tables computed internally");
  }
  numtheory::RootSet roots =
      numtheory::sqrt_minus_one(numtheory::factor(T_D.m));
  obstruction::ObstructionReport R =
      obstruction::averaging_decision(T_D, T_U, roots);
  R.provenance = provenance;
  std::string name = "obstruction_m" + std::to_string(T_D.m);
  if (n) name += "_n" + std::to_string(n);
  if (k) name += "_k" + std::to_string(k);
  return report_and_exit_code(R, outdir, name + ".json");
}

int cmd_certify(numtheory::u64 n, numtheory::u64 k, const std::string& outdir) {
  bipolar_cert::ZeroNegativityCertificate c =
      bipolar_cert::certify_zero_bipolar(n, k);
  write_file(outdir, "certificate_n" + std::to_string(n) + "_k" +
                         std::to_string(k) + ".json",
             c.to_json().dump(2) + "\n");
  std::cout << c.to_text();
  return kExitOk;
}

int cmd_pipeline(const pipeline::PipelineConfig& cfg_in,
                 const std::string& outdir_flag) {
  pipeline::PipelineConfig cfg = cfg_in;
  cfg.output_dir = output_dir(outdir_flag.empty() ? cfg.output_dir : outdir_flag);
  pipeline::FamilyReport F = pipeline::run_pipeline(cfg);
  write_file(cfg.output_dir, "family_report.json", F.to_json().dump(2) + "\n");
  for (const auto& e : F.entries) {
    std::cout << "n = " << e.n << "  m = " << e.m << "  k = " << e.k << "  "
              << obstruction::verdict_name(e.report.verdict)
              << (e.certificate ? "  [0-negativity certificate attached]" : "")
              << "\n";
  }
  std::cout << (F.all_obstructed
                    ? "family verdict: every member 0-bipolar but not 1-bipolar "
                      "under the declared model\n"
                    : "family verdict: some members inconclusive\n");
  return F.all_obstructed && !F.entries.empty() ? kExitOk : kExitInconclusive;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Obstruction toolkit for a twist family of topologically slice knots: "
      "certifies members 0-bipolar but not 1-bipolar via branched-cover "
      "correction terms"};
  app.require_subcommand(1);

  pipeline::PipelineConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file")
      ->check(CLI::ExistingFile);

  numtheory::u64 lo = 21, hi = 120, count = 0, m = 0, n = 0, k = 0, unit = 1;
  std::string outdir = ".", d_file, u_file, model_path;
  bool brute = false;

  CLI::App* search = app.add_subcommand(
      "search", "list admissible n with pairwise coprime moduli 4n^2+1");
  search->add_option("--lo", lo, "lower end of the n range");
  search->add_option("--hi", hi, "upper end of the n range");
  search->add_option("--count", count, "stop after this many (0 = all)");

  CLI::App* metab = app.add_subcommand(
      "metabolizers", "enumerate linking-form metabolizers of Z_m x Z_m");
  metab->add_option("--m", m, "group order m")->required();
  metab->add_option("--unit", unit, "linking-form unit a");
  metab->add_flag("--brute", brute, "exhaustive subgroup search instead of "
                                    "the structured enumeration");

  CLI::App* dtable = app.add_subcommand(
      "dtable", "compute both correction tables for K(n, k)");
  dtable->add_option("--n", n, "twist parameter n")->required();
  dtable->add_option("--k", k, "pattern copies k")->required();
  dtable->add_option("--model", model_path, "pattern model complex JSON file")
      ->check(CLI::ExistingFile);
  dtable->add_option("--out", outdir, "output directory");

  CLI::App* obstruct = app.add_subcommand(
      "obstruct", "averaging obstruction report for one (n, k)");
  obstruct->add_option("--n", n, "twist parameter n");
  obstruct->add_option("--k", k, "pattern copies k");
  obstruct->add_option("--d-table", d_file, "pattern-side table JSON")
      ->check(CLI::ExistingFile);
  obstruct->add_option("--u-table", u_file, "companion-side table JSON")
      ->check(CLI::ExistingFile);
  obstruct->add_option("--model", model_path, "pattern model complex JSON file")
      ->check(CLI::ExistingFile);
  obstruct->add_option("--out", outdir, "output directory");

  CLI::App* certify = app.add_subcommand(
      "certify", "0-negativity certificate for K(n, k), requires n >= 4k");
  certify->add_option("--n", n, "twist parameter n")->required();
  certify->add_option("--k", k, "pattern copies k")->required();
  certify->add_option("--out", outdir, "output directory");

  CLI::App* pipe = app.add_subcommand(
      "pipeline", "full family run: search, tables, k-selection, reports");
  pipe->add_option("--lo", lo, "lower end of the n range");
  pipe->add_option("--hi", hi, "upper end of the n range");
  pipe->add_option("--count", count, "family size limit (0 = all)");
  pipe->add_option("--out", outdir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) cfg = pipeline::load_config(config_path);
    if (!model_path.empty()) cfg.d_model_path = model_path;
    std::string dir = output_dir(outdir);

    if (search->parsed())
      return cmd_search(lo, hi, count == 0 ? UINT64_MAX : count);
    if (metab->parsed()) return cmd_metabolizers(m, unit, brute);
    if (dtable->parsed()) return cmd_dtable(cfg, n, k, dir);
    if (obstruct->parsed())
      return cmd_obstruct(cfg, n, k, d_file, u_file, dir);
    if (certify->parsed()) return cmd_certify(n, k, dir);
    if (pipe->parsed()) {
      if (pipe->count("--lo")) cfg.n_lo = lo;
      if (pipe->count("--hi")) cfg.n_hi = hi;
      if (pipe->count("--count")) cfg.family_size = count;
      return cmd_pipeline(cfg,
                          pipe->count("--out") ? outdir : std::string());
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "precondition violation: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::domain_error& e) {
    std::cerr << "precondition violation: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::overflow_error& e) {
    std::cerr << "precondition violation (overflow): " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }
  return kExitOk;
}

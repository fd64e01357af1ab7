// Walk one family member through the whole obstruction chain by hand:
// search, metabolizers, correction tables, averaging decision, certificate.
// Optional argv[1]: JSON file with the pattern model (defaults to the
// built-in staircase).

#include <fstream>
#include <iostream>

#include "bipolarity/bipolarity.hpp"

using namespace bipolarity;

int main(int argc, char** argv) {
  cfk::FilteredComplex model = cfk::staircase({1, 1});
  if (argc > 1) {
    std::ifstream in(argv[1]);
    if (!in) {
      std::cerr << "cannot open " << argv[1] << "\n";
      return 2;
    }
    nlohmann::ordered_json j;
    in >> j;
    model = cfk::complex_from_json(j);
    std::cout << "pattern model from " << argv[1] << " (" << model.size()
              << " generators)\n";
  }

  auto fam = numtheory::find_family(21, 40, 3);
  std::cout << "family members:";
  for (const auto& c : fam) std::cout << " n=" << c.n << " (m=" << c.m << ")";
  std::cout << "\n";

  const auto& first = fam.front();
  numtheory::RootSet roots = numtheory::sqrt_minus_one(first.m);
  std::cout << "square roots of -1 mod " << first.m << ":";
  for (auto b : roots.roots) std::cout << " " << b;
  std::cout << "  (" << linkform::structured_metabolizers(first.m).size()
            << " metabolizers)\n";

  pipeline::TablePair tables =
      pipeline::build_tables(first.n, 1, model, 2 * first.n, argc <= 1);
  std::cout << "correction tables built, d(0) = " << tables.T_D.at(0) << " / "
            << tables.T_U.at(0) << "\n";

  auto report = obstruction::averaging_decision(tables.T_D, tables.T_U, roots);
  std::cout << "verdict: "
            << (report.verdict == obstruction::Verdict::Obstructed
                    ? "Obstructed"
                    : "Inconclusive")
            << "\n";
  for (const auto& w : report.witnesses)
    std::cout << "  witness b=" << w.b << " x=" << w.x << " value=" << w.value
              << "\n";

  auto cert = bipolar_cert::certify_zero_bipolar(first.n, 1);
  std::cout << cert.to_text();
  return report.verdict == obstruction::Verdict::Obstructed ? 0 : 1;
}

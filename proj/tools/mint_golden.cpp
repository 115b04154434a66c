// Regenerates fixtures/golden/acme_golden.csv from the independent oracle.
#include <fstream>
#include <iostream>
#include <vector>

#include "acme_oracle.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: mint_golden OUTPUT.csv\n";
    return 3;
  }
  std::vector<dimcalc::oracle::GoldenRecord> records;
  for (double base_price : {50.0, 100.0, 150.0}) {
    auto batch = dimcalc::oracle::oracle_acme(base_price);
    records.insert(records.end(), batch.begin(), batch.end());
  }
  std::ofstream out(argv[1], std::ios::binary);
  out << dimcalc::oracle::format_golden_csv(records);
  return out ? 0 : 1;
}

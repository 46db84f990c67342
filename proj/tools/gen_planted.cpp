// One-shot generator for the planted-outlier benchmark CSV checked into
// datasets/. 500 points from a standard 4-D Gaussian cluster (label 0) plus
// 25 uniform far outliers with every coordinate in +-[6, 10] (label 1).
//
// Run from the repo root:
//   gen_planted datasets/planted_gaussian.csv
// and paste the printed manifest line into datasets/manifest.tsv.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "outlierkit/detail/sha256.hpp"
#include "outlierkit/detail/text.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_planted <output.csv>\n";
    return 2;
  }

  constexpr int kCluster = 500;
  constexpr int kOutliers = 25;
  constexpr int kDim = 4;

  std::mt19937_64 rng(20240603);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> shell(6.0, 10.0);

  std::ostringstream csv;
  csv << "x0,x1,x2,x3,label\n";
  for (int i = 0; i < kCluster; ++i) {
    for (int j = 0; j < kDim; ++j) {
      csv << outlierkit::detail::format_double(gauss(rng)) << ',';
    }
    csv << "0\n";
  }
  for (int i = 0; i < kOutliers; ++i) {
    for (int j = 0; j < kDim; ++j) {
      double sign = rng() % 2 == 0 ? 1.0 : -1.0;
      csv << outlierkit::detail::format_double(sign * shell(rng)) << ',';
    }
    csv << "1\n";
  }

  std::string payload = csv.str();
  std::ofstream out(argv[1], std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "cannot write " << argv[1] << "\n";
    return 1;
  }
  out << payload;
  out.close();

  std::cout << "rows: " << kCluster + kOutliers << "\n"
            << "manifest line:\n"
            << "planted\tfile:datasets/planted_gaussian.csv\t"
            << outlierkit::detail::sha256_hex(payload) << "\tlabel\t1\n";
  return 0;
}

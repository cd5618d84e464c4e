#pragma once

#include <array>
#include <string>
#include <vector>

#include "io/problem.hpp"

namespace gtd {

// Reference values for the published benchmark instances, embedded so the
// reproduce command can run anywhere without external data. All instances use
// theta* = (0.07, 0.93, 0.96) and c = (0,1,1).

struct ExpectedDesignRow {  // single-criterion optimal approximate designs
  int M;
  double q;
  const char* crit;
  std::vector<std::pair<int, double>> support;  // printed weights (3 dp)
  double phi;                                   // full-precision objective
  std::array<double, 5> eff;                    // eff_D, eff_A, eff_Ds, eff_c, eff_E
};

struct ExpectedMaximinRow {  // multi-objective maximin approximate designs
  int M;
  double q;
  std::vector<const char*> kinds;
  std::vector<std::pair<int, double>> support;
  double inv_t;  // 1/t*
};

struct ExpectedRoundRow {  // single-criterion exact designs, M=150, q=0.2
  const char* crit;
  double C;
  std::vector<std::pair<int, long>> design;
  double Cr;
  std::vector<std::pair<int, long>> delta;  // empty = no augmentation
  double Cr_final;
  double phi;
  double eff;
  bool pin_identity;  // whether the design/trace identity itself is asserted
};

struct ExpectedMaximinRoundRow {  // multi-objective exact designs, M=61
  double q;
  std::vector<const char*> kinds;
  bool fixed_n;
  double n_or_C;
  std::vector<std::pair<int, long>> design;
  double min_eff;
  double inv_t;
  bool pin_identity;
};

const std::vector<ExpectedDesignRow>& table1_rows();
const std::vector<ExpectedMaximinRow>& table2_rows();
const std::vector<ExpectedRoundRow>& table3_rows();
const std::vector<ExpectedMaximinRoundRow>& table4_rows();

struct ReproduceCell {
  std::string instance;
  std::string cell;
  double expected = 0;
  double got = 0;
  double tol = 0;
  bool pass = false;
};

struct ReproduceReport {
  std::string table;
  std::vector<ReproduceCell> cells;
  bool all_pass = false;

  std::string text() const;
};

/// Re-runs every instance of the named table ("table1".."table4", "robust-e")
/// and compares against the embedded expected values. Instances may run in
/// parallel; the report order is fixed.
ReproduceReport reproduce(const std::string& table_id, int threads = 1);

}  // namespace gtd

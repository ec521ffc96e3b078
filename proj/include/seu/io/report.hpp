#pragma once

#include <string>
#include <vector>

#include "seu/io/config.hpp"
#include "seu/io/parallel.hpp"

namespace seu::io {

struct ReportRow {
  std::string check;
  std::string expected;
  std::string measured;
  bool pass = false;
};

struct Report {
  std::vector<ReportRow> rows;

  bool passed() const;
  std::string table() const;  // aligned text with a final PASS/FAIL count
  std::string csv() const;    // check,expected,measured,pass
};

// Tolerances applied by the report.
inline constexpr double kLetMaxReference = 1.54;
inline constexpr double kLetMaxTolerance = 0.20;
inline constexpr double kThresholdTolerance = 0.10;
inline constexpr double kFlatNodeLimit = 1e-6;  // V

// LET peak, SNM parity for both device types and the strike thresholds:
//   channel/type2 <= 1.0, channel/type1 survives 2.8,
//   substrate/type2 ~ 0.35, substrate/type1 survives 69 with a flat CL,
//   top/type2 ~ 0.35, top/type1 survives 6.9.
Report run_report(const RunConfig& config, unsigned threads = thread_count());

}  // namespace seu::io

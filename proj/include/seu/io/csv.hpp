#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "seu/let/conversion.hpp"
#include "seu/let/stopping.hpp"
#include "seu/sram/butterfly.hpp"
#include "seu/sram/strike.hpp"

namespace seu::io {

// Every numeric field is written with `precision` significant digits.
inline constexpr int kCsvPrecision = 9;

// energy_MeV,let_MeVcm2_per_mg[,charge_pC_per_um]
void write_let_curve_csv(std::ostream& out, const let::LetCurve& curve,
                         const let::ConversionSettings* conversion = nullptr,
                         int precision = kCsvPrecision);

struct IvPoint {
  double v_gs;
  double v_ds;
  double i_d;
};

// v_gs,v_ds,i_d
void write_iv_csv(std::ostream& out, std::span<const IvPoint> points, int precision = kCsvPrecision);

// v_in_V,vtc_a_out_V,vtc_b_out_V. Both curves must share the input grid.
void write_vtc_csv(std::ostream& out, const sram::SnmReport& report, int precision = kCsvPrecision);

// One line: mode=<m> snm_V=<x> lobe1_V=<x> lobe2_V=<x>
std::string snm_summary(const sram::SnmReport& report, int precision = kCsvPrecision);

// scenario,device_type,let_crit_multiple,status
void write_critical_let_csv(std::ostream& out, std::span<const sram::CriticalLetResult> results,
                            int precision = kCsvPrecision);

// Writes `content` to `path`, creating parent directories. Throws std::runtime_error.
void write_file(const std::string& path, const std::string& content);

}  // namespace seu::io

#pragma once

#include <vector>

#include "seu/sram/cell.hpp"

namespace seu::sram {

struct VtcPoint {
  double in;
  double out;
};

// Static noise margins from the 45-degree rotated butterfly.
//
// curve_a is the left half cell, V(CH) as a function of V(CL); curve_b is the
// right half cell, V(CL) as a function of V(CH). For hold and read, snm is
// min(lobe1, lobe2), lobe1 being the lobe of the (CL low, CH high) state.
//
// For write (BL = 0 pulls CL down) lobe1 is the surviving lobe and snm is the
// write margin: the smallest diagonal gap left on the side where the old
// (CL high) lobe used to be, divided by sqrt(2). It is negative, minus that
// lobe's size, when the old lobe still exists and the write fails.
struct SnmReport {
  BiasMode mode;
  double snm;
  double lobe1;
  double lobe2;
  std::vector<VtcPoint> curve_a;
  std::vector<VtcPoint> curve_b;
};

// Sweep step is 2 mV over [0, vdd].
std::vector<VtcPoint> half_cell_vtc(DeviceType type, BiasMode mode, Side side,
                                    const SramConfig& config = {}, double step = 2e-3);

SnmReport butterfly(DeviceType type, BiasMode mode, const SramConfig& config = {});

// Lobe extraction on already computed curves (exposed for tests).
SnmReport extract_snm(BiasMode mode, std::vector<VtcPoint> curve_a, std::vector<VtcPoint> curve_b);

}  // namespace seu::sram

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seu/sram/strike.hpp"

namespace seu::sram {

// kEqual: the critical LET should land on `let` (within tolerance).
// kAbove: the cell must survive a strike of `let` (critical LET > let).
enum class Relation { kEqual, kAbove };

struct CalibrationTarget {
  ScenarioKind scenario;
  DeviceType device_type;
  double let;
  Relation relation = Relation::kEqual;
};

struct TargetOutcome {
  CalibrationTarget target;
  std::string knob;         // parameter fitted to this target, empty for checks
  bool satisfied = false;
  std::string detail;
};

struct CalibrationResult {
  SramConfig config;
  std::vector<TargetOutcome> outcomes;
  int adjustments = 0;  // knobs moved
  int sweeps = 0;
  bool success = true;

  std::string report() const;
};

// Reference thresholds: channel/T2 at 1.0, substrate/T2 and top/T2 at 0.35
// (equalities); channel/T1 above 2.8 and top/T1 above 6.9 (checks).
std::vector<CalibrationTarget> reference_targets();

// Coordinate bisection. Equality targets own one knob each:
//   substrate/Type 2 -> node_capacitance
//   channel/Type 2   -> funnel_channel
//   top/Type 2       -> top_funnel_length
// A knob is left alone when its target already flips at `let` but not at
// 0.98 * `let`; otherwise it is bisected (relative width 0.5%) to the value
// where a flip at `let` just occurs. kAbove targets are verified at the end.
CalibrationResult calibrate_collection(const std::vector<CalibrationTarget>& targets,
                                       const SramConfig& start = {});

}  // namespace seu::sram

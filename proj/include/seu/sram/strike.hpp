#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seu/circuit/solver.hpp"
#include "seu/sram/cell.hpp"

namespace seu::sram {

enum class ScenarioKind { kChannel, kSubstrate, kTop };

inline constexpr ScenarioKind kAllScenarios[] = {ScenarioKind::kChannel, ScenarioKind::kSubstrate,
                                                 ScenarioKind::kTop};

std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario(std::string_view text);

enum class Terminal { kGround, kBitline };

// Charge collected from the struck storage node into `to`.
struct Injection {
  Terminal to;
  double collection_length;  // um
  double multiplier;         // funnelling factor
};

struct StrikeScenario {
  ScenarioKind kind;
  DeviceType device_type;
  std::vector<Injection> injections;
  std::string description;
};

StrikeScenario make_scenario(ScenarioKind kind, DeviceType type, const CollectionConfig& collection);

struct StrikeStimulus {
  std::string name;
  circuit::NodeId from;
  circuit::NodeId to;
  circuit::GaussianPulse pulse;
};

// One Gaussian pulse per injection, q = let_multiple * q(LET_max) * L * eta,
// pulling the struck node toward the collecting terminal.
std::vector<StrikeStimulus> build_strike(const Cell& cell, ScenarioKind kind, double let_multiple,
                                         const StrikeConfig& strike);

struct StrikeRun {
  circuit::Waveforms waveforms;
  circuit::NodeVoltages initial;
  double total_charge;  // pC
  bool flipped;
};

// Worst-case hold cell, DC initialised with the struck node high, then struck.
StrikeRun run_strike(ScenarioKind kind, DeviceType type, double let_multiple,
                     const SramConfig& config = {}, Side side = Side::kRight);

// True iff the sign of V(CH) - V(CL) at the last sample is opposite to the
// initial one and the final separation exceeds vdd / 2.
bool detect_flip(const circuit::Waveforms& w, double initial_ch, double initial_cl, double vdd);

struct CriticalLetResult {
  ScenarioKind kind;
  DeviceType device_type;
  std::optional<double> let_crit;  // x LET_max; empty means no flip up to `bound`
  double bound;
  std::vector<std::pair<double, bool>> history;  // (let multiple, flipped)

  std::string status() const;
};

// Bisects to 1% relative bracket width, then confirms no flip at 0.99x and a
// flip at 1.01x. Throws SolverError when the flip response is not monotone.
CriticalLetResult critical_let(ScenarioKind kind, DeviceType type, double bound,
                               const SramConfig& config = {}, Side side = Side::kRight);

}  // namespace seu::sram

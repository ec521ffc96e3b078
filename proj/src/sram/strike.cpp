#include "seu/sram/strike.hpp"

#include <cmath>

#include <fmt/format.h>

#include "seu/error.hpp"

namespace seu::sram {

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kChannel: return "channel";
    case ScenarioKind::kSubstrate: return "substrate";
    case ScenarioKind::kTop: return "top";
  }
  return "?";
}

ScenarioKind parse_scenario(std::string_view text) {
  if (text == "channel") return ScenarioKind::kChannel;
  if (text == "substrate") return ScenarioKind::kSubstrate;
  if (text == "top") return ScenarioKind::kTop;
  throw ValidationError(fmt::format("unknown scenario '{}' (expected channel, substrate or top)", text));
}

StrikeScenario make_scenario(ScenarioKind kind, DeviceType type, const CollectionConfig& col) {
  col.validate();
  const bool bdi = type == DeviceType::kType1;
  StrikeScenario s{kind, type, {}, {}};
  switch (kind) {
    case ScenarioKind::kChannel: {
      const double eta = bdi ? 1.0 : col.funnel_channel;
      s.injections = {{Terminal::kGround, col.channel_length, eta},
                      {Terminal::kBitline, col.channel_access_length, eta}};
      s.description = "mid-sheet track through the off pull-down and off access device";
      break;
    }
    case ScenarioKind::kSubstrate:
      // With BDI there is no semiconductor along this track.
      s.injections = {{Terminal::kGround, bdi ? 0.0 : col.substrate_length, 1.0}};
      s.description = "track in the substrate below the sheets, pull-down to access device";
      break;
    case ScenarioKind::kTop:
      s.injections = {{Terminal::kGround, col.top_sheet_length, 1.0}};
      if (!bdi) s.injections.push_back({Terminal::kGround, col.top_funnel_length, 1.0});
      s.description = "vertical track through the three sheets next to the pull-down drain";
      break;
  }
  return s;
}

std::vector<StrikeStimulus> build_strike(const Cell& cell, ScenarioKind kind, double let_multiple,
                                         const StrikeConfig& strike) {
  if (!(let_multiple >= 0.0) || !std::isfinite(let_multiple)) {
    throw ValidationError(fmt::format("LET multiple {} must be non-negative", let_multiple));
  }
  strike.validate();
  const StrikeScenario scenario = make_scenario(kind, cell.device_type, strike.collection);
  const double q_density = strike.charge_density();
  std::vector<StrikeStimulus> out;
  int index = 0;
  for (const auto& inj : scenario.injections) {
    const circuit::NodeId to = inj.to == Terminal::kGround ? circuit::kGround : cell.struck_bitline();
    circuit::GaussianPulse pulse;
    pulse.q_total = let_multiple * q_density * inj.collection_length * inj.multiplier;
    pulse.t_peak = strike.t_peak;
    pulse.sigma = strike.sigma;
    out.push_back({fmt::format("{}_{}", to_string(kind), index++), cell.struck_node(), to, pulse});
  }
  return out;
}

bool detect_flip(const circuit::Waveforms& w, double initial_ch, double initial_cl, double vdd) {
  const double before = initial_ch - initial_cl;
  const double after = w.final_value("CH") - w.final_value("CL");
  const bool opposite = (before > 0.0 && after < 0.0) || (before < 0.0 && after > 0.0);
  return opposite && std::abs(after) > vdd / 2.0;
}

StrikeRun run_strike(ScenarioKind kind, DeviceType type, double let_multiple,
                     const SramConfig& config, Side side) {
  Cell cell = build_cell(type, BiasMode::kWorstCaseHold, config, side);
  const circuit::NodeVoltages v0 = circuit::dc_solve(cell.circuit, worst_case_state(cell));
  double total = 0.0;
  for (const auto& s : build_strike(cell, kind, let_multiple, config.strike)) {
    cell.circuit.add_pulse(s.name, s.from, s.to, s.pulse);
    total += s.pulse.q_total;
  }
  circuit::Waveforms w = circuit::transient(cell.circuit, v0, config.transient);
  const double ch = v0[static_cast<std::size_t>(cell.ch)];
  const double cl = v0[static_cast<std::size_t>(cell.cl)];
  const bool flipped = detect_flip(w, ch, cl, config.vdd);
  return {std::move(w), v0, total, flipped};
}

std::string CriticalLetResult::status() const {
  if (let_crit) return "flip";
  return fmt::format("no-flip-up-to({:g})", bound);
}

CriticalLetResult critical_let(ScenarioKind kind, DeviceType type, double bound,
                               const SramConfig& config, Side side) {
  if (!(bound > 0.0)) throw ValidationError("critical LET bound must be positive");
  CriticalLetResult result{kind, type, std::nullopt, bound, {}};
  const auto flips = [&](double let) {
    const bool f = run_strike(kind, type, let, config, side).flipped;
    result.history.emplace_back(let, f);
    return f;
  };
  const auto where = [&] { return fmt::format("{} strike, type {}", to_string(kind), to_string(type)); };

  if (flips(0.0)) throw SolverError(fmt::format("{}: cell flips with no strike", where()));
  if (!flips(bound)) return result;

  double lo = 0.0;
  double hi = bound;
  while (hi - lo > 0.01 * hi) {
    const double mid = 0.5 * (lo + hi);
    (flips(mid) ? hi : lo) = mid;
  }
  const double crit = 0.5 * (lo + hi);
  if (flips(0.99 * crit) || !flips(1.01 * crit)) {
    throw SolverError(fmt::format("{}: non-monotone flip response near {:.4g} x LET_max", where(), crit));
  }
  result.let_crit = crit;
  return result;
}

}  // namespace seu::sram

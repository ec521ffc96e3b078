#include "seu/sram/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "seu/error.hpp"

namespace seu::sram {

namespace {

struct Knob {
  std::string name;
  std::function<double&(SramConfig&)> ref;
  bool more_flips_when_larger;
};

std::optional<Knob> knob_for(const CalibrationTarget& t) {
  if (t.relation != Relation::kEqual || t.device_type != DeviceType::kType2) return std::nullopt;
  switch (t.scenario) {
    case ScenarioKind::kSubstrate:
      return Knob{"node_capacitance", [](SramConfig& c) -> double& { return c.node_capacitance; }, false};
    case ScenarioKind::kChannel:
      return Knob{"funnel_channel",
                  [](SramConfig& c) -> double& { return c.strike.collection.funnel_channel; }, true};
    case ScenarioKind::kTop:
      return Knob{"top_funnel_length",
                  [](SramConfig& c) -> double& { return c.strike.collection.top_funnel_length; }, true};
  }
  return std::nullopt;
}

// Capacitance scales every threshold, so it is fitted first.
int knob_order(const CalibrationTarget& t) {
  switch (t.scenario) {
    case ScenarioKind::kSubstrate: return 0;
    case ScenarioKind::kChannel: return 1;
    case ScenarioKind::kTop: return 2;
  }
  return 3;
}

bool flips(const SramConfig& config, const CalibrationTarget& t, double let) {
  return run_strike(t.scenario, t.device_type, let, config).flipped;
}

bool on_target(const SramConfig& config, const CalibrationTarget& t) {
  return flips(config, t, t.let) && !flips(config, t, 0.98 * t.let);
}

// Moves the knob to the edge of the region where a strike of t.let flips the cell.
void fit(SramConfig& config, const CalibrationTarget& t, const Knob& knob) {
  double& k = knob.ref(config);
  const double grow = knob.more_flips_when_larger ? 0.5 : 2.0;  // step toward "no flip"
  if (!(k > 0.0)) k = knob.more_flips_when_larger ? 1e-3 : 1e-18;
  double flip_end = 0.0;
  double safe_end = 0.0;
  constexpr int kMaxExpansions = 60;
  int guard = 0;
  if (flips(config, t, t.let)) {
    flip_end = k;
    for (safe_end = k * grow;; safe_end *= grow) {
      k = safe_end;
      if (!flips(config, t, t.let)) break;
      flip_end = safe_end;
      if (++guard > kMaxExpansions) throw SolverError(fmt::format("{}: cannot leave the flip region", knob.name));
    }
  } else {
    safe_end = k;
    for (flip_end = k / grow;; flip_end /= grow) {
      k = flip_end;
      if (flips(config, t, t.let)) break;
      safe_end = flip_end;
      if (++guard > kMaxExpansions) throw SolverError(fmt::format("{}: target LET unreachable", knob.name));
    }
  }
  while (std::max(flip_end, safe_end) / std::min(flip_end, safe_end) > 1.005) {
    const double mid = std::sqrt(flip_end * safe_end);
    k = mid;
    (flips(config, t, t.let) ? flip_end : safe_end) = mid;
  }
  k = flip_end;
}

std::string describe(const CalibrationTarget& t) {
  return fmt::format("{}/type{} {} {:g}", to_string(t.scenario), to_string(t.device_type),
                     t.relation == Relation::kEqual ? "=" : ">", t.let);
}

}  // namespace

std::vector<CalibrationTarget> reference_targets() {
  return {{ScenarioKind::kChannel, DeviceType::kType2, 1.0, Relation::kEqual},
          {ScenarioKind::kSubstrate, DeviceType::kType2, 0.35, Relation::kEqual},
          {ScenarioKind::kTop, DeviceType::kType2, 0.35, Relation::kEqual},
          {ScenarioKind::kChannel, DeviceType::kType1, 2.8, Relation::kAbove},
          {ScenarioKind::kTop, DeviceType::kType1, 6.9, Relation::kAbove}};
}

CalibrationResult calibrate_collection(const std::vector<CalibrationTarget>& targets,
                                       const SramConfig& start) {
  CalibrationResult result{start, {}, 0, 0, true};
  if (targets.empty()) return result;
  start.validate();

  std::vector<const CalibrationTarget*> fitted;
  for (const auto& t : targets) {
    if (!(t.let > 0.0)) throw ValidationError(fmt::format("target {} needs a positive LET", describe(t)));
    if (t.relation == Relation::kEqual) {
      if (!knob_for(t)) {
        result.success = false;
        result.outcomes.push_back({t, "", false, "no free parameter controls this target"});
        continue;
      }
      fitted.push_back(&t);
    }
  }
  std::stable_sort(fitted.begin(), fitted.end(),
                   [](auto* a, auto* b) { return knob_order(*a) < knob_order(*b); });
  if (!result.success) return result;

  constexpr int kMaxSweeps = 4;
  for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
    result.sweeps = sweep;
    bool changed = false;
    for (const auto* t : fitted) {
      if (on_target(result.config, *t)) continue;
      fit(result.config, *t, *knob_for(*t));
      ++result.adjustments;
      changed = true;
    }
    if (!changed) break;
  }

  for (const auto& t : targets) {
    TargetOutcome out{t, knob_for(t) ? knob_for(t)->name : "", false, ""};
    if (t.relation == Relation::kEqual) {
      const auto crit = critical_let(t.scenario, t.device_type, std::max(result.config.strike.bound, 2.0 * t.let),
                                     result.config);
      if (crit.let_crit) {
        const double rel = *crit.let_crit / t.let - 1.0;
        out.satisfied = std::abs(rel) <= 0.10;
        out.detail = fmt::format("critical LET {:.4g} (residual {:+.2f}%)", *crit.let_crit, 100.0 * rel);
      } else {
        out.detail = crit.status();
      }
    } else {
      const bool flipped = flips(result.config, t, t.let);
      out.satisfied = !flipped;
      out.detail = flipped ? "flips" : "no flip";
    }
    result.success = result.success && out.satisfied;
    result.outcomes.push_back(std::move(out));
  }
  return result;
}

std::string CalibrationResult::report() const {
  const auto& col = config.strike.collection;
  std::string s = fmt::format(
      "calibration {} after {} sweep(s), {} adjustment(s)\n"
      "  node_capacitance  = {:.6g} F\n"
      "  funnel_channel    = {:.6g}\n"
      "  substrate_length  = {:.6g} um\n"
      "  top_funnel_length = {:.6g} um\n",
      success ? "succeeded" : "FAILED", sweeps, adjustments, config.node_capacitance,
      col.funnel_channel, col.substrate_length, col.top_funnel_length);
  for (const auto& o : outcomes) {
    s += fmt::format("  {:<24} {:<4} {}{}\n", describe(o.target), o.satisfied ? "ok" : "FAIL", o.detail,
                     o.knob.empty() ? "" : fmt::format(" [{}]", o.knob));
  }
  return s;
}

}  // namespace seu::sram

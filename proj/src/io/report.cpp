#include "seu/io/report.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "seu/sram/butterfly.hpp"
#include "seu/sram/strike.hpp"

namespace seu::io {

namespace {

using sram::DeviceType;
using sram::ScenarioKind;

ReportRow let_peak_row(const RunConfig& config) {
  const auto peak = let::find_let_max(config.stopping_model(), config.materials.conversion);
  const bool ok = peak.e_peak >= 0.4 && peak.e_peak <= 0.8 &&
                  std::abs(peak.let_max / kLetMaxReference - 1.0) <= kLetMaxTolerance;
  return {fmt::format("LET peak ({})", config.material().name()),
          fmt::format("E in [0.4, 0.8] MeV, LET {} +-20%", kLetMaxReference),
          fmt::format("E {:.4f} MeV, LET {:.4f}", peak.e_peak, peak.let_max), ok};
}

std::vector<ReportRow> snm_rows(const RunConfig& config) {
  using sram::BiasMode;
  constexpr BiasMode kModes[] = {BiasMode::kHold, BiasMode::kRead, BiasMode::kWrite};
  double margin[2][3];
  double lobe_gap[2];
  for (int t = 0; t < 2; ++t) {
    const auto type = t == 0 ? DeviceType::kType1 : DeviceType::kType2;
    for (int m = 0; m < 3; ++m) {
      const auto r = sram::butterfly(type, kModes[m], config.sram);
      margin[t][m] = r.snm;
      if (kModes[m] == BiasMode::kHold) lobe_gap[t] = std::abs(r.lobe1 - r.lobe2);
    }
  }
  double parity = 0.0;
  for (int m = 0; m < 3; ++m) parity = std::max(parity, std::abs(margin[0][m] - margin[1][m]));
  const double lobes = std::max(lobe_gap[0], lobe_gap[1]);
  const bool ordered = margin[0][0] > margin[0][1] && margin[0][1] > 0.0 && margin[1][0] > margin[1][1] &&
                       margin[1][1] > 0.0;
  return {{"SNM type1 vs type2", "max gap < 1 mV", fmt::format("{:.3g} mV", 1e3 * parity), parity < 1e-3},
          {"hold lobe symmetry", "max gap < 1 mV", fmt::format("{:.3g} mV", 1e3 * lobes), lobes < 1e-3},
          {"hold > read > 0", "ordered",
           fmt::format("hold {:.4f} V, read {:.4f} V, write {:.4f} V", margin[1][0], margin[1][1], margin[1][2]),
           ordered}};
}

ReportRow critical_row(const RunConfig& config, ScenarioKind kind, double target, bool at_most) {
  const auto r = sram::critical_let(kind, DeviceType::kType2, config.sram.strike.bound, config.sram);
  const std::string check = fmt::format("{}/type2 critical LET", sram::to_string(kind));
  const std::string expected = at_most ? fmt::format("<= {} (+10%)", target) : fmt::format("{} +-10%", target);
  if (!r.let_crit) return {check, expected, r.status(), false};
  const double c = *r.let_crit;
  const bool ok = at_most ? c <= target * (1.0 + kThresholdTolerance)
                          : std::abs(c / target - 1.0) <= kThresholdTolerance;
  return {check, expected, fmt::format("{:.4f}", c), ok};
}

ReportRow survive_row(const RunConfig& config, ScenarioKind kind, double let, bool flat) {
  const auto run = sram::run_strike(kind, DeviceType::kType1, let, config.sram);
  const auto& cl = run.waveforms.series("CL");
  double dev = 0.0;
  for (double v : cl) dev = std::max(dev, std::abs(v - cl.front()));
  const bool ok = !run.flipped && (!flat || dev < kFlatNodeLimit);
  return {fmt::format("{}/type1 at {}", sram::to_string(kind), let),
          flat ? "no flip, CL deviation < 1 uV" : "no flip",
          fmt::format("flip={} max|dCL|={:.3g} V", run.flipped, dev), ok};
}

}  // namespace

bool Report::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

std::string Report::table() const {
  std::size_t w[3] = {5, 8, 8};
  for (const auto& r : rows) {
    w[0] = std::max(w[0], r.check.size());
    w[1] = std::max(w[1], r.expected.size());
    w[2] = std::max(w[2], r.measured.size());
  }
  std::string s = fmt::format("{:<{}}  {:<{}}  {:<{}}  result\n", "check", w[0], "expected", w[1], "measured", w[2]);
  int failed = 0;
  for (const auto& r : rows) {
    s += fmt::format("{:<{}}  {:<{}}  {:<{}}  {}\n", r.check, w[0], r.expected, w[1], r.measured, w[2],
                     r.pass ? "PASS" : "FAIL");
    failed += r.pass ? 0 : 1;
  }
  s += fmt::format("{} of {} checks passed\n", rows.size() - static_cast<std::size_t>(failed), rows.size());
  return s;
}

std::string Report::csv() const {
  std::string s = "check,expected,measured,pass\n";
  for (const auto& r : rows) {
    s += fmt::format("\"{}\",\"{}\",\"{}\",{}\n", r.check, r.expected, r.measured, r.pass ? "true" : "false");
  }
  return s;
}

Report run_report(const RunConfig& config, unsigned threads) {
  config.sram.validate();
  // Each job fills its own slot so the row order never depends on scheduling.
  std::vector<std::function<std::vector<ReportRow>()>> jobs = {
      [&] { return std::vector<ReportRow>{let_peak_row(config)}; },
      [&] { return snm_rows(config); },
      [&] { return std::vector<ReportRow>{critical_row(config, ScenarioKind::kChannel, 1.0, true)}; },
      [&] { return std::vector<ReportRow>{survive_row(config, ScenarioKind::kChannel, 2.8, false)}; },
      [&] { return std::vector<ReportRow>{critical_row(config, ScenarioKind::kSubstrate, 0.35, false)}; },
      [&] { return std::vector<ReportRow>{survive_row(config, ScenarioKind::kSubstrate, 69.0, true)}; },
      [&] { return std::vector<ReportRow>{critical_row(config, ScenarioKind::kTop, 0.35, false)}; },
      [&] { return std::vector<ReportRow>{survive_row(config, ScenarioKind::kTop, 6.9, false)}; },
  };
  std::vector<std::vector<ReportRow>> slots(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) { slots[i] = jobs[i](); }, threads);
  Report report;
  for (auto& s : slots) report.rows.insert(report.rows.end(), s.begin(), s.end());
  return report;
}

}  // namespace seu::io

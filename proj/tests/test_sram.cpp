#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "seu/device/gaa_model.hpp"
#include "seu/error.hpp"
#include "seu/io/config.hpp"
#include "seu/sram/butterfly.hpp"
#include "seu/sram/calibrate.hpp"
#include "seu/sram/cell.hpp"
#include "seu/sram/strike.hpp"
#include "support.hpp"

using namespace seu;
using namespace seu::sram;

namespace {

const SramConfig& shipped() {
  static const SramConfig config = test::shipped_config().sram;
  return config;
}

// KCL at CH and CL written out device by device, for the worst-case hold bias
// (WL = 0, BL = 0, BLB = vdd).
std::pair<double, double> hand_residual(const SramConfig& c, double ch, double cl) {
  using device::drain_current;
  const auto& d = c.devices;
  const double vdd = c.vdd, bl = 0.0, blb = vdd, wl = 0.0;
  // Current leaving each node through the devices attached to it.
  const double r_ch = -drain_current(d.pull_up, cl - vdd, ch - vdd) + drain_current(d.pull_down, cl, ch) +
                      drain_current(d.access, wl - blb, ch - blb);
  const double r_cl = -drain_current(d.pull_up, ch - vdd, cl - vdd) + drain_current(d.pull_down, ch, cl) +
                      drain_current(d.access, wl - bl, cl - bl);
  return {r_ch, r_cl};
}

// Grid point with the smallest residual inside a window.
std::pair<double, double> grid_oracle(const SramConfig& c, double ch_lo, double ch_hi, double cl_lo, double cl_hi) {
  double best = 1e300, best_ch = 0.0, best_cl = 0.0;
  const int n = 400;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double ch = ch_lo + (ch_hi - ch_lo) * i / n;
      const double cl = cl_lo + (cl_hi - cl_lo) * j / n;
      const auto [a, b] = hand_residual(c, ch, cl);
      const double r = std::hypot(a, b);
      if (r < best) best = r, best_ch = ch, best_cl = cl;
    }
  }
  return {best_ch, best_cl};
}

std::vector<VtcPoint> step_vtc(double trip, double width, double vdd) {
  std::vector<VtcPoint> v;
  for (int k = 0; k <= 350; ++k) {
    const double in = 0.002 * k;
    const double t = std::clamp((in - (trip - width)) / (2 * width), 0.0, 1.0);
    v.push_back({in, vdd * (1.0 - t)});
  }
  return v;
}

double max_deviation(const circuit::Waveforms& w) {
  double dev = 0.0;
  for (const auto& s : w.values) {
    for (double v : s) dev = std::max(dev, std::abs(v - s.front()));
  }
  return dev;
}

}  // namespace

TEST_CASE("cell topology and device roles") {
  const auto cell = build_cell(DeviceType::kType1, BiasMode::kHold);
  const auto& ts = cell.circuit.transistors();
  REQUIRE(ts.size() == 6);
  std::map<std::string, circuit::Transistor> by_name;
  for (const auto& t : ts) by_name.emplace(t.name, t);
  CHECK(by_name.at("N2").model.fins == 2);
  CHECK(by_name.at("P2").model.polarity == device::Polarity::kP);
  CHECK(by_name.at("ACC2").model.fins == 1);
  // Swapping CH<->CL and BL<->BLB maps the netlist onto itself.
  const auto swap = [&](circuit::NodeId n) {
    if (n == cell.ch) return cell.cl;
    if (n == cell.cl) return cell.ch;
    if (n == cell.bl) return cell.blb;
    if (n == cell.blb) return cell.bl;
    return n;
  };
  for (const auto& [a, b] : {std::pair{"P1", "P2"}, {"N1", "N2"}, {"ACC1", "ACC2"}}) {
    const auto& x = by_name.at(a);
    const auto& y = by_name.at(b);
    CHECK(swap(x.drain) == y.drain);
    CHECK(swap(x.gate) == y.gate);
    CHECK(swap(x.source) == y.source);
  }
}

TEST_CASE("worst-case hold keeps either stored state, matching a residual-grid oracle") {
  for (const auto& config : {SramConfig{}, shipped()}) {
    auto cell = build_cell(DeviceType::kType2, BiasMode::kWorstCaseHold, config);
    const auto v = circuit::dc_solve(cell.circuit, state_guess(cell, cell.ch));
    CHECK(v[cell.ch] > 0.65);
    CHECK(v[cell.cl] < 0.05);
    const auto [och, ocl] = grid_oracle(config, 0.6, 0.7, 0.0, 0.1);
    CHECK(std::abs(v[cell.ch] - och) < 5e-4);
    CHECK(std::abs(v[cell.cl] - ocl) < 5e-4);

    const auto w = circuit::dc_solve(cell.circuit, worst_case_state(cell));
    CHECK(w[cell.cl] > 0.65);
    CHECK(w[cell.ch] < 0.05);
    const auto [wch, wcl] = grid_oracle(config, 0.0, 0.1, 0.6, 0.7);
    CHECK(std::abs(w[cell.ch] - wch) < 5e-4);
    CHECK(std::abs(w[cell.cl] - wcl) < 5e-4);
  }
}

TEST_CASE("hold-mode states are mirror images") {
  auto cell = build_cell(DeviceType::kType1, BiasMode::kHold);
  const auto a = circuit::dc_solve(cell.circuit, state_guess(cell, cell.ch));
  const auto b = circuit::dc_solve(cell.circuit, state_guess(cell, cell.cl));
  CHECK(a[cell.ch] == doctest::Approx(b[cell.cl]).epsilon(1e-9));
  CHECK(a[cell.cl] == doctest::Approx(b[cell.ch]).epsilon(1e-9));
}

TEST_CASE("read disturb stays below the trip point") {
  for (auto type : {DeviceType::kType1, DeviceType::kType2}) {
    auto cell = build_cell(type, BiasMode::kRead);
    const auto v = circuit::dc_solve(cell.circuit, state_guess(cell, cell.ch));
    CHECK(v[cell.cl] > 0.0);
    // Trip point of the inverter driven by CL: where its read VTC crosses out = in.
    const auto vtc = half_cell_vtc(type, BiasMode::kRead, Side::kLeft);
    double trip = 0.0;
    for (std::size_t k = 1; k < vtc.size(); ++k) {
      if (vtc[k].out <= vtc[k].in) {
        trip = vtc[k].in;
        break;
      }
    }
    REQUIRE(trip > 0.0);
    CHECK(v[cell.cl] < trip);
  }
}

TEST_CASE("rotated butterfly on ideal inverters") {
  const double vdd = 0.7;
  const auto sym = extract_snm(BiasMode::kHold, step_vtc(0.35, 1e-3, vdd), step_vtc(0.35, 1e-3, vdd));
  CHECK(sym.snm == doctest::Approx(0.35).epsilon(0.01));
  CHECK(sym.lobe1 == doctest::Approx(sym.lobe2).epsilon(1e-9));

  // curve_a trips at CL = 0.3, curve_b at CH = 0.4: the CL-low lobe is a 0.3 V
  // square and the CL-high lobe a 0.4 V square.
  const auto asym = extract_snm(BiasMode::kHold, step_vtc(0.3, 1e-3, vdd), step_vtc(0.4, 1e-3, vdd));
  CHECK(asym.lobe1 == doctest::Approx(0.3).epsilon(0.01));
  CHECK(asym.lobe2 == doctest::Approx(0.4).epsilon(0.01));
  CHECK(asym.snm == doctest::Approx(0.3).epsilon(0.01));
}

TEST_CASE("SNM parity, symmetry and ordering") {
  std::map<std::pair<int, int>, SnmReport> r;
  for (int t = 1; t <= 2; ++t) {
    for (int m = 0; m < 3; ++m) {
      const auto type = t == 1 ? DeviceType::kType1 : DeviceType::kType2;
      const BiasMode mode[] = {BiasMode::kHold, BiasMode::kRead, BiasMode::kWrite};
      r.emplace(std::pair{t, m}, butterfly(type, mode[m]));
    }
  }
  for (int m = 0; m < 3; ++m) CHECK(std::abs(r.at({1, m}).snm - r.at({2, m}).snm) < 1e-3);
  for (int t = 1; t <= 2; ++t) {
    const auto& hold = r.at({t, 0});
    const auto& read = r.at({t, 1});
    const auto& write = r.at({t, 2});
    CHECK(std::abs(hold.lobe1 - hold.lobe2) < 1e-3);
    CHECK(hold.snm == std::min(hold.lobe1, hold.lobe2));
    CHECK(hold.snm > read.snm);
    CHECK(read.snm > 0.0);
    CHECK(write.snm > 0.0);  // writable
    CHECK(hold.curve_a.size() == 351);
  }
}

TEST_CASE("strike charge bookkeeping") {
  const SramConfig nominal;
  const auto cell2 = build_cell(DeviceType::kType2, BiasMode::kWorstCaseHold, nominal);
  const auto cell1 = build_cell(DeviceType::kType1, BiasMode::kWorstCaseHold, nominal);

  double q = 0.0;
  for (const auto& s : build_strike(cell2, ScenarioKind::kTop, 1.0, nominal.strike)) q += s.pulse.q_total;
  CHECK(q == doctest::Approx(0.0144 * (0.015 + 0.20)).epsilon(1e-12));
  CHECK(q == doctest::Approx(3.096e-3).epsilon(1e-12));

  for (double let : {0.0, 1.0, 69.0, 1000.0}) {
    for (const auto& s : build_strike(cell1, ScenarioKind::kSubstrate, let, nominal.strike)) {
      CHECK(s.pulse.q_total == 0.0);
    }
  }
  for (auto kind : kAllScenarios) {
    for (const auto* cell : {&cell1, &cell2}) {
      for (const auto& s : build_strike(*cell, kind, 0.0, nominal.strike)) CHECK(s.pulse.q_total == 0.0);
      const auto one = build_strike(*cell, kind, 1.0, nominal.strike);
      const auto many = build_strike(*cell, kind, 7.5, nominal.strike);
      for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(many[i].pulse.q_total == doctest::Approx(7.5 * one[i].pulse.q_total).epsilon(1e-14));
        CHECK(one[i].from == cell->cl);
        CHECK(one[i].pulse.t_peak == 50e-12);
        CHECK(one[i].pulse.sigma == 2e-12);
      }
    }
  }

  const auto channel = build_strike(cell2, ScenarioKind::kChannel, 1.0, nominal.strike);
  REQUIRE(channel.size() == 2);
  CHECK(channel[0].to == circuit::kGround);
  CHECK(channel[1].to == cell2.bl);
  CHECK(channel[0].pulse.q_total == doctest::Approx(0.0144 * 0.030 * 3.0).epsilon(1e-12));
  const auto ch1 = build_strike(cell1, ScenarioKind::kChannel, 1.0, nominal.strike);
  CHECK(ch1[0].pulse.q_total == doctest::Approx(0.0144 * 0.030).epsilon(1e-12));

  CHECK_THROWS_AS(parse_scenario("sideways"), ValidationError);
  CHECK_THROWS_AS(build_strike(cell2, ScenarioKind::kTop, -1.0, nominal.strike), ValidationError);
}

TEST_CASE("flip detection") {
  circuit::Waveforms w;
  w.nodes = {"CH", "CL"};
  w.times = {0.0, 1e-9};
  w.values = {{0.7, 0.02}, {0.0, 0.69}};
  CHECK(detect_flip(w, 0.7, 0.0, 0.7));
  w.values = {{0.7, 0.66}, {0.0, 0.05}};  // a dip that recovered
  CHECK_FALSE(detect_flip(w, 0.7, 0.0, 0.7));
  w.values = {{0.7, 0.30}, {0.0, 0.40}};  // crossed, but not separated by vdd / 2
  CHECK_FALSE(detect_flip(w, 0.7, 0.0, 0.7));

  const auto quiet = run_strike(ScenarioKind::kChannel, DeviceType::kType2, 0.0, shipped());
  CHECK_FALSE(quiet.flipped);
  CHECK(max_deviation(quiet.waveforms) < 1e-6);
  CHECK(quiet.waveforms.times.back() == doctest::Approx(1e-9));
}

TEST_CASE("shipped config: type 2 flips under a channel strike at LET_max") {
  CHECK(run_strike(ScenarioKind::kChannel, DeviceType::kType2, 1.0, shipped()).flipped);
  CHECK_FALSE(run_strike(ScenarioKind::kChannel, DeviceType::kType1, 1.0, shipped()).flipped);
}

TEST_CASE("BDI substrate immunity is exact") {
  for (double let : {1.0, 69.0, 1000.0}) {
    const auto run = run_strike(ScenarioKind::kSubstrate, DeviceType::kType1, let, shipped());
    CHECK(run.total_charge == 0.0);
    CHECK_FALSE(run.flipped);
    CHECK(max_deviation(run.waveforms) < 1e-6);
  }
}

TEST_CASE("critical LET: thresholds, bracket, monotonicity, ordering, mirror") {
  const auto sub1 = critical_let(ScenarioKind::kSubstrate, DeviceType::kType1, 69.0, shipped());
  CHECK_FALSE(sub1.let_crit.has_value());
  CHECK(sub1.status() == "no-flip-up-to(69)");

  std::map<std::pair<ScenarioKind, DeviceType>, CriticalLetResult> all;
  for (auto kind : kAllScenarios) {
    for (auto type : {DeviceType::kType1, DeviceType::kType2}) {
      all.emplace(std::pair{kind, type}, critical_let(kind, type, 100.0, shipped()));
    }
  }
  const auto& sub2 = all.at({ScenarioKind::kSubstrate, DeviceType::kType2});
  REQUIRE(sub2.let_crit);
  CHECK(std::abs(*sub2.let_crit / 0.35 - 1.0) <= 0.10);

  for (const auto& [key, r] : all) {
    if (!r.let_crit) continue;
    const double c = *r.let_crit;
    INFO(to_string(key.first) << " type " << to_string(key.second));
    CHECK_FALSE(run_strike(key.first, key.second, 0.99 * c, shipped()).flipped);
    CHECK(run_strike(key.first, key.second, 1.01 * c, shipped()).flipped);
    CHECK_FALSE(run_strike(key.first, key.second, 0.5 * c, shipped()).flipped);
    CHECK(run_strike(key.first, key.second, 2.0 * c, shipped()).flipped);
    CHECK(r.history.front() == std::pair{0.0, false});
  }

  for (auto kind : kAllScenarios) {
    const auto& t1 = all.at({kind, DeviceType::kType1});
    const auto& t2 = all.at({kind, DeviceType::kType2});
    REQUIRE(t2.let_crit);
    CHECK((!t1.let_crit || *t1.let_crit > *t2.let_crit));

    const auto mirrored = critical_let(kind, DeviceType::kType2, 100.0, shipped(), Side::kLeft);
    REQUIRE(mirrored.let_crit);
    CHECK(std::abs(*mirrored.let_crit / *t2.let_crit - 1.0) <= 0.01);
  }
  CHECK_THROWS_AS(critical_let(ScenarioKind::kTop, DeviceType::kType2, 0.0, shipped()), ValidationError);
}

TEST_CASE("halving dt moves strike endpoints by less than 1 mV") {
  for (double let : {0.5, 1.5}) {
    SramConfig fine = shipped();
    fine.transient.dt /= 2.0;
    const auto a = run_strike(ScenarioKind::kChannel, DeviceType::kType2, let, shipped());
    const auto b = run_strike(ScenarioKind::kChannel, DeviceType::kType2, let, fine);
    CHECK(a.flipped == b.flipped);
    CHECK(std::abs(a.waveforms.final_value("CL") - b.waveforms.final_value("CL")) < 1e-3);
    CHECK(std::abs(a.waveforms.final_value("CH") - b.waveforms.final_value("CH")) < 1e-3);
  }
}

TEST_CASE("calibration") {
  SUBCASE("empty target list returns the start config") {
    const auto r = calibrate_collection({}, shipped());
    CHECK(r.success);
    CHECK(r.adjustments == 0);
    io::RunConfig a, b;
    a.sram = shipped();
    b.sram = r.config;
    CHECK(io::to_json(a) == io::to_json(b));
  }
  SUBCASE("the shipped config is a fixed point") {
    const auto r = calibrate_collection(reference_targets(), shipped());
    CHECK(r.success);
    const auto rel = [](double x, double y) { return std::abs(x / y - 1.0); };
    CHECK(rel(r.config.node_capacitance, shipped().node_capacitance) <= 0.005);
    CHECK(rel(r.config.strike.collection.funnel_channel, shipped().strike.collection.funnel_channel) <= 0.005);
    CHECK(rel(r.config.strike.collection.top_funnel_length, shipped().strike.collection.top_funnel_length) <=
          0.005);
    CHECK(r.report().find("succeeded") != std::string::npos);
  }
  SUBCASE("calibrating from the nominal defaults meets every target") {
    const auto r = calibrate_collection(reference_targets(), SramConfig{});
    CHECK(r.success);
    REQUIRE(r.outcomes.size() == 5);
    for (const auto& o : r.outcomes) CHECK(o.satisfied);
  }
  SUBCASE("unachievable targets are reported") {
    const auto r = calibrate_collection({{ScenarioKind::kSubstrate, DeviceType::kType1, 0.35, Relation::kEqual}},
                                        shipped());
    CHECK_FALSE(r.success);
    REQUIRE(r.outcomes.size() == 1);
    CHECK(r.outcomes[0].detail.find("no free parameter") != std::string::npos);

    const auto above = calibrate_collection({{ScenarioKind::kChannel, DeviceType::kType2, 5.0, Relation::kAbove}},
                                            shipped());
    CHECK_FALSE(above.success);
    CHECK(above.report().find("FAIL") != std::string::npos);
  }
}

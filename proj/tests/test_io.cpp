#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "seu/io/config.hpp"
#include "seu/io/csv.hpp"
#include "seu/io/parallel.hpp"
#include "seu/io/report.hpp"
#include "support.hpp"

using namespace seu;
using namespace seu::io;

namespace {

ConfigError::Kind kind_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.kind();
  }
  FAIL("expected a config error");
  return ConfigError::Kind::kSyntax;
}

std::string message_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("empty object gives all defaults") {
  const auto c = parse_config_text("{}");
  const RunConfig d;
  CHECK(to_json(c) == to_json(d));
  CHECK(c.sram.vdd == 0.7);
  CHECK(c.sram.node_capacitance == 0.05e-15);
  CHECK(c.sram.transient.dt == 0.1e-12);
  CHECK(c.sram.transient.t_stop == 1e-9);
  CHECK(c.sram.strike.sigma == 2e-12);
  CHECK(c.materials.conversion.mode == let::ConversionMode::kPaperCompat);
  CHECK(c.output.precision == 9);
  CHECK(c.material().name() == "si");
}

TEST_CASE("constraint errors name the key") {
  const std::string bad = R"({"scenarios": {"sigma": -1}})";
  CHECK(kind_of(bad) == ConfigError::Kind::kConstraint);
  CHECK(message_of(bad).find("scenarios.sigma") != std::string::npos);
  CHECK(message_of(R"({"devices": {"pull_down": {"fins": 0}}})").find("devices.pull_down.fins") !=
        std::string::npos);
  CHECK(message_of(R"({"circuit": {"vdd": "high"}})").find("circuit.vdd") != std::string::npos);
  CHECK(message_of(R"({"materials": {"si_mole_fraction": 1.5}})").find("materials.si_mole_fraction") !=
        std::string::npos);
  CHECK(message_of(R"({"materials": {"conversion": {"mode": "magic"}}})").find("materials.conversion.mode") !=
        std::string::npos);
  CHECK(kind_of(R"({"circuit": {"integrator": "rk4"}})") == ConfigError::Kind::kConstraint);
  CHECK(kind_of(R"({"circuit": 3})") == ConfigError::Kind::kConstraint);
}

TEST_CASE("error kinds are distinct") {
  CHECK(kind_of(R"({"scenarios": {"funnel": 2}})") == ConfigError::Kind::kUnknownKey);
  CHECK(message_of(R"({"scenarios": {"funnel": 2}})").find("scenarios.funnel") != std::string::npos);
  CHECK(kind_of(R"({"extra": {}})") == ConfigError::Kind::kUnknownKey);
  CHECK(kind_of("{\"circuit\": ") == ConfigError::Kind::kSyntax);
  try {
    load_config("/nonexistent/config.json");
    FAIL("expected a missing-file error");
  } catch (const ConfigError& e) {
    CHECK(e.kind() == ConfigError::Kind::kMissingFile);
  }
}

TEST_CASE("round trip and overrides") {
  const std::string text = R"({
    "materials": {"si_mole_fraction": 0.5, "density": 4.0,
                  "conversion": {"mode": "first-principles", "e_pair": 3.7}},
    "devices": {"access": {"fins": 2, "v_t": 0.3}},
    "circuit": {"vdd": 0.8, "integrator": "trapezoidal", "dt": 5e-14},
    "scenarios": {"funnel_channel": 2.5, "let_max": 1.4},
    "output": {"directory": "out", "precision": 6}})";
  const auto c = parse_config_text(text);
  CHECK(c.material().si_mole_fraction() == 0.5);
  CHECK(c.material().density() == 4.0);
  CHECK(c.materials.conversion.mode == let::ConversionMode::kFirstPrinciples);
  CHECK(c.sram.strike.conversion.e_pair_ev == 3.7);
  CHECK(c.sram.devices.access.fins == 2);
  CHECK(c.sram.devices.access.v_t == 0.3);
  CHECK(c.sram.devices.pull_down.fins == 2);
  CHECK(c.sram.transient.integrator == circuit::Integrator::kTrapezoidal);
  CHECK(c.sram.strike.collection.funnel_channel == 2.5);
  CHECK(c.output.directory == "out");
  const auto again = parse_config(to_json(c));
  CHECK(to_json(again) == to_json(c));
}

TEST_CASE("shipped config loads and differs from the nominal collection geometry") {
  const auto c = test::shipped_config();
  CHECK(c.sram.node_capacitance > sram::SramConfig{}.node_capacitance);
  CHECK(c.sram.strike.collection.top_funnel_length != sram::CollectionConfig{}.top_funnel_length);
}

TEST_CASE("CSV writers use nine significant digits") {
  const let::LetCurve curve{let::Material::silicon(), {{0.5, 1.0 / 3.0}, {1.0, 2.0}}};
  std::ostringstream a;
  write_let_curve_csv(a, curve);
  CHECK(a.str() == "energy_MeV,let_MeVcm2_per_mg\n0.5,0.333333333\n1,2\n");
  const let::ConversionSettings conv;
  std::ostringstream b;
  write_let_curve_csv(b, curve, &conv);
  CHECK(b.str().starts_with("energy_MeV,let_MeVcm2_per_mg,charge_pC_per_um\n0.5,0.333333333,0.00311688312\n"));

  const IvPoint iv[] = {{0.7, 0.05, 1.23456789012e-6}};
  std::ostringstream c;
  write_iv_csv(c, iv);
  CHECK(c.str() == "v_gs,v_ds,i_d\n0.7,0.05,1.23456789e-06\n");

  sram::CriticalLetResult r1{sram::ScenarioKind::kSubstrate, sram::DeviceType::kType1, std::nullopt, 69.0, {}};
  sram::CriticalLetResult r2{sram::ScenarioKind::kTop, sram::DeviceType::kType2, 0.3493652, 100.0, {}};
  const sram::CriticalLetResult rs[] = {r1, r2};
  std::ostringstream d;
  write_critical_let_csv(d, rs);
  CHECK(d.str() ==
        "scenario,device_type,let_crit_multiple,status\nsubstrate,1,inf,no-flip-up-to(69)\ntop,2,0.3493652,flip\n");

  sram::SnmReport snm{sram::BiasMode::kHold, 0.25, 0.25, 0.26, {{0.0, 0.7}, {0.7, 0.0}}, {{0.0, 0.7}, {0.7, 0.0}}};
  std::ostringstream e;
  write_vtc_csv(e, snm);
  CHECK(e.str() == "v_in_V,vtc_a_out_V,vtc_b_out_V\n0,0.7,0.7\n0.7,0,0\n");
  CHECK(snm_summary(snm) == "mode=hold snm_V=0.25 lobe1_V=0.25 lobe2_V=0.26");
}

TEST_CASE("parallel_for runs every index once and propagates errors") {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; }, 4);
  for (auto& h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) { if (i == 3) throw std::runtime_error("x"); }, 3),
                  std::runtime_error);
  parallel_for(0, [](std::size_t) { FAIL("no work expected"); }, 2);

  setenv("SEU_FORGE_THREADS", "3", 1);
  CHECK(thread_count() == 3);
  setenv("SEU_FORGE_THREADS", "0", 1);
  CHECK(thread_count() >= 1);
  setenv("SEU_FORGE_THREADS", "many", 1);
  CHECK_THROWS_AS(thread_count(), std::invalid_argument);
  unsetenv("SEU_FORGE_THREADS");
}

TEST_CASE("report on the shipped config passes and is order-stable") {
  const auto config = test::shipped_config();
  const auto serial = run_report(config, 1);
  const auto threaded = run_report(config, 4);
  CHECK(serial.passed());
  CHECK(serial.rows.size() == 10);
  CHECK(serial.table() == threaded.table());
  CHECK(serial.csv() == threaded.csv());
}

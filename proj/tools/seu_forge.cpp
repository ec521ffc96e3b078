// seu_forge: alpha-particle SEU analysis of 6T GAA-FET SRAM cells.
//
// Exit codes: 0 ok, 1 unexpected failure, 2 usage, 3 config, 4 solver,
// 5 validation or domain, 6 a report/calibration check failed.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "seu/device/gaa_model.hpp"
#include "seu/error.hpp"
#include "seu/io/config.hpp"
#include "seu/io/csv.hpp"
#include "seu/io/parallel.hpp"
#include "seu/io/report.hpp"
#include "seu/sram/butterfly.hpp"
#include "seu/sram/calibrate.hpp"
#include "seu/sram/strike.hpp"

namespace {

using namespace seu;

enum Exit { kOk = 0, kOther = 1, kUsage = 2, kConfig = 3, kSolver = 4, kInvalid = 5, kCheckFailed = 6 };

struct Options {
  std::string config;
  std::string out;
  std::string material;
  std::string type = "2";
  std::string scenario;
  std::string mode = "hold";
  std::string polarity = "n";
  std::string write;
  double let = 1.0;
  double energy = 5.5;
  double emin = 0.01;
  double emax = 20.0;
  std::size_t points = 200;
  std::optional<double> bound;
  bool all_types = true;
};

struct Context {
  io::RunConfig config;
  std::string out_dir;
  int precision = io::kCsvPrecision;

  std::string path(const std::string& file) const {
    return (std::filesystem::path(out_dir) / file).string();
  }
  void emit(const std::string& file, const std::string& content) const {
    io::write_file(path(file), content);
    std::cout << "wrote " << path(file) << '\n';
  }
};

Context make_context(const Options& opt) {
  Context ctx;
  if (!opt.config.empty()) ctx.config = io::load_config(opt.config);
  ctx.out_dir = opt.out.empty() ? ctx.config.output.directory : opt.out;
  ctx.precision = ctx.config.output.precision;
  return ctx;
}

let::StoppingModel stopping_model(const Context& ctx, const Options& opt) {
  if (opt.material.empty()) return ctx.config.stopping_model();
  const auto& m = ctx.config.materials;
  return let::StoppingModel(let::Material::parse(opt.material)
                                .with_low_energy_coeff("Si", m.si_low_energy_coeff)
                                .with_low_energy_coeff("Ge", m.ge_low_energy_coeff));
}

std::string file_tag(std::string s) {
  std::replace(s.begin(), s.end(), ':', '-');
  return s;
}

std::string num(double x, int precision) { return fmt::format("{:.{}g}", x, precision); }

int cmd_let_curve(const Options& opt) {
  const Context ctx = make_context(opt);
  const auto model = stopping_model(ctx, opt);
  const auto grid = let::log_grid(opt.emin, opt.emax, opt.points);
  const auto curve = let::let_curve(model, grid);
  std::ostringstream s;
  io::write_let_curve_csv(s, curve, &ctx.config.materials.conversion, ctx.precision);
  ctx.emit(fmt::format("let_curve_{}.csv", file_tag(model.material().name())), s.str());
  return kOk;
}

int cmd_let_max(const Options& opt) {
  const Context ctx = make_context(opt);
  const auto model = stopping_model(ctx, opt);
  const auto peak = let::find_let_max(model, ctx.config.materials.conversion);
  std::cout << fmt::format("material={} E_peak_MeV={} LET_max_MeVcm2_per_mg={} charge_pC_per_um={}\n",
                           model.material().name(), num(peak.e_peak, ctx.precision),
                           num(peak.let_max, ctx.precision), num(peak.charge_density, ctx.precision));
  return kOk;
}

int cmd_range(const Options& opt) {
  const Context ctx = make_context(opt);
  const auto model = stopping_model(ctx, opt);
  std::cout << fmt::format("material={} energy_MeV={} csda_range_um={}\n", model.material().name(),
                           num(opt.energy, ctx.precision),
                           num(let::csda_range(opt.energy, model), ctx.precision));
  return kOk;
}

int cmd_iv(const Options& opt) {
  const Context ctx = make_context(opt);
  if (opt.polarity != "n" && opt.polarity != "p") {
    throw ValidationError(fmt::format("unknown polarity '{}' (expected n or p)", opt.polarity));
  }
  const bool n = opt.polarity == "n";
  const auto& devices = ctx.config.sram.devices;
  device::DeviceModel m = n ? devices.pull_down : devices.pull_up;
  m.device_type = sram::parse_device_type(opt.type);
  const double sign = n ? 1.0 : -1.0;
  const double vdd = ctx.config.sram.vdd;
  std::vector<io::IvPoint> points;
  // Integer steps keep the grid identical across runs and platforms.
  for (int g = 0; g * 0.05 <= vdd + 1e-12; ++g) {
    for (int d = 0; d * 0.01 <= vdd + 1e-12; ++d) {
      const double vgs = sign * g * 0.05;
      const double vds = sign * d * 0.01;
      points.push_back({vgs, vds, device::drain_current(m, vgs, vds)});
    }
  }
  std::ostringstream s;
  io::write_iv_csv(s, points, ctx.precision);
  ctx.emit(fmt::format("iv_{}_type{}.csv", opt.polarity, sram::to_string(m.device_type)), s.str());
  return kOk;
}

int cmd_butterfly(const Options& opt) {
  const Context ctx = make_context(opt);
  const auto type = sram::parse_device_type(opt.type);
  const auto mode = sram::parse_bias_mode(opt.mode);
  const auto report = sram::butterfly(type, mode, ctx.config.sram);
  std::ostringstream s;
  io::write_vtc_csv(s, report, ctx.precision);
  ctx.emit(fmt::format("butterfly_type{}_{}.csv", sram::to_string(type), sram::to_string(mode)), s.str());
  std::cout << "type=" << sram::to_string(type) << ' ' << io::snm_summary(report, ctx.precision) << '\n';
  return kOk;
}

int cmd_strike(const Options& opt) {
  const Context ctx = make_context(opt);
  const auto type = sram::parse_device_type(opt.type);
  const auto kind = sram::parse_scenario(opt.scenario.empty() ? "channel" : opt.scenario);
  const auto run = sram::run_strike(kind, type, opt.let, ctx.config.sram);
  std::ostringstream s;
  circuit::write_waveforms_csv(s, run.waveforms, ctx.precision);
  ctx.emit(fmt::format("strike_{}_type{}_let{}.csv", sram::to_string(kind), sram::to_string(type),
                       num(opt.let, ctx.precision)),
           s.str());
  const auto& cl = run.waveforms.series("CL");
  double dev = 0.0;
  for (double v : cl) dev = std::max(dev, std::abs(v - cl.front()));
  std::cout << fmt::format("scenario={} type={} let={} charge_pC={} flip={} max_dCL_V={}\n",
                           sram::to_string(kind), sram::to_string(type), num(opt.let, ctx.precision),
                           num(run.total_charge, ctx.precision), run.flipped ? "true" : "false",
                           num(dev, ctx.precision));
  return kOk;
}

int cmd_critical_let(const Options& opt) {
  const Context ctx = make_context(opt);
  std::vector<sram::ScenarioKind> kinds;
  if (opt.scenario.empty()) {
    kinds.assign(std::begin(sram::kAllScenarios), std::end(sram::kAllScenarios));
  } else {
    kinds.push_back(sram::parse_scenario(opt.scenario));
  }
  std::vector<sram::DeviceType> types;
  if (opt.all_types) {
    types = {sram::DeviceType::kType1, sram::DeviceType::kType2};
  } else {
    types.push_back(sram::parse_device_type(opt.type));
  }
  struct Job {
    sram::ScenarioKind kind;
    sram::DeviceType type;
  };
  std::vector<Job> jobs;
  for (auto k : kinds) {
    for (auto t : types) jobs.push_back({k, t});
  }
  const double bound = opt.bound.value_or(ctx.config.sram.strike.bound);
  std::vector<sram::CriticalLetResult> results(jobs.size());
  io::parallel_for(jobs.size(), [&](std::size_t i) {
    results[i] = sram::critical_let(jobs[i].kind, jobs[i].type, bound, ctx.config.sram);
  });
  std::ostringstream s;
  io::write_critical_let_csv(s, results, ctx.precision);
  ctx.emit("critical_let.csv", s.str());
  std::cout << s.str();
  return kOk;
}

int cmd_calibrate(const Options& opt) {
  const Context ctx = make_context(opt);
  const auto result = sram::calibrate_collection(sram::reference_targets(), ctx.config.sram);
  io::RunConfig calibrated = ctx.config;
  calibrated.sram = result.config;
  const std::string json = io::to_json(calibrated).dump(2) + "\n";
  if (opt.write.empty()) {
    ctx.emit("calibrated.json", json);
  } else {
    io::write_file(opt.write, json);
    std::cout << "wrote " << opt.write << '\n';
  }
  std::cout << result.report();
  return result.success ? kOk : kCheckFailed;
}

int cmd_report(const Options& opt) {
  const Context ctx = make_context(opt);
  const auto report = io::run_report(ctx.config);
  ctx.emit("report.csv", report.csv());
  std::cout << report.table();
  return report.passed() ? kOk : kCheckFailed;
}

int run(int argc, char** argv) {
  CLI::App app{"Alpha-particle single-event upset analysis for 6T GAA-FET SRAM cells", "seu_forge"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--config", opt.config, "JSON run configuration");
  app.add_option("--out", opt.out, "Output directory (overrides output.directory)");

  const auto material = [&](CLI::App* c) {
    c->add_option("--material", opt.material, "si, ge or sige:<x> (default: from config)");
  };
  const auto type = [&](CLI::App* c) { c->add_option("--type", opt.type, "Device type 1 (BDI) or 2")->capture_default_str(); };

  auto* let_curve = app.add_subcommand("let-curve", "Stopping power vs energy CSV");
  material(let_curve);
  let_curve->add_option("--emin", opt.emin, "Lowest energy, MeV")->capture_default_str();
  let_curve->add_option("--emax", opt.emax, "Highest energy, MeV")->capture_default_str();
  let_curve->add_option("--points", opt.points, "Log-spaced grid points")->capture_default_str();

  auto* let_max = app.add_subcommand("let-max", "Bragg peak energy and LET");
  material(let_max);

  auto* range = app.add_subcommand("range", "CSDA range of an alpha particle");
  material(range);
  range->add_option("--energy", opt.energy, "Initial energy, MeV")->capture_default_str();

  auto* iv = app.add_subcommand("iv", "Transistor I-V sweep CSV");
  type(iv);
  iv->add_option("--polarity", opt.polarity, "n (pull-down model) or p (pull-up model)")->capture_default_str();

  auto* butterfly = app.add_subcommand("butterfly", "Butterfly VTCs and static noise margin");
  type(butterfly);
  butterfly->add_option("--mode", opt.mode, "hold, read or write")->capture_default_str();

  auto* strike = app.add_subcommand("strike", "Transient strike waveforms");
  type(strike);
  strike->add_option("--scenario", opt.scenario, "channel, substrate or top (default channel)");
  strike->add_option("--let", opt.let, "LET as a multiple of LET_max")->capture_default_str();

  auto* critical = app.add_subcommand("critical-let", "Critical LET by bisection");
  critical->add_option("--scenario", opt.scenario, "channel, substrate or top (default: all)");
  auto* type_opt = critical->add_option("--type", opt.type, "Device type 1 or 2 (default: both)");
  critical->add_option("--bound", opt.bound, "Search ceiling, x LET_max (default: scenarios.bound)");

  auto* calibrate = app.add_subcommand("calibrate", "Fit collection parameters to the reference thresholds");
  calibrate->add_option("--write", opt.write, "Path of the calibrated config (default <out>/calibrated.json)");

  auto* report = app.add_subcommand("report", "Run the reproduction suite and print a summary table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  opt.all_types = type_opt->count() == 0;

  try {
    if (*let_curve) return cmd_let_curve(opt);
    if (*let_max) return cmd_let_max(opt);
    if (*range) return cmd_range(opt);
    if (*iv) return cmd_iv(opt);
    if (*butterfly) return cmd_butterfly(opt);
    if (*strike) return cmd_strike(opt);
    if (*critical) return cmd_critical_let(opt);
    if (*calibrate) return cmd_calibrate(opt);
    if (*report) return cmd_report(opt);
  } catch (const io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  } catch (const seu::Error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }

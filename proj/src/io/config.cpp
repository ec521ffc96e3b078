#include "seu/io/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace seu::io {

using nlohmann::json;

namespace {

using Kind = ConfigError::Kind;

// A JSON object whose keys must all be consumed.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(Kind::kConstraint, path_, "must be an object");
  }

  std::string key_path(const char* key) const {
    return path_.empty() ? std::string(key) : path_ + "." + key;
  }

  const json* find(const char* key) {
    seen_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  void number(const char* key, double& out, const std::function<bool(double)>& ok,
              const char* rule) {
    const json* v = find(key);
    if (!v) return;
    if (!v->is_number()) fail(Kind::kConstraint, key_path(key), "must be a number");
    const double x = v->get<double>();
    if (!std::isfinite(x) || !ok(x)) fail(Kind::kConstraint, key_path(key), rule);
    out = x;
  }

  void integer(const char* key, int& out, int min_value) {
    const json* v = find(key);
    if (!v) return;
    if (!v->is_number_integer()) fail(Kind::kConstraint, key_path(key), "must be an integer");
    const auto x = v->get<long long>();
    if (x < min_value) fail(Kind::kConstraint, key_path(key), fmt::format("must be >= {}", min_value));
    out = static_cast<int>(x);
  }

  bool string(const char* key, std::string& out) {
    const json* v = find(key);
    if (!v) return false;
    if (!v->is_string()) fail(Kind::kConstraint, key_path(key), "must be a string");
    out = v->get<std::string>();
    return true;
  }

  std::optional<Section> child(const char* key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return Section(*v, key_path(key));
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) fail(Kind::kUnknownKey, key_path(key.c_str()), "unknown key");
    }
  }

  [[noreturn]] static void fail(Kind kind, const std::string& key, const std::string& rule) {
    throw ConfigError(kind, fmt::format("config key '{}': {}", key, rule));
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

const auto positive = [](double x) { return x > 0.0; };
const auto non_negative = [](double x) { return x >= 0.0; };

void read_device(Section& s, device::DeviceModel& m) {
  s.number("v_t", m.v_t, positive, "must be > 0");
  s.number("n_slope", m.n_slope, [](double x) { return x >= 1.0; }, "must be >= 1");
  s.number("i_spec", m.i_spec, positive, "must be > 0");
  s.integer("fins", m.fins, 1);
  s.number("lambda_dibl", m.lambda_dibl, [](double) { return true; }, "must be finite");
  s.finish();
}

json device_json(const device::DeviceModel& m) {
  return {{"v_t", m.v_t}, {"n_slope", m.n_slope}, {"i_spec", m.i_spec}, {"fins", m.fins},
          {"lambda_dibl", m.lambda_dibl}};
}

}  // namespace

let::Material RunConfig::material() const {
  const double x = materials.si_mole_fraction;
  let::Material m = x == 1.0   ? let::Material::silicon()
                    : x == 0.0 ? let::Material::germanium()
                               : let::Material::sige(x);
  m = m.with_low_energy_coeff("Si", materials.si_low_energy_coeff)
          .with_low_energy_coeff("Ge", materials.ge_low_energy_coeff);
  if (materials.density) m = m.with_density(*materials.density);
  return m;
}

let::StoppingModel RunConfig::stopping_model() const {
  if (materials.table) return let::StoppingModel(material(), let::StoppingTable::load(*materials.table));
  return let::StoppingModel(material());
}

RunConfig parse_config(const json& doc) {
  RunConfig cfg;
  Section root(doc, "");

  if (auto s = root.child("materials")) {
    auto& m = cfg.materials;
    s->number("si_mole_fraction", m.si_mole_fraction, [](double x) { return x >= 0.0 && x <= 1.0; },
              "must lie in [0, 1]");
    double density = 0.0;
    if (s->find("density")) {
      s->number("density", density, positive, "must be > 0");
      m.density = density;
    }
    s->number("si_low_energy_coeff", m.si_low_energy_coeff, positive, "must be > 0");
    s->number("ge_low_energy_coeff", m.ge_low_energy_coeff, positive, "must be > 0");
    std::string table;
    if (s->string("table", table)) m.table = table;
    if (auto c = s->child("conversion")) {
      std::string mode;
      if (c->string("mode", mode)) {
        if (mode == "paper-compat") {
          m.conversion.mode = let::ConversionMode::kPaperCompat;
        } else if (mode == "first-principles") {
          m.conversion.mode = let::ConversionMode::kFirstPrinciples;
        } else {
          Section::fail(Kind::kConstraint, "materials.conversion.mode",
                        "must be 'paper-compat' or 'first-principles'");
        }
      }
      c->number("e_pair", m.conversion.e_pair_ev, positive, "must be > 0");
      c->number("paper_factor", m.conversion.paper_factor, positive, "must be > 0");
      c->finish();
    }
    s->finish();
  }

  auto& sram = cfg.sram;
  if (auto s = root.child("devices")) {
    if (auto d = s->child("pull_up")) read_device(*d, sram.devices.pull_up);
    if (auto d = s->child("pull_down")) read_device(*d, sram.devices.pull_down);
    if (auto d = s->child("access")) read_device(*d, sram.devices.access);
    s->finish();
  }

  if (auto s = root.child("circuit")) {
    s->number("vdd", sram.vdd, positive, "must be > 0");
    s->number("node_capacitance", sram.node_capacitance, positive, "must be > 0");
    s->number("dt", sram.transient.dt, positive, "must be > 0");
    s->number("t_stop", sram.transient.t_stop, positive, "must be > 0");
    std::string integrator;
    if (s->string("integrator", integrator)) {
      if (integrator == "backward-euler") {
        sram.transient.integrator = circuit::Integrator::kBackwardEuler;
      } else if (integrator == "trapezoidal") {
        sram.transient.integrator = circuit::Integrator::kTrapezoidal;
      } else {
        Section::fail(Kind::kConstraint, "circuit.integrator", "must be 'backward-euler' or 'trapezoidal'");
      }
    }
    s->finish();
  }

  if (auto s = root.child("scenarios")) {
    auto& st = sram.strike;
    auto& col = st.collection;
    s->number("let_max", st.let_max, positive, "must be > 0");
    s->number("t_peak", st.t_peak, positive, "must be > 0");
    s->number("sigma", st.sigma, positive, "must be > 0");
    s->number("bound", st.bound, positive, "must be > 0");
    s->number("channel_length", col.channel_length, non_negative, "must be >= 0");
    s->number("channel_access_length", col.channel_access_length, non_negative, "must be >= 0");
    s->number("funnel_channel", col.funnel_channel, non_negative, "must be >= 0");
    s->number("substrate_length", col.substrate_length, non_negative, "must be >= 0");
    s->number("top_sheet_length", col.top_sheet_length, non_negative, "must be >= 0");
    s->number("top_funnel_length", col.top_funnel_length, non_negative, "must be >= 0");
    s->finish();
  }

  if (auto s = root.child("output")) {
    s->string("directory", cfg.output.directory);
    s->integer("precision", cfg.output.precision, 1);
    s->finish();
  }
  root.finish();

  // The conversion used for strikes follows the materials section.
  sram.strike.conversion = cfg.materials.conversion;
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(Kind::kSyntax, fmt::format("malformed JSON: {}", e.what()));
  }
  return parse_config(doc);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(Kind::kMissingFile, fmt::format("cannot open config file '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

json to_json(const RunConfig& cfg) {
  const auto& m = cfg.materials;
  const auto& s = cfg.sram;
  const auto& col = s.strike.collection;
  json materials = {
      {"si_mole_fraction", m.si_mole_fraction},
      {"si_low_energy_coeff", m.si_low_energy_coeff},
      {"ge_low_energy_coeff", m.ge_low_energy_coeff},
      {"conversion",
       {{"mode", m.conversion.mode == let::ConversionMode::kPaperCompat ? "paper-compat" : "first-principles"},
        {"e_pair", m.conversion.e_pair_ev},
        {"paper_factor", m.conversion.paper_factor}}}};
  if (m.density) materials["density"] = *m.density;
  if (m.table) materials["table"] = *m.table;
  return {
      {"materials", materials},
      {"devices",
       {{"pull_up", device_json(s.devices.pull_up)},
        {"pull_down", device_json(s.devices.pull_down)},
        {"access", device_json(s.devices.access)}}},
      {"circuit",
       {{"vdd", s.vdd},
        {"node_capacitance", s.node_capacitance},
        {"dt", s.transient.dt},
        {"t_stop", s.transient.t_stop},
        {"integrator",
         s.transient.integrator == circuit::Integrator::kTrapezoidal ? "trapezoidal" : "backward-euler"}}},
      {"scenarios",
       {{"let_max", s.strike.let_max},
        {"t_peak", s.strike.t_peak},
        {"sigma", s.strike.sigma},
        {"bound", s.strike.bound},
        {"channel_length", col.channel_length},
        {"channel_access_length", col.channel_access_length},
        {"funnel_channel", col.funnel_channel},
        {"substrate_length", col.substrate_length},
        {"top_sheet_length", col.top_sheet_length},
        {"top_funnel_length", col.top_funnel_length}}},
      {"output", {{"directory", cfg.output.directory}, {"precision", cfg.output.precision}}}};
}

}  // namespace seu::io

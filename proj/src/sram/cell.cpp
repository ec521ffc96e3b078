#include "seu/sram/cell.hpp"

#include <cmath>

#include <fmt/format.h>

#include "seu/error.hpp"
#include "seu/let/material.hpp"

namespace seu::sram {

CellDevices default_devices() {
  CellDevices d{device::default_pmos(), device::default_nmos(), device::default_nmos()};
  d.pull_up.fins = 1;
  d.pull_down.fins = 2;
  d.access.fins = 1;
  return d;
}

void CollectionConfig::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"channel_length", channel_length},     {"channel_access_length", channel_access_length},
      {"funnel_channel", funnel_channel},     {"substrate_length", substrate_length},
      {"top_sheet_length", top_sheet_length}, {"top_funnel_length", top_funnel_length}};
  for (const auto& [name, value] : fields) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw ValidationError(fmt::format("{} must be a finite non-negative number", name));
    }
  }
}

double StrikeConfig::charge_density() const {
  return let::let_to_charge_density(let_max, let::Material::silicon(), conversion);
}

void StrikeConfig::validate() const {
  if (!(let_max > 0.0)) throw ValidationError("let_max must be positive");
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
  if (!(t_peak > 0.0)) throw ValidationError("t_peak must be positive");
  if (!(bound > 0.0)) throw ValidationError("bound must be positive");
  conversion.validate();
  collection.validate();
}

void SramConfig::validate() const {
  if (!(vdd > 0.0)) throw ValidationError("vdd must be positive");
  if (!(node_capacitance > 0.0)) throw ValidationError("node_capacitance must be positive");
  devices.pull_up.validate();
  devices.pull_down.validate();
  devices.access.validate();
  if (devices.pull_up.polarity != device::Polarity::kP) throw ValidationError("pull-up must be p-type");
  if (devices.pull_down.polarity != device::Polarity::kN ||
      devices.access.polarity != device::Polarity::kN) {
    throw ValidationError("pull-down and access devices must be n-type");
  }
  if (!(transient.dt > 0.0) || !(transient.t_stop > 0.0)) {
    throw ValidationError("dt and t_stop must be positive");
  }
  strike.validate();
}

Cell build_cell(DeviceType type, BiasMode bias, const SramConfig& config, Side side) {
  config.validate();
  Cell cell{{}, type, bias, side, config.vdd, 0, 0, 0, 0, 0, 0};
  auto& c = cell.circuit;
  cell.vdd_node = c.add_node("VDD");
  cell.ch = c.add_node("CH");
  cell.cl = c.add_node("CL");
  cell.wl = c.add_node("WL");
  cell.bl = c.add_node("BL");
  cell.blb = c.add_node("BLB");

  auto model = [type](device::DeviceModel m) {
    m.device_type = type;
    return m;
  };
  const auto& d = config.devices;
  c.add_transistor("P1", model(d.pull_up), cell.ch, cell.cl, cell.vdd_node);
  c.add_transistor("N1", model(d.pull_down), cell.ch, cell.cl, circuit::kGround);
  c.add_transistor("ACC1", model(d.access), cell.ch, cell.wl, cell.blb);
  c.add_transistor("P2", model(d.pull_up), cell.cl, cell.ch, cell.vdd_node);
  c.add_transistor("N2", model(d.pull_down), cell.cl, cell.ch, circuit::kGround);
  c.add_transistor("ACC2", model(d.access), cell.cl, cell.wl, cell.bl);

  const double vdd = config.vdd;
  double wl = 0.0, bl = vdd, blb = vdd;
  switch (bias) {
    case BiasMode::kWorstCaseHold:
      wl = 0.0;
      bl = side == Side::kRight ? 0.0 : vdd;
      blb = side == Side::kRight ? vdd : 0.0;
      break;
    case BiasMode::kHold:
      wl = 0.0;
      break;
    case BiasMode::kRead:
      wl = vdd;
      break;
    case BiasMode::kWrite:
      wl = vdd;
      bl = 0.0;
      break;
  }
  c.add_voltage_source(cell.vdd_node, vdd);
  c.add_voltage_source(cell.wl, wl);
  c.add_voltage_source(cell.bl, bl);
  c.add_voltage_source(cell.blb, blb);
  c.add_capacitor(cell.ch, config.node_capacitance);
  c.add_capacitor(cell.cl, config.node_capacitance);
  return cell;
}

circuit::NodeVoltages state_guess(const Cell& cell, circuit::NodeId high_node) {
  circuit::NodeVoltages v(cell.circuit.node_count(), 0.0);
  const circuit::NodeId low_node = high_node == cell.ch ? cell.cl : cell.ch;
  v[static_cast<std::size_t>(high_node)] = cell.vdd;
  v[static_cast<std::size_t>(low_node)] = 0.0;
  return v;
}

circuit::NodeVoltages worst_case_state(const Cell& cell) {
  return state_guess(cell, cell.struck_node());
}

std::string_view to_string(DeviceType type) { return type == DeviceType::kType1 ? "1" : "2"; }

std::string_view to_string(BiasMode mode) {
  switch (mode) {
    case BiasMode::kWorstCaseHold: return "worst_case_hold";
    case BiasMode::kHold: return "hold";
    case BiasMode::kRead: return "read";
    case BiasMode::kWrite: return "write";
  }
  return "?";
}

DeviceType parse_device_type(std::string_view text) {
  if (text == "1" || text == "type1" || text == "Type1") return DeviceType::kType1;
  if (text == "2" || text == "type2" || text == "Type2") return DeviceType::kType2;
  throw ValidationError(fmt::format("unknown device type '{}' (expected 1 or 2)", text));
}

BiasMode parse_bias_mode(std::string_view text) {
  if (text == "hold") return BiasMode::kHold;
  if (text == "read") return BiasMode::kRead;
  if (text == "write") return BiasMode::kWrite;
  if (text == "worst_case_hold") return BiasMode::kWorstCaseHold;
  throw ValidationError(fmt::format("unknown mode '{}' (expected hold, read or write)", text));
}

}  // namespace seu::sram

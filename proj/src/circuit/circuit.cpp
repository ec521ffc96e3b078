#include "seu/circuit/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "seu/error.hpp"

namespace seu::circuit {

void GaussianPulse::validate() const {
  if (!(sigma > 0.0)) throw ValidationError("pulse sigma must be positive");
  if (!std::isfinite(q_total) || !std::isfinite(t_peak)) {
    throw ValidationError("pulse charge and peak time must be finite");
  }
}

double pulse_current(const GaussianPulse& p, double t) {
  const double z = (t - p.t_peak) / p.sigma;
  const double peak = p.q_total * 1e-12 / (p.sigma * std::sqrt(2.0 * std::numbers::pi));
  return peak * std::exp(-0.5 * z * z);
}

Circuit::Circuit() { names_.push_back("0"); }

NodeId Circuit::add_node(std::string name) {
  if (has_node(name)) throw ValidationError(fmt::format("duplicate node '{}'", name));
  names_.push_back(std::move(name));
  return static_cast<NodeId>(names_.size() - 1);
}

bool Circuit::has_node(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

NodeId Circuit::node(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ValidationError(fmt::format("unknown node '{}'", name));
  return static_cast<NodeId>(it - names_.begin());
}

void Circuit::check_node(NodeId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= names_.size()) {
    throw ValidationError(fmt::format("node id {} does not exist", id));
  }
}

void Circuit::add_transistor(std::string name, const device::DeviceModel& model, NodeId drain,
                             NodeId gate, NodeId source) {
  check_node(drain);
  check_node(gate);
  check_node(source);
  transistors_.push_back({std::move(name), model, drain, gate, source});
}

void Circuit::add_voltage_source(NodeId node, double volts) {
  add_voltage_source(node, [volts](double) { return volts; });
}

void Circuit::add_voltage_source(NodeId node, Signal volts) {
  check_node(node);
  if (node == kGround) throw ValidationError("voltage source on ground node");
  if (is_driven(node)) {
    throw ValidationError(fmt::format("node '{}' already has a voltage source", node_name(node)));
  }
  sources_.push_back({node, std::move(volts)});
}

void Circuit::add_capacitor(NodeId node, double farads) {
  check_node(node);
  if (!(farads > 0.0)) throw ValidationError("capacitance must be positive");
  capacitors_.push_back({node, farads});
}

void Circuit::add_current_stimulus(std::string name, NodeId from, NodeId to, Signal amps,
                                   double charge, double time_scale) {
  check_node(from);
  check_node(to);
  stimuli_.push_back({std::move(name), from, to, std::move(amps), charge, time_scale});
}

void Circuit::add_pulse(std::string name, NodeId from, NodeId to, const GaussianPulse& pulse) {
  pulse.validate();
  add_current_stimulus(
      std::move(name), from, to, [pulse](double t) { return pulse_current(pulse, t); },
      pulse.q_total * 1e-12, pulse.sigma);
}

bool Circuit::is_driven(NodeId id) const {
  if (id == kGround) return true;
  return std::any_of(sources_.begin(), sources_.end(),
                     [id](const VoltageSource& s) { return s.node == id; });
}

std::vector<NodeId> Circuit::free_nodes() const {
  std::vector<NodeId> out;
  for (NodeId id = 1; static_cast<std::size_t>(id) < names_.size(); ++id) {
    if (!is_driven(id)) out.push_back(id);
  }
  return out;
}

double Circuit::capacitance(NodeId id) const {
  double c = 0.0;
  for (const auto& cap : capacitors_) {
    if (cap.node == id) c += cap.farads;
  }
  return c;
}

void Circuit::validate() const {
  for (const auto& t : transistors_) {
    try {
      t.model.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("transistor {}: {}", t.name, e.what()));
    }
  }
  for (const NodeId id : free_nodes()) {
    if (!(capacitance(id) > 0.0)) {
      throw ValidationError(fmt::format("node '{}' has no capacitor to ground", node_name(id)));
    }
  }
}

}  // namespace seu::circuit

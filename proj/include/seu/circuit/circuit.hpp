#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "seu/device/gaa_model.hpp"

namespace seu::circuit {

using NodeId = int;
inline constexpr NodeId kGround = 0;

// Time-dependent scalar (V or A) of time in seconds.
using Signal = std::function<double(double)>;

// Single-event charge deposition, I(t) = Q / (sigma sqrt(2 pi)) exp(-(t - t_peak)^2 / (2 sigma^2)).
struct GaussianPulse {
  double q_total = 0.0;      // pC
  double t_peak = 50e-12;    // s
  double sigma = 2e-12;      // s

  void validate() const;
};

// Amperes at time t.
double pulse_current(const GaussianPulse& p, double t);

struct Transistor {
  std::string name;
  device::DeviceModel model;
  NodeId drain;
  NodeId gate;
  NodeId source;
};

// Node-to-ground ideal source.
struct VoltageSource {
  NodeId node;
  Signal value;
};

struct Capacitor {
  NodeId node;  // other plate grounded
  double farads;
};

// Current flowing out of `from` and into `to`.
struct CurrentStimulus {
  std::string name;
  NodeId from;
  NodeId to;
  Signal current;
  double charge = 0.0;      // total charge (C) when known, informational
  double time_scale = 0.0;  // narrowest feature (s); 0 when unknown
};

class Circuit {
 public:
  Circuit();

  NodeId add_node(std::string name);
  NodeId node(std::string_view name) const;
  bool has_node(std::string_view name) const;
  const std::string& node_name(NodeId id) const { return names_.at(static_cast<std::size_t>(id)); }
  std::size_t node_count() const { return names_.size(); }

  void add_transistor(std::string name, const device::DeviceModel& model, NodeId drain,
                      NodeId gate, NodeId source);
  void add_voltage_source(NodeId node, double volts);
  void add_voltage_source(NodeId node, Signal volts);
  void add_capacitor(NodeId node, double farads);
  void add_current_stimulus(std::string name, NodeId from, NodeId to, Signal amps,
                            double charge = 0.0, double time_scale = 0.0);
  void add_pulse(std::string name, NodeId from, NodeId to, const GaussianPulse& pulse);

  const std::vector<Transistor>& transistors() const { return transistors_; }
  const std::vector<VoltageSource>& sources() const { return sources_; }
  const std::vector<Capacitor>& capacitors() const { return capacitors_; }
  const std::vector<CurrentStimulus>& stimuli() const { return stimuli_; }

  // Source-driven node? Ground counts as driven.
  bool is_driven(NodeId id) const;
  // Node ids that are solved for, in ascending order.
  std::vector<NodeId> free_nodes() const;
  double capacitance(NodeId id) const;

  // Node references, device parameters and a grounding capacitor on every
  // free node. Throws ValidationError.
  void validate() const;

 private:
  void check_node(NodeId id) const;

  std::vector<std::string> names_;
  std::vector<Transistor> transistors_;
  std::vector<VoltageSource> sources_;
  std::vector<Capacitor> capacitors_;
  std::vector<CurrentStimulus> stimuli_;
};

}  // namespace seu::circuit

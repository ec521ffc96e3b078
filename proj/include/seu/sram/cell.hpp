#pragma once

#include <string_view>

#include "seu/circuit/circuit.hpp"
#include "seu/circuit/solver.hpp"
#include "seu/device/gaa_model.hpp"
#include "seu/let/conversion.hpp"

namespace seu::sram {

using device::DeviceType;

enum class BiasMode { kWorstCaseHold, kHold, kRead, kWrite };

// Which inverter the strike hits. kRight is N2/ACC2 with storage node CL on
// bitline BL; kLeft is the mirror image (N1/ACC1, CH, BLB).
enum class Side { kRight, kLeft };

struct CellDevices {
  device::DeviceModel pull_up;
  device::DeviceModel pull_down;
  device::DeviceModel access;
};

// p-type 1 fin pull-up, n-type 2 fin pull-down, n-type access with one of its
// two fins gated off (modelled as fins = 1).
CellDevices default_devices();

// Charge collection geometry (lengths in um along the ion track).
struct CollectionConfig {
  double channel_length = 0.030;         // N2 share of the channel strike
  double channel_access_length = 0.030;  // ACC2 share
  double funnel_channel = 3.0;           // Type 2 multiplier on the channel strike
  double substrate_length = 0.50;        // Type 2 substrate track
  double top_sheet_length = 0.015;       // three 5 nm sheets
  double top_funnel_length = 0.20;       // Type 2 substrate funnel below the sheets

  void validate() const;
};

struct StrikeConfig {
  double let_max = 1.54;  // MeV cm^2/mg, the alpha Bragg peak in Si
  let::ConversionSettings conversion{};
  double t_peak = 50e-12;
  double sigma = 2e-12;
  double bound = 100.0;  // default critical-LET search ceiling, x LET_max
  CollectionConfig collection{};

  // pC/um deposited at one LET_max.
  double charge_density() const;
  void validate() const;
};

struct SramConfig {
  double vdd = 0.7;
  double node_capacitance = 0.05e-15;  // F on each storage node
  CellDevices devices = default_devices();
  circuit::TransientOptions transient{};
  StrikeConfig strike{};

  void validate() const;
};

struct Cell {
  circuit::Circuit circuit;
  DeviceType device_type;
  BiasMode bias;
  Side side;
  double vdd;
  circuit::NodeId ch, cl, vdd_node, wl, bl, blb;

  circuit::NodeId struck_node() const { return side == Side::kRight ? cl : ch; }
  circuit::NodeId struck_bitline() const { return side == Side::kRight ? bl : blb; }
};

// 6T cell. In kWorstCaseHold the word line is low and the bitline on the
// struck side is being pulled to 0 by a write to another cell in the column.
Cell build_cell(DeviceType type, BiasMode bias, const SramConfig& config = {},
                Side side = Side::kRight);

// Guess with the given storage node high and its partner low.
circuit::NodeVoltages state_guess(const Cell& cell, circuit::NodeId high_node);

// Worst-case state: the struck node stores vdd while its bitline is at 0.
circuit::NodeVoltages worst_case_state(const Cell& cell);

std::string_view to_string(DeviceType type);
std::string_view to_string(BiasMode mode);
DeviceType parse_device_type(std::string_view text);
BiasMode parse_bias_mode(std::string_view text);

}  // namespace seu::sram

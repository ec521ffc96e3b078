#pragma once

namespace seu::device {

enum class Polarity { kN, kP };

// Type 1: bottom dielectric isolation under the S/D epi. Type 2: punch-through
// stop doping, substrate connected.
enum class DeviceType { kType1, kType2 };

inline constexpr double kThermalVoltage = 0.02585;  // V at 300 K
inline constexpr double kMaxBias = 2.0;             // |V| validity window

// Compact DC model of a stacked-nanosheet GAA-FET. All voltages are terminal
// differences; current is positive into the drain.
struct DeviceModel {
  Polarity polarity = Polarity::kN;
  double v_t = 0.25;          // V, magnitude
  double n_slope = 1.17;
  double i_spec = 0.0;        // A per fin
  int fins = 1;
  double lambda_dibl = 0.0;   // V/V
  DeviceType device_type = DeviceType::kType1;

  void validate() const;
};

struct Conductances {
  double gm;   // dI/dVgs
  double gds;  // dI/dVds
};

struct Evaluation {
  double id;
  double gm;
  double gds;
};

// Specific current that makes a one-fin device carry `i_on` at
// v_gs = v_ds = v_on.
double i_spec_for_on_current(double i_on, double v_on, double v_t, double n_slope);

// Default sub-7nm parameter set: 10 uA/fin n-type on-current at 0.7 V, p-type
// at 0.6x. Fin count left at 1.
DeviceModel default_nmos(DeviceType type = DeviceType::kType1);
DeviceModel default_pmos(DeviceType type = DeviceType::kType1);

// Checked entry points: throw DomainError when |v| > kMaxBias.
double drain_current(const DeviceModel& m, double v_gs, double v_ds);
Conductances drain_current_derivatives(const DeviceModel& m, double v_gs, double v_ds);

// Current and both derivatives in one pass, without the bias window check.
// The circuit engine uses this so that a heavy strike can drive a node
// outside the calibrated window without aborting the run.
Evaluation evaluate(const DeviceModel& m, double v_gs, double v_ds) noexcept;

}  // namespace seu::device

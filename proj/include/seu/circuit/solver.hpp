#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "seu/circuit/circuit.hpp"

namespace seu::circuit {

// Voltage of every node, indexed by NodeId; entry 0 is ground.
using NodeVoltages = std::vector<double>;

enum class Integrator { kBackwardEuler, kTrapezoidal };

struct NewtonOptions {
  double residual_tol = 1e-12;  // A
  double step_tol = 1e-10;      // V
  double max_step = 0.2;        // V per iteration
  int max_iterations = 200;
  int source_steps = 10;
};

struct TransientOptions {
  double t_stop = 1e-9;
  double dt = 0.1e-12;
  Integrator integrator = Integrator::kBackwardEuler;
  NewtonOptions newton{};
};

struct Waveforms {
  std::vector<std::string> nodes;          // recorded node names
  std::vector<NodeId> ids;
  std::vector<double> times;               // s
  std::vector<std::vector<double>> values; // values[k] = series of nodes[k]

  const std::vector<double>& series(std::string_view node) const;
  double final_value(std::string_view node) const { return series(node).back(); }
};

// KCL residual (current leaving each free node through devices and stimuli at
// time t) and its Jacobian with respect to the free-node voltages.
struct Assembly {
  Eigen::VectorXd residual;
  Eigen::MatrixXd jacobian;
};

Assembly assemble_dc(const Circuit& c, const NodeVoltages& v, double t);

// Full node vector with sources applied at time t and the free nodes taken
// from `guess`.
NodeVoltages apply_sources(const Circuit& c, const NodeVoltages& guess, double t,
                           double source_scale = 1.0);

// Damped Newton from the guess; falls back to source stepping. Throws
// SolverError with a residual report on failure.
NodeVoltages dc_solve(const Circuit& c, const NodeVoltages& initial_guess, double t = 0.0,
                      const NewtonOptions& options = {});

// Fixed-step implicit integration from v0 at t = 0.
Waveforms transient(const Circuit& c, const NodeVoltages& v0, const TransientOptions& options = {});

void write_waveforms_csv(std::ostream& out, const Waveforms& w, int precision = 9);

}  // namespace seu::circuit

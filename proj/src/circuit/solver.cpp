#include "seu/circuit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "seu/error.hpp"

namespace seu::circuit {

namespace {

// Free-node bookkeeping for one solver run.
class Layout {
 public:
  explicit Layout(const Circuit& c) : free_(c.free_nodes()), slot_(c.node_count(), -1) {
    for (std::size_t i = 0; i < free_.size(); ++i) slot_[static_cast<std::size_t>(free_[i])] = static_cast<int>(i);
  }
  int slot(NodeId id) const { return slot_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return free_.size(); }
  const std::vector<NodeId>& free() const { return free_; }

  Eigen::VectorXd gather(const NodeVoltages& v) const {
    Eigen::VectorXd x(static_cast<Eigen::Index>(free_.size()));
    for (std::size_t i = 0; i < free_.size(); ++i) x(static_cast<Eigen::Index>(i)) = v[static_cast<std::size_t>(free_[i])];
    return x;
  }
  void scatter(const Eigen::VectorXd& x, NodeVoltages& v) const {
    for (std::size_t i = 0; i < free_.size(); ++i) v[static_cast<std::size_t>(free_[i])] = x(static_cast<Eigen::Index>(i));
  }

 private:
  std::vector<NodeId> free_;
  std::vector<int> slot_;
};

void assemble_into(const Circuit& c, const Layout& layout, const NodeVoltages& v, double t,
                   Assembly& a) {
  const auto n = static_cast<Eigen::Index>(layout.size());
  a.residual.setZero(n);
  a.jacobian.setZero(n, n);
  const auto at = [&](NodeId id) { return v[static_cast<std::size_t>(id)]; };

  for (const auto& tr : c.transistors()) {
    const double vs = at(tr.source);
    const device::Evaluation e = device::evaluate(tr.model, at(tr.gate) - vs, at(tr.drain) - vs);
    // dI/dVd, dI/dVg, dI/dVs
    const double dv[3] = {e.gds, e.gm, -e.gm - e.gds};
    const NodeId terms[3] = {tr.drain, tr.gate, tr.source};
    const int d = layout.slot(tr.drain);
    const int s = layout.slot(tr.source);
    if (d >= 0) a.residual(d) += e.id;
    if (s >= 0) a.residual(s) -= e.id;
    for (int k = 0; k < 3; ++k) {
      const int col = layout.slot(terms[k]);
      if (col < 0) continue;
      if (d >= 0) a.jacobian(d, col) += dv[k];
      if (s >= 0) a.jacobian(s, col) -= dv[k];
    }
  }
  for (const auto& st : c.stimuli()) {
    const double i = st.current(t);
    const int from = layout.slot(st.from);
    const int to = layout.slot(st.to);
    if (from >= 0) a.residual(from) += i;
    if (to >= 0) a.residual(to) -= i;
  }
}

NodeVoltages with_sources(const Circuit& c, NodeVoltages v, double t, double scale) {
  v.resize(c.node_count(), 0.0);
  v[kGround] = 0.0;
  for (const auto& s : c.sources()) v[static_cast<std::size_t>(s.node)] = scale * s.value(t);
  return v;
}

struct NewtonResult {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

// Solves sys(x).residual == 0 in place. `sys` fills an Assembly for x.
template <class System>
NewtonResult newton(System&& sys, Eigen::VectorXd& x, const NewtonOptions& opt) {
  NewtonResult out;
  if (x.size() == 0) {
    out.converged = true;
    return out;
  }
  Assembly a;
  sys(x, a);
  double r = a.residual.lpNorm<Eigen::Infinity>();
  Assembly trial;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    out.iterations = it;
    Eigen::VectorXd dx = a.jacobian.partialPivLu().solve(a.residual);
    if (!dx.allFinite()) break;
    const double big = dx.lpNorm<Eigen::Infinity>();
    if (big > opt.max_step) dx *= opt.max_step / big;

    double alpha = 1.0;
    Eigen::VectorXd x_try;
    double r_try = 0.0;
    for (;;) {
      x_try = x - alpha * dx;
      sys(x_try, trial);
      r_try = trial.residual.lpNorm<Eigen::Infinity>();
      if ((std::isfinite(r_try) && r_try <= r) || alpha < 1.0 / 1024.0) break;
      alpha *= 0.5;
    }
    if (!std::isfinite(r_try)) break;
    const double step = alpha * dx.lpNorm<Eigen::Infinity>();
    x = x_try;
    std::swap(a, trial);
    r = r_try;
    if (r < opt.residual_tol && step < opt.step_tol) {
      out.converged = true;
      break;
    }
  }
  out.residual = r;
  return out;
}

std::string residual_report(const Circuit& c, const Layout& layout, const NodeVoltages& v, double t) {
  Assembly a;
  assemble_into(c, layout, v, t, a);
  std::string report;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const NodeId id = layout.free()[i];
    report += fmt::format(" {}: V={:.6g} r={:.3e} A;", c.node_name(id), v[static_cast<std::size_t>(id)],
                          a.residual(static_cast<Eigen::Index>(i)));
  }
  return report;
}

}  // namespace

const std::vector<double>& Waveforms::series(std::string_view node) const {
  const auto it = std::find(nodes.begin(), nodes.end(), node);
  if (it == nodes.end()) throw ValidationError(fmt::format("no waveform for node '{}'", node));
  return values[static_cast<std::size_t>(it - nodes.begin())];
}

Assembly assemble_dc(const Circuit& c, const NodeVoltages& v, double t) {
  Layout layout(c);
  Assembly a;
  assemble_into(c, layout, with_sources(c, v, t, 1.0), t, a);
  return a;
}

NodeVoltages apply_sources(const Circuit& c, const NodeVoltages& guess, double t,
                           double source_scale) {
  return with_sources(c, guess, t, source_scale);
}

NodeVoltages dc_solve(const Circuit& c, const NodeVoltages& initial_guess, double t,
                      const NewtonOptions& options) {
  c.validate();
  if (c.sources().empty()) throw ValidationError("DC solve needs at least one voltage source");
  for (double g : initial_guess) {
    if (!std::isfinite(g)) throw ValidationError("initial guess is not finite");
  }
  const Layout layout(c);

  const auto solve_scaled = [&](Eigen::VectorXd& x, double scale) {
    NodeVoltages v = with_sources(c, initial_guess, t, scale);
    return newton(
        [&](const Eigen::VectorXd& xs, Assembly& a) {
          layout.scatter(xs, v);
          assemble_into(c, layout, v, t, a);
        },
        x, options);
  };

  NodeVoltages v = with_sources(c, initial_guess, t, 1.0);
  Eigen::VectorXd x = layout.gather(v);
  if (solve_scaled(x, 1.0).converged) {
    layout.scatter(x, v);
    return v;
  }

  // Source stepping: ramp every source from 0 to its full value.
  x = layout.gather(v) / static_cast<double>(options.source_steps);
  for (int k = 1; k <= options.source_steps; ++k) {
    const double scale = static_cast<double>(k) / options.source_steps;
    const NewtonResult r = solve_scaled(x, scale);
    if (!r.converged) {
      NodeVoltages at = with_sources(c, v, t, scale);
      layout.scatter(x, at);
      throw SolverError(fmt::format("DC solve failed at source scale {:.2f} after {} iterations:{}",
                                    scale, r.iterations, residual_report(c, layout, at, t)));
    }
  }
  layout.scatter(x, v);
  return v;
}

Waveforms transient(const Circuit& c, const NodeVoltages& v0, const TransientOptions& options) {
  c.validate();
  if (!(options.dt > 0.0) || !(options.t_stop > 0.0)) {
    throw ValidationError("transient needs positive dt and t_stop");
  }
  for (const auto& st : c.stimuli()) {
    if (st.time_scale > 0.0 && options.dt > st.time_scale / 10.0 * (1.0 + 1e-12)) {
      throw ValidationError(fmt::format("dt={} too coarse for stimulus '{}' (needs <= {})",
                                        options.dt, st.name, st.time_scale / 10.0));
    }
  }
  if (v0.size() != c.node_count()) throw ValidationError("initial state has wrong node count");

  const Layout layout(c);
  const auto steps = static_cast<long>(std::llround(options.t_stop / options.dt));
  const auto n = static_cast<Eigen::Index>(layout.size());

  Eigen::VectorXd cap(n);
  for (std::size_t i = 0; i < layout.size(); ++i) cap(static_cast<Eigen::Index>(i)) = c.capacitance(layout.free()[i]);
  const bool trap = options.integrator == Integrator::kTrapezoidal;
  const Eigen::VectorXd g_cap = cap / options.dt * (trap ? 2.0 : 1.0);

  Waveforms w;
  for (NodeId id = 1; static_cast<std::size_t>(id) < c.node_count(); ++id) {
    w.nodes.push_back(c.node_name(id));
    w.ids.push_back(id);
  }
  w.values.assign(w.nodes.size(), {});
  w.times.reserve(static_cast<std::size_t>(steps + 1));
  for (auto& s : w.values) s.reserve(static_cast<std::size_t>(steps + 1));
  const auto record = [&](double t, const NodeVoltages& v) {
    w.times.push_back(t);
    for (std::size_t k = 0; k < w.ids.size(); ++k) w.values[k].push_back(v[static_cast<std::size_t>(w.ids[k])]);
  };

  NodeVoltages v = with_sources(c, v0, 0.0, 1.0);
  record(0.0, v);
  Eigen::VectorXd x_prev = layout.gather(v);
  Assembly prev;
  if (trap) assemble_into(c, layout, v, 0.0, prev);

  for (long step = 1; step <= steps; ++step) {
    const double t = static_cast<double>(step) * options.dt;
    v = with_sources(c, v, t, 1.0);
    Eigen::VectorXd x = x_prev;
    const NewtonResult r = newton(
        [&](const Eigen::VectorXd& xs, Assembly& a) {
          layout.scatter(xs, v);
          assemble_into(c, layout, v, t, a);
          a.residual += g_cap.cwiseProduct(xs - x_prev);
          a.jacobian.diagonal() += g_cap;
          if (trap) a.residual += prev.residual;
        },
        x, options.newton);
    if (!r.converged) {
      layout.scatter(x, v);
      throw SolverError(fmt::format("transient Newton failed at t={:.6e} s after {} iterations:{}",
                                    t, r.iterations, residual_report(c, layout, v, t)));
    }
    layout.scatter(x, v);
    if (trap) assemble_into(c, layout, v, t, prev);
    x_prev = x;
    record(t, v);
  }
  return w;
}

void write_waveforms_csv(std::ostream& out, const Waveforms& w, int precision) {
  out << "time_s";
  for (const auto& n : w.nodes) out << ',' << n << "_V";
  out << '\n';
  for (std::size_t i = 0; i < w.times.size(); ++i) {
    out << fmt::format("{:.{}g}", w.times[i], precision);
    for (const auto& s : w.values) out << fmt::format(",{:.{}g}", s[i], precision);
    out << '\n';
  }
}

}  // namespace seu::circuit

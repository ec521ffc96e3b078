#include "seu/device/gaa_model.hpp"

#include <cmath>
#include <fmt/format.h>

#include "seu/error.hpp"

namespace seu::device {

namespace {

// ln(1 + e^x) without overflow.
double softplus(double x) noexcept {
  if (x > 35.0) return x;
  if (x < -35.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

double logistic(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// F(x) = ln^2(1 + e^x) and its derivative.
struct Interp {
  double f;
  double df;
};

Interp interp(double x) noexcept {
  const double sp = softplus(x);
  return {sp * sp, 2.0 * sp * logistic(x)};
}

// n-type, v_ds >= 0.
Evaluation forward(const DeviceModel& m, double v_gs, double v_ds) noexcept {
  const double scale = 2.0 * m.n_slope * kThermalVoltage;
  const double v_t_eff = m.v_t - m.lambda_dibl * v_ds;
  const Interp f = interp((v_gs - v_t_eff) / scale);
  const Interp r = interp((v_gs - v_t_eff - m.n_slope * v_ds) / scale);
  const double k = m.fins * m.i_spec;
  return {k * (f.f - r.f), k * (f.df - r.df) / scale,
          k * (f.df * m.lambda_dibl - r.df * (m.lambda_dibl - m.n_slope)) / scale};
}

Evaluation n_type(const DeviceModel& m, double v_gs, double v_ds) noexcept {
  if (v_ds >= 0.0) return forward(m, v_gs, v_ds);
  // Swap source and drain: v_gs' = v_gd, v_ds' = -v_ds, I = -I'.
  const Evaluation s = forward(m, v_gs - v_ds, -v_ds);
  return {-s.id, -s.gm, s.gm + s.gds};
}

void check_bias(double v_gs, double v_ds) {
  if (!(std::abs(v_gs) <= kMaxBias && std::abs(v_ds) <= kMaxBias)) {
    throw DomainError(fmt::format("bias (v_gs={}, v_ds={}) outside the +/-{} V model window",
                                  v_gs, v_ds, kMaxBias));
  }
}

}  // namespace

void DeviceModel::validate() const {
  if (!(v_t > 0.0)) throw ValidationError("v_t must be positive");
  if (!(n_slope >= 1.0)) throw ValidationError("n_slope must be >= 1");
  if (!(i_spec > 0.0)) throw ValidationError("i_spec must be positive");
  if (fins < 1) throw ValidationError("fins must be >= 1");
  if (!std::isfinite(lambda_dibl)) throw ValidationError("lambda_dibl must be finite");
}

double i_spec_for_on_current(double i_on, double v_on, double v_t, double n_slope) {
  DeviceModel unit;
  unit.v_t = v_t;
  unit.n_slope = n_slope;
  unit.i_spec = 1.0;
  return i_on / forward(unit, v_on, v_on).id;
}

DeviceModel default_nmos(DeviceType type) {
  DeviceModel m;
  m.polarity = Polarity::kN;
  m.i_spec = i_spec_for_on_current(10e-6, 0.7, m.v_t, m.n_slope);
  m.device_type = type;
  return m;
}

DeviceModel default_pmos(DeviceType type) {
  DeviceModel m = default_nmos(type);
  m.polarity = Polarity::kP;
  m.i_spec *= 0.6;
  return m;
}

Evaluation evaluate(const DeviceModel& m, double v_gs, double v_ds) noexcept {
  if (m.polarity == Polarity::kN) return n_type(m, v_gs, v_ds);
  // I_p(v_gs, v_ds) = -I_n(-v_gs, -v_ds); the two sign flips cancel in the derivatives.
  const Evaluation e = n_type(m, -v_gs, -v_ds);
  return {-e.id, e.gm, e.gds};
}

double drain_current(const DeviceModel& m, double v_gs, double v_ds) {
  check_bias(v_gs, v_ds);
  m.validate();
  return evaluate(m, v_gs, v_ds).id;
}

Conductances drain_current_derivatives(const DeviceModel& m, double v_gs, double v_ds) {
  check_bias(v_gs, v_ds);
  m.validate();
  const Evaluation e = evaluate(m, v_gs, v_ds);
  return {e.gm, e.gds};
}

}  // namespace seu::device

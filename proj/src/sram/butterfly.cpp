#include "seu/sram/butterfly.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "seu/error.hpp"

namespace seu::sram {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr std::size_t kGridPoints = 4001;

struct Rotated {
  std::vector<double> u;
  std::vector<double> w;
};

// x = V(CL), y = V(CH); u along (1,-1), w along (1,1).
Rotated rotate(const std::vector<VtcPoint>& curve, bool input_is_x) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(curve.size());
  for (const auto& p : curve) {
    const double x = input_is_x ? p.in : p.out;
    const double y = input_is_x ? p.out : p.in;
    pts.emplace_back((x - y) / kSqrt2, (x + y) / kSqrt2);
  }
  std::sort(pts.begin(), pts.end());
  Rotated r;
  for (const auto& [u, w] : pts) {
    if (!r.u.empty() && u <= r.u.back()) continue;
    r.u.push_back(u);
    r.w.push_back(w);
  }
  return r;
}

double interp(const Rotated& r, double u) {
  const auto hi = std::upper_bound(r.u.begin(), r.u.end(), u);
  if (hi == r.u.begin()) return r.w.front();
  if (hi == r.u.end()) return r.w.back();
  const auto i = static_cast<std::size_t>(hi - r.u.begin());
  const double t = (u - r.u[i - 1]) / (r.u[i] - r.u[i - 1]);
  return r.w[i - 1] + t * (r.w[i] - r.w[i - 1]);
}

// |d out / d in| of a sampled VTC at input v.
double slope(const std::vector<VtcPoint>& curve, double v) {
  auto hi = std::upper_bound(curve.begin(), curve.end(), v,
                             [](double x, const VtcPoint& p) { return x < p.in; });
  if (hi == curve.begin()) ++hi;
  if (hi == curve.end()) --hi;
  const auto lo = hi - 1;
  return std::abs((hi->out - lo->out) / (hi->in - lo->in));
}

double max_abs(const std::vector<double>& d, std::size_t from, std::size_t to) {
  double m = 0.0;
  for (std::size_t i = from; i < to && i < d.size(); ++i) m = std::max(m, std::abs(d[i]));
  return m;
}

}  // namespace

std::vector<VtcPoint> half_cell_vtc(DeviceType type, BiasMode mode, Side side,
                                    const SramConfig& config, double step) {
  if (mode == BiasMode::kWorstCaseHold) mode = BiasMode::kHold;
  Cell cell = build_cell(type, mode, config);
  // kLeft: inverter P1/N1 driving CH from CL. kRight: P2/N2 driving CL from CH.
  const circuit::NodeId input = side == Side::kLeft ? cell.cl : cell.ch;
  const circuit::NodeId output = side == Side::kLeft ? cell.ch : cell.cl;
  auto level = std::make_shared<double>(0.0);
  cell.circuit.add_voltage_source(input, [level](double) { return *level; });

  const auto count = static_cast<std::size_t>(std::llround(config.vdd / step)) + 1;
  std::vector<VtcPoint> vtc;
  vtc.reserve(count);
  circuit::NodeVoltages guess(cell.circuit.node_count(), 0.0);
  guess[static_cast<std::size_t>(output)] = config.vdd;
  for (std::size_t k = 0; k < count; ++k) {
    *level = std::min(static_cast<double>(k) * step, config.vdd);
    guess = circuit::dc_solve(cell.circuit, guess);
    vtc.push_back({*level, guess[static_cast<std::size_t>(output)]});
  }
  return vtc;
}

SnmReport extract_snm(BiasMode mode, std::vector<VtcPoint> curve_a, std::vector<VtcPoint> curve_b) {
  SnmReport rep{mode, 0.0, 0.0, 0.0, std::move(curve_a), std::move(curve_b)};
  const Rotated a = rotate(rep.curve_a, true);
  const Rotated b = rotate(rep.curve_b, false);
  const double u0 = std::max(a.u.front(), b.u.front());
  const double u1 = std::min(a.u.back(), b.u.back());
  if (!(u1 > u0)) throw SolverError("butterfly curves do not overlap");

  std::vector<double> u(kGridPoints), d(kGridPoints);
  for (std::size_t i = 0; i < kGridPoints; ++i) {
    u[i] = u0 + (u1 - u0) * static_cast<double>(i) / static_cast<double>(kGridPoints - 1);
    d[i] = interp(a, u[i]) - interp(b, u[i]);
  }

  // Sign changes of d; a crossing with loop gain > 1 is the metastable point.
  std::vector<std::size_t> crossings;
  std::vector<std::size_t> metastable;
  for (std::size_t i = 0; i + 1 < kGridPoints; ++i) {
    if ((d[i] < 0.0) == (d[i + 1] < 0.0)) continue;
    crossings.push_back(i);
    const double t = d[i] / (d[i] - d[i + 1]);
    const double uc = u[i] + t * (u[i + 1] - u[i]);
    const double wc = interp(a, uc);
    const double x = (wc + uc) / kSqrt2;
    const double y = (wc - uc) / kSqrt2;
    if (slope(rep.curve_a, x) * slope(rep.curve_b, y) > 1.0) metastable.push_back(i);
  }

  const auto lobes_around = [&](std::size_t meta) {
    const auto it = std::find(crossings.begin(), crossings.end(), meta);
    const std::size_t left = it == crossings.begin() ? 0 : *(it - 1) + 1;
    const std::size_t right = (it + 1) == crossings.end() ? kGridPoints : *(it + 1) + 1;
    return std::pair{max_abs(d, left, meta + 1) / kSqrt2, max_abs(d, meta + 1, right) / kSqrt2};
  };

  if (mode == BiasMode::kWrite) {
    // The written state (CL low) sits at u < 0; the old lobe lived at u >= 0.
    const auto zero = static_cast<std::size_t>(std::lower_bound(u.begin(), u.end(), 0.0) - u.begin());
    if (!metastable.empty()) {
      const auto [keep, old] = lobes_around(metastable.front());
      rep.lobe1 = keep;
      rep.lobe2 = -old;
    } else {
      const std::size_t start = crossings.empty() ? 0 : crossings.front() + 1;
      rep.lobe1 = max_abs(d, start, std::max(zero, start)) / kSqrt2;
      double gap = std::abs(d[std::min(zero, kGridPoints - 1)]);
      for (std::size_t i = zero; i < kGridPoints; ++i) gap = std::min(gap, std::abs(d[i]));
      rep.lobe2 = gap / kSqrt2;
    }
    rep.snm = rep.lobe2;
    return rep;
  }

  if (metastable.size() == 1) {
    const auto [l1, l2] = lobes_around(metastable.front());
    rep.lobe1 = l1;
    rep.lobe2 = l2;
    rep.snm = std::min(l1, l2);
  }
  return rep;
}

SnmReport butterfly(DeviceType type, BiasMode mode, const SramConfig& config) {
  if (mode == BiasMode::kWorstCaseHold) mode = BiasMode::kHold;
  auto a = half_cell_vtc(type, mode, Side::kLeft, config);
  auto b = half_cell_vtc(type, mode, Side::kRight, config);
  return extract_snm(mode, std::move(a), std::move(b));
}

}  // namespace seu::sram

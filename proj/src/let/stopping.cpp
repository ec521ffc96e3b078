#include "seu/let/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include "seu/error.hpp"

namespace seu::let {

namespace {

constexpr double kBetheK = 0.307075;             // MeV cm^2/mol
constexpr double kElectronRestEv = 0.51099895e6;  // eV
constexpr double kAlphaRestMeV = 3727.3794;
constexpr double kHeliumAmu = 4.002602;

void check_energy(double e_mev) {
  if (!(e_mev >= kMinEnergyMeV && e_mev <= kMaxEnergyMeV)) {
    throw DomainError(fmt::format("energy {} MeV outside [{}, {}] MeV", e_mev, kMinEnergyMeV,
                                  kMaxEnergyMeV));
  }
}

double compound_stopping(double e_mev, const Material& material) {
  double s = 0.0;
  for (const auto& c : material.components()) {
    s += c.mass_fraction * element_stopping(e_mev, c.element);
  }
  return s;
}

}  // namespace

double helium_charge_fraction_sq(double e_mev, int z2) {
  const double kev_per_amu = std::max(e_mev * 1000.0 / kHeliumAmu, 1.0);
  const double a = std::log(kev_per_amu);
  const double b =
      0.2865 + a * (0.1266 + a * (-0.001429 + a * (0.02402 + a * (-0.01135 + a * 0.001475))));
  const double gamma_sq = 1.0 - std::exp(-std::min(30.0, b));
  const double shell = 7.6 - a;
  const double corr = 1.0 + (0.007 + 0.00005 * z2) * std::exp(-shell * shell);
  return gamma_sq * corr * corr;
}

double element_stopping(double e_mev, const Element& element) {
  const double beta_sq = 2.0 * e_mev / kAlphaRestMeV;
  const double z_eff_sq = 4.0 * helium_charge_fraction_sq(e_mev, element.z);
  const double x = 2.0 * kElectronRestEv * beta_sq / element.mean_excitation_ev;
  // MeV cm^2/g -> MeV cm^2/mg
  const double s_high = kBetheK * z_eff_sq * element.z / element.molar_mass / beta_sq *
                        std::log1p(x) / 1000.0;
  const double s_low = element.low_energy_coeff * std::sqrt(e_mev);
  return 1.0 / (1.0 / s_low + 1.0 / s_high);
}

double stopping_power(double e_mev, const Material& material) {
  check_energy(e_mev);
  material.validate();
  return compound_stopping(e_mev, material);
}

// ---------------------------------------------------------------------------

StoppingTable::StoppingTable(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw ValidationError("stopping table needs at least two points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!(p.energy > 0.0) || !(p.let > 0.0) || !std::isfinite(p.let)) {
      throw ValidationError(fmt::format("stopping table row {}: energy and LET must be positive", i + 1));
    }
    if (i > 0 && !(p.energy > points_[i - 1].energy)) {
      throw ValidationError(fmt::format("stopping table row {}: energies must strictly increase", i + 1));
    }
  }
}

StoppingTable StoppingTable::from_csv(std::istream& in) {
  std::vector<Point> points;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line.starts_with("energy_MeV")) continue;
    std::istringstream row(line);
    std::string e_field, s_field;
    if (!std::getline(row, e_field, ',') || !std::getline(row, s_field, ',')) {
      throw ValidationError(fmt::format("stopping table line {}: expected 'energy,let'", lineno));
    }
    try {
      std::size_t used_e = 0, used_s = 0;
      const double e = std::stod(e_field, &used_e);
      const double s = std::stod(s_field, &used_s);
      if (used_e != e_field.size() || used_s != s_field.size()) throw std::invalid_argument("");
      points.push_back({e, s});
    } catch (const std::exception&) {
      throw ValidationError(fmt::format("stopping table line {}: not a number", lineno));
    }
  }
  return StoppingTable(std::move(points));
}

StoppingTable StoppingTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open stopping table '{}'", path));
  return from_csv(in);
}

double StoppingTable::operator()(double e_mev) const {
  if (!(e_mev >= min_energy() && e_mev <= max_energy())) {
    throw DomainError(fmt::format("energy {} MeV outside table range [{}, {}]", e_mev,
                                  min_energy(), max_energy()));
  }
  return extrapolated(e_mev);
}

double StoppingTable::extrapolated(double e_mev) const {
  if (e_mev <= points_.front().energy) {
    return points_.front().let * std::sqrt(e_mev / points_.front().energy);
  }
  if (e_mev >= points_.back().energy) return points_.back().let;
  const auto hi = std::upper_bound(points_.begin(), points_.end(), e_mev,
                                   [](double e, const Point& p) { return e < p.energy; });
  const auto lo = hi - 1;
  const double t = std::log(e_mev / lo->energy) / std::log(hi->energy / lo->energy);
  return lo->let + t * (hi->let - lo->let);
}

// ---------------------------------------------------------------------------

StoppingModel::StoppingModel(Material material) : material_(std::move(material)) {
  material_.validate();
}

StoppingModel::StoppingModel(Material material, StoppingTable table)
    : material_(std::move(material)), table_(std::move(table)) {
  material_.validate();
}

double StoppingModel::operator()(double e_mev) const {
  check_energy(e_mev);
  if (table_) return (*table_)(e_mev);
  return compound_stopping(e_mev, material_);
}

double StoppingModel::unchecked(double e_mev) const {
  if (table_) return table_->extrapolated(e_mev);
  return compound_stopping(e_mev, material_);
}

// ---------------------------------------------------------------------------

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) throw ValidationError("invalid log grid");
  std::vector<double> grid(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
  grid.back() = hi;
  return grid;
}

LetCurve let_curve(const StoppingModel& model, std::span<const double> energies) {
  if (energies.empty()) throw ValidationError("energy grid is empty");
  LetCurve curve{model.material(), {}};
  curve.samples.reserve(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) {
    if (i > 0 && !(energies[i] > energies[i - 1])) {
      throw ValidationError(fmt::format("energy grid not strictly increasing at index {}", i));
    }
    curve.samples.push_back({energies[i], model(energies[i])});
  }
  return curve;
}

LetCurve let_curve(const Material& material, std::span<const double> energies) {
  return let_curve(StoppingModel(material), energies);
}

LetMax find_let_max(const StoppingModel& model, const ConversionSettings& conversion) {
  double lo = 0.01;
  double hi = 20.0;
  if (model.tabulated()) {
    // Table bounds are only reachable through the public checked path.
    const auto probe = [&](double e) {
      try {
        model(e);
        return true;
      } catch (const DomainError&) {
        return false;
      }
    };
    while (!probe(lo) && lo < hi) lo *= 1.01;
    while (!probe(hi) && hi > lo) hi /= 1.01;
  }
  const std::vector<double> grid = log_grid(lo, hi);
  const LetCurve coarse = let_curve(model, grid);
  const auto best = std::max_element(coarse.samples.begin(), coarse.samples.end(),
                                     [](const LetSample& a, const LetSample& b) { return a.let < b.let; });
  const std::size_t i = static_cast<std::size_t>(best - coarse.samples.begin());
  const double left = grid[i == 0 ? 0 : i - 1];
  const double right = grid[std::min(i + 1, grid.size() - 1)];

  double e_peak = best->energy;
  double let_max = best->let;
  if (right > left) {
    const auto [e, neg_s] = boost::math::tools::brent_find_minima(
        [&](double x) { return -model(x); }, left, right, 40);
    if (-neg_s > let_max) {
      e_peak = e;
      let_max = -neg_s;
    }
  }
  return {e_peak, let_max, let_to_charge_density(let_max, model.material(), conversion)};
}

LetMax find_let_max(const Material& material, const ConversionSettings& conversion) {
  return find_let_max(StoppingModel(material), conversion);
}

double csda_range(double e0_mev, const StoppingModel& model) {
  check_energy(e0_mev);
  const double rho = model.material().density_mg_per_cm3();
  // E = u^2 removes the 1/sqrt(E) behaviour of the integrand at the origin.
  const auto integrand = [&](double u) {
    const double e = std::max(u * u, 1e-300);
    return 2.0 * u / (model.unchecked(e) * rho);
  };
  const double cm = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, std::sqrt(e0_mev), 20, 1e-9);
  return cm * 1e4;
}

double csda_range(double e0_mev, const Material& material) {
  return csda_range(e0_mev, StoppingModel(material));
}

}  // namespace seu::let

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "seu/let/conversion.hpp"
#include "seu/let/material.hpp"

namespace seu::let {

inline constexpr double kMinEnergyMeV = 1e-3;
inline constexpr double kMaxEnergyMeV = 100.0;

// Electronic stopping of an alpha particle in one element, MeV cm^2/mg.
// Bethe with He effective charge, joined to a sqrt(E) low-energy branch by
// reciprocal addition. No domain check; E must be > 0.
double element_stopping(double e_mev, const Element& element);

// Helium fractional effective charge squared (0..1) at energy E in a target of
// atomic number z2.
double helium_charge_fraction_sq(double e_mev, int z2);

// Mass-fraction weighted elemental sum. Throws DomainError outside
// [kMinEnergyMeV, kMaxEnergyMeV] and ValidationError for a bad material.
double stopping_power(double e_mev, const Material& material);

// (E, S) reference table with linear interpolation of S in ln(E).
class StoppingTable {
 public:
  struct Point {
    double energy;
    double let;
  };

  explicit StoppingTable(std::vector<Point> points);
  static StoppingTable from_csv(std::istream& in);
  static StoppingTable load(const std::string& path);

  double min_energy() const { return points_.front().energy; }
  double max_energy() const { return points_.back().energy; }
  std::span<const Point> points() const { return points_; }

  // Throws DomainError outside the tabulated range.
  double operator()(double e_mev) const;
  // Below the first point the curve continues as sqrt(E); no range check.
  double extrapolated(double e_mev) const;

 private:
  std::vector<Point> points_;
};

// Either the analytic model for a material or a user-supplied table.
class StoppingModel {
 public:
  explicit StoppingModel(Material material);
  StoppingModel(Material material, StoppingTable table);

  const Material& material() const { return material_; }
  bool tabulated() const { return table_.has_value(); }

  double operator()(double e_mev) const;
  double unchecked(double e_mev) const;

 private:
  Material material_;
  std::optional<StoppingTable> table_;
};

struct LetSample {
  double energy;  // MeV
  double let;     // MeV cm^2/mg
};

struct LetCurve {
  Material material;
  std::vector<LetSample> samples;
};

struct LetMax {
  double e_peak;          // MeV
  double let_max;         // MeV cm^2/mg
  double charge_density;  // pC/um
};

// 200 log-spaced points on [0.01, 20] MeV unless told otherwise.
std::vector<double> log_grid(double lo = 0.01, double hi = 20.0, std::size_t count = 200);

LetCurve let_curve(const StoppingModel& model, std::span<const double> energies);
LetCurve let_curve(const Material& material, std::span<const double> energies);

LetMax find_let_max(const StoppingModel& model, const ConversionSettings& conversion = {});
LetMax find_let_max(const Material& material, const ConversionSettings& conversion = {});

// CSDA range in um, integral of dE / (S rho) from 0 to E0.
double csda_range(double e0_mev, const StoppingModel& model);
double csda_range(double e0_mev, const Material& material);

}  // namespace seu::let

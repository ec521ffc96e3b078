#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace seu::let {

// Elemental target data. `low_energy_coeff` is the coefficient of the
// velocity-proportional branch, S_low = k * sqrt(E[MeV]) in MeV cm^2/mg.
struct Element {
  std::string symbol;
  int z = 0;
  double molar_mass = 0.0;          // g/mol
  double mean_excitation_ev = 0.0;  // I, eV
  double density = 0.0;             // g/cm^3
  double low_energy_coeff = 0.0;
};

struct Component {
  Element element;
  double mass_fraction = 0.0;
};

// Fitted so the silicon curve peaks at 0.5 MeV.
inline constexpr double kSiliconLowEnergyCoeff = 13.0;
// Silicon coefficient rescaled by the Lindhard-Scharff Z2/(Z1^2/3+Z2^2/3)^3/2/A2 ratio.
inline constexpr double kGermaniumLowEnergyCoeff = 5.80;

Element silicon_element();
Element germanium_element();

// A stopping medium: pure Si, pure Ge, or a Si_xGe_(1-x) alloy.
class Material {
 public:
  static Material silicon();
  static Material germanium();
  // x is the Si mole fraction. Density is interpolated linearly in x.
  static Material sige(double x);
  // Accepts "si", "ge" or "sige:<x>".
  static Material parse(std::string_view text);

  Material(std::string name, double si_mole_fraction, double density,
           std::vector<Component> components);

  const std::string& name() const { return name_; }
  double si_mole_fraction() const { return si_mole_fraction_; }
  double density() const { return density_; }
  double density_mg_per_cm3() const { return density_ * 1000.0; }
  std::span<const Component> components() const { return components_; }

  Material with_density(double density) const;
  // Replaces the low-energy coefficient of every component with this symbol.
  Material with_low_energy_coeff(std::string_view symbol, double coeff) const;

  // Throws ValidationError when an invariant is broken.
  void validate() const;

 private:
  std::string name_;
  double si_mole_fraction_ = 1.0;
  double density_ = 0.0;
  std::vector<Component> components_;
};

}  // namespace seu::let

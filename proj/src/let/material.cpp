#include "seu/let/material.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>

#include "seu/error.hpp"

namespace seu::let {

Element silicon_element() {
  return {"Si", 14, 28.0855, 173.0, 2.329, kSiliconLowEnergyCoeff};
}

Element germanium_element() {
  return {"Ge", 32, 72.63, 350.0, 5.323, kGermaniumLowEnergyCoeff};
}

Material::Material(std::string name, double si_mole_fraction, double density,
                   std::vector<Component> components)
    : name_(std::move(name)),
      si_mole_fraction_(si_mole_fraction),
      density_(density),
      components_(std::move(components)) {}

Material Material::silicon() {
  const Element si = silicon_element();
  return Material("si", 1.0, si.density, {{si, 1.0}});
}

Material Material::germanium() {
  const Element ge = germanium_element();
  return Material("ge", 0.0, ge.density, {{ge, 1.0}});
}

Material Material::sige(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw ValidationError(fmt::format("Si mole fraction {} outside [0, 1]", x));
  }
  const Element si = silicon_element();
  const Element ge = germanium_element();
  const double si_mass = x * si.molar_mass;
  const double ge_mass = (1.0 - x) * ge.molar_mass;
  const double w_si = si_mass / (si_mass + ge_mass);
  const double density = x * si.density + (1.0 - x) * ge.density;
  return Material(fmt::format("sige:{}", x), x, density,
                  {{si, w_si}, {ge, 1.0 - w_si}});
}

Material Material::parse(std::string_view text) {
  if (text == "si") return silicon();
  if (text == "ge") return germanium();
  constexpr std::string_view prefix = "sige:";
  if (text.starts_with(prefix)) {
    const std::string_view num = text.substr(prefix.size());
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), x);
    if (ec == std::errc() && ptr == num.data() + num.size()) return sige(x);
  }
  throw ValidationError(fmt::format("unknown material '{}' (expected si, ge or sige:<x>)", text));
}

Material Material::with_density(double density) const {
  Material copy = *this;
  copy.density_ = density;
  return copy;
}

Material Material::with_low_energy_coeff(std::string_view symbol, double coeff) const {
  Material copy = *this;
  for (auto& c : copy.components_) {
    if (c.element.symbol == symbol) c.element.low_energy_coeff = coeff;
  }
  return copy;
}

void Material::validate() const {
  if (!(si_mole_fraction_ >= 0.0 && si_mole_fraction_ <= 1.0)) {
    throw ValidationError(fmt::format("{}: Si mole fraction outside [0, 1]", name_));
  }
  if (!(density_ > 0.0) || !std::isfinite(density_)) {
    throw ValidationError(fmt::format("{}: density must be positive", name_));
  }
  if (components_.empty()) {
    throw ValidationError(fmt::format("{}: no components", name_));
  }
  double total = 0.0;
  for (const auto& c : components_) {
    const auto& e = c.element;
    if (e.z <= 0 || !(e.molar_mass > 0.0) || !(e.mean_excitation_ev > 0.0) ||
        !(e.low_energy_coeff > 0.0)) {
      throw ValidationError(fmt::format("{}: invalid element data for {}", name_, e.symbol));
    }
    if (!(c.mass_fraction >= 0.0 && c.mass_fraction <= 1.0)) {
      throw ValidationError(fmt::format("{}: mass fraction of {} outside [0, 1]", name_, e.symbol));
    }
    total += c.mass_fraction;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ValidationError(fmt::format("{}: mass fractions sum to {}", name_, total));
  }
}

}  // namespace seu::let

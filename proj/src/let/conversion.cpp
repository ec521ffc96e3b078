#include "seu/let/conversion.hpp"

#include <fmt/format.h>

#include "seu/error.hpp"

namespace seu::let {

namespace {
constexpr double kElementaryCharge = 1.602176634e-19;  // C
}

void ConversionSettings::validate() const {
  if (!(e_pair_ev > 0.0)) throw ValidationError("e_pair must be positive");
  if (!(paper_factor > 0.0)) throw ValidationError("paper_factor must be positive");
}

double let_to_charge_density(double let, const Material& material,
                             const ConversionSettings& conversion) {
  if (!(let >= 0.0)) throw DomainError(fmt::format("LET {} must be non-negative", let));
  conversion.validate();
  if (conversion.mode == ConversionMode::kPaperCompat) return let / conversion.paper_factor;

  // MeV/um deposited -> e-h pairs/um -> pC/um
  const double mev_per_um = let * material.density_mg_per_cm3() * 1e-4;
  const double pairs_per_um = mev_per_um * 1e6 / conversion.e_pair_ev;
  return pairs_per_um * kElementaryCharge * 1e12;
}

}  // namespace seu::let

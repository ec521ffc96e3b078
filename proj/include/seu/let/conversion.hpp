#pragma once

#include "seu/let/material.hpp"

namespace seu::let {

enum class ConversionMode { kFirstPrinciples, kPaperCompat };

// Factor mapping 1.54 MeV cm^2/mg onto 0.0144 pC/um.
inline constexpr double kTcadConversionFactor = 1.54 / 0.0144;

struct ConversionSettings {
  ConversionMode mode = ConversionMode::kPaperCompat;
  double e_pair_ev = 3.6;
  double paper_factor = kTcadConversionFactor;  // MeV cm^2 mg^-1 per pC/um

  void validate() const;
};

// LET (MeV cm^2/mg) to deposited charge per unit track length (pC/um).
double let_to_charge_density(double let, const Material& material,
                             const ConversionSettings& conversion = {});

}  // namespace seu::let

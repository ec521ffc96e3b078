#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "seu/let/stopping.hpp"
#include "seu/sram/cell.hpp"

namespace seu::io {

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { kMissingFile, kSyntax, kUnknownKey, kConstraint };

  ConfigError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct MaterialsConfig {
  double si_mole_fraction = 1.0;
  std::optional<double> density;  // g/cm^3 override
  let::ConversionSettings conversion{};
  double si_low_energy_coeff = let::kSiliconLowEnergyCoeff;
  double ge_low_energy_coeff = let::kGermaniumLowEnergyCoeff;
  std::optional<std::string> table;  // CSV stopping table override
};

struct OutputConfig {
  std::string directory = ".";
  int precision = 9;
};

struct RunConfig {
  MaterialsConfig materials;
  sram::SramConfig sram;
  OutputConfig output;

  let::Material material() const;
  let::StoppingModel stopping_model() const;
};

// Strict: unknown keys and out-of-range values are rejected with the dotted
// key path in the message. Omitted keys keep their defaults.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

nlohmann::json to_json(const RunConfig& config);

}  // namespace seu::io

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "seu/io/config.hpp"

namespace seu::test {

inline std::string source_path(const std::string& relative) {
  return std::string(SEU_SOURCE_DIR) + "/" + relative;
}

// Two-column numeric CSV with a header row; parsed without the library code.
inline std::vector<std::pair<double, double>> read_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing test data " + path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream s(line);
    double a = 0.0, b = 0.0;
    char comma = 0;
    s >> a >> comma >> b;
    rows.emplace_back(a, b);
  }
  return rows;
}

inline io::RunConfig shipped_config() { return io::load_config(source_path("configs/paper-repro.json")); }

}  // namespace seu::test

#pragma once

// Self-check suite over every module at a given (k, theta).

#include <string>
#include <vector>

#include "cqmc/dynamics.hpp"

namespace cqmc {

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured error, or the measured quantity for bound checks
  double tolerance = 0.0;
  std::string detail;
};

std::vector<Check> run_verification(const ModelParams& p);

}  // namespace cqmc

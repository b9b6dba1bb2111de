#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfa/grid_function.hpp"

namespace sfa {

// One computed eigenpair of (p K g')' + lambda p g = 0 on a truncated grid.
struct Eigenpair {
  int index = 0;
  double lambda = 0.0;
  GridFunction g;
  // Flux p K g' (plus boundary residual terms), sampled on the same grid.
  GridFunction flux;
  // Density p at the grid nodes.
  std::vector<double> density;
  // Integral of p g^2 by the trapezoid rule after normalization.
  double normalization = 1.0;
  std::string sign_convention = "first-value-positive";
  // Estimated |lambda - lambda_exact| from the n / 2n refinement pass.
  std::optional<double> richardson_error;
};

}  // namespace sfa

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sfa {

// Samples on a strictly increasing grid (>= 3 points).
//
// Values between nodes come from a piecewise cubic Hermite interpolant.  By
// default the node slopes are the monotonicity-preserving Fritsch-Butland
// choice (PCHIP), so the interpolant never overshoots the data; callers that
// know exact node derivatives may supply them instead.
//
// Node derivatives (`node_derivative`) are second-order finite differences:
// the three-point nonuniform centered formula in the interior and the
// three-point one-sided formula at both ends.  Quadrature is the trapezoid
// rule on the grid.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(std::vector<double> grid, std::vector<double> values);
  GridFunction(std::vector<double> grid, std::vector<double> values,
               std::vector<double> slopes);

  std::span<const double> grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> slopes() const { return slopes_; }
  std::size_t size() const { return grid_.size(); }
  bool empty() const { return grid_.empty(); }
  double front() const { return grid_.front(); }
  double back() const { return grid_.back(); }

  // Interpolated value and derivative; throws DomainError outside the grid.
  double operator()(double s) const;
  double derivative(double s) const;

  GridFunction node_derivative() const;
  double integral() const;
  double max_abs() const;

  // Index i with grid[i] <= s <= grid[i+1].
  std::size_t locate(double s) const;

 private:
  void validate() const;
  void compute_monotone_slopes();

  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

// Trapezoid weights: integral of f ~ sum_i weights[i] f(grid[i]).
std::vector<double> trapezoid_weights(std::span<const double> grid);
double trapezoid(std::span<const double> grid, std::span<const double> values);

}  // namespace sfa

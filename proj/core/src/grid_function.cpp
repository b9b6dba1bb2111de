#include "sfa/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sfa/errors.hpp"

namespace sfa {

GridFunction::GridFunction(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  validate();
  compute_monotone_slopes();
}

GridFunction::GridFunction(std::vector<double> grid, std::vector<double> values,
                           std::vector<double> slopes)
    : grid_(std::move(grid)), values_(std::move(values)), slopes_(std::move(slopes)) {
  validate();
  if (slopes_.size() != grid_.size()) {
    throw PreconditionError("GridFunction: slope count differs from grid size");
  }
}

void GridFunction::validate() const {
  if (grid_.size() < 3) throw PreconditionError("GridFunction: need at least 3 grid points");
  if (values_.size() != grid_.size()) {
    throw PreconditionError("GridFunction: value count differs from grid size");
  }
  for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
    if (!(grid_[i] < grid_[i + 1])) {
      std::ostringstream msg;
      msg << "GridFunction: grid not strictly increasing at index " << i;
      throw PreconditionError(msg.str());
    }
  }
}

// Fritsch-Butland weighted harmonic mean in the interior, shape-preserving
// three-point formula at the ends.
void GridFunction::compute_monotone_slopes() {
  const std::size_t n = grid_.size();
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = grid_[i + 1] - grid_[i];
    delta[i] = (values_[i + 1] - values_[i]) / h[i];
  }
  slopes_.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d0 = delta[i - 1];
    const double d1 = delta[i];
    if (d0 * d1 <= 0.0) continue;
    const double w1 = 2.0 * h[i] + h[i - 1];
    const double w2 = h[i] + 2.0 * h[i - 1];
    slopes_[i] = (w1 + w2) / (w1 / d0 + w2 / d1);
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(d) > std::abs(3.0 * d0)) return 3.0 * d0;
    return d;
  };
  slopes_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  slopes_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

std::size_t GridFunction::locate(double s) const {
  const double tol = 1e-12 * (grid_.back() - grid_.front());
  if (!(s >= grid_.front() - tol && s <= grid_.back() + tol)) {
    std::ostringstream msg;
    msg << "GridFunction: query " << s << " outside [" << grid_.front() << ", " << grid_.back()
        << "]";
    throw DomainError(msg.str());
  }
  auto it = std::upper_bound(grid_.begin(), grid_.end(), s);
  std::size_t i = it == grid_.begin() ? 0 : static_cast<std::size_t>(it - grid_.begin()) - 1;
  return std::min(i, grid_.size() - 2);
}

double GridFunction::operator()(double s) const {
  const std::size_t i = locate(s);
  const double h = grid_[i + 1] - grid_[i];
  const double t = std::clamp((s - grid_[i]) / h, 0.0, 1.0);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * values_[i] + h10 * h * slopes_[i] + h01 * values_[i + 1] +
         h11 * h * slopes_[i + 1];
}

double GridFunction::derivative(double s) const {
  const std::size_t i = locate(s);
  const double h = grid_[i + 1] - grid_[i];
  const double t = std::clamp((s - grid_[i]) / h, 0.0, 1.0);
  const double t2 = t * t;
  const double d00 = (6.0 * t2 - 6.0 * t) / h;
  const double d10 = 3.0 * t2 - 4.0 * t + 1.0;
  const double d01 = (-6.0 * t2 + 6.0 * t) / h;
  const double d11 = 3.0 * t2 - 2.0 * t;
  return d00 * values_[i] + d10 * slopes_[i] + d01 * values_[i + 1] + d11 * slopes_[i + 1];
}

GridFunction GridFunction::node_derivative() const {
  const std::size_t n = grid_.size();
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = grid_[i] - grid_[i - 1];
    const double hp = grid_[i + 1] - grid_[i];
    d[i] = (-hp / (hm * (hm + hp))) * values_[i - 1] + ((hp - hm) / (hm * hp)) * values_[i] +
           (hm / (hp * (hm + hp))) * values_[i + 1];
  }
  {
    const double h1 = grid_[1] - grid_[0];
    const double h2 = grid_[2] - grid_[1];
    d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * values_[0] + (h1 + h2) / (h1 * h2) * values_[1] -
           h1 / (h2 * (h1 + h2)) * values_[2];
  }
  {
    const double h1 = grid_[n - 1] - grid_[n - 2];
    const double h2 = grid_[n - 2] - grid_[n - 3];
    d[n - 1] = (2.0 * h1 + h2) / (h1 * (h1 + h2)) * values_[n - 1] -
               (h1 + h2) / (h1 * h2) * values_[n - 2] + h1 / (h2 * (h1 + h2)) * values_[n - 3];
  }
  return GridFunction(grid_, std::move(d));
}

double GridFunction::integral() const { return trapezoid(grid_, values_); }

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> trapezoid_weights(std::span<const double> grid) {
  const std::size_t n = grid.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = grid[i + 1] - grid[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

double trapezoid(std::span<const double> grid, std::span<const double> values) {
  if (grid.size() != values.size()) throw PreconditionError("trapezoid: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    sum += 0.5 * (grid[i + 1] - grid[i]) * (values[i] + values[i + 1]);
  }
  return sum;
}

}  // namespace sfa

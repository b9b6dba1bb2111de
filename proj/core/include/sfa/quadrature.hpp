#pragma once

#include <functional>

namespace sfa {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  // Bound on the mass discarded beyond the last tail panel (0 on finite
  // intervals).
  double discarded_tail = 0.0;
  int evaluations = 0;
  int panels = 0;
  bool converged = true;
};

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  int max_depth = 48;
  // Tail panels stop once a panel contributes less than this fraction of the
  // running total.
  double tail_cutoff = 1e-14;
  int max_tail_panels = 1000;
};

using Integrand = std::function<double(double)>;

// Adaptive Simpson on a finite interval [a, b].  a > b yields the negated
// integral over [b, a].
QuadratureResult adaptive_simpson(const Integrand& f, double a, double b,
                                  const QuadratureOptions& opts = {});

// Integral of f over the half line beyond `from`: (from, +inf) when
// direction > 0, (-inf, from) when direction < 0.
// The half line is covered by panels of doubling width starting at `width`;
// integration stops once a panel's contribution falls below
// opts.tail_cutoff times the running total, and the remaining tail is
// bounded from the observed panel decay ratio.
QuadratureResult integrate_tail(const Integrand& f, double from, int direction,
                                double width,
                                const QuadratureOptions& opts = {});

// Integral over (left, right), either end possibly infinite.  Doubly
// infinite ranges are split at `center`; `width` sets the first tail panel.
QuadratureResult integrate(const Integrand& f, double left, double right,
                           double center, double width,
                           const QuadratureOptions& opts = {});

}  // namespace sfa

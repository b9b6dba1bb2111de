#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sfa/coefficients.hpp"

namespace sfa {

enum class LimitKind { ConvergesTo, Diverges, Inconclusive, NotApplicable };

const char* to_string(LimitKind kind);

struct ProbePoint {
  double x = 0.0;
  double value = 0.0;
};

struct LimitVerdict {
  LimitKind kind = LimitKind::Inconclusive;
  double value = 0.0;  // limit, for ConvergesTo
  int sign = 0;        // +1 / -1, for Diverges
  std::vector<ProbePoint> trace;
  std::string method;  // "richardson", "geometric-decay", "monotone-growth", ...

  bool converges() const { return kind == LimitKind::ConvergesTo; }
  bool diverges() const { return kind == LimitKind::Diverges; }
  bool inconclusive() const { return kind == LimitKind::Inconclusive; }
  // ConvergesTo with |value| <= tol.
  bool converges_to_zero(double tol = 1e-6) const;

  static LimitVerdict not_applicable(std::string why);
};

struct LimitRules {
  int min_probes = 8;
  double divergence_threshold = 1e6;
  // Last four magnitudes must shrink by at least this factor per step for a
  // geometric decay to zero.
  double decay_ratio = 0.75;
  double richardson_tol = 1e-6;
};

// Classifies a probe trace whose points approach an endpoint.  Rules, in
// order: fewer than min_probes points -> Inconclusive; last 4 magnitudes
// strictly increasing and the last above the threshold -> Diverges; last 4
// magnitudes shrinking geometrically (or exactly zero) -> ConvergesTo(0);
// Richardson values 2 f[k+1] - f[k] settling within the tolerance ->
// ConvergesTo(extrapolated value); otherwise Inconclusive.
LimitVerdict judge_trace(std::vector<ProbePoint> trace, const LimitRules& rules = {});

// Geometric probes toward an endpoint: x0 + dir 2^k h for an infinite
// endpoint, c - dir h 2^-k for a finite one (k = 0 .. count-1).  Probes that
// would leave the open domain are dropped.
std::vector<double> probe_points(const Interval& domain, Side side, double x0, double h,
                                 int count = 24);

// Evaluates f on the probes, stopping at the first non-finite value.
std::vector<ProbePoint> sample_probes(const std::function<double(double)>& f,
                                      const std::vector<double>& probes);

LimitVerdict evaluate_limit(const std::function<double(double)>& f,
                            const std::vector<double>& probes, const LimitRules& rules = {});

}  // namespace sfa

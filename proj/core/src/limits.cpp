#include "sfa/limits.hpp"

#include <algorithm>
#include <cmath>

namespace sfa {

const char* to_string(LimitKind kind) {
  switch (kind) {
    case LimitKind::ConvergesTo: return "converges";
    case LimitKind::Diverges: return "diverges";
    case LimitKind::Inconclusive: return "inconclusive";
    case LimitKind::NotApplicable: return "not_applicable";
  }
  return "inconclusive";
}

bool LimitVerdict::converges_to_zero(double tol) const {
  return kind == LimitKind::ConvergesTo && std::abs(value) <= tol;
}

LimitVerdict LimitVerdict::not_applicable(std::string why) {
  LimitVerdict v;
  v.kind = LimitKind::NotApplicable;
  v.method = std::move(why);
  return v;
}

LimitVerdict judge_trace(std::vector<ProbePoint> trace, const LimitRules& rules) {
  LimitVerdict out;
  out.trace = std::move(trace);
  const auto& t = out.trace;
  const std::size_t n = t.size();
  if (static_cast<int>(n) < std::max(rules.min_probes, 4)) {
    out.method = "too-few-probes";
    return out;
  }

  bool growing = std::abs(t[n - 1].value) > rules.divergence_threshold;
  for (std::size_t k = n - 3; k < n && growing; ++k) {
    growing = std::abs(t[k].value) > std::abs(t[k - 1].value);
  }
  if (growing) {
    out.kind = LimitKind::Diverges;
    out.sign = t[n - 1].value > 0 ? 1 : -1;
    for (std::size_t k = n - 4; k < n; ++k) {
      if ((t[k].value > 0 ? 1 : -1) != out.sign) out.sign = 0;
    }
    out.method = "monotone-growth";
    return out;
  }

  bool decaying = true;
  for (std::size_t k = n - 3; k < n && decaying; ++k) {
    const double a = std::abs(t[k - 1].value);
    const double b = std::abs(t[k].value);
    decaying = b == 0.0 || (b < a && b <= rules.decay_ratio * a);
  }
  if (decaying) {
    out.kind = LimitKind::ConvergesTo;
    out.value = 0.0;
    out.method = "geometric-decay";
    return out;
  }

  std::vector<double> r(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) r[k] = 2.0 * t[k + 1].value - t[k].value;
  const std::size_t m = r.size();
  const double last = r[m - 1];
  const double tol = rules.richardson_tol * std::max(1.0, std::abs(last));
  if (std::abs(r[m - 1] - r[m - 2]) <= tol && std::abs(r[m - 2] - r[m - 3]) <= tol) {
    out.kind = LimitKind::ConvergesTo;
    out.value = last;
    out.method = "richardson";
    return out;
  }
  out.method = "no-pattern";
  return out;
}

std::vector<double> probe_points(const Interval& domain, Side side, double x0, double h,
                                 int count) {
  std::vector<double> out;
  const double dir = side == Side::Right ? 1.0 : -1.0;
  const double c = domain.endpoint(side);
  const bool finite = std::isfinite(c);
  for (int k = 0; k < count; ++k) {
    const double x = finite ? c - dir * h * std::ldexp(1.0, -k) : x0 + dir * std::ldexp(h, k);
    if (domain.contains(x)) out.push_back(x);
  }
  return out;
}

std::vector<ProbePoint> sample_probes(const std::function<double(double)>& f,
                                      const std::vector<double>& probes) {
  std::vector<ProbePoint> out;
  out.reserve(probes.size());
  for (double x : probes) {
    const double v = f(x);
    if (!std::isfinite(v)) break;
    out.push_back({x, v});
  }
  return out;
}

LimitVerdict evaluate_limit(const std::function<double(double)>& f,
                            const std::vector<double>& probes, const LimitRules& rules) {
  return judge_trace(sample_probes(f, probes), rules);
}

}  // namespace sfa

#include "sfa/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sfa/errors.hpp"

namespace sfa {
namespace {

struct SimpsonState {
  const Integrand& f;
  int max_depth;
  int evaluations = 0;
  double error = 0.0;
  bool converged = true;

  double eval(double x) {
    ++evaluations;
    return f(x);
  }

  double recurse(double a, double fa, double m, double fm, double b, double fb,
                 double whole, double eps, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (!std::isfinite(delta)) {
      converged = false;
      return left + right;
    }
    if (depth >= max_depth) {
      converged = false;
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth >= 3 && std::abs(delta) <= 15.0 * eps) {
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return recurse(a, fa, lm, flm, m, fm, left, 0.5 * eps, depth + 1) +
           recurse(m, fm, rm, frm, b, fb, right, 0.5 * eps, depth + 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const Integrand& f, double a, double b,
                                  const QuadratureOptions& opts) {
  QuadratureResult out;
  if (a == b) return out;
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw PreconditionError("adaptive_simpson: interval must be finite");
  }
  const double sign = a < b ? 1.0 : -1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);

  // Coarse composite pass fixes the absolute tolerance scale and seeds the
  // recursion on 16 sub-panels.
  constexpr int kPanels = 16;
  SimpsonState st{f, opts.max_depth};
  double nodes[2 * kPanels + 1];
  const double h = (hi - lo) / (2 * kPanels);
  for (int i = 0; i <= 2 * kPanels; ++i) {
    const double x = i == 2 * kPanels ? hi : lo + i * h;
    nodes[i] = st.eval(x);
  }
  double coarse_abs = 0.0;
  for (int k = 0; k < kPanels; ++k) {
    const double v = (2 * h) / 6.0 * (nodes[2 * k] + 4.0 * nodes[2 * k + 1] + nodes[2 * k + 2]);
    coarse_abs += std::abs(v);
  }
  const double eps_total = std::max(opts.abs_tol, opts.rel_tol * coarse_abs);
  double total = 0.0;
  for (int k = 0; k < kPanels; ++k) {
    const double pa = lo + 2 * k * h;
    const double pb = k + 1 == kPanels ? hi : lo + 2 * (k + 1) * h;
    const double pm = lo + (2 * k + 1) * h;
    const double whole = (pb - pa) / 6.0 * (nodes[2 * k] + 4.0 * nodes[2 * k + 1] + nodes[2 * k + 2]);
    if (eps_total == 0.0 && whole == 0.0 && nodes[2 * k] == 0.0 && nodes[2 * k + 2] == 0.0 &&
        nodes[2 * k + 1] == 0.0) {
      continue;
    }
    total += st.recurse(pa, nodes[2 * k], pm, nodes[2 * k + 1], pb, nodes[2 * k + 2], whole,
                        eps_total / kPanels, 1);
  }
  out.value = sign * total;
  out.error_estimate = st.error;
  out.evaluations = st.evaluations;
  out.converged = st.converged && std::isfinite(total);
  out.panels = 1;
  return out;
}

QuadratureResult integrate_tail(const Integrand& f, double from, int direction, double width,
                                const QuadratureOptions& opts) {
  if (direction == 0 || !(width > 0.0) || !std::isfinite(from)) {
    throw PreconditionError("integrate_tail: need finite start, nonzero direction, positive width");
  }
  const double dir = direction > 0 ? 1.0 : -1.0;
  QuadratureResult out;
  out.converged = false;
  double total = 0.0;
  double prev = std::numeric_limits<double>::quiet_NaN();
  double panel_start = from;
  double panel_width = width;
  for (int k = 0; k < opts.max_tail_panels; ++k) {
    const double panel_end = panel_start + dir * panel_width;
    if (!std::isfinite(panel_end)) break;
    const QuadratureResult piece = adaptive_simpson(f, panel_start, panel_end, opts);
    const double contribution = dir * piece.value;
    out.evaluations += piece.evaluations;
    out.error_estimate += piece.error_estimate;
    out.panels = k + 1;
    if (!piece.converged || !std::isfinite(contribution)) {
      out.value = total;
      return out;
    }
    total += contribution;
    const bool small = std::abs(contribution) <= opts.tail_cutoff * std::abs(total);
    const bool vanished = total == 0.0 && contribution == 0.0;
    if (k >= 3 && (small || vanished)) {
      double ratio = 0.5;
      if (std::isfinite(prev) && prev != 0.0) ratio = std::clamp(std::abs(contribution / prev), 0.0, 0.999);
      out.discarded_tail = std::abs(contribution) * ratio / (1.0 - ratio);
      out.converged = true;
      out.value = total;
      return out;
    }
    prev = contribution;
    panel_start = panel_end;
    panel_width *= 2.0;
  }
  out.value = total;
  return out;
}

QuadratureResult integrate(const Integrand& f, double left, double right, double center,
                           double width, const QuadratureOptions& opts) {
  if (!(left < right)) throw PreconditionError("integrate: need left < right");
  const bool lf = std::isfinite(left);
  const bool rf = std::isfinite(right);
  if (lf && rf) return adaptive_simpson(f, left, right, opts);

  auto merge = [](QuadratureResult a, const QuadratureResult& b) {
    a.value += b.value;
    a.error_estimate += b.error_estimate;
    a.discarded_tail += b.discarded_tail;
    a.evaluations += b.evaluations;
    a.panels += b.panels;
    a.converged = a.converged && b.converged;
    return a;
  };
  if (lf) return integrate_tail(f, left, +1, width, opts);
  if (rf) {
    return integrate_tail(f, right, -1, width, opts);
  }
  QuadratureResult up = integrate_tail(f, center, +1, width, opts);
  QuadratureResult down = integrate_tail(f, center, -1, width, opts);
  return merge(up, down);
}

}  // namespace sfa

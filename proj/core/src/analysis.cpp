#include "sfa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sfa/canonical.hpp"
#include "sfa/errors.hpp"

namespace sfa {

namespace {

struct RootScan {
  std::vector<double> roots;
  std::vector<double> touches;
};

// Bisection on the interpolant until |f| < tol.
double bisect(const GridFunction& f, double a, double b, double tol) {
  double fa = f(a);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (std::abs(fm) < tol || m <= a || m >= b) return m;
    if ((fa < 0.0) == (fm < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Sign changes of f on the grid.  Nodes whose `flat` flag is set are treated
// as zero.  Runs of zero nodes between opposite signs give one root at the
// middle of the run; between equal signs they are touches.  Small interior
// local minima of |f| without a sign change are touches as well.
RootScan scan_roots(const GridFunction& f, const std::vector<bool>& flat, double root_tol,
                    double touch_tol) {
  const auto s = f.grid();
  const auto v = f.values();
  const std::size_t n = v.size();
  auto sgn = [&](std::size_t i) -> int {
    if (flat[i] || v[i] == 0.0) return 0;
    return v[i] > 0.0 ? 1 : -1;
  };
  RootScan out;
  std::size_t prev = n;  // last node with non-zero sign
  for (std::size_t i = 0; i < n; ++i) {
    const int si = sgn(i);
    if (si == 0) continue;
    if (prev != n) {
      const int sp = sgn(prev);
      if (i == prev + 1) {
        if (sp != si) out.roots.push_back(bisect(f, s[prev], s[i], root_tol));
      } else {
        const double mid = s[(prev + 1 + i - 1) / 2];
        bool interior_run = true;
        for (std::size_t k = prev + 1; k < i; ++k) interior_run = interior_run && !flat[k];
        if (interior_run) {
          if (sp != si) {
            out.roots.push_back(mid);
          } else {
            out.touches.push_back(mid);
          }
        }
      }
    }
    prev = i;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double a = std::abs(v[i]);
    if (v[i] == 0.0 || flat[i]) continue;
    if (a < std::abs(v[i - 1]) && a < std::abs(v[i + 1]) && a < touch_tol &&
        sgn(i - 1) == sgn(i) && sgn(i + 1) == sgn(i)) {
      out.touches.push_back(s[i]);
    }
  }
  std::sort(out.roots.begin(), out.roots.end());
  std::sort(out.touches.begin(), out.touches.end());
  return out;
}

bool same_grid(const Eigenpair& a, const Eigenpair& b) {
  const auto ga = a.g.grid();
  const auto gb = b.g.grid();
  if (ga.size() != gb.size()) return false;
  for (std::size_t i = 0; i < ga.size(); ++i) {
    if (std::abs(ga[i] - gb[i]) > 1e-12 * std::max(1.0, std::abs(ga[i]))) return false;
  }
  return true;
}

bool is_degenerate(const Eigenpair& pair) {
  const auto v = pair.g.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double gmax = pair.g.max_abs();
  return gmax == 0.0 || (*hi - *lo) <= 1e-10 * gmax;
}

}  // namespace

ZeroSet find_zeros(const Eigenpair& pair) {
  const double gmax = pair.g.max_abs();
  ZeroSet out;
  if (gmax == 0.0 || is_degenerate(pair)) return out;
  const std::vector<bool> flat(pair.g.size(), false);
  RootScan scan = scan_roots(pair.g, flat, 1e-10 * gmax, 1e-6 * gmax);
  out.zeros = std::move(scan.roots);
  out.tangential = std::move(scan.touches);
  return out;
}

StationarySet find_stationary_points(const Eigenpair& pair) {
  StationarySet out;
  if (is_degenerate(pair)) {
    out.degenerate = true;
    return out;
  }
  const GridFunction& f = pair.flux;
  const double fmax = f.max_abs();
  const std::size_t n = f.size();
  std::vector<bool> flat(n, false);
  const bool left_flat = std::abs(f.values().front()) <= 1e-6 * fmax;
  const bool right_flat = std::abs(f.values().back()) <= 1e-6 * fmax;
  flat.front() = left_flat;
  flat.back() = right_flat;
  RootScan scan = scan_roots(f, flat, 1e-8 * fmax, 1e-6 * fmax);
  if (left_flat) out.points.push_back(f.front());
  out.points.insert(out.points.end(), scan.roots.begin(), scan.roots.end());
  if (right_flat) out.points.push_back(f.back());
  out.saddles = std::move(scan.touches);
  return out;
}

OscillationReport interlace_check(const Eigenpair& pair) {
  if (is_degenerate(pair) || !(std::abs(pair.lambda) > 1e-8)) {
    throw PreconditionError("interlace_check: degenerate constant mode (lambda ~ 0)");
  }
  OscillationReport rep;
  rep.index = pair.index;
  const ZeroSet zs = find_zeros(pair);
  const StationarySet st = find_stationary_points(pair);
  rep.zeros = zs.zeros;
  rep.tangential_zeros = zs.tangential;
  rep.stationary_points = st.points;

  auto count_between = [](const std::vector<double>& xs, double a, double b) {
    return std::count_if(xs.begin(), xs.end(), [&](double x) { return x > a && x < b; });
  };
  rep.property1 = true;
  for (std::size_t k = 0; k + 1 < rep.zeros.size(); ++k) {
    if (count_between(rep.stationary_points, rep.zeros[k], rep.zeros[k + 1]) != 1) {
      rep.property1 = false;
    }
  }
  rep.property2 = true;
  for (std::size_t k = 0; k + 1 < rep.stationary_points.size(); ++k) {
    if (count_between(rep.zeros, rep.stationary_points[k], rep.stationary_points[k + 1]) != 1) {
      rep.property2 = false;
    }
  }

  const double gtol = 1e-8 * pair.g.max_abs();
  const double ftol = 1e-8 * pair.flux.max_abs();
  auto describe = [](const char* what, double x) {
    std::ostringstream msg;
    msg << what << " at s = " << x;
    return msg.str();
  };
  for (double x : rep.stationary_points) {
    if (std::abs(pair.g(x)) <= gtol) {
      rep.coincidence_violations.push_back(describe("g vanishes at a stationary point", x));
    }
  }
  for (const auto* set : {&rep.zeros, &rep.tangential_zeros}) {
    for (double x : *set) {
      if (std::abs(pair.flux(x)) <= ftol) {
        rep.coincidence_violations.push_back(describe("flux vanishes at a zero", x));
      }
    }
  }
  rep.property3 = rep.coincidence_violations.empty();
  rep.property4 = st.saddles.empty();
  rep.interlace_ok = rep.property1 && rep.property2 && rep.property3 && rep.property4;
  return rep;
}

bool is_strictly_monotone(const Eigenpair& pair) {
  const auto f = pair.flux.values();
  if (f.size() < 3 || is_degenerate(pair)) return false;
  const bool positive = f[1] > 0.0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    if (f[i] == 0.0 || (f[i] > 0.0) != positive) return false;
  }
  return true;
}

bool first_harmonic_monotonicity(const Eigenpair& pair) {
  if (pair.index != 1) {
    throw PreconditionError("first_harmonic_monotonicity: pair index must be 1");
  }
  return is_strictly_monotone(pair);
}

DeltaReport delta_report(const CoefficientProblem& problem, const Eigenpair& pair) {
  DeltaReport rep;
  rep.index = pair.index;
  rep.lambda = pair.lambda;
  const auto s = pair.g.grid();
  const auto g = pair.g.values();
  const auto f = pair.flux.values();
  const std::size_t n = s.size();
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::exp(problem.log_r(s[i]));
    integrand[i] = f[i] * f[i] / r;
    if (problem.has_potential()) integrand[i] += problem.q(s[i]) * g[i] * g[i];
  }
  rep.delta_value = trapezoid(s, integrand);
  rep.relative_gap = std::abs(rep.delta_value - rep.lambda) / std::max(rep.lambda, 1e-12);

  // Eight probes from the 90% index position to the second-to-last node.
  const std::size_t i0 = static_cast<std::size_t>(std::floor(0.9 * static_cast<double>(n - 1)));
  const std::size_t i1 = n - 2;
  std::vector<std::size_t> idx;
  for (int k = 0; k < 8; ++k) {
    idx.push_back(i0 + static_cast<std::size_t>(std::lround(k * static_cast<double>(i1 - i0) / 7.0)));
  }
  auto trace = [&](bool right, auto&& value) {
    std::vector<ProbePoint> pts;
    for (std::size_t k : idx) {
      const std::size_t i = right ? k : n - 1 - k;
      pts.push_back({s[i], value(i)});
    }
    BoundaryTrace bt;
    bool decreasing = true;
    for (std::size_t k = pts.size() - 3; k < pts.size(); ++k) {
      decreasing = decreasing && std::abs(pts[k].value) < std::abs(pts[k - 1].value);
    }
    const double first = std::abs(pts[pts.size() - 4].value);
    const double last = std::abs(pts.back().value);
    bt.decays_tenfold = decreasing && last * 10.0 <= first;
    bt.verdict = judge_trace(std::move(pts));
    return bt;
  };
  for (int side = 0; side < 2; ++side) {
    const bool right = side == 1;
    rep.boundary_flux[side] = trace(right, [&](std::size_t i) { return g[i] * f[i]; });
    rep.weighted_square[side] = trace(right, [&](std::size_t i) { return pair.density[i] * g[i] * g[i]; });
  }
  std::ostringstream note;
  note << "probes cover the outermost 10% of the truncated grid [" << s.front() << ", "
       << s.back() << "]; behaviour beyond the truncation is not observed";
  rep.window_note = note.str();
  return rep;
}

SturmPiconeResult sturm_picone_check(const Eigenpair& lower, const Eigenpair& upper) {
  if (!same_grid(lower, upper)) {
    throw PreconditionError("sturm_picone_check: eigenpairs live on different grids");
  }
  SturmPiconeResult out;
  if (lower.index == upper.index) {
    out.ok = true;
    out.degenerate_input = true;
    return out;
  }
  const auto zl = find_zeros(lower).zeros;
  const auto zu = find_zeros(upper).zeros;
  out.ok = true;
  for (std::size_t k = 0; k + 1 < zu.size(); ++k) {
    const auto c = std::count_if(zl.begin(), zl.end(), [&](double x) { return x > zu[k] && x < zu[k + 1]; });
    if (c > 1) out.ok = false;
  }
  for (double z : zl) {
    bool inside = false;
    for (std::size_t k = 0; k + 1 < zu.size(); ++k) inside = inside || (z > zu[k] && z < zu[k + 1]);
    if (!inside) out.ok = false;
  }
  return out;
}

double chebyshev_relation_check(const CoefficientProblem& problem, const Eigenpair& first,
                                const Eigenpair& pair_i) {
  if (problem.family().kind != FamilyKind::UniformCosine) {
    throw NotApplicable("chebyshev_relation_check: only defined for the uniform cosine family");
  }
  if (first.index != 1) throw PreconditionError("chebyshev_relation_check: first pair must have index 1");
  if (!same_grid(first, pair_i)) {
    throw PreconditionError("chebyshev_relation_check: eigenpairs live on different grids");
  }
  const double root2 = std::numbers::sqrt2;
  const auto g1 = first.g.values();
  const auto gi = pair_i.g.values();
  std::vector<double> ref(g1.size());
  double dot = 0.0;
  for (std::size_t k = 0; k < g1.size(); ++k) {
    const double c = std::clamp(g1[k] / root2, -1.0, 1.0);
    ref[k] = root2 * std::cos(pair_i.index * std::acos(c));
    dot += ref[k] * gi[k];
  }
  const double sign = dot < 0.0 ? -1.0 : 1.0;
  double dev = 0.0;
  for (std::size_t k = 0; k < g1.size(); ++k) dev = std::max(dev, std::abs(sign * gi[k] - ref[k]));
  return dev;
}

CharacteristicRoots characteristic_roots(const CoefficientProblem& problem, Side side,
                                         double lambda) {
  if (is_regular_endpoint(problem, side)) {
    throw NotApplicable(std::string("characteristic_roots: the ") + to_string(side) +
                        " endpoint is regular");
  }
  const auto& dom = problem.domain();
  const double h = dom.bounded() ? std::min(problem.scale(), 0.5 * dom.width()) : problem.scale();
  const auto probes = probe_points(dom, side, problem.center(), h);
  CharacteristicRoots out;
  std::vector<ProbePoint> plus, minus;
  std::vector<bool> negative;
  for (double x : probes) {
    const double b = 0.5 * eval_log_derivative(problem, LogDerivativeOf::Flux, x);
    const double c = lambda / problem.K(x);
    const double disc = b * b - c;
    if (!std::isfinite(disc)) break;
    negative.push_back(disc < 0.0);
    if (disc < 0.0) {
      out.complex_at.push_back(x);
      continue;
    }
    const double root = std::sqrt(disc);
    // Roots of y^2 + 2b y + c = 0 without cancellation.
    double rp, rm;
    if (-b >= 0.0) {
      rp = -b + root;
      rm = rp != 0.0 ? c / rp : -b - root;
    } else {
      rm = -b - root;
      rp = c / rm;
    }
    plus.push_back({x, rp});
    minus.push_back({x, rm});
  }
  out.complex_tail = negative.size() >= 4 &&
                     std::all_of(negative.end() - 4, negative.end(), [](bool v) { return v; });
  out.plus = judge_trace(std::move(plus));
  out.minus = judge_trace(std::move(minus));
  if (out.complex_tail) {
    out.plus.kind = out.minus.kind = LimitKind::Inconclusive;
    out.plus.method = out.minus.method = "complex discriminant near the endpoint";
  }
  return out;
}

}  // namespace sfa

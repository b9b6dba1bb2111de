#include "sfa/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sfa/errors.hpp"
#include "sfa/limits.hpp"

namespace sfa {

const char* to_string(EndpointKind kind) {
  switch (kind) {
    case EndpointKind::Regular: return "regular";
    case EndpointKind::LimitCircle: return "LC";
    case EndpointKind::LimitPoint: return "LP";
    case EndpointKind::Unknown: return "unknown";
  }
  return "unknown";
}

bool is_regular_endpoint(const CoefficientProblem& problem, Side side) {
  const auto& dom = problem.domain();
  if (!std::isfinite(dom.endpoint(side))) return false;
  const double h = dom.bounded() ? std::min(problem.scale(), 0.5 * dom.width()) : problem.scale();
  const auto probes = probe_points(dom, side, problem.center(), h);
  auto positive_limit = [&](const ScalarField& f) {
    const LimitVerdict v = evaluate_limit([&f](double s) { return f(s); }, probes);
    return v.converges() && v.value > 0.0 && std::isfinite(v.value);
  };
  return positive_limit(problem.density()) && positive_limit(problem.dynamics());
}

double wronskian(const GridFunction& f, const GridFunction& g, const ScalarField& r, double s) {
  const double rs = r(s);
  return f(s) * rs * g.derivative(s) - g(s) * rs * f.derivative(s);
}

ScalarField flux_coefficient(const CoefficientProblem& problem) {
  const ScalarField p = problem.density();
  const ScalarField k = problem.dynamics();
  return ScalarField([p, k](double s) { return p(s) * k(s); }, {},
                     [p, k](double s) { return p.log(s) + k.log(s); })
      .with_support(problem.domain());
}

VSolution v_solution(const CoefficientProblem& problem, const std::vector<double>& grid,
                     double x0) {
  if (grid.size() < 3) throw PreconditionError("v_solution: need >= 3 grid points");
  if (!problem.domain().contains_closed(x0) || !std::isfinite(x0) || x0 < grid.front() ||
      x0 > grid.back()) {
    std::ostringstream msg;
    msg << "v_solution: x0 = " << x0 << " is outside the domain or the grid span";
    throw DomainError(msg.str());
  }
  auto inv_r = [&problem](double t) { return std::exp(-problem.log_r(t)); };
  QuadratureOptions opts;
  opts.rel_tol = 1e-12;

  const std::size_t n = grid.size();
  std::vector<double> v(n, 0.0), slope(n);
  for (std::size_t i = 0; i < n; ++i) {
    slope[i] = inv_r(grid[i]);
    if (!std::isfinite(slope[i]) || !(slope[i] > 0.0)) {
      std::ostringstream msg;
      msg << "v_solution: 1/(pK) is not finite at s = " << grid[i];
      throw PreconditionError(msg.str());
    }
    if (i > 0) v[i] = v[i - 1] + adaptive_simpson(inv_r, grid[i - 1], grid[i], opts).value;
  }
  std::size_t j = 0;
  while (j + 2 < n && grid[j + 1] <= x0) ++j;
  const double shift = v[j] + adaptive_simpson(inv_r, grid[j], x0, opts).value;
  for (double& x : v) x -= shift;

  VSolution out;
  out.x0 = x0;
  // With exact node slopes r v' = 1 up to rounding; rescale if a tabulated
  // coefficient leaves a measurable offset.
  const ScalarField r = flux_coefficient(problem);
  double mean_w = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean_w += r(grid[i]) * slope[i];
  mean_w /= static_cast<double>(n);
  if (std::isfinite(mean_w) && mean_w > 0.0 && std::abs(mean_w - 1.0) > 1e-12) {
    out.renormalization = 1.0 / mean_w;
    for (double& x : v) x *= out.renormalization;
    for (double& x : slope) x *= out.renormalization;
  }
  out.v = GridFunction(grid, std::move(v), std::move(slope));
  out.u = GridFunction(grid, std::vector<double>(n, 1.0), std::vector<double>(n, 0.0));
  return out;
}

Hamiltonian2x2 hamiltonian(const CoefficientProblem& problem, const std::vector<double>& grid,
                           double x0) {
  const VSolution vs = v_solution(problem, grid, x0);
  const std::size_t n = grid.size();
  std::vector<double> h1(n), h2(n), h3(n);
  Hamiltonian2x2 out;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = problem.p(grid[i]);
    const double v = vs.v.values()[i];
    h1[i] = p;
    h3[i] = p * v;
    h2[i] = p * v * v;
    const double d = h1[i] * h2[i] - h3[i] * h3[i];
    const double rel = std::abs(d) / std::max(1.0, h1[i] * h2[i]);
    out.max_det_residual = std::max(out.max_det_residual, rel);
    if (h1[i] < 0.0 || h2[i] < 0.0 || d < -1e-12 * std::max(1.0, h1[i] * h2[i])) out.psd = false;
  }
  out.h1 = GridFunction(grid, std::move(h1));
  out.h2 = GridFunction(grid, std::move(h2));
  out.h3 = GridFunction(grid, std::move(h3));
  return out;
}

namespace {

constexpr int kRomanovCells = 512;

// 8-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 8> kGlNodes = {
    0.019855071751231856, 0.10166676129318664, 0.2372337950418355, 0.4082826787521751,
    0.5917173212478249,   0.7627662049581645,  0.8983332387068134, 0.9801449282487681};
constexpr std::array<double, 8> kGlWeights = {
    0.05061426814518813, 0.11119051722668724, 0.15685332293894363, 0.18134189168918100,
    0.18134189168918100, 0.15685332293894363, 0.11119051722668724, 0.05061426814518813};

template <class F>
double gauss_legendre(const F& f, double a, double b) {
  double sum = 0.0;
  for (int k = 0; k < 8; ++k) sum += kGlWeights[k] * f(a + (b - a) * kGlNodes[k]);
  return sum * (b - a);
}

}  // namespace

RomanovTerms romanov_terms(const CoefficientProblem& problem, Side side, double x0, double x) {
  if (is_regular_endpoint(problem, side)) {
    throw NotApplicable(std::string("romanov: the ") + to_string(side) +
                        " endpoint is regular; the criterion targets singular endpoints");
  }
  const auto& dom = problem.domain();
  const double dir = side == Side::Right ? 1.0 : -1.0;
  if (!std::isfinite(x0) || !dom.contains_closed(x0) || !dom.contains(x) || !((x - x0) * dir > 0.0)) {
    std::ostringstream msg;
    msg << "romanov: need x0 <= x strictly toward the " << to_string(side)
        << " endpoint inside the domain (x0 = " << x0 << ", x = " << x << ")";
    throw DomainError(msg.str());
  }
  auto inv_r = [&problem](double t) { return std::exp(-problem.log_r(t)); };
  auto p = [&problem](double t) { return problem.p(t); };

  const double scale = problem.scale();
  const double umax = std::asinh(std::abs(x - x0) / scale);
  double v = 0.0;
  double a = 0.0;
  double t0 = x0;
  for (int j = 1; j <= kRomanovCells; ++j) {
    const double t1 =
        j == kRomanovCells ? x : x0 + dir * scale * std::sinh(umax * j / kRomanovCells);
    const double len = t1 - t0;
    double cell = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double tau = t0 + len * kGlNodes[k];
      const double vt = v + gauss_legendre(inv_r, t0, tau);
      cell += kGlWeights[k] * p(tau) * vt * vt;
    }
    a += cell * std::abs(len);
    v += gauss_legendre(inv_r, t0, t1);
    t0 = t1;
  }

  QuadratureOptions opts;
  opts.rel_tol = 1e-12;
  const double c = dom.endpoint(side);
  const double tail = std::isfinite(c)
                          ? std::abs(adaptive_simpson(p, x, c, opts).value)
                          : integrate_tail(p, x, side == Side::Right ? 1 : -1,
                                           std::max(scale, 0.5 * std::abs(x - x0)), opts)
                                .value;
  return RomanovTerms{a, tail, a * tail};
}

double romanov_product(const CoefficientProblem& problem, Side side, double x0, double x) {
  return romanov_terms(problem, side, x0, x).product;
}

double det(const Matrix2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

namespace {

bool is_zero(const Matrix2& m) {
  for (const auto& row : m) {
    for (double x : row) {
      if (x != 0.0) return false;
    }
  }
  return true;
}

double max_abs(const Matrix2& m) {
  double out = 0.0;
  for (const auto& row : m) {
    for (double x : row) out = std::max(out, std::abs(x));
  }
  return out;
}

// Rank of the 2x4 block (A, B) is 2 iff some 2x2 minor is non-zero.
bool full_rank(const BoundaryMatrices& m, double tol) {
  double cols[4][2];
  for (int i = 0; i < 2; ++i) {
    cols[0][i] = m.A[i][0];
    cols[1][i] = m.A[i][1];
    cols[2][i] = m.B[i][0];
    cols[3][i] = m.B[i][1];
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      if (std::abs(cols[a][0] * cols[b][1] - cols[a][1] * cols[b][0]) > tol) return true;
    }
  }
  return false;
}

}  // namespace

bool self_adjointness_check(const BoundaryMatrices& m,
                            std::pair<EndpointKind, EndpointKind> kinds) {
  for (const Matrix2* mat : {&m.A, &m.B}) {
    for (const auto& row : *mat) {
      for (double x : row) {
        if (!std::isfinite(x)) throw PreconditionError("self_adjointness_check: non-finite entry");
      }
    }
  }
  const bool left_lp = kinds.first == EndpointKind::LimitPoint;
  const bool right_lp = kinds.second == EndpointKind::LimitPoint;
  if (left_lp && !is_zero(m.A)) {
    throw PreconditionError("self_adjointness_check: LP left endpoint must carry A = 0");
  }
  if (right_lp && !is_zero(m.B)) {
    throw PreconditionError("self_adjointness_check: LP right endpoint must carry B = 0");
  }
  const double norm = std::max({1.0, max_abs(m.A), max_abs(m.B)});
  const double tol = 1e-12 * norm * norm;
  if (std::abs(det(m.A) - det(m.B)) > tol) return false;
  const int non_lp = (left_lp ? 0 : 1) + (right_lp ? 0 : 1);
  if (non_lp == 2) return full_rank(m, tol);
  if (non_lp == 1) return left_lp ? !is_zero(m.B) : !is_zero(m.A);
  return true;
}

BoundaryMatrices sfa_neumann_matrices(std::pair<EndpointKind, EndpointKind> kinds) {
  BoundaryMatrices m;
  if (kinds.first != EndpointKind::LimitPoint) m.A[0][0] = 1.0;
  if (kinds.second != EndpointKind::LimitPoint) m.B[1][0] = 1.0;
  return m;
}

std::array<double, 2> lc_y_vector(const CoefficientProblem& problem, const Eigenpair& pair,
                                  Side side, EndpointKind kind, double x0) {
  if (kind == EndpointKind::LimitPoint || kind == EndpointKind::Unknown) {
    throw NotApplicable(std::string("lc_y_vector: no boundary condition applies at an ") +
                        to_string(kind) + " endpoint");
  }
  const std::size_t i = side == Side::Left ? 0 : pair.g.size() - 1;
  const double y = pair.g.values()[i];
  const double flux = pair.flux.values()[i];
  if (kind == EndpointKind::Regular) return {y, flux};
  const std::vector<double> grid(pair.g.grid().begin(), pair.g.grid().end());
  const VSolution vs = v_solution(problem, grid, x0);
  const double v = vs.v.values()[i];
  // W(y, v) = y (r v') - v (r y') with r v' = 1; W(y, u) = -r y'.
  return {y - v * flux, -flux};
}

}  // namespace sfa

#include "sfa/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "sfa/errors.hpp"

namespace sfa {

const char* to_string(Side side) { return side == Side::Left ? "left" : "right"; }

const char* to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::UniformCosine: return "uniform_cosine";
    case FamilyKind::GaussianHermite: return "gaussian_hermite";
    case FamilyKind::PowerLawCounterexample: return "power_law";
    case FamilyKind::Custom: return "custom";
  }
  return "custom";
}

Interval::Interval(double l, double r) : left(l), right(r) {
  if (std::isnan(l) || std::isnan(r) || !(l < r)) {
    std::ostringstream msg;
    msg << "Interval: need left < right, got (" << l << ", " << r << ")";
    throw PreconditionError(msg.str());
  }
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(Fn value, Fn derivative, Fn log_value, Fn log_derivative)
    : value_(std::move(value)),
      derivative_(std::move(derivative)),
      log_value_(std::move(log_value)),
      log_derivative_(std::move(log_derivative)) {
  if (!value_) throw PreconditionError("ScalarField: value evaluator is required");
}

ScalarField ScalarField::constant(double c) {
  ScalarField f([c](double) { return c; }, [](double) { return 0.0; },
                [c](double) { return std::log(c); }, [](double) { return 0.0; });
  f.constant_ = c;
  return f;
}

ScalarField& ScalarField::set_derivative_order(int order) {
  derivative_order_ = std::max(0, order);
  return *this;
}

ScalarField ScalarField::with_support(Interval support) const {
  ScalarField f = *this;
  f.support_ = support;
  return f;
}

ScalarField ScalarField::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw PreconditionError("ScalarField::scaled: factor must be positive and finite");
  }
  ScalarField f = *this;
  Fn v = value_;
  f.value_ = [v, factor](double s) { return factor * v(s); };
  if (derivative_) {
    Fn d = derivative_;
    f.derivative_ = [d, factor](double s) { return factor * d(s); };
  }
  if (log_value_) {
    Fn l = log_value_;
    const double lf = std::log(factor);
    f.log_value_ = [l, lf](double s) { return l(s) + lf; };
  }
  if (constant_) f.constant_ = *constant_ * factor;
  return f;
}

double ScalarField::operator()(double s) const {
  if (!value_) throw PreconditionError("ScalarField: empty field");
  return value_(s);
}

double ScalarField::fd_step(double s) const { return std::max(1e-6, 1e-6 * std::abs(s)); }

namespace {

// Centered difference, or a second-order one-sided stencil when the centered
// one would leave the support.
template <class F>
double difference(const F& f, double s, double h, const Interval& support) {
  if (s - h < support.left) {
    return (-3.0 * f(s) + 4.0 * f(s + h) - f(s + 2.0 * h)) / (2.0 * h);
  }
  if (s + h > support.right) {
    return (3.0 * f(s) - 4.0 * f(s - h) + f(s - 2.0 * h)) / (2.0 * h);
  }
  return (f(s + h) - f(s - h)) / (2.0 * h);
}

}  // namespace

double ScalarField::derivative(double s) const {
  if (derivative_order_ < 1) throw PreconditionError("ScalarField: no derivative available");
  if (derivative_) return derivative_(s);
  return difference(value_, s, fd_step(s), support_);
}

double ScalarField::log(double s) const {
  if (log_value_) return log_value_(s);
  return std::log((*this)(s));
}

double ScalarField::log_derivative(double s) const {
  if (derivative_order_ < 1) throw PreconditionError("ScalarField: no derivative available");
  if (log_derivative_) return log_derivative_(s);
  if (derivative_ && !log_value_) {
    const double v = value_(s);
    if (std::abs(v) > 1e-290) return derivative_(s) / v;
  }
  auto lg = [this](double x) { return log(x); };
  return difference(lg, s, fd_step(s), support_);
}

// ---------------------------------------------------------------------------
// CoefficientProblem

CoefficientProblem::CoefficientProblem(Interval domain, ScalarField density, ScalarField dynamics,
                                       std::optional<ScalarField> potential,
                                       FamilyParameters family, double scale)
    : domain_(domain),
      p_(density.with_support(domain)),
      k_(dynamics.with_support(domain)),
      family_(family),
      scale_(scale) {
  if (potential) q_ = potential->with_support(domain);
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
    throw PreconditionError("CoefficientProblem: scale must be positive and finite");
  }
  // Spot-check positivity of p and K on interior probes.
  std::vector<double> probes;
  if (domain_.bounded()) {
    for (int i = 1; i < 8; ++i) probes.push_back(domain_.left + domain_.width() * i / 8.0);
  } else {
    const double c = center();
    for (double k : {0.25, 0.5, 1.0, 2.0}) {
      for (double sgn : {-1.0, 1.0}) {
        const double s = c + sgn * k * scale_;
        if (domain_.contains(s)) probes.push_back(s);
      }
    }
    if (domain_.contains(c)) probes.push_back(c);
  }
  for (double s : probes) {
    const double lp = p_.log(s);
    const double kv = k_(s);
    if (std::isnan(lp) || lp == -kInf || !(kv > 0.0) || !std::isfinite(kv)) {
      std::ostringstream msg;
      msg << "CoefficientProblem: p and K must be positive and finite in the interior (s = " << s
          << ")";
      throw PreconditionError(msg.str());
    }
  }
}

double CoefficientProblem::center() const {
  if (domain_.bounded()) return 0.5 * (domain_.left + domain_.right);
  if (domain_.left_finite()) return domain_.left;
  if (domain_.right_finite()) return domain_.right;
  return 0.0;
}

CoefficientProblem CoefficientProblem::unit_form_problem(Interval domain, ScalarField potential,
                                                         double scale) {
  CoefficientProblem p(domain, ScalarField::constant(1.0), ScalarField::constant(1.0),
                       std::move(potential), FamilyParameters{}, scale);
  p.unit_form_ = true;
  return p;
}

CoefficientProblem uniform_cosine(double length, double k0) {
  if (!(length > 0.0) || !(k0 > 0.0)) {
    throw PreconditionError("uniform_cosine: length and k0 must be positive");
  }
  FamilyParameters fam;
  fam.kind = FamilyKind::UniformCosine;
  fam.length = length;
  fam.k0 = k0;
  return CoefficientProblem(Interval(0.0, length), ScalarField::constant(1.0 / length),
                            ScalarField::constant(k0), std::nullopt, fam, length);
}

CoefficientProblem gaussian_hermite(double k0) {
  if (!(k0 > 0.0)) throw PreconditionError("gaussian_hermite: k0 must be positive");
  const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi);
  ScalarField p([log_norm](double s) { return std::exp(log_norm - 0.5 * s * s); },
                [log_norm](double s) { return -s * std::exp(log_norm - 0.5 * s * s); },
                [log_norm](double s) { return log_norm - 0.5 * s * s; },
                [](double s) { return -s; });
  FamilyParameters fam;
  fam.kind = FamilyKind::GaussianHermite;
  fam.k0 = k0;
  return CoefficientProblem(Interval(-kInf, kInf), std::move(p), ScalarField::constant(k0),
                            std::nullopt, fam, 1.0);
}

CoefficientProblem power_law_counterexample(double epsilon, double k0, double k_exponent) {
  if (!(epsilon > 0.0) || !(k0 > 0.0)) {
    throw PreconditionError("power_law_counterexample: epsilon and k0 must be positive");
  }
  const double e = epsilon;
  ScalarField p([e](double s) { return e * std::pow(s, -1.0 - e); },
                [e](double s) { return -(1.0 + e) * e * std::pow(s, -2.0 - e); },
                [e](double s) { return std::log(e) - (1.0 + e) * std::log(s); },
                [e](double s) { return -(1.0 + e) / s; });
  ScalarField k = ScalarField::constant(k0);
  if (k_exponent != 0.0) {
    const double a = k_exponent;
    k = ScalarField([k0, a](double s) { return k0 * std::pow(s, a); },
                    [k0, a](double s) { return k0 * a * std::pow(s, a - 1.0); },
                    [k0, a](double s) { return std::log(k0) + a * std::log(s); },
                    [a](double s) { return a / s; });
  }
  FamilyParameters fam;
  fam.kind = FamilyKind::PowerLawCounterexample;
  fam.epsilon = epsilon;
  fam.k0 = k0;
  fam.k_exponent = k_exponent;
  return CoefficientProblem(Interval(1.0, kInf), std::move(p), std::move(k), std::nullopt, fam,
                            1.0);
}

CoefficientProblem make_problem(const FamilyParameters& params) {
  switch (params.kind) {
    case FamilyKind::UniformCosine: return uniform_cosine(params.length, params.k0);
    case FamilyKind::GaussianHermite: return gaussian_hermite(params.k0);
    case FamilyKind::PowerLawCounterexample:
      return power_law_counterexample(params.epsilon, params.k0, params.k_exponent);
    case FamilyKind::Custom: break;
  }
  throw PreconditionError("make_problem: custom problems need explicit coefficient fields");
}

// ---------------------------------------------------------------------------
// Operations

double eval_log_derivative(const CoefficientProblem& problem, LogDerivativeOf which, double s) {
  if (!problem.domain().contains(s)) {
    std::ostringstream msg;
    msg << "eval_log_derivative: s = " << s << " is not interior to the domain";
    throw DomainError(msg.str());
  }
  const double dp = problem.density().log_derivative(s);
  if (which == LogDerivativeOf::Density) return dp;
  return dp + problem.dynamics().log_derivative(s);
}

NormalizationResult density_mass(const CoefficientProblem& problem) {
  const auto& dom = problem.domain();
  const ScalarField& p = problem.density();
  QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  NormalizationResult out;
  out.quadrature = integrate([&p](double s) { return p(s); }, dom.left, dom.right,
                             problem.center(), problem.scale(), opts);
  out.mass = out.quadrature.value;
  return out;
}

CoefficientProblem normalize_density(const CoefficientProblem& problem, NormalizationResult* info) {
  NormalizationResult mass = density_mass(problem);
  if (info) *info = mass;
  if (!mass.quadrature.converged || !std::isfinite(mass.mass)) {
    throw ConvergenceError("normalize_density: density is not integrable (quadrature diverged)");
  }
  if (!(mass.mass > 0.0)) throw ConvergenceError("normalize_density: density has zero mass");
  return CoefficientProblem(problem.domain(), problem.density().scaled(1.0 / mass.mass),
                            problem.dynamics(), problem.potential(), problem.family(),
                            problem.scale());
}

ScalarField tabulated_field(std::vector<double> s, std::vector<double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw PreconditionError("tabulated_field: non-finite sample");
  }
  auto table = std::make_shared<const GridFunction>(std::move(s), std::move(values));
  auto clamp = [table](double x) { return std::clamp(x, table->front(), table->back()); };
  ScalarField f([table, clamp](double x) { return (*table)(clamp(x)); },
                [table](double x) {
                  if (x < table->front() || x > table->back()) return 0.0;
                  return table->derivative(x);
                });
  return f;
}

Reparameterization reparameterize_unit_interval(const CoefficientProblem& problem,
                                                const std::vector<double>& grid) {
  const auto& dom = problem.domain();
  if (grid.size() < 3) throw PreconditionError("reparameterize_unit_interval: need >= 3 grid points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!dom.contains_closed(grid[i]) || !std::isfinite(grid[i])) {
      throw DomainError("reparameterize_unit_interval: grid point outside the domain");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw PreconditionError("reparameterize_unit_interval: grid must be strictly increasing");
    }
  }
  const NormalizationResult mass = density_mass(problem);
  if (!mass.quadrature.converged || !(mass.mass > 0.0)) {
    throw ConvergenceError("reparameterize_unit_interval: density is not integrable");
  }
  const double inv_mass = 1.0 / mass.mass;
  const ScalarField& p = problem.density();
  auto pf = [&p](double s) { return p(s); };
  QuadratureOptions opts;
  opts.rel_tol = 1e-13;

  std::vector<double> phi(grid.size());
  double left_mass = 0.0;
  if (grid.front() > dom.left) {
    left_mass = dom.left_finite()
                    ? adaptive_simpson(pf, dom.left, grid.front(), opts).value
                    : integrate_tail(pf, grid.front(), -1, problem.scale(), opts).value;
  }
  phi[0] = left_mass * inv_mass;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double inc = adaptive_simpson(pf, grid[i - 1], grid[i], opts).value * inv_mass;
    phi[i] = phi[i - 1] + inc;
    if (!(phi[i] > phi[i - 1])) {
      std::ostringstream msg;
      msg << "reparameterize_unit_interval: phi not strictly increasing near s = " << grid[i]
          << " (density underflow)";
      throw PreconditionError(msg.str());
    }
  }

  std::vector<double> ktilde(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double pv = p(grid[i]) * inv_mass;
    ktilde[i] = problem.K(grid[i]) * pv * pv;
  }
  GridFunction phi_fn(grid, phi);
  const double kl = ktilde.front();
  const double kr = ktilde.back();
  ScalarField kt = tabulated_field(phi, ktilde);
  FamilyParameters fam;
  CoefficientProblem transformed(Interval(0.0, 1.0), ScalarField::constant(1.0), std::move(kt),
                                 std::nullopt, fam, 1.0);
  return Reparameterization{std::move(transformed), std::move(phi_fn), kl, kr,
                            kl < kVanishingDynamics, kr < kVanishingDynamics};
}

}  // namespace sfa

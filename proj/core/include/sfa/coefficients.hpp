#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sfa/grid_function.hpp"
#include "sfa/quadrature.hpp"

namespace sfa {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Side { Left, Right };

const char* to_string(Side side);

// Open interval (left, right); either end may be infinite.
struct Interval {
  double left = 0.0;
  double right = 1.0;

  Interval() = default;
  Interval(double l, double r);

  bool left_finite() const { return left > -kInf; }
  bool right_finite() const { return right < kInf; }
  bool bounded() const { return left_finite() && right_finite(); }
  double endpoint(Side side) const { return side == Side::Left ? left : right; }
  bool contains(double s) const { return s > left && s < right; }
  bool contains_closed(double s) const { return s >= left && s <= right; }
  double width() const { return right - left; }
};

// A real function of one variable with optional analytic derivative and log
// evaluators.  Derivatives fall back to centered differences with step
// max(1e-6, 1e-6 |s|), switching to one-sided stencils near the support
// boundary.
class ScalarField {
 public:
  using Fn = std::function<double(double)>;

  ScalarField() = default;
  explicit ScalarField(Fn value, Fn derivative = {}, Fn log_value = {},
                       Fn log_derivative = {});

  static ScalarField constant(double c);

  double operator()(double s) const;
  double derivative(double s) const;
  // log f(s); uses the log evaluator when declared, so tails far below the
  // smallest double still produce finite values.
  double log(double s) const;
  // f'(s) / f(s), computed in log space.
  double log_derivative(double s) const;

  bool has_analytic_derivative() const { return static_cast<bool>(derivative_); }
  bool has_log_evaluator() const { return static_cast<bool>(log_value_); }
  // Highest derivative order available (analytic or by differencing).
  int derivative_order() const { return derivative_order_; }
  ScalarField& set_derivative_order(int order);
  bool is_constant() const { return constant_.has_value(); }
  std::optional<double> constant_value() const { return constant_; }

  // Restricts finite differencing to stay within the closed support.
  ScalarField with_support(Interval support) const;
  // f * factor, preserving analytic derivative and log evaluators.
  ScalarField scaled(double factor) const;

 private:
  double fd_step(double s) const;

  Fn value_;
  Fn derivative_;
  Fn log_value_;
  Fn log_derivative_;
  int derivative_order_ = 1;
  std::optional<double> constant_;
  Interval support_{-kInf, kInf};
};

enum class FamilyKind { UniformCosine, GaussianHermite, PowerLawCounterexample, Custom };

const char* to_string(FamilyKind kind);

struct FamilyParameters {
  FamilyKind kind = FamilyKind::Custom;
  double length = 1.0;      // UniformCosine
  double k0 = 1.0;          // dynamics scale for every closed form
  double epsilon = 0.5;     // PowerLawCounterexample
  double k_exponent = 0.0;  // PowerLawCounterexample: K(s) = k0 s^k_exponent
};

// One-dimensional SFA problem: density p, dynamics K = <sdot^2 | s>, optional
// potential q on a domain.  As a Sturm-Liouville problem w = p, r = p K.
class CoefficientProblem {
 public:
  CoefficientProblem(Interval domain, ScalarField density, ScalarField dynamics,
                     std::optional<ScalarField> potential = std::nullopt,
                     FamilyParameters family = {}, double scale = 1.0);

  const Interval& domain() const { return domain_; }
  const ScalarField& density() const { return p_; }
  const ScalarField& dynamics() const { return k_; }
  const std::optional<ScalarField>& potential() const { return q_; }
  bool has_potential() const { return q_.has_value(); }
  const FamilyParameters& family() const { return family_; }

  double p(double s) const { return p_(s); }
  double K(double s) const { return k_(s); }
  double w(double s) const { return p_(s); }
  double r(double s) const { return p_(s) * k_(s); }
  double q(double s) const { return q_ ? (*q_)(s) : 0.0; }
  // log r = log p + log K.
  double log_r(double s) const { return p_.log(s) + k_.log(s); }

  // Characteristic length used for probe steps and tail panels.
  double scale() const { return scale_; }
  // Interior reference point: a finite endpoint, the midpoint of a bounded
  // domain, or 0 for the full line.
  double center() const;

  // Declares r = w = 1 (the normalized Sturm-Liouville form); such problems
  // carry a potential and their weight is not a probability density.
  bool unit_form() const { return unit_form_; }

  static CoefficientProblem unit_form_problem(Interval domain, ScalarField potential,
                                              double scale = 1.0);

 private:
  Interval domain_;
  ScalarField p_;
  ScalarField k_;
  std::optional<ScalarField> q_;
  FamilyParameters family_;
  double scale_ = 1.0;
  bool unit_form_ = false;
};

// Closed-form families.
CoefficientProblem uniform_cosine(double length = 1.0, double k0 = 1.0);
CoefficientProblem gaussian_hermite(double k0 = 1.0);
// p = eps / s^(1+eps) on [1, inf), K = k0 s^k_exponent.
CoefficientProblem power_law_counterexample(double epsilon, double k0 = 1.0,
                                            double k_exponent = 0.0);
CoefficientProblem make_problem(const FamilyParameters& params);

enum class LogDerivativeOf { Density, Flux };

// p'/p (Density) or (pK)'/(pK) (Flux) at an interior point.
double eval_log_derivative(const CoefficientProblem& problem, LogDerivativeOf which,
                           double s);

struct NormalizationResult {
  double mass = 0.0;  // integral of p before rescaling
  QuadratureResult quadrature;
};

// Integral of p over the domain, tails handled by the doubling-panel rule.
NormalizationResult density_mass(const CoefficientProblem& problem);

// Rescales p so that its integral is 1.  Throws ConvergenceError when the
// density is not integrable.
CoefficientProblem normalize_density(const CoefficientProblem& problem,
                                     NormalizationResult* info = nullptr);

struct Reparameterization {
  // Problem on [0, 1] with density 1 and dynamics (K p^2) o phi^{-1},
  // tabulated on phi(grid).
  CoefficientProblem problem;
  // phi(s) = integral of p from the left endpoint, sampled on the grid.
  GridFunction phi;
  // Transformed dynamics at the outermost grid points.
  double k_left = 0.0;
  double k_right = 0.0;
  bool singular_left = false;
  bool singular_right = false;
};

// Threshold below which the transformed dynamics counts as vanishing.
inline constexpr double kVanishingDynamics = 1e-7;

Reparameterization reparameterize_unit_interval(const CoefficientProblem& problem,
                                                const std::vector<double>& grid);

// Field backed by tabulated samples with monotone cubic interpolation.
ScalarField tabulated_field(std::vector<double> s, std::vector<double> values);

}  // namespace sfa

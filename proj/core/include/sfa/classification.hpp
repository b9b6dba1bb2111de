#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfa/canonical.hpp"
#include "sfa/coefficients.hpp"
#include "sfa/limits.hpp"

namespace sfa {

enum class Decision { Yes, No, Unknown };

const char* to_string(Decision d);

enum class Status { Satisfied, NotSatisfied, Unknown, NotApplicable };

const char* to_string(Status s);

struct CriterionResult {
  std::string name;
  LimitVerdict verdict;
  Status status = Status::Unknown;
  // Set when a precondition could not be confirmed on the probes; the
  // outcome is then informative only.
  bool advisory = false;
  std::string note;

  bool satisfied() const { return status == Status::Satisfied; }
};

struct SfaCriterionResult {
  CriterionResult main;
  // "nec1", "nec2", "nec3" (infinite endpoint) or "necf", "nec3" (finite).
  std::vector<CriterionResult> necessary;
  bool sufficient = false;
  // Every side-condition verified, so failure of the main limit is decisive.
  bool necessity_holds = false;
};

struct EndpointReport {
  Side side = Side::Left;
  double endpoint = 0.0;
  bool regular = false;
  EndpointKind kind = EndpointKind::Unknown;
  // Partial integrals of p v^2 toward the endpoint (the LC/LP evidence).
  LimitVerdict lc_evidence;
  std::vector<CriterionResult> criteria;
  bool natural_conditions = false;
  double x0 = 0.0;

  const CriterionResult* find(const std::string& name) const;
};

struct JustificationEntry {
  Side side = Side::Left;
  std::string criterion;
  std::string outcome;
};

struct SpectrumVerdict {
  Decision discrete = Decision::Unknown;
  bool bd = false;
  std::vector<JustificationEntry> justification;
};

struct ClassificationReport {
  EndpointReport left;
  EndpointReport right;
  SpectrumVerdict verdict;
};

// Median of the normalized density (used as the default interior point when
// both endpoints are singular).
double density_median(const CoefficientProblem& problem);

// The regular endpoint if one exists, else the density median.
double default_x0(const CoefficientProblem& problem);

EndpointReport classify_endpoint(const CoefficientProblem& problem, Side side);

// lim |p'| / p, satisfied iff it diverges.
CriterionResult simple_criterion(const CoefficientProblem& problem, Side side);

// lim |(sqrt K)' + sqrt K p'/p| together with the necessity side-conditions.
// Throws PreconditionError when p has a non-zero limit at an infinite
// endpoint (p cannot be a probability density there).
SfaCriterionResult sfa_criterion(const CoefficientProblem& problem, Side side);

// Product of integral(p v^2, x0..x) and integral(p, x..c) on probes x -> c.
// NotApplicable verdict for a regular endpoint.
LimitVerdict romanov_limit(const CoefficientProblem& problem, Side side,
                           std::optional<double> x0 = std::nullopt);

// lim over t -> +inf of the integral of q over [t, t + c].  Refuses
// (NotApplicable) unless the problem is in unit form with a potential.
LimitVerdict molchanov_criterion(const CoefficientProblem& problem, double c);

ClassificationReport classify_problem(const CoefficientProblem& problem);
SpectrumVerdict spectrum_verdict(const CoefficientProblem& problem);
SpectrumVerdict spectrum_verdict(const CoefficientProblem& problem, const EndpointReport& left,
                                 const EndpointReport& right);

}  // namespace sfa

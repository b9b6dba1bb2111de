#include "sfa/classification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sfa/errors.hpp"

namespace sfa {

const char* to_string(Decision d) {
  switch (d) {
    case Decision::Yes: return "yes";
    case Decision::No: return "no";
    case Decision::Unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Satisfied: return "satisfied";
    case Status::NotSatisfied: return "not_satisfied";
    case Status::Unknown: return "unknown";
    case Status::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

const CriterionResult* EndpointReport::find(const std::string& name) const {
  for (const auto& c : criteria) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

// Probe step for criteria evaluated from the problem's reference point.
std::vector<double> criterion_probes(const CoefficientProblem& problem, Side side) {
  const auto& dom = problem.domain();
  const double h = dom.bounded() ? std::min(problem.scale(), 0.5 * dom.width()) : problem.scale();
  return probe_points(dom, side, problem.center(), h);
}

// Probes for the integral criteria, which start from x0.
std::vector<double> integral_probes(const CoefficientProblem& problem, Side side, double x0) {
  const auto& dom = problem.domain();
  const double c = dom.endpoint(side);
  const double h = std::isfinite(c) ? 0.5 * std::abs(c - x0) : problem.scale() / 16.0;
  return probe_points(dom, side, x0, h);
}

Status from_divergence(const LimitVerdict& v) {
  if (v.diverges()) return Status::Satisfied;
  if (v.converges()) return Status::NotSatisfied;
  return Status::Unknown;
}

Status from_finite_limit(const LimitVerdict& v) {
  if (v.converges()) return Status::Satisfied;
  if (v.diverges()) return Status::NotSatisfied;
  return Status::Unknown;
}

CriterionResult not_applicable(const std::string& name, Side side) {
  CriterionResult r;
  r.name = name;
  r.status = Status::NotApplicable;
  r.verdict = LimitVerdict::not_applicable(std::string(to_string(side)) + " endpoint is regular");
  return r;
}

struct CoefficientLimits {
  LimitVerdict p, dp, k, dk;
};

CoefficientLimits coefficient_limits(const CoefficientProblem& problem,
                                     const std::vector<double>& probes) {
  const ScalarField& p = problem.density();
  const ScalarField& k = problem.dynamics();
  CoefficientLimits out;
  out.p = evaluate_limit([&](double s) { return std::exp(p.log(s)); }, probes);
  out.dp = evaluate_limit([&](double s) { return std::exp(p.log(s)) * p.log_derivative(s); },
                          probes);
  out.k = evaluate_limit([&](double s) { return k(s); }, probes);
  out.dk = evaluate_limit([&](double s) { return k.derivative(s); }, probes);
  return out;
}

std::string precondition_notes(const CoefficientLimits& lim) {
  std::vector<std::string> issues;
  if (lim.p.inconclusive()) issues.push_back("limit of p not established");
  if (lim.dp.inconclusive()) issues.push_back("limit of p' not established");
  if (!(lim.k.converges() && lim.k.value > 0.0)) issues.push_back("K not bounded away from 0 and inf");
  if (!lim.dk.converges()) issues.push_back("K' not bounded");
  std::string out;
  for (const auto& s : issues) out += (out.empty() ? "" : "; ") + s;
  return out;
}

CriterionResult simple_from(const CoefficientProblem& problem, const std::vector<double>& probes,
                            const CoefficientLimits& lim) {
  CriterionResult r;
  r.name = "simple";
  const ScalarField& p = problem.density();
  r.verdict = evaluate_limit([&](double s) { return std::abs(p.log_derivative(s)); }, probes);
  r.status = from_divergence(r.verdict);
  r.note = precondition_notes(lim);
  r.advisory = !r.note.empty();
  return r;
}

struct RomanovTrace {
  LimitVerdict weighted_v2;
  LimitVerdict product;
};

RomanovTrace romanov_trace(const CoefficientProblem& problem, Side side, double x0) {
  std::vector<ProbePoint> a, prod;
  for (double x : integral_probes(problem, side, x0)) {
    RomanovTerms t;
    try {
      t = romanov_terms(problem, side, x0, x);
    } catch (const NotApplicable&) {
      throw;
    } catch (const Error&) {
      break;
    }
    if (!std::isfinite(t.weighted_v2) || !std::isfinite(t.product)) break;
    a.push_back({x, t.weighted_v2});
    prod.push_back({x, t.product});
  }
  RomanovTrace out;
  out.weighted_v2 = judge_trace(std::move(a));
  out.product = judge_trace(std::move(prod));
  out.weighted_v2.method += " (integral of p v^2 from x0)";
  return out;
}

}  // namespace

double density_median(const CoefficientProblem& problem) {
  const auto& dom = problem.domain();
  const NormalizationResult mass = density_mass(problem);
  if (!mass.quadrature.converged || !(mass.mass > 0.0)) {
    throw ConvergenceError("density_median: density is not integrable");
  }
  const ScalarField& p = problem.density();
  auto pf = [&p](double s) { return p(s); };
  QuadratureOptions opts;
  opts.rel_tol = 1e-12;
  const double c = problem.center();
  double below_c = 0.0;
  if (c > dom.left) {
    below_c = dom.left_finite() ? adaptive_simpson(pf, dom.left, c, opts).value
                                : integrate_tail(pf, c, -1, problem.scale(), opts).value;
  }
  auto cdf = [&](double x) { return (below_c + adaptive_simpson(pf, c, x, opts).value) / mass.mass; };
  if (std::abs(below_c / mass.mass - 0.5) < 1e-12) return c;
  // Bracket by doubling away from c, then bisect.
  const double dir = below_c / mass.mass < 0.5 ? 1.0 : -1.0;
  double lo = c;
  double step = problem.scale();
  double hi = c + dir * step;
  for (int i = 0; i < 200; ++i) {
    if (!dom.contains(hi)) hi = 0.5 * (lo + dom.endpoint(dir > 0 ? Side::Right : Side::Left));
    const double f = cdf(hi);
    if ((f - 0.5) * dir >= 0.0) break;
    lo = hi;
    step *= 2.0;
    hi = c + dir * step;
  }
  for (int i = 0; i < 200 && std::abs(hi - lo) > 1e-13 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((cdf(mid) - 0.5) * dir >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double default_x0(const CoefficientProblem& problem) {
  if (is_regular_endpoint(problem, Side::Left)) return problem.domain().left;
  if (is_regular_endpoint(problem, Side::Right)) return problem.domain().right;
  return density_median(problem);
}

CriterionResult simple_criterion(const CoefficientProblem& problem, Side side) {
  if (is_regular_endpoint(problem, side)) return not_applicable("simple", side);
  const auto probes = criterion_probes(problem, side);
  return simple_from(problem, probes, coefficient_limits(problem, probes));
}

SfaCriterionResult sfa_criterion(const CoefficientProblem& problem, Side side) {
  SfaCriterionResult out;
  if (is_regular_endpoint(problem, side)) {
    out.main = not_applicable("sfa", side);
    return out;
  }
  const auto& dom = problem.domain();
  const bool infinite = !std::isfinite(dom.endpoint(side));
  const auto probes = criterion_probes(problem, side);
  const ScalarField& p = problem.density();
  const ScalarField& k = problem.dynamics();

  const LimitVerdict p_lim = evaluate_limit([&](double s) { return std::exp(p.log(s)); }, probes);
  if (infinite && (p_lim.diverges() || (p_lim.converges() && std::abs(p_lim.value) > 1e-12))) {
    std::ostringstream msg;
    msg << "sfa_criterion: p does not vanish at the " << to_string(side)
        << " infinite endpoint, so it is not a probability density there";
    throw PreconditionError(msg.str());
  }

  out.main.name = "sfa";
  out.main.verdict = evaluate_limit(
      [&](double s) {
        return std::sqrt(k(s)) * std::abs(0.5 * k.log_derivative(s) + p.log_derivative(s));
      },
      probes);
  out.main.status = from_divergence(out.main.verdict);
  if (p_lim.inconclusive()) {
    out.main.status = Status::Unknown;
    out.main.note = "limit of p not established";
  }

  auto add = [&out](std::string name, LimitVerdict v, Status s) {
    CriterionResult r;
    r.name = std::move(name);
    r.verdict = std::move(v);
    r.status = s;
    out.necessary.push_back(std::move(r));
  };
  if (infinite) {
    LimitVerdict nec1 = evaluate_limit([&](double s) { return std::exp(k.log(s) + p.log(s)); }, probes);
    add("nec1", nec1, from_finite_limit(nec1));
    LimitVerdict nec2 = evaluate_limit(
        [&](double s) {
          return std::abs(k(s) * 0.5 * std::exp(0.5 * p.log(s)) * p.log_derivative(s));
        },
        probes);
    add("nec2", nec2, from_finite_limit(nec2));
  } else {
    LimitVerdict necf = romanov_trace(problem, side, default_x0(problem)).weighted_v2;
    add("necf", necf, from_divergence(necf));
  }
  LimitVerdict nec3 =
      evaluate_limit([&](double s) { return std::exp(0.5 * k.log(s) + p.log(s)); }, probes);
  Status s3 = Status::Unknown;
  if (nec3.converges_to_zero(1e-8)) {
    s3 = Status::Satisfied;
  } else if (nec3.converges() || nec3.diverges()) {
    s3 = Status::NotSatisfied;
  }
  add("nec3", nec3, s3);

  out.sufficient = out.main.satisfied();
  out.necessity_holds = std::all_of(out.necessary.begin(), out.necessary.end(),
                                    [](const CriterionResult& r) { return r.satisfied(); });
  return out;
}

LimitVerdict romanov_limit(const CoefficientProblem& problem, Side side,
                           std::optional<double> x0) {
  if (is_regular_endpoint(problem, side)) {
    return LimitVerdict::not_applicable(std::string(to_string(side)) + " endpoint is regular");
  }
  return romanov_trace(problem, side, x0 ? *x0 : default_x0(problem)).product;
}

LimitVerdict molchanov_criterion(const CoefficientProblem& problem, double c) {
  if (!problem.unit_form() || !problem.has_potential()) {
    throw NotApplicable(
        "molchanov: requires the unit form r = w = 1 with a potential q; the criterion is "
        "inherently false for SFA problems (q = 0)");
  }
  if (!(c > 0.0)) throw PreconditionError("molchanov: window length c must be positive");
  const auto& dom = problem.domain();
  if (dom.right_finite()) throw NotApplicable("molchanov: needs an infinite right endpoint");
  const ScalarField& q = *problem.potential();
  auto qf = [&q](double x) { return q(x); };
  QuadratureOptions opts;
  opts.rel_tol = 1e-12;
  const auto probes = probe_points(dom, Side::Right, problem.center(), problem.scale());
  return evaluate_limit([&](double t) { return adaptive_simpson(qf, t, t + c, opts).value; },
                        probes);
}

EndpointReport classify_endpoint(const CoefficientProblem& problem, Side side) {
  EndpointReport rep;
  rep.side = side;
  rep.endpoint = problem.domain().endpoint(side);
  rep.regular = is_regular_endpoint(problem, side);
  if (rep.regular) {
    rep.kind = EndpointKind::Regular;
    rep.natural_conditions = true;
    rep.lc_evidence = LimitVerdict::not_applicable("regular endpoint");
    for (const char* name : {"simple", "sfa", "romanov"}) {
      rep.criteria.push_back(not_applicable(name, side));
    }
    return rep;
  }

  rep.x0 = default_x0(problem);
  const RomanovTrace rt = romanov_trace(problem, side, rep.x0);
  rep.lc_evidence = rt.weighted_v2;
  if (rt.weighted_v2.diverges()) {
    rep.kind = EndpointKind::LimitPoint;
  } else if (rt.weighted_v2.converges()) {
    rep.kind = EndpointKind::LimitCircle;
  } else {
    rep.kind = EndpointKind::Unknown;
  }

  const auto probes = criterion_probes(problem, side);
  const CoefficientLimits lim = coefficient_limits(problem, probes);
  CriterionResult simple = simple_from(problem, probes, lim);
  SfaCriterionResult sfa = sfa_criterion(problem, side);

  CriterionResult romanov;
  romanov.name = "romanov";
  romanov.verdict = rt.product;
  if (rt.product.converges_to_zero(1e-8)) {
    romanov.status = Status::Satisfied;
  } else if (rt.product.converges() || rt.product.diverges()) {
    romanov.status = Status::NotSatisfied;
  } else {
    romanov.status = Status::Unknown;
  }

  rep.natural_conditions = !simple.advisory && simple.satisfied();
  rep.criteria.push_back(std::move(simple));
  rep.criteria.push_back(sfa.main);
  for (auto& nc : sfa.necessary) {
    nc.name = "sfa." + nc.name;
    rep.criteria.push_back(std::move(nc));
  }
  rep.criteria.push_back(std::move(romanov));
  return rep;
}

SpectrumVerdict spectrum_verdict(const CoefficientProblem& problem, const EndpointReport& left,
                                 const EndpointReport& right) {
  SpectrumVerdict out;
  bool all_ok = true;
  bool any_no = false;
  for (const EndpointReport* rep : {&left, &right}) {
    auto note = [&](std::string crit, std::string outcome) {
      out.justification.push_back({rep->side, std::move(crit), std::move(outcome)});
    };
    if (rep->regular) {
      note("regular", "no singular criterion needed");
      continue;
    }
    const CriterionResult* simple = rep->find("simple");
    const CriterionResult* sfa = rep->find("sfa");
    const CriterionResult* romanov = rep->find("romanov");
    bool necessity = true;
    bool any_nec = false;
    for (const auto& c : rep->criteria) {
      if (c.name.rfind("sfa.", 0) == 0) {
        any_nec = true;
        necessity = necessity && c.satisfied();
      }
    }
    note("simple", std::string(to_string(simple->status)) + (simple->advisory ? " (advisory)" : ""));
    note("sfa", to_string(sfa->status));
    note("sfa.necessity", any_nec && necessity ? "all side-conditions hold" : "not established");
    note("romanov", std::string(to_string(romanov->status)) + " (cross-check)");
    note("endpoint_kind", to_string(rep->kind));

    const bool sufficient = sfa->satisfied() || (simple->satisfied() && !simple->advisory) ||
                            rep->kind == EndpointKind::LimitCircle;
    if (sufficient) continue;
    all_ok = false;
    if (sfa->status == Status::NotSatisfied && any_nec && necessity) any_no = true;
  }
  if (any_no) {
    out.discrete = Decision::No;
  } else if (all_ok) {
    out.discrete = Decision::Yes;
  } else {
    out.discrete = Decision::Unknown;
  }
  out.bd = out.discrete == Decision::Yes && !problem.has_potential();
  return out;
}

ClassificationReport classify_problem(const CoefficientProblem& problem) {
  ClassificationReport out;
  out.left = classify_endpoint(problem, Side::Left);
  out.right = classify_endpoint(problem, Side::Right);
  out.verdict = spectrum_verdict(problem, out.left, out.right);
  return out;
}

SpectrumVerdict spectrum_verdict(const CoefficientProblem& problem) {
  return classify_problem(problem).verdict;
}

}  // namespace sfa

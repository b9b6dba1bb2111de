// One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "sfa/analysis.hpp"
#include "sfa/canonical.hpp"
#include "sfa/classification.hpp"
#include "sfa/composition.hpp"
#include "sfa/empirical.hpp"
#include "sfa/solver.hpp"

using namespace sfa;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [" << what << "]";
    }
  }
};

SolveResult solve(const CoefficientProblem& p, int modes, int grid, double eps = 1e-12) {
  SolveOptions o;
  o.modes = modes;
  o.grid = grid;
  o.tail_eps = eps;
  return solve_eigenpairs(p, o);
}

const SolveResult& uniform5() {
  static const SolveResult r = solve(uniform_cosine(), 5, 2048);
  return r;
}

const SolveResult& gaussian5() {
  static const SolveResult r = solve(gaussian_hermite(), 5, 4096);
  return r;
}

Eigenpair parabola() {
  std::vector<double> s, g, f;
  for (int i = 0; i <= 200; ++i) {
    const double x = -1.0 + i / 100.0;
    s.push_back(x);
    g.push_back(x * x);
    f.push_back(x);
  }
  Eigenpair p;
  p.index = 2;
  p.lambda = 1.0;
  p.g = GridFunction(s, g);
  p.flux = GridFunction(s, f);
  p.density.assign(s.size(), 0.5);
  return p;
}

void uniform_eigenvalues(Outcome& o, double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  const SolveResult r = solve(uniform_cosine(), 5, 2048);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (int i = 1; i <= 5; ++i) {
    const double exact = std::pow(oracle::kPi * i, 2);
    const double rel = std::abs(r.pairs[i].lambda - exact) / exact;
    o.detail << " rel" << i << "=" << rel;
    o.require(rel < 1e-5, "lambda" + std::to_string(i));
  }
  o.require(seconds < 5.0, "runtime");
}

void hermite_eigenvalues(Outcome& o, double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  const SolveResult r = solve(gaussian_hermite(), 4, 4096, 1e-12);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (int i = 1; i <= 4; ++i) {
    const double rel = std::abs(r.pairs[i].lambda - i) / i;
    o.detail << " rel" << i << "=" << rel;
    o.require(rel < 1e-3, "lambda" + std::to_string(i));
  }
  o.require(seconds < 20.0, "runtime");
}

void classifier(Outcome& o, double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  const SpectrumVerdict g = spectrum_verdict(gaussian_hermite());
  o.require(g.discrete == Decision::Yes && g.bd, "gaussian verdict");
  for (Side side : {Side::Left, Side::Right}) {
    o.require(romanov_limit(gaussian_hermite(), side).converges_to_zero() ==
                  simple_criterion(gaussian_hermite(), side).satisfied(),
              "gaussian romanov/simple");
  }
  for (double eps : {0.25, 0.5, 1.0}) {
    const CoefficientProblem p = power_law_counterexample(eps);
    const SpectrumVerdict v = spectrum_verdict(p);
    o.require(v.discrete == Decision::No, "power law verdict eps=" + std::to_string(eps));
    o.require(romanov_limit(p, Side::Right).converges_to_zero() == simple_criterion(p, Side::Right).satisfied(),
              "power law romanov/simple eps=" + std::to_string(eps));
  }
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(seconds < 10.0, "runtime");
}

void delta_equality(Outcome& o, double&) {
  double worst = 0.0;
  for (int i = 1; i <= 5; ++i) {
    worst = std::max(worst, delta_report(uniform_cosine(), uniform5().pairs[i]).relative_gap);
    worst = std::max(worst, delta_report(gaussian_hermite(), gaussian5().pairs[i]).relative_gap);
  }
  o.detail << " worst_gap=" << worst;
  o.require(worst < 1e-3, "gap");
}

void oscillation(Outcome& o, double&) {
  for (const SolveResult* r : {&uniform5(), &gaussian5()}) {
    for (int i = 1; i <= 5; ++i) {
      const Eigenpair& p = r->pairs[i];
      o.require(static_cast<int>(find_zeros(p).zeros.size()) == i, "zeros g" + std::to_string(i));
      const OscillationReport rep = interlace_check(p);
      o.require(rep.property1 && rep.property2 && rep.property3 && rep.property4,
                "interlace g" + std::to_string(i));
      if (i < 5) o.require(sturm_picone_check(p, r->pairs[i + 1]).ok, "sturm-picone g" + std::to_string(i));
    }
    o.require(first_harmonic_monotonicity(r->pairs[1]), "monotone g1");
  }
  const OscillationReport bad = interlace_check(parabola());
  o.require(!bad.interlace_ok && !bad.coincidence_violations.empty(), "coincidence counterexample");
}

void boundary_limits(Outcome& o, double&) {
  for (int i = 1; i <= 5; ++i) {
    const DeltaReport d = delta_report(gaussian_hermite(), gaussian5().pairs[i]);
    for (int s = 0; s < 2; ++s) {
      o.require(d.boundary_flux[s].decays_tenfold, "g pK g' g" + std::to_string(i));
      o.require(d.weighted_square[s].decays_tenfold, "p g^2 g" + std::to_string(i));
    }
  }
}

void self_adjointness(Outcome& o, double&) {
  using K = EndpointKind;
  const BoundaryMatrices neumann{{{{1, 0}, {0, 0}}}, {{{0, 0}, {1, 0}}}};
  const BoundaryMatrices periodic{{{{1, 0}, {0, 1}}}, {{{-1, 0}, {0, -1}}}};
  const BoundaryMatrices rank_one{{{{1, 0}, {0, 0}}}, {{{1, 0}, {0, 0}}}};
  o.require(self_adjointness_check(neumann, {K::Regular, K::Regular}), "neumann");
  o.require(self_adjointness_check(periodic, {K::Regular, K::Regular}), "periodic");
  o.require(!self_adjointness_check(rank_one, {K::Regular, K::Regular}), "rank violation");
}

void composition(Outcome& o, double&) {
  const SolveResult r = solve(uniform_cosine(), 4, 1024);
  const std::vector<std::vector<Eigenpair>> src{r.pairs, r.pairs};
  const auto c = enumerate_slowest(src, 4);
  const double pi2 = oracle::kPi * oracle::kPi;
  bool first_two = (c[0].multi_index == MultiIndex{0, 1} && c[1].multi_index == MultiIndex{1, 0}) ||
                   (c[0].multi_index == MultiIndex{1, 0} && c[1].multi_index == MultiIndex{0, 1});
  o.require(first_two && c[2].multi_index == MultiIndex{1, 1}, "slowest three");
  o.require(std::abs(c[0].lambda - pi2) < 1e-4 * pi2 && std::abs(c[1].lambda - pi2) < 1e-4 * pi2 &&
                std::abs(c[2].lambda - 2 * pi2) < 1e-4 * pi2,
            "lambdas");
  o.require(c[2].lambda < c[3].lambda, "(1,1) beats (2,0)");
  const double err = composite_orthonormality_error({c.begin(), c.begin() + 3}, 64);
  o.detail << " orthonormality=" << err;
  o.require(err < 1e-3, "orthonormality");
}

void empirical(Outcome& o, double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  const Trajectory t = sample_trajectory(uniform_cosine(), 1000000, 1e-3, 2024);
  const LinearSfaResult r = run_linear_sfa(t, 5, 2);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::vector<Eigenpair> h(uniform5().pairs.begin() + 1, uniform5().pairs.begin() + 3);
  const CorrelationReport cr = compare_to_analytic(r.features, h, t);
  const double ratio = r.eigenvalues(0) / r.eigenvalues(1);
  o.detail << " corr=" << cr.abs_corr(0, 0) << " ratio=" << ratio;
  o.require(cr.abs_corr(0, 0) > 0.95, "corr");
  o.require(r.sphered_mean_max < 1e-10 && r.sphered_cov_deviation < 1e-8, "sphering");
  o.require(r.orthonormality_deviation < 1e-8, "orthonormality");
  o.require(std::abs(ratio - 0.25) < 0.15 * 0.25, "ratio");
  o.require(seconds < 60.0, "runtime");
}

void reparameterization(Outcome& o, double&) {
  const CoefficientProblem p = gaussian_hermite();
  const Truncation t = truncate_domain(p, 1e-12);
  std::vector<double> grid;
  for (int i = 0; i <= 1000; ++i) grid.push_back(t.effective.left + (t.effective.right - t.effective.left) * i / 1000.0);
  const Reparameterization rp = reparameterize_unit_interval(p, grid);
  o.detail << " k_left=" << rp.k_left << " k_right=" << rp.k_right;
  o.require(rp.k_left < 1e-7 && rp.k_right < 1e-7, "vanishing dynamics");
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&, double&)>> criteria[] = {
      {"uniform eigenvalues", uniform_eigenvalues},
      {"hermite eigenvalues", hermite_eigenvalues},
      {"discreteness classifier", classifier},
      {"delta equals eigenvalue", delta_equality},
      {"oscillation suite", oscillation},
      {"boundary limits", boundary_limits},
      {"self-adjointness", self_adjointness},
      {"composition", composition},
      {"empirical pipeline", empirical},
      {"reparameterization", reparameterization},
  };
  int failures = 0;
  int id = 0;
  for (const auto& [name, fn] : criteria) {
    ++id;
    Outcome o;
    double timed = -1.0;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(o, timed);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %-24s %.3fs%s\n", o.pass ? "PASS" : "FAIL", id, name, timed >= 0 ? timed : wall,
                o.detail.str().c_str());
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}

#pragma once

#include <array>
#include <string>
#include <vector>

#include "sfa/classification.hpp"
#include "sfa/coefficients.hpp"
#include "sfa/eigenpair.hpp"
#include "sfa/limits.hpp"

namespace sfa {

struct ZeroSet {
  std::vector<double> zeros;       // sign changes, resolved by bisection
  std::vector<double> tangential;  // small local minima of |g| without a sign change
};

// Zeros of the interpolated eigenfunction; bisection stops once
// |g| < 1e-10 ||g||_inf.
ZeroSet find_zeros(const Eigenpair& pair);

struct StationarySet {
  std::vector<double> points;      // interior sign changes of the flux plus flat boundaries
  std::vector<double> saddles;     // small local minima of |flux| without a sign change
  bool degenerate = false;         // g constant: every point is stationary
};

// Stationary points of g from the sign changes of the flux p K g' (r > 0 in
// the interior); a boundary counts when its flux is below 1e-6 max|flux|.
StationarySet find_stationary_points(const Eigenpair& pair);

struct OscillationReport {
  int index = 0;
  std::vector<double> zeros;
  std::vector<double> tangential_zeros;
  std::vector<double> stationary_points;
  bool property1 = false;  // one stationary point between consecutive zeros
  bool property2 = false;  // one zero between consecutive stationary points
  bool property3 = false;  // g and flux never vanish together
  bool property4 = false;  // no saddle points
  bool interlace_ok = false;
  std::vector<std::string> coincidence_violations;
};

// Throws PreconditionError for the degenerate constant mode (lambda ~ 0).
OscillationReport interlace_check(const Eigenpair& pair);

// g' has constant sign on the interior grid (no interior stationary point).
bool is_strictly_monotone(const Eigenpair& pair);

// As is_strictly_monotone, restricted to pairs with index 1.
bool first_harmonic_monotonicity(const Eigenpair& pair);

struct BoundaryTrace {
  LimitVerdict verdict;
  // Last four probes decrease monotonically and shrink at least tenfold.
  bool decays_tenfold = false;
};

struct DeltaReport {
  int index = 0;
  double delta_value = 0.0;
  double lambda = 0.0;
  double relative_gap = 0.0;
  std::array<BoundaryTrace, 2> boundary_flux;    // g p K g' at left, right
  std::array<BoundaryTrace, 2> weighted_square;  // p g^2 at left, right
  std::string window_note;
};

// Delta value: trapezoid of flux^2 / r (plus q g^2).  Boundary traces probe
// the outermost 10% of the truncated grid on each side.
DeltaReport delta_report(const CoefficientProblem& problem, const Eigenpair& pair);

struct SturmPiconeResult {
  bool ok = false;
  bool degenerate_input = false;  // same index twice: vacuously true
};

// Zeros of g_i interlace strictly with those of g_{i+1}.  Throws
// PreconditionError when the pairs live on different grids.
SturmPiconeResult sturm_picone_check(const Eigenpair& lower, const Eigenpair& upper);

// max |g_i - sqrt2 cos(i arccos(g_1 / sqrt2))| over the grid after sign
// alignment.  Refuses (NotApplicable) for anything but UniformCosine.
double chebyshev_relation_check(const CoefficientProblem& problem, const Eigenpair& first,
                                const Eigenpair& pair_i);

struct CharacteristicRoots {
  LimitVerdict plus;
  LimitVerdict minus;
  // Probes where the discriminant ((pK)'/(2pK))^2 - lambda/K is negative.
  std::vector<double> complex_at;
  bool complex_tail = false;  // negative on the last four probes
};

// Branches -b +- sqrt(b^2 - lambda/K) with b = (pK)'/(2pK) on probes toward a
// singular endpoint.  Regular endpoints -> NotApplicable.
CharacteristicRoots characteristic_roots(const CoefficientProblem& problem, Side side,
                                         double lambda);

}  // namespace sfa

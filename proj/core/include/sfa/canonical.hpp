#pragma once

#include <array>
#include <utility>
#include <vector>

#include "sfa/coefficients.hpp"
#include "sfa/eigenpair.hpp"
#include "sfa/grid_function.hpp"

namespace sfa {

enum class EndpointKind { Regular, LimitCircle, LimitPoint, Unknown };

const char* to_string(EndpointKind kind);

// Finite endpoint at which p and K tend to finite positive limits (judged on
// a probe sequence).
bool is_regular_endpoint(const CoefficientProblem& problem, Side side);

// W(f, g) = f r g' - g r f' at s, derivatives from the interpolants.
double wronskian(const GridFunction& f, const GridFunction& g, const ScalarField& r, double s);

struct VSolution {
  // v(t) = integral of 1/(p K) from x0, with node slopes exactly 1/(p K).
  GridFunction v;
  GridFunction u;  // u = 1
  double x0 = 0.0;
  // Factor applied to v so that W(u, v) = 1 at the nodes (1 when no
  // correction was needed).
  double renormalization = 1.0;
};

// Cumulative integral of 1/(pK) on `grid` (adaptive Simpson per cell).
// Throws DomainError when x0 is outside the grid span or the domain, and
// PreconditionError when pK underflows at a node.
VSolution v_solution(const CoefficientProblem& problem, const std::vector<double>& grid,
                     double x0);

ScalarField flux_coefficient(const CoefficientProblem& problem);

struct Hamiltonian2x2 {
  GridFunction h1;  // p
  GridFunction h2;  // p v^2
  GridFunction h3;  // p v (off-diagonal)
  // max over nodes of |h1 h2 - h3^2| / max(1, h1 h2).
  double max_det_residual = 0.0;
  bool psd = true;
};

Hamiltonian2x2 hamiltonian(const CoefficientProblem& problem, const std::vector<double>& grid,
                           double x0);

struct RomanovTerms {
  double weighted_v2 = 0.0;  // |integral of p v^2 between x0 and x|
  double tail_mass = 0.0;    // integral of p between x and the endpoint
  double product = 0.0;
};

// Both factors of the canonical-system product for the endpoint on `side`.
// v is integrated with 8-point Gauss-Legendre on 512 cells uniform in
// asinh((t - x0) / scale); the tail mass uses the tail quadrature.
// Throws NotApplicable for a regular endpoint.
RomanovTerms romanov_terms(const CoefficientProblem& problem, Side side, double x0, double x);
double romanov_product(const CoefficientProblem& problem, Side side, double x0, double x);

using Matrix2 = std::array<std::array<double, 2>, 2>;

struct BoundaryMatrices {
  Matrix2 A{};
  Matrix2 B{};
};

double det(const Matrix2& m);

// det A = det B plus the rank side conditions for the given endpoint kinds:
// a single non-LP endpoint needs a non-zero matrix, two need rank (A, B) = 2.
// Throws PreconditionError when an LP endpoint carries a non-zero matrix or an
// entry is not finite.
bool self_adjointness_check(const BoundaryMatrices& m,
                            std::pair<EndpointKind, EndpointKind> kinds);

// The SFA Neumann choice A = [[1,0],[0,0]], B = [[0,0],[1,0]], with the zero
// matrix at LP endpoints.
BoundaryMatrices sfa_neumann_matrices(std::pair<EndpointKind, EndpointKind> kinds);

// Y = (y, r y') at a regular endpoint, (W(y, v), W(y, u)) at an LC endpoint,
// evaluated at the outermost grid node.  LP or Unknown -> NotApplicable.
std::array<double, 2> lc_y_vector(const CoefficientProblem& problem, const Eigenpair& pair,
                                  Side side, EndpointKind kind, double x0);

}  // namespace sfa

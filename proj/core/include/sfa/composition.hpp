#pragma once

#include <vector>

#include "sfa/eigenpair.hpp"

namespace sfa {

using MultiIndex = std::vector<int>;

struct CompositeSolution {
  MultiIndex multi_index;
  double lambda = 0.0;
  // factors[a] is source a's pair with index multi_index[a]; the pointers
  // refer into the caller's per-source lists.
  std::vector<const Eigenpair*> factors;
  // Size of the group of composites sharing this eigenvalue (relative
  // 1e-9), counted in full even when the group extends past m.
  int degeneracy = 1;
};

// The m composites with the smallest summed eigenvalue, excluding the
// all-zero index.  Best-first search; equal eigenvalues are ordered
// lexicographically by multi-index.  Each per-source list must be indexed
// 0, 1, ... with the constant mode first.  Throws PreconditionError when
// the lists cannot supply m composites.
std::vector<CompositeSolution> enumerate_slowest(
    const std::vector<std::vector<Eigenpair>>& per_source, int m);

// Product of the factors' interpolated values at s (one coordinate per
// source); index-0 factors contribute 1.
double evaluate_composite(const CompositeSolution& solution, const std::vector<double>& s);

// max |integral of prod p_a g_i g_j - delta_ij| over the given composites on
// a tensor trapezoid grid with `points` uniform nodes per source.
double composite_orthonormality_error(const std::vector<CompositeSolution>& composites,
                                      int points = 64);

}  // namespace sfa

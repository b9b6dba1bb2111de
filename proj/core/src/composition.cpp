#include "sfa/composition.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "sfa/errors.hpp"

namespace sfa {

namespace {

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::vector<CompositeSolution> enumerate_slowest(
    const std::vector<std::vector<Eigenpair>>& per_source, int m) {
  if (per_source.empty()) throw PreconditionError("enumerate_slowest: no sources");
  if (m < 1) throw PreconditionError("enumerate_slowest: m must be >= 1");
  for (const auto& list : per_source) {
    if (list.size() < 2) {
      throw PreconditionError("enumerate_slowest: every source needs a nonconstant pair");
    }
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (list[k].index != static_cast<int>(k)) {
        throw PreconditionError("enumerate_slowest: per-source lists must be indexed 0, 1, ...");
      }
      if (list[k].lambda < -1e-9) {
        throw PreconditionError("enumerate_slowest: eigenvalues must be nonnegative");
      }
    }
  }
  const std::size_t S = per_source.size();
  auto lambda_of = [&](const MultiIndex& idx) {
    double sum = 0.0;
    for (std::size_t a = 0; a < S; ++a) sum += per_source[a][idx[a]].lambda;
    return sum;
  };
  using Entry = std::pair<double, MultiIndex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  std::set<MultiIndex> seen;
  const MultiIndex zero(S, 0);
  queue.push({lambda_of(zero), zero});
  seen.insert(zero);

  std::vector<Entry> found;
  while (!queue.empty()) {
    Entry top = queue.top();
    if (static_cast<int>(found.size()) >= m && !close(top.first, found.back().first)) break;
    queue.pop();
    for (std::size_t a = 0; a < S; ++a) {
      MultiIndex next = top.second;
      if (++next[a] >= static_cast<int>(per_source[a].size())) continue;
      if (seen.insert(next).second) queue.push({lambda_of(next), next});
    }
    if (top.second != zero) found.push_back(std::move(top));
  }
  if (static_cast<int>(found.size()) < m) {
    throw PreconditionError("enumerate_slowest: m exceeds the enumerable combinations");
  }

  // Group equal eigenvalues, order each group lexicographically.
  std::vector<CompositeSolution> all;
  std::size_t start = 0;
  while (start < found.size()) {
    std::size_t end = start + 1;
    while (end < found.size() && close(found[end].first, found[start].first)) ++end;
    std::sort(found.begin() + start, found.begin() + end,
              [](const Entry& x, const Entry& y) { return x.second < y.second; });
    for (std::size_t k = start; k < end; ++k) {
      CompositeSolution c;
      c.multi_index = found[k].second;
      c.lambda = found[k].first;
      c.degeneracy = static_cast<int>(end - start);
      for (std::size_t a = 0; a < S; ++a) c.factors.push_back(&per_source[a][c.multi_index[a]]);
      all.push_back(std::move(c));
    }
    start = end;
  }
  all.resize(m);
  return all;
}

double evaluate_composite(const CompositeSolution& solution, const std::vector<double>& s) {
  if (s.size() != solution.factors.size()) {
    throw PreconditionError("evaluate_composite: one coordinate per source is required");
  }
  double value = 1.0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (solution.multi_index[a] == 0) continue;
    value *= solution.factors[a]->g(s[a]);
  }
  return value;
}

double composite_orthonormality_error(const std::vector<CompositeSolution>& composites,
                                      int points) {
  if (composites.empty()) return 0.0;
  if (points < 2) throw PreconditionError("composite_orthonormality_error: need >= 2 points");
  const std::size_t S = composites.front().factors.size();
  // Per-source uniform nodes over the factor grid, trapezoid weights times p.
  std::vector<std::vector<double>> nodes(S), weights(S);
  for (std::size_t a = 0; a < S; ++a) {
    const Eigenpair& ref = *composites.front().factors[a];
    const std::vector<double> grid(ref.g.grid().begin(), ref.g.grid().end());
    const GridFunction density(grid, ref.density);
    const double lo = grid.front();
    const double hi = grid.back();
    for (int k = 0; k < points; ++k) nodes[a].push_back(k + 1 == points ? hi : lo + (hi - lo) * k / (points - 1));
    weights[a] = trapezoid_weights(nodes[a]);
    for (int k = 0; k < points; ++k) weights[a][k] *= density(nodes[a][k]);
  }
  const std::size_t nc = composites.size();
  std::vector<double> gram(nc * nc, 0.0);
  std::vector<int> odometer(S, 0);
  std::vector<double> s(S), values(nc);
  while (true) {
    double w = 1.0;
    for (std::size_t a = 0; a < S; ++a) {
      s[a] = nodes[a][odometer[a]];
      w *= weights[a][odometer[a]];
    }
    for (std::size_t i = 0; i < nc; ++i) values[i] = evaluate_composite(composites[i], s);
    for (std::size_t i = 0; i < nc; ++i) {
      for (std::size_t j = 0; j < nc; ++j) gram[i * nc + j] += w * values[i] * values[j];
    }
    std::size_t a = 0;
    while (a < S && ++odometer[a] == points) odometer[a++] = 0;
    if (a == S) break;
  }
  double err = 0.0;
  for (std::size_t i = 0; i < nc; ++i) {
    for (std::size_t j = 0; j < nc; ++j) {
      err = std::max(err, std::abs(gram[i * nc + j] - (i == j ? 1.0 : 0.0)));
    }
  }
  return err;
}

}  // namespace sfa

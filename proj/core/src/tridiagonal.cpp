#include "sfa/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sfa/errors.hpp"

namespace sfa {

std::vector<double> SymTridiagonal::multiply(const std::vector<double>& x) const {
  const std::size_t n = d.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = d[i] * x[i];
    if (i > 0) v += e[i - 1] * x[i - 1];
    if (i + 1 < n) v += e[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

int SymTridiagonal::count_below(double x) const {
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double off = i > 0 ? e[i - 1] * e[i - 1] / q : 0.0;
    q = d[i] - x - off;
    if (std::abs(q) < tiny) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

std::pair<double, double> SymTridiagonal::bounds() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(e[i - 1]);
    if (i + 1 < d.size()) r += std::abs(e[i]);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  return {lo, hi};
}

void solve_shifted(const SymTridiagonal& t, double shift, std::vector<double>& b) {
  // Gaussian elimination with partial pivoting on a tridiagonal matrix; the
  // upper factor gains a second superdiagonal.
  const std::size_t n = t.size();
  std::vector<double> dl(n > 0 ? n - 1 : 0), dg(n), du(n > 0 ? n - 1 : 0), du2(n > 1 ? n - 2 : 0, 0.0);
  for (std::size_t i = 0; i < n; ++i) dg[i] = t.d[i] - shift;
  for (std::size_t i = 0; i + 1 < n; ++i) dl[i] = du[i] = t.e[i];
  const double scale = std::max(1.0, std::abs(t.bounds().second));
  const double floor = std::numeric_limits<double>::epsilon() * scale;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(dg[i]) >= std::abs(dl[i])) {
      if (std::abs(dg[i]) < floor) dg[i] = dg[i] < 0 ? -floor : floor;
      const double f = dl[i] / dg[i];
      dg[i + 1] -= f * du[i];
      b[i + 1] -= f * b[i];
    } else {
      // Interchange rows i and i+1.
      const double f = dg[i] / dl[i];
      dg[i] = dl[i];
      const double tmp = dg[i + 1];
      dg[i + 1] = du[i] - f * tmp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du2[i];
      }
      du[i] = tmp;
      const double bi = b[i];
      b[i] = b[i + 1];
      b[i + 1] = bi - f * b[i + 1];
    }
  }
  if (n > 0 && std::abs(dg[n - 1]) < floor) dg[n - 1] = dg[n - 1] < 0 ? -floor : floor;
  // Back substitution with the two superdiagonals.
  for (std::size_t k = n; k-- > 0;) {
    double v = b[k];
    if (k + 1 < n) v -= du[k] * b[k + 1];
    if (k + 2 < n) v -= du2[k] * b[k + 2];
    b[k] = v / dg[k];
  }
}

namespace {

double norm2(const std::vector<double>& x) {
  return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
}

void scale_to_unit(std::vector<double>& x) {
  const double nrm = norm2(x);
  if (nrm > 0.0) {
    for (double& v : x) v /= nrm;
  }
}

}  // namespace

TridiagonalEigen smallest_eigenpairs(const SymTridiagonal& t, int count) {
  const int n = static_cast<int>(t.size());
  if (count < 1 || count > n) throw PreconditionError("smallest_eigenpairs: bad eigenpair count");
  const auto [glo, ghi] = t.bounds();
  const double tnorm = std::max(std::abs(glo), std::abs(ghi));
  const double eps = std::numeric_limits<double>::epsilon();

  TridiagonalEigen out;
  for (int k = 0; k < count; ++k) {
    // Bisection for the k-th eigenvalue (0-based): smallest x with count > k.
    double lo = glo - eps * tnorm - 1e-300;
    double hi = ghi + eps * tnorm + 1e-300;
    if (!out.values.empty()) lo = std::max(lo, out.values.back() - 4.0 * eps * tnorm);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi)) + 4.0 * eps * eps * tnorm) break;
      if (t.count_below(mid) > k) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    out.values.push_back(0.5 * (lo + hi));
  }

  for (int k = 0; k < count; ++k) {
    const double lambda = out.values[k];
    // Deterministic pseudo-random start keeps the iteration off special
    // subspaces.
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(0.7 * i + 1.3 * k);
    // Close eigenvalues share the perturbed shift; keep their vectors apart.
    std::vector<int> cluster;
    for (int j = 0; j < k; ++j) {
      if (std::abs(out.values[j] - lambda) <= 1e-3 * std::max(1.0, tnorm)) cluster.push_back(j);
    }
    const double shift = lambda + 8.0 * eps * std::max(tnorm, std::abs(lambda)) * (k % 2 ? 1 : -1);
    double residual = 0.0;
    for (int it = 0; it < 6; ++it) {
      solve_shifted(t, shift, x);
      for (int j : cluster) {
        const double dot = std::inner_product(x.begin(), x.end(), out.vectors[j].begin(), 0.0);
        for (int i = 0; i < n; ++i) x[i] -= dot * out.vectors[j][i];
      }
      scale_to_unit(x);
      const std::vector<double> tx = t.multiply(x);
      double r = 0.0;
      for (int i = 0; i < n; ++i) r += (tx[i] - lambda * x[i]) * (tx[i] - lambda * x[i]);
      residual = std::sqrt(r);
      if (it >= 2 && residual <= 1e3 * eps * tnorm) break;
    }
    out.residuals.push_back(residual);
    if (!(residual <= 1e-6 * std::max(1.0, tnorm))) out.converged = false;
    out.vectors.push_back(std::move(x));
  }
  if (!out.converged) {
    throw ConvergenceError("smallest_eigenpairs: inverse iteration did not converge");
  }
  return out;
}

}  // namespace sfa

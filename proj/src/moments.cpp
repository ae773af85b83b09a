#include "polydens/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polydens/error.hpp"

namespace polydens {

double gaussian_moment(unsigned k) {
  if (k % 2 == 1) return 0.0;
  double r = 1.0;
  for (unsigned j = k - 1; j > 1 && k > 0; j -= 2) r *= j;
  return r;
}

double expectation(const Polynomial& f) {
  double sum = 0.0;
  for (const auto& [exps, c] : f.terms()) {
    double m = c;
    for (unsigned e : exps.exponents()) m *= gaussian_moment(e);
    sum += m;
  }
  return sum;
}

double raw_variance(const Polynomial& f) {
  const double mean = expectation(f);
  return expectation(multiply(f, f)) - mean * mean;
}

double variance(const Polynomial& f) { return std::max(0.0, raw_variance(f)); }

double central_moment(const Polynomial& f, unsigned k) {
  Polynomial centered = f - Polynomial::constant(f.dimension(), expectation(f));
  Polynomial power = Polynomial::constant(f.dimension(), 1.0);
  // Square-and-multiply keeps the intermediate term counts small.
  while (k > 0) {
    if (k & 1u) power = multiply(power, centered);
    k >>= 1;
    if (k > 0) centered = multiply(centered, centered);
  }
  return expectation(power);
}

double HermiteExpansion::coefficient(const MultiIndex& k) const {
  const auto it = coeffs.find(k);
  return it == coeffs.end() ? 0.0 : it->second;
}

double HermiteExpansion::squared_norm() const {
  double s = 0.0;
  for (const auto& [k, c] : coeffs) s += c * c;
  return s;
}

namespace {

// table[j][k]: coefficient of h_k in x^j, from x h_k = sqrt(k+1) h_{k+1} + sqrt(k) h_{k-1}.
std::vector<std::vector<double>> monomial_to_hermite(unsigned max_power) {
  std::vector<std::vector<double>> table(max_power + 1);
  table[0] = {1.0};
  for (unsigned j = 0; j < max_power; ++j) {
    const auto& cur = table[j];
    std::vector<double> next(j + 2, 0.0);
    for (unsigned k = 0; k < cur.size(); ++k) {
      if (cur[k] == 0.0) continue;
      next[k + 1] += std::sqrt(static_cast<double>(k + 1)) * cur[k];
      if (k > 0) next[k - 1] += std::sqrt(static_cast<double>(k)) * cur[k];
    }
    table[j + 1] = std::move(next);
  }
  return table;
}

}  // namespace

HermiteExpansion hermite_expand(const Polynomial& f) {
  HermiteExpansion out;
  out.n = f.dimension();
  if (f.is_zero()) return out;
  const auto table = monomial_to_hermite(max_var_power(f));
  const std::size_t n = f.dimension();
  std::vector<unsigned> k(n);
  for (const auto& [exps, c] : f.terms()) {
    // Tensor product of the per-coordinate expansions; odometer over k.
    std::fill(k.begin(), k.end(), 0u);
    for (;;) {
      double coef = c;
      for (std::size_t i = 0; i < n && coef != 0.0; ++i) coef *= table[exps[i]][k[i]];
      if (coef != 0.0) out.coeffs[MultiIndex(k)] += coef;
      std::size_t pos = 0;
      while (pos < n && k[pos] == exps[pos]) k[pos++] = 0;
      if (pos == n) break;
      ++k[pos];
    }
  }
  std::erase_if(out.coeffs, [](const auto& kv) { return kv.second == 0.0; });
  return out;
}

std::vector<double> hermite_values(unsigned kmax, double x) {
  std::vector<double> h(kmax + 1);
  h[0] = 1.0;
  if (kmax >= 1) h[1] = x;
  for (unsigned k = 1; k < kmax; ++k) {
    h[k + 1] = (x * h[k] - std::sqrt(static_cast<double>(k)) * h[k - 1]) / std::sqrt(static_cast<double>(k + 1));
  }
  return h;
}

double evaluate(const HermiteExpansion& h, std::span<const double> x) {
  require(x.size() == h.n, Errc::DimensionMismatch, "point length differs from dimension");
  unsigned kmax = 0;
  for (const auto& [k, c] : h.coeffs) kmax = std::max(kmax, k.max_power());
  std::vector<std::vector<double>> values;
  values.reserve(h.n);
  for (double xi : x) values.push_back(hermite_values(kmax, xi));
  double sum = 0.0;
  for (const auto& [k, c] : h.coeffs) {
    double term = c;
    for (std::size_t i = 0; i < h.n; ++i) term *= values[i][k[i]];
    sum += term;
  }
  return sum;
}

double variance_via_hermite(const Polynomial& f) {
  const auto h = hermite_expand(f);
  const MultiIndex zero = MultiIndex::zeros(h.n);
  double s = 0.0;
  for (const auto& [k, c] : h.coeffs) {
    if (k != zero) s += c * c;
  }
  return s;
}

double variance_lower_bound_1d(const Polynomial& g, unsigned m) {
  require(g.dimension() == 1, Errc::DimensionMismatch, "lower bound applies to univariate polynomials");
  require(m >= 1, Errc::InvalidArgument, "m must be positive");
  if (degree(g) > m) fail(Errc::DegreeExceedsM, "degree of g exceeds m");
  const Polynomial dg = partial_derivative(g, 0);
  return expectation(multiply(dg, dg)) / static_cast<double>(m);
}

double max_nonconstant_coefficient_sq(const Polynomial& g) {
  require(g.dimension() == 1, Errc::DimensionMismatch, "expects a univariate polynomial");
  double best = 0.0;
  for (const auto& [exps, c] : g.terms()) {
    if (exps[0] >= 1) best = std::max(best, c * c);
  }
  return best;
}

namespace {

// Solves A x = b in place by Gaussian elimination with partial pivoting.
// Returns false for a (numerically) singular system.
bool solve_dense(std::vector<std::vector<double>> a, std::vector<double>& b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    if (std::fabs(a[piv][col]) < 1e-300) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= factor * a[col][k];
      b[r] -= factor * b[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * b[k];
    b[i] = s / a[i][i];
  }
  return true;
}

}  // namespace

double c2_constant(unsigned m) {
  require(m >= 1 && m <= 12, Errc::InvalidArgument, "c2 is tabulated for 1 <= m <= 12");
  // q(a) = (1/m) sum_{j,k} j k E[X^{j+k-2}] a_j a_k over a in R^m.
  std::vector<std::vector<double>> q(m, std::vector<double>(m));
  for (unsigned j = 1; j <= m; ++j) {
    for (unsigned k = 1; k <= m; ++k) q[j - 1][k - 1] = j * k * gaussian_moment(j + k - 2) / m;
  }
  double best = std::numeric_limits<double>::infinity();
  // By symmetry a -> -a it suffices to fix a_p = +1 on each face p. The other
  // coordinates are each at -1, +1, or free; a free block solves its
  // stationarity equations. Every feasible candidate is a point of the face,
  // and the minimizer's own active set is among the candidates.
  std::vector<int> state(m);
  std::size_t patterns = 1;
  for (unsigned i = 1; i < m; ++i) patterns *= 3;
  for (unsigned p = 0; p < m; ++p) {
    for (std::size_t code = 0; code < patterns; ++code) {
      std::size_t rest = code;
      for (unsigned i = 0; i < m; ++i) {
        if (i == p) {
          state[i] = 1;
          continue;
        }
        state[i] = static_cast<int>(rest % 3) - 1;  // -1, 0 (free), +1
        rest /= 3;
      }
      std::vector<unsigned> free_idx;
      for (unsigned i = 0; i < m; ++i) {
        if (i != p && state[i] == 0) free_idx.push_back(i);
      }
      std::vector<double> a(m);
      for (unsigned i = 0; i < m; ++i) a[i] = state[i];
      if (!free_idx.empty()) {
        const std::size_t nf = free_idx.size();
        std::vector<std::vector<double>> sys(nf, std::vector<double>(nf));
        std::vector<double> rhs(nf, 0.0);
        for (std::size_t r = 0; r < nf; ++r) {
          for (std::size_t c = 0; c < nf; ++c) sys[r][c] = q[free_idx[r]][free_idx[c]];
          for (unsigned i = 0; i < m; ++i) {
            if (state[i] != 0 || i == p) rhs[r] -= q[free_idx[r]][i] * a[i];
          }
        }
        if (!solve_dense(sys, rhs)) continue;
        bool feasible = true;
        for (std::size_t r = 0; r < nf; ++r) {
          if (std::fabs(rhs[r]) > 1.0 + 1e-12) feasible = false;
          a[free_idx[r]] = rhs[r];
        }
        if (!feasible) continue;
      }
      double value = 0.0;
      for (unsigned j = 0; j < m; ++j) {
        for (unsigned k = 0; k < m; ++k) value += q[j][k] * a[j] * a[k];
      }
      best = std::min(best, value);
    }
  }
  return best;
}

}  // namespace polydens

#include "polydens/chain_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polydens/error.hpp"

namespace polydens {

namespace {

struct Knot {
  double x;
  double v;
};

// Concave piecewise-linear function on [-bound, bound] given by its knots.
using Pwl = std::vector<Knot>;

double interpolate(const Knot& a, const Knot& b, double x) {
  if (b.x == a.x) return std::max(a.v, b.v);
  const double t = (x - a.x) / (b.x - a.x);
  return a.v + t * (b.v - a.v);
}

// First and last knot attaining the maximum.
std::pair<std::size_t, std::size_t> plateau(const Pwl& g) {
  std::size_t lo = 0;
  for (std::size_t k = 1; k < g.size(); ++k) {
    if (g[k].v > g[lo].v) lo = k;
  }
  std::size_t hi = lo;
  while (hi + 1 < g.size() && g[hi + 1].v >= g[lo].v) ++hi;
  return {lo, hi};
}

// y -> max { g(x) : |x - y| <= s, |x| <= bound }, restricted to |y| <= bound.
Pwl window_max(const Pwl& g, std::size_t il, std::size_t ir, double s, double bound) {
  Pwl w;
  w.reserve(g.size() + 3);
  for (std::size_t k = 0; k <= il; ++k) w.push_back({g[k].x - s, g[k].v});
  for (std::size_t k = ir; k < g.size(); ++k) w.push_back({g[k].x + s, g[k].v});

  Pwl out;
  out.reserve(w.size() + 2);
  auto value_at = [&](double x) {
    if (x <= w.front().x) return w.front().v;
    for (std::size_t k = 1; k < w.size(); ++k) {
      if (x <= w[k].x) return interpolate(w[k - 1], w[k], x);
    }
    return w.back().v;
  };
  out.push_back({-bound, value_at(-bound)});
  for (const auto& k : w) {
    if (k.x > -bound && k.x < bound) out.push_back(k);
  }
  out.push_back({bound, value_at(bound)});
  return out;
}

// Drops knots that coincide or sit on a straight segment.
void simplify(Pwl& g, double xtol) {
  Pwl out;
  out.reserve(g.size());
  for (const auto& k : g) {
    if (!out.empty() && k.x - out.back().x <= xtol) {
      out.back().v = std::max(out.back().v, k.v);
      continue;
    }
    while (out.size() >= 2) {
      const Knot& a = out[out.size() - 2];
      const Knot& b = out.back();
      const double predicted = interpolate(a, k, b.x);
      if (std::fabs(predicted - b.v) <= 1e-15 * (1.0 + std::fabs(b.v))) {
        out.pop_back();
      } else {
        break;
      }
    }
    out.push_back(k);
  }
  g = std::move(out);
}

ChainLpResult solve_sweep(std::span<const double> c, double bound, double step) {
  const std::size_t n = c.size();
  const double xtol = 1e-14 * bound;
  std::vector<std::pair<double, double>> argmax(n);  // plateau of V_j
  Pwl g{{-bound, -c[0] * bound}, {bound, c[0] * bound}};
  for (std::size_t j = 0;; ++j) {
    const auto [il, ir] = plateau(g);
    argmax[j] = {g[il].x, g[ir].x};
    if (j + 1 == n) break;
    g = window_max(g, il, ir, step, bound);
    for (auto& k : g) k.v += c[j + 1] * k.x;
    simplify(g, xtol);
  }
  ChainLpResult res;
  res.phi.resize(n);
  double y = argmax[n - 1].first;
  res.phi[n - 1] = y;
  for (std::size_t j = n - 1; j-- > 0;) {
    const double x = std::clamp(std::clamp(y, argmax[j].first, argmax[j].second), y - step, y + step);
    res.phi[j] = std::clamp(x, -bound, bound);
    y = res.phi[j];
  }
  for (std::size_t j = 0; j < n; ++j) res.value += c[j] * res.phi[j];
  return res;
}

// Dense bounded-variable primal simplex with Bland's rule on
//   max c^T x  s.t.  A x = 0,  lo <= x <= hi,
// started from a given feasible basis.
class BoundedSimplex {
 public:
  BoundedSimplex(std::vector<std::vector<double>> a, std::vector<double> c, std::vector<double> lo,
                 std::vector<double> hi, std::vector<double> x, std::vector<std::size_t> basis)
      : a_(std::move(a)), c_(std::move(c)), lo_(std::move(lo)), hi_(std::move(hi)), x_(std::move(x)),
        basis_(std::move(basis)), rows_(a_.size()), cols_(c_.size()) {
    in_basis_.assign(cols_, false);
    for (auto b : basis_) in_basis_[b] = true;
    invert_basis();
  }

  const std::vector<double>& solve() {
    constexpr double tol = 1e-11;
    for (std::size_t iter = 0; iter < 100000; ++iter) {
      // Duals y = c_B^T B^{-1}.
      std::vector<double> y(rows_, 0.0);
      for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t i = 0; i < rows_; ++i) y[r] += c_[basis_[i]] * binv_[i][r];
      }
      std::size_t enter = cols_;
      double dir = 0.0;
      for (std::size_t j = 0; j < cols_ && enter == cols_; ++j) {
        if (in_basis_[j]) continue;
        double d = c_[j];
        for (std::size_t r = 0; r < rows_; ++r) d -= y[r] * a_[r][j];
        if (d > tol && x_[j] < hi_[j]) {
          enter = j;
          dir = 1.0;
        } else if (d < -tol && x_[j] > lo_[j]) {
          enter = j;
          dir = -1.0;
        }
      }
      if (enter == cols_) return x_;

      std::vector<double> alpha(rows_, 0.0);
      for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t r = 0; r < rows_; ++r) alpha[i] += binv_[i][r] * a_[r][enter];
      }
      // Moving x_enter by dir * theta moves x_B by -dir * theta * alpha.
      double theta = hi_[enter] - lo_[enter];
      std::size_t leave = rows_;
      for (std::size_t i = 0; i < rows_; ++i) {
        const double rate = -dir * alpha[i];
        if (std::fabs(rate) <= 1e-13) continue;
        const std::size_t b = basis_[i];
        const double room = rate > 0.0 ? (hi_[b] - x_[b]) / rate : (lo_[b] - x_[b]) / rate;
        const double r = std::max(room, 0.0);
        if (r < theta - 1e-15) {
          theta = r;
          leave = i;
        } else if (leave != rows_ && r <= theta + 1e-15 && b < basis_[leave]) {
          theta = std::min(theta, r);
          leave = i;
        }
      }
      x_[enter] += dir * theta;
      for (std::size_t i = 0; i < rows_; ++i) x_[basis_[i]] -= dir * theta * alpha[i];
      if (leave == rows_) {
        x_[enter] = dir > 0.0 ? hi_[enter] : lo_[enter];
        continue;
      }
      const std::size_t out = basis_[leave];
      x_[out] = (-dir * alpha[leave] > 0.0) ? hi_[out] : lo_[out];
      in_basis_[out] = false;
      in_basis_[enter] = true;
      basis_[leave] = enter;
      pivot(leave, alpha);
      recompute_basic();
    }
    fail(Errc::InvalidArgument, "simplex iteration limit reached");
  }

 private:
  void invert_basis() {
    // The starting basis is -I in this module's use; general inversion keeps
    // the class honest.
    std::vector<std::vector<double>> m(rows_, std::vector<double>(2 * rows_, 0.0));
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t i = 0; i < rows_; ++i) m[r][i] = a_[r][basis_[i]];
      m[r][rows_ + r] = 1.0;
    }
    for (std::size_t col = 0; col < rows_; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < rows_; ++r) {
        if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
      }
      if (std::fabs(m[piv][col]) < 1e-300) fail(Errc::InvalidArgument, "singular starting basis");
      std::swap(m[piv], m[col]);
      const double inv = 1.0 / m[col][col];
      for (auto& v : m[col]) v *= inv;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (r == col || m[r][col] == 0.0) continue;
        const double f = m[r][col];
        for (std::size_t k = 0; k < 2 * rows_; ++k) m[r][k] -= f * m[col][k];
      }
    }
    binv_.assign(rows_, std::vector<double>(rows_));
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t k = 0; k < rows_; ++k) binv_[r][k] = m[r][rows_ + k];
    }
  }

  void pivot(std::size_t leave, const std::vector<double>& alpha) {
    const double p = alpha[leave];
    for (auto& v : binv_[leave]) v /= p;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == leave || alpha[i] == 0.0) continue;
      for (std::size_t k = 0; k < rows_; ++k) binv_[i][k] -= alpha[i] * binv_[leave][k];
    }
  }

  void recompute_basic() {
    std::vector<double> rhs(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!in_basis_[j]) rhs[r] -= a_[r][j] * x_[j];
      }
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      double v = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) v += binv_[i][r] * rhs[r];
      const std::size_t b = basis_[i];
      x_[b] = std::clamp(v, lo_[b], hi_[b]);
    }
  }

  std::vector<std::vector<double>> a_;
  std::vector<double> c_, lo_, hi_, x_;
  std::vector<std::size_t> basis_;
  std::size_t rows_, cols_;
  std::vector<bool> in_basis_;
  std::vector<std::vector<double>> binv_;
};

ChainLpResult solve_simplex(std::span<const double> c, double bound, double step) {
  const std::size_t n = c.size();
  ChainLpResult res;
  if (n == 1) {
    res.phi = {c[0] >= 0.0 ? bound : -bound};
    res.value = c[0] * res.phi[0];
    return res;
  }
  // Columns: phi_0..phi_{n-1}, then t_0..t_{n-2} with phi_{j+1} - phi_j - t_j = 0.
  const std::size_t rows = n - 1, cols = 2 * n - 1;
  std::vector<std::vector<double>> a(rows, std::vector<double>(cols, 0.0));
  for (std::size_t j = 0; j < rows; ++j) {
    a[j][j + 1] = 1.0;
    a[j][j] = -1.0;
    a[j][n + j] = -1.0;
  }
  std::vector<double> obj(cols, 0.0), lo(cols), hi(cols), x(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    obj[j] = c[j];
    lo[j] = -bound;
    hi[j] = bound;
    x[j] = -bound;
  }
  std::vector<std::size_t> basis(rows);
  for (std::size_t j = 0; j < rows; ++j) {
    lo[n + j] = -step;
    hi[n + j] = step;
    basis[j] = n + j;
  }
  BoundedSimplex lp(std::move(a), std::move(obj), std::move(lo), std::move(hi), std::move(x), std::move(basis));
  const auto& sol = lp.solve();
  res.phi.assign(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(n));
  for (std::size_t j = 0; j < n; ++j) res.value += c[j] * res.phi[j];
  return res;
}

}  // namespace

ChainLpResult solve_chain_lp(std::span<const double> c, double bound, double step, LpMethod method) {
  require(!c.empty(), Errc::InvalidArgument, "LP needs at least one node");
  require(std::isfinite(bound) && bound >= 0.0, Errc::InvalidArgument, "box bound must be nonnegative");
  require(std::isfinite(step) && step > 0.0, Errc::InvalidArgument, "Lipschitz step must be positive");
  for (double v : c) require(std::isfinite(v), Errc::InvalidArgument, "LP weights must be finite");
  if (bound == 0.0) return {0.0, std::vector<double>(c.size(), 0.0)};
  return method == LpMethod::Sweep ? solve_sweep(c, bound, step) : solve_simplex(c, bound, step);
}

}  // namespace polydens

#include "polydens/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "polydens/error.hpp"
#include "polydens/rng.hpp"

namespace polydens {

unsigned MultiIndex::total_degree() const noexcept {
  return std::accumulate(exps_.begin(), exps_.end(), 0u);
}

unsigned MultiIndex::max_power() const noexcept {
  return exps_.empty() ? 0u : *std::max_element(exps_.begin(), exps_.end());
}

MultiIndex MultiIndex::with(std::size_t i, unsigned e) const {
  auto exps = exps_;
  exps.at(i) = e;
  return MultiIndex(std::move(exps));
}

MultiIndex MultiIndex::without(std::size_t i) const {
  auto exps = exps_;
  exps.erase(exps.begin() + static_cast<std::ptrdiff_t>(i));
  return MultiIndex(std::move(exps));
}

void ClassParams::validate() const {
  require(n >= 1, Errc::InvalidArgument, "class parameters need n >= 1");
  require(m >= 1 && m <= d, Errc::InvalidArgument, "class parameters need 1 <= m <= d");
}

Polynomial::Polynomial(std::size_t n) : n_(n) {}

Polynomial Polynomial::constant(std::size_t n, double c) {
  Polynomial p(n);
  p.add_term(MultiIndex::zeros(n), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t n, std::size_t i) {
  require(i < n, Errc::IndexOutOfRange, "variable index exceeds dimension");
  Polynomial p(n);
  p.add_term(MultiIndex::zeros(n).with(i, 1), 1.0);
  return p;
}

Polynomial Polynomial::monomial(const MultiIndex& exps, double coef) {
  Polynomial p(exps.size());
  p.add_term(exps, coef);
  return p;
}

void Polynomial::add_term(const MultiIndex& exps, double coef) {
  require(exps.size() == n_, Errc::DimensionMismatch, "exponent vector length differs from dimension");
  if (coef == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(exps, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::coefficient(const MultiIndex& exps) const {
  const auto it = terms_.find(exps);
  return it == terms_.end() ? 0.0 : it->second;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  require(other.n_ == n_, Errc::DimensionMismatch, "adding polynomials of different dimension");
  for (const auto& [exps, c] : other.terms_) add_term(exps, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  require(other.n_ == n_, Errc::DimensionMismatch, "subtracting polynomials of different dimension");
  for (const auto& [exps, c] : other.terms_) add_term(exps, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) { return multiply(a, b); }

Polynomial operator*(double alpha, const Polynomial& p) {
  Polynomial out(p.dimension());
  if (alpha == 0.0) return out;
  for (const auto& [exps, c] : p.terms()) out.add_term(exps, alpha * c);
  return out;
}

namespace {

void require_nonzero(const Polynomial& f) {
  if (f.is_zero()) fail(Errc::ZeroPolynomial, "operation undefined for the zero polynomial");
}

}  // namespace

unsigned degree(const Polynomial& f) {
  require_nonzero(f);
  unsigned d = 0;
  for (const auto& [exps, c] : f.terms()) d = std::max(d, exps.total_degree());
  return d;
}

LeadingTerm leading_magnitude(const Polynomial& f) {
  const unsigned d = degree(f);
  LeadingTerm best;
  bool found = false;
  // std::map iterates in increasing lexicographic order, so ">=" keeps the
  // largest exponent vector among equal magnitudes.
  for (const auto& [exps, c] : f.terms()) {
    if (exps.total_degree() != d) continue;
    if (!found || std::fabs(c) >= best.magnitude) {
      best = {std::fabs(c), exps};
      found = true;
    }
  }
  return best;
}

unsigned max_var_power(const Polynomial& f) {
  require_nonzero(f);
  unsigned p = 0;
  for (const auto& [exps, c] : f.terms()) p = std::max(p, exps.max_power());
  return p;
}

bool in_class(const Polynomial& f, const ClassParams& params) {
  return f.dimension() == params.n && max_var_power(f) <= params.m && degree(f) <= params.d;
}

double evaluate(const Polynomial& f, std::span<const double> x) {
  require(x.size() == f.dimension(), Errc::DimensionMismatch, "point length differs from dimension");
  double sum = 0.0;
  for (const auto& [exps, c] : f.terms()) {
    double term = c;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (unsigned k = 0; k < exps[i]; ++k) term *= x[i];
    }
    sum += term;
  }
  return sum;
}

Polynomial scale(const Polynomial& f, double alpha) {
  if (alpha == 0.0) fail(Errc::ZeroScale, "scale factor must be nonzero");
  return alpha * f;
}

Polynomial multiply(const Polynomial& f, const Polynomial& g) {
  require(f.dimension() == g.dimension(), Errc::DimensionMismatch, "multiplying polynomials of different dimension");
  const std::size_t n = f.dimension();
  Polynomial out(n);
  std::vector<unsigned> buf(n);
  for (const auto& [ef, cf] : f.terms()) {
    for (const auto& [eg, cg] : g.terms()) {
      for (std::size_t i = 0; i < n; ++i) buf[i] = ef[i] + eg[i];
      out.add_term(MultiIndex(buf), cf * cg);
    }
  }
  return out;
}

Polynomial partial_derivative(const Polynomial& f, std::size_t i) {
  require(i < f.dimension(), Errc::IndexOutOfRange, "derivative variable index exceeds dimension");
  Polynomial out(f.dimension());
  for (const auto& [exps, c] : f.terms()) {
    if (exps[i] == 0) continue;
    out.add_term(exps.with(i, exps[i] - 1), c * exps[i]);
  }
  return out;
}

std::vector<Polynomial> coefficients_in_variable(const Polynomial& f, std::size_t i) {
  const std::size_t n = f.dimension();
  if (n < 2) fail(Errc::DimensionTooSmall, "restriction needs at least two variables");
  require(i < n, Errc::IndexOutOfRange, "restriction variable index exceeds dimension");
  unsigned top = 0;
  for (const auto& [exps, c] : f.terms()) top = std::max(top, exps[i]);
  std::vector<Polynomial> parts(top + 1, Polynomial(n - 1));
  for (const auto& [exps, c] : f.terms()) parts[exps[i]].add_term(exps.without(i), c);
  return parts;
}

Polynomial assemble_in_variable(std::span<const Polynomial> parts, std::size_t i) {
  require(!parts.empty(), Errc::InvalidArgument, "nothing to assemble");
  const std::size_t n = parts.front().dimension() + 1;
  require(i < n, Errc::IndexOutOfRange, "assembly variable index exceeds dimension");
  Polynomial out(n);
  for (std::size_t j = 0; j < parts.size(); ++j) {
    require(parts[j].dimension() + 1 == n, Errc::DimensionMismatch, "parts disagree on dimension");
    for (const auto& [exps, c] : parts[j].terms()) {
      std::vector<unsigned> e(exps.exponents().begin(), exps.exponents().end());
      e.insert(e.begin() + static_cast<std::ptrdiff_t>(i), static_cast<unsigned>(j));
      out.add_term(MultiIndex(std::move(e)), c);
    }
  }
  return out;
}

Polynomial substitute(const Polynomial& f, std::size_t i, double value) {
  require(i < f.dimension(), Errc::IndexOutOfRange, "substitution variable index exceeds dimension");
  Polynomial out(f.dimension());
  for (const auto& [exps, c] : f.terms()) {
    out.add_term(exps.with(i, 0), c * std::pow(value, static_cast<int>(exps[i])));
  }
  return out;
}

std::vector<MultiIndex> admissible_indices(const ClassParams& params) {
  params.validate();
  std::vector<MultiIndex> out;
  std::vector<unsigned> cur(params.n, 0);
  // Odometer over {0..m}^n, keeping total degree <= d.
  for (;;) {
    if (std::accumulate(cur.begin(), cur.end(), 0u) <= params.d) out.emplace_back(cur);
    std::size_t pos = params.n;
    while (pos > 0) {
      --pos;
      if (cur[pos] < params.m) {
        ++cur[pos];
        break;
      }
      cur[pos] = 0;
      if (pos == 0) return out;
    }
  }
}

Polynomial random_in_class(const ClassParams& params, std::uint64_t seed, const CoefficientLaw& law) {
  params.validate();
  require(law.inclusion > 0.0 && law.inclusion <= 1.0, Errc::InvalidArgument, "inclusion probability must be in (0,1]");
  require(law.max_terms >= 1, Errc::InvalidArgument, "max_terms must be positive");
  const auto candidates = admissible_indices(params);
  for (std::uint64_t attempt = 0;; ++attempt) {
    CounterStream rng(seed, attempt);
    std::vector<MultiIndex> chosen;
    for (const auto& idx : candidates) {
      if (rng.uniform() < law.inclusion) chosen.push_back(idx);
    }
    // Partial Fisher-Yates to cap the term count, then restore the order.
    for (std::size_t k = 0; k < std::min(law.max_terms, chosen.size()); ++k) {
      std::swap(chosen[k], chosen[k + rng.below(chosen.size() - k)]);
    }
    if (chosen.size() > law.max_terms) chosen.resize(law.max_terms);
    std::sort(chosen.begin(), chosen.end());

    Polynomial f(params.n);
    for (const auto& idx : chosen) {
      const double c = law.kind == CoefficientLaw::Kind::Uniform ? 2.0 * rng.uniform() - 1.0 : rng.normal();
      f.add_term(idx, c);
    }
    if (f.is_zero() || degree(f) == 0) continue;
    if (!law.normalize) return f;
    // Divide rather than multiply by the reciprocal so the leading term is
    // exactly +-1.
    const double a = leading_magnitude(f).magnitude;
    Polynomial normalized(params.n);
    for (const auto& [exps, c] : f.terms()) normalized.add_term(exps, c / a);
    return normalized;
  }
}

std::string to_string(const Polynomial& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  // Highest degree first reads more naturally.
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    const auto& [exps, c] = *it;
    double mag = c;
    if (!first) {
      os << (c < 0 ? " - " : " + ");
      mag = std::fabs(c);
    }
    first = false;
    const bool unit = exps.total_degree() > 0 && std::fabs(mag) == 1.0;
    if (unit) {
      if (mag < 0) os << '-';
    } else {
      os << mag;
    }
    bool need_star = !unit;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] == 0) continue;
      if (need_star) os << '*';
      os << 'x' << (i + 1);
      if (exps[i] > 1) os << '^' << exps[i];
      need_star = true;
    }
  }
  return os.str();
}

PolynomialEvaluator::PolynomialEvaluator(const Polynomial& f)
    : n_(f.dimension()), max_power_(f.is_zero() ? 0 : max_var_power(f)) {
  term_begin_.push_back(0);
  for (const auto& [exps, c] : f.terms()) {
    coefs_.push_back(c);
    for (std::size_t i = 0; i < n_; ++i) {
      if (exps[i] > 0) factors_.push_back(static_cast<std::uint32_t>(i * (max_power_ + 1) + exps[i]));
    }
    term_begin_.push_back(static_cast<std::uint32_t>(factors_.size()));
  }
}

double PolynomialEvaluator::operator()(const double* x, double* scratch) const {
  const std::size_t stride = max_power_ + 1;
  for (std::size_t i = 0; i < n_; ++i) {
    double* row = scratch + i * stride;
    row[0] = 1.0;
    for (std::size_t k = 1; k < stride; ++k) row[k] = row[k - 1] * x[i];
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < coefs_.size(); ++t) {
    double term = coefs_[t];
    for (std::uint32_t k = term_begin_[t]; k < term_begin_[t + 1]; ++k) term *= scratch[factors_[k]];
    sum += term;
  }
  return sum;
}

}  // namespace polydens

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "polydens/density.hpp"
#include "polydens/error.hpp"

namespace polydens {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }
double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

template <class F>
double integrate(F f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-13);
}

// Density of X1 * X2: 2 * int_0^inf gamma(u) gamma(x/u) / u du. With u = e^s
// the integrand is smooth and symmetric about s = ln|x| / 2.
double product_normal_pdf(double x) {
  const double ax = std::fabs(x);
  if (ax == 0.0) return std::numeric_limits<double>::infinity();
  const double center = 0.5 * std::log(ax);
  const double half_width = std::max(2.3 - center, 0.0) + 1.5;
  return 2.0 * integrate(
                   [ax](double s) {
                     const double u = std::exp(s);
                     return std_normal_pdf(u) * std_normal_pdf(ax / u);
                   },
                   center - half_width, center + half_width);
}

// P(X1 X2 <= x) = E Phi(x / |X2|).
double product_normal_cdf(double x) {
  if (x == 0.0) return 0.5;
  const double ax = std::fabs(x);
  auto integrand = [ax](double u) { return u == 0.0 ? kInvSqrt2Pi : std_normal_pdf(u) * std_normal_cdf(ax / u); };
  const double split = std::min(ax, 10.0);
  const double below = 2.0 * (integrate(integrand, 0.0, split) + integrate(integrand, split, 10.0));
  return x > 0.0 ? below : 1.0 - below;
}

void validate(const OracleSpec& spec) {
  if (spec.kind == OracleKind::Normal) {
    require(std::isfinite(spec.mean) && spec.sd > 0.0, Errc::InvalidArgument, "normal oracle needs sd > 0");
  }
}

}  // namespace

OracleKind parse_oracle_kind(std::string_view name) {
  if (name == "normal") return OracleKind::Normal;
  if (name == "chisq1") return OracleKind::ChiSquare1;
  if (name == "product_normal") return OracleKind::ProductNormal;
  fail(Errc::UnsupportedKind, "unknown oracle density '" + std::string(name) + "'");
}

double oracle_pdf(const OracleSpec& spec, double x) {
  validate(spec);
  switch (spec.kind) {
    case OracleKind::Normal:
      return std_normal_pdf((x - spec.mean) / spec.sd) / spec.sd;
    case OracleKind::ChiSquare1:
      if (x < 0.0) return 0.0;
      if (x == 0.0) return std::numeric_limits<double>::infinity();
      return std::exp(-0.5 * x) / std::sqrt(2.0 * std::numbers::pi * x);
    case OracleKind::ProductNormal:
      return product_normal_pdf(x);
  }
  fail(Errc::UnsupportedKind, "unknown oracle density");
}

double oracle_cdf(const OracleSpec& spec, double x) {
  validate(spec);
  switch (spec.kind) {
    case OracleKind::Normal:
      return std_normal_cdf((x - spec.mean) / spec.sd);
    case OracleKind::ChiSquare1:
      return x <= 0.0 ? 0.0 : std::erf(std::sqrt(0.5 * x));
    case OracleKind::ProductNormal:
      return product_normal_cdf(x);
  }
  fail(Errc::UnsupportedKind, "unknown oracle density");
}

GriddedDensity oracle_density(const OracleSpec& spec, const GridSpec& grid, OracleSampling sampling) {
  require(grid.size >= 1 && grid.step > 0.0, Errc::InvalidArgument, "oracle grid needs bins and a positive step");
  std::vector<double> values(grid.size);
  if (sampling == OracleSampling::BinAverage) {
    double left = oracle_cdf(spec, grid.lo);
    const double first = left;
    double right = left;
    for (std::size_t i = 0; i < grid.size; ++i) {
      right = oracle_cdf(spec, grid.lo + static_cast<double>(i + 1) * grid.step);
      values[i] = std::max(0.0, right - left) / grid.step;
      left = right;
    }
    GriddedDensity rho(grid.lo, grid.step, std::move(values));
    rho.set_clipped_mass(std::max(0.0, first + (1.0 - right)));
    return rho;
  }
  for (std::size_t i = 0; i < grid.size; ++i) {
    values[i] = oracle_pdf(spec, grid.lo + (static_cast<double>(i) + 0.5) * grid.step);
  }
  GriddedDensity rho(grid.lo, grid.step, std::move(values));
  rho.set_clipped_mass(std::max(0.0, oracle_cdf(spec, grid.lo) + 1.0 - oracle_cdf(spec, rho.hi())));
  return rho;
}

}  // namespace polydens

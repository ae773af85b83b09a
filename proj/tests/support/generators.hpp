#pragma once

// Hand-rolled generators for property tests. They draw from std::mt19937_64
// so test inputs never share code with the library's own sampler.

#include <cstdint>
#include <random>
#include <vector>

#include "polydens/poly.hpp"

namespace testgen {

struct Shape {
  unsigned n = 2;
  unsigned m = 2;
  unsigned d = 4;
  unsigned max_terms = 6;
};

inline polydens::Polynomial random_polynomial(std::mt19937_64& rng, const Shape& s, bool with_constant = true) {
  std::uniform_int_distribution<unsigned> terms(1, s.max_terms);
  std::uniform_int_distribution<unsigned> power(0, s.m);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  polydens::Polynomial f(s.n);
  const unsigned count = terms(rng);
  for (unsigned t = 0; t < count; ++t) {
    std::vector<unsigned> e(s.n);
    unsigned total = 0;
    for (auto& x : e) {
      x = power(rng);
      if (total + x > s.d) x = s.d - total;
      total += x;
    }
    if (!with_constant && total == 0) e[0] = 1;
    double c = coef(rng);
    if (c == 0.0) c = 1.0;
    f.add_term(polydens::MultiIndex(e), c);
  }
  if (f.is_zero()) f.add_term(polydens::MultiIndex::zeros(s.n).with(0, 1), 1.0);
  return f;
}

inline std::vector<double> random_point(std::mt19937_64& rng, std::size_t n, double half_width = 1.5) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

inline bool canonical(const polydens::Polynomial& f) {
  for (const auto& [e, c] : f.terms()) {
    if (c == 0.0 || e.size() != f.dimension()) return false;
  }
  return true;
}

}  // namespace testgen

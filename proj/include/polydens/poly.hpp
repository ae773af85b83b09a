#pragma once

// Sparse multivariate polynomials in the coordinates of a standard Gaussian
// vector. Variables are indexed from 0; x_i in the docs below is variable i.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace polydens {

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<unsigned> exponents) : exps_(std::move(exponents)) {}
  MultiIndex(std::initializer_list<unsigned> exponents) : exps_(exponents) {}

  static MultiIndex zeros(std::size_t n) { return MultiIndex(std::vector<unsigned>(n, 0)); }

  std::size_t size() const noexcept { return exps_.size(); }
  unsigned operator[](std::size_t i) const { return exps_[i]; }
  std::span<const unsigned> exponents() const noexcept { return exps_; }
  unsigned total_degree() const noexcept;
  unsigned max_power() const noexcept;

  MultiIndex with(std::size_t i, unsigned e) const;
  MultiIndex without(std::size_t i) const;

  auto operator<=>(const MultiIndex&) const = default;

 private:
  std::vector<unsigned> exps_;
};

/// Membership parameters: dimension n, per-variable power cap m, degree cap d.
struct ClassParams {
  unsigned n = 1;
  unsigned m = 1;
  unsigned d = 1;

  void validate() const;
};

/// Canonical sparse form: no stored coefficient is zero and every key has
/// length n.
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, double>;

  explicit Polynomial(std::size_t n);

  static Polynomial constant(std::size_t n, double c);
  static Polynomial variable(std::size_t n, std::size_t i);
  static Polynomial monomial(const MultiIndex& exps, double coef);

  /// Adds coef to the coefficient of exps; drops the term if it cancels.
  void add_term(const MultiIndex& exps, double coef);

  std::size_t dimension() const noexcept { return n_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  double coefficient(const MultiIndex& exps) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double alpha, const Polynomial& p);

  bool operator==(const Polynomial&) const = default;

 private:
  std::size_t n_;
  TermMap terms_;
};

struct LeadingTerm {
  double magnitude = 0.0;
  MultiIndex witness;
};

/// d[f]: largest total degree among stored terms.
unsigned degree(const Polynomial& f);

/// a[f]: largest |coefficient| among terms of total degree d[f]. Ties go to
/// the lexicographically largest exponent vector.
LeadingTerm leading_magnitude(const Polynomial& f);

/// Largest individual exponent of any variable in any term.
unsigned max_var_power(const Polynomial& f);

bool in_class(const Polynomial& f, const ClassParams& params);

double evaluate(const Polynomial& f, std::span<const double> x);

Polynomial scale(const Polynomial& f, double alpha);
Polynomial multiply(const Polynomial& f, const Polynomial& g);
Polynomial partial_derivative(const Polynomial& f, std::size_t i);

/// Writes f = sum_j f_j(x without x_i) * x_i^j and returns (f_0, ..., f_p)
/// where p is the largest power of x_i in f. Each f_j lives in n-1 variables.
std::vector<Polynomial> coefficients_in_variable(const Polynomial& f, std::size_t i);

/// Inverse of coefficients_in_variable.
Polynomial assemble_in_variable(std::span<const Polynomial> parts, std::size_t i);

/// Substitutes value for x_i, keeping the dimension.
Polynomial substitute(const Polynomial& f, std::size_t i, double value);

struct CoefficientLaw {
  enum class Kind { Uniform, Gaussian };
  Kind kind = Kind::Uniform;
  double inclusion = 0.5;     // probability that an admissible monomial is used
  std::size_t max_terms = 8;  // cap on the term count after selection
  bool normalize = true;      // rescale so that a[f] = 1
};

/// All exponent vectors J with max_i J_i <= m and |J| <= d, in lexicographic
/// order.
std::vector<MultiIndex> admissible_indices(const ClassParams& params);

/// Deterministic random member of the class; never constant.
Polynomial random_in_class(const ClassParams& params, std::uint64_t seed,
                           const CoefficientLaw& law = {});

std::string to_string(const Polynomial& f);

/// Flattened evaluator for hot sampling loops.
class PolynomialEvaluator {
 public:
  explicit PolynomialEvaluator(const Polynomial& f);

  std::size_t dimension() const noexcept { return n_; }
  /// x must hold dimension() values; scratch must hold scratch_size() values.
  double operator()(const double* x, double* scratch) const;
  std::size_t scratch_size() const noexcept { return n_ * (max_power_ + 1); }

 private:
  std::size_t n_;
  unsigned max_power_;
  std::vector<double> coefs_;
  std::vector<std::uint32_t> term_begin_;  // coefs_.size() + 1 entries
  std::vector<std::uint32_t> factors_;     // power-table offsets of non-unit factors
};

}  // namespace polydens

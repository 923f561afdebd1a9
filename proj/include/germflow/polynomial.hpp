#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace germflow {

using Exponents = std::vector<int>;

struct Monomial {
  Exponents exponents;
  double coefficient = 0.0;

  int total_degree() const;
};

// Sparse real polynomial in a fixed number of variables. Terms are kept sorted
// by exponent vector with duplicates merged and exact zeros removed.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::size_t num_vars);
  Polynomial(std::size_t num_vars, std::vector<Monomial> terms);

  static Polynomial constant(std::size_t num_vars, double c);
  static Polynomial variable(std::size_t num_vars, std::size_t index);

  std::size_t num_vars() const { return num_vars_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // -1 for the zero polynomial.
  int degree() const;
  int min_degree() const;
  double constant_term() const;

  double evaluate(std::span<const double> u) const;
  // Sum of |c| |u^a| over terms; the size of the value before cancellation.
  double magnitude(std::span<const double> u) const;

  Polynomial derivative(std::size_t var) const;
  // q(h) = p(a + h).
  Polynomial shifted(std::span<const double> a) const;
  Polynomial truncated(int max_degree) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(double s) const;
  Polynomial operator*(const Polynomial& other) const;

  // Largest |coefficient difference| over the union of supports.
  double max_coefficient_difference(const Polynomial& other) const;
  double max_abs_coefficient() const;

  bool operator==(const Polynomial& other) const;

  std::string to_string() const;

 private:
  void canonicalize();
  void check_arity(std::size_t n) const;

  std::size_t num_vars_ = 0;
  std::vector<Monomial> terms_;
};

}  // namespace germflow

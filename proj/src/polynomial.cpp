#include "germflow/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "germflow/errors.hpp"

namespace germflow {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

int Monomial::total_degree() const {
  int d = 0;
  for (int e : exponents) d += e;
  return d;
}

Polynomial::Polynomial(std::size_t num_vars) : num_vars_(num_vars) {}

Polynomial::Polynomial(std::size_t num_vars, std::vector<Monomial> terms)
    : num_vars_(num_vars), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.exponents.size() != num_vars_)
      throw DimensionError("monomial has " + std::to_string(t.exponents.size()) +
                           " exponents, expected " + std::to_string(num_vars_));
    for (int e : t.exponents)
      if (e < 0) throw DimensionError("negative exponent");
  }
  canonicalize();
}

Polynomial Polynomial::constant(std::size_t num_vars, double c) {
  return Polynomial(num_vars, {Monomial{Exponents(num_vars, 0), c}});
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index) {
  Exponents e(num_vars, 0);
  e.at(index) = 1;
  return Polynomial(num_vars, {Monomial{std::move(e), 1.0}});
}

void Polynomial::canonicalize() {
  std::map<Exponents, double> merged;
  for (auto& t : terms_) merged[t.exponents] += t.coefficient;
  terms_.clear();
  for (auto& [e, c] : merged)
    if (c != 0.0) terms_.push_back(Monomial{e, c});
}

void Polynomial::check_arity(std::size_t n) const {
  if (n != num_vars_)
    throw DimensionError("point has " + std::to_string(n) + " coordinates, expected " +
                         std::to_string(num_vars_));
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.total_degree());
  return d;
}

int Polynomial::min_degree() const {
  if (terms_.empty()) return -1;
  int d = terms_.front().total_degree();
  for (const auto& t : terms_) d = std::min(d, t.total_degree());
  return d;
}

double Polynomial::constant_term() const {
  for (const auto& t : terms_)
    if (t.total_degree() == 0) return t.coefficient;
  return 0.0;
}

double Polynomial::evaluate(std::span<const double> u) const {
  check_arity(u.size());
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coefficient;
    for (std::size_t i = 0; i < num_vars_; ++i)
      if (t.exponents[i] != 0) v *= ipow(u[i], t.exponents[i]);
    sum += v;
  }
  return sum;
}

double Polynomial::magnitude(std::span<const double> u) const {
  check_arity(u.size());
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = std::abs(t.coefficient);
    for (std::size_t i = 0; i < num_vars_; ++i)
      if (t.exponents[i] != 0) v *= ipow(std::abs(u[i]), t.exponents[i]);
    sum += v;
  }
  return sum;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  if (var >= num_vars_) throw DimensionError("derivative variable out of range");
  std::vector<Monomial> out;
  for (const auto& t : terms_) {
    const int e = t.exponents[var];
    if (e == 0) continue;
    Monomial m = t;
    m.coefficient *= e;
    m.exponents[var] = e - 1;
    out.push_back(std::move(m));
  }
  return Polynomial(num_vars_, std::move(out));
}

Polynomial Polynomial::shifted(std::span<const double> a) const {
  check_arity(a.size());
  std::vector<Monomial> out;
  for (const auto& t : terms_) {
    // prod_i (a_i + h_i)^(e_i) expanded one variable at a time.
    std::vector<Monomial> partial{Monomial{Exponents(num_vars_, 0), t.coefficient}};
    for (std::size_t i = 0; i < num_vars_; ++i) {
      const int e = t.exponents[i];
      if (e == 0) continue;
      std::vector<Monomial> next;
      next.reserve(partial.size() * (e + 1));
      for (const auto& m : partial) {
        for (int k = 0; k <= e; ++k) {
          const double c = m.coefficient * binomial(e, k) * ipow(a[i], e - k);
          if (c == 0.0) continue;
          Monomial nm = m;
          nm.coefficient = c;
          nm.exponents[i] = k;
          next.push_back(std::move(nm));
        }
      }
      partial = std::move(next);
    }
    for (auto& m : partial) out.push_back(std::move(m));
  }
  return Polynomial(num_vars_, std::move(out));
}

Polynomial Polynomial::truncated(int max_degree) const {
  std::vector<Monomial> out;
  for (const auto& t : terms_)
    if (t.total_degree() <= max_degree) out.push_back(t);
  return Polynomial(num_vars_, std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (other.num_vars_ != num_vars_) throw DimensionError("polynomial arity mismatch");
  std::vector<Monomial> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return Polynomial(num_vars_, std::move(all));
}

Polynomial Polynomial::operator-(const Polynomial& other) const { return *this + other * -1.0; }

Polynomial Polynomial::operator*(double s) const {
  std::vector<Monomial> out = terms_;
  for (auto& t : out) t.coefficient *= s;
  return Polynomial(num_vars_, std::move(out));
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (other.num_vars_ != num_vars_) throw DimensionError("polynomial arity mismatch");
  std::vector<Monomial> out;
  out.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : other.terms_) {
      Monomial m{a.exponents, a.coefficient * b.coefficient};
      for (std::size_t i = 0; i < num_vars_; ++i) m.exponents[i] += b.exponents[i];
      out.push_back(std::move(m));
    }
  return Polynomial(num_vars_, std::move(out));
}

double Polynomial::max_coefficient_difference(const Polynomial& other) const {
  std::map<Exponents, double> diff;
  for (const auto& t : terms_) diff[t.exponents] += t.coefficient;
  for (const auto& t : other.terms_) diff[t.exponents] -= t.coefficient;
  double worst = 0.0;
  for (const auto& [e, c] : diff) worst = std::max(worst, std::abs(c));
  return worst;
}

double Polynomial::max_abs_coefficient() const {
  double worst = 0.0;
  for (const auto& t : terms_) worst = std::max(worst, std::abs(t.coefficient));
  return worst;
}

bool Polynomial::operator==(const Polynomial& other) const {
  if (num_vars_ != other.num_vars_ || terms_.size() != other.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].exponents != other.terms_[i].exponents ||
        terms_[i].coefficient != other.terms_[i].coefficient)
      return false;
  return true;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << t.coefficient;
    for (std::size_t i = 0; i < num_vars_; ++i)
      if (t.exponents[i] != 0) os << "*u" << (i + 1) << "^" << t.exponents[i];
  }
  return os.str();
}

}  // namespace germflow

#pragma once

// Truncated multivariate Taylor arithmetic ("jets").
//
// A Jet holds the Taylor coefficients of a smooth function of `nvars`
// variables around some base point, truncated at total degree `order`.
// Coefficients are stored per monomial in graded order; within a degree the
// ordering does not depend on the truncation order, so the coefficients of an
// order-k jet are a prefix of those of any order-k' (k' > k) jet.
//
// A Jet without a layout is a plain constant and broadcasts against any
// other jet. Binary operations between jets of different orders truncate to
// the smaller order.

#include <cmath>
#include <memory>
#include <span>
#include <vector>

namespace conelift {

class JetLayout {
 public:
  struct Product {
    int lhs;
    int rhs;
    int out;
  };

  static std::shared_ptr<const JetLayout> get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(exponents_.size()); }

  const std::vector<int>& exponents(int idx) const { return exponents_[idx]; }
  int degree(int idx) const { return degree_[idx]; }
  // Number of monomials of total degree <= d.
  int prefix_size(int d) const { return prefix_[d]; }
  // Index of the monomial, or -1 if its degree exceeds order().
  int index_of(std::span<const int> exps) const;
  // Index of exps(idx) + e_var, or -1 if out of range.
  int raise(int idx, int var) const { return raise_[idx * nvars_ + var]; }
  // For idx > 0: a variable with positive exponent and the index of
  // exps(idx) - e_var (used to build monomial powers incrementally).
  int parent(int idx) const { return parent_[idx]; }
  int parent_var(int idx) const { return parent_var_[idx]; }

  const std::vector<Product>& products() const { return products_; }

 private:
  JetLayout(int nvars, int order);

  int nvars_;
  int order_;
  std::vector<std::vector<int>> exponents_;
  std::vector<int> degree_;
  std::vector<int> prefix_;
  std::vector<int> raise_;
  std::vector<int> parent_;
  std::vector<int> parent_var_;
  std::vector<Product> products_;
};

using LayoutPtr = std::shared_ptr<const JetLayout>;

class Jet {
 public:
  Jet(double value = 0.0) : coeffs_{value} {}  // NOLINT: implicit by design of the scalar contract
  Jet(LayoutPtr layout, std::vector<double> coeffs);

  // x0 + (delta x)_var in the given layout.
  static Jet variable(const LayoutPtr& layout, int var, double value);
  static Jet constant(const LayoutPtr& layout, double value);

  bool is_constant() const { return layout_ == nullptr; }
  const LayoutPtr& layout() const { return layout_; }
  int nvars() const;
  int order() const;

  double value() const { return coeffs_[0]; }
  std::span<const double> coeffs() const { return coeffs_; }
  double coeff(int idx) const { return idx < static_cast<int>(coeffs_.size()) ? coeffs_[idx] : 0.0; }
  // Coefficient of the monomial with the given exponents (0 if truncated).
  double coeff(std::span<const int> exps) const;
  // Partial derivative d^alpha f at the base point (alpha! * coefficient).
  double partial(std::span<const int> alpha) const;

  // Partial derivative with respect to `var`; the result has order - 1.
  Jet derivative(int var) const;
  Jet truncated(int order) const;
  // Same jet expressed in a (possibly larger) layout of the same nvars.
  Jet lifted(const LayoutPtr& layout) const;
  // Jet with the constant term removed.
  Jet increment() const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator*=(double s);

  friend Jet operator-(const Jet& a);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double b) { return a += Jet(b); }
  friend Jet operator+(double a, Jet b) { return b += Jet(a); }
  friend Jet operator-(Jet a, double b) { return a -= Jet(b); }
  friend Jet operator-(double a, const Jet& b) { return Jet(a) - b; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double a, Jet b) { return b *= a; }
  friend Jet operator/(Jet a, double b) { return a *= 1.0 / b; }
  friend Jet operator/(double a, const Jet& b) { return Jet(a) / b; }

 private:
  friend Jet apply_series(const Jet& x, std::span<const double> taylor);

  LayoutPtr layout_;
  std::vector<double> coeffs_;
};

// f(x) where taylor[k] = f^(k)(x0) / k! with x0 = x.value().
Jet apply_series(const Jet& x, std::span<const double> taylor);

Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sqrt(const Jet& x);
Jet pow(const Jet& x, double p);
Jet atan(const Jet& x);

// Lets generic code call sin/cos/... unqualified on both doubles and jets.
using std::atan;
using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

// Seed jets x0_i + dx_i for every coordinate.
std::vector<Jet> seed_variables(const LayoutPtr& layout, std::span<const double> x0);

// Substitutes jets into polynomials: powers of the increments are built once
// and reused for every polynomial composed with the same increments.
class Composer {
 public:
  // `increments` are jets in the target layout with zero constant term;
  // `max_degree` bounds the polynomial degree that will be composed.
  Composer(std::vector<Jet> increments, int max_degree);

  // poly is a jet in increments.size() variables whose coefficients are read
  // as a polynomial in the increments.
  Jet compose(const Jet& poly) const;

 private:
  LayoutPtr poly_layout_;
  LayoutPtr out_layout_;
  std::vector<Jet> powers_;
};

}  // namespace conelift

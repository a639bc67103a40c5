#pragma once

// Smooth maps with a polymorphic scalar contract and the two ways of turning
// them into local Taylor models: forward jet propagation and tensor-product
// central differences.

#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "conelift/jet.hpp"

namespace conelift {

enum class DiffMode { Jet, CentralDifference };

struct DifferentiationConfig {
  DiffMode mode = DiffMode::Jet;
  // Bitension consumes four derivative orders of the immersion.
  int jet_order = 4;
  // Step for first derivatives; higher orders use fd_step^(3/(k+2)), which
  // balances truncation against roundoff for the k-th derivative.
  double fd_step = 1e-4;
  int fd_richardson_levels = 1;

  void validate() const;
  double step_for_order(int k) const;
  std::string describe() const;

  static DifferentiationConfig jet(int order = 4);
  static DifferentiationConfig central(double step = 1e-4, int richardson = 1);
};

// Map R^in -> R^out evaluable on doubles and on jets.
class SmoothMap {
 public:
  using DoubleFn = std::function<std::vector<double>(std::span<const double>)>;
  using JetFn = std::function<std::vector<Jet>(std::span<const Jet>)>;

  SmoothMap() = default;
  SmoothMap(int in_dim, int out_dim, DoubleFn fd, JetFn fj);

  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }
  bool valid() const { return static_cast<bool>(fd_); }

  std::vector<double> operator()(std::span<const double> x) const;
  std::vector<Jet> operator()(std::span<const Jet> x) const;

 private:
  int in_dim_ = 0;
  int out_dim_ = 0;
  DoubleFn fd_;
  JetFn fj_;
};

// Builds a SmoothMap from a generic callable `f(std::span<const T>) ->
// std::vector<T>` instantiated for T = double and T = Jet.
template <class F>
SmoothMap make_map(int in_dim, int out_dim, F f) {
  return SmoothMap(
      in_dim, out_dim,
      [f](std::span<const double> x) -> std::vector<double> { return f(x); },
      [f](std::span<const Jet> x) -> std::vector<Jet> { return f(x); });
}

// Composition outer(inner(x)).
SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner);

// Taylor model of f at x0 to the given order: out_dim jets in in_dim
// variables whose coefficients are the Taylor coefficients of f.
std::vector<Jet> taylor_model(const SmoothMap& f, std::span<const double> x0, int order,
                              const DifferentiationConfig& cfg);

// Taylor model of f along a jet-valued argument y(x): the model of f at
// y(x0) composed with y(x) - y(x0). The result is in the variables of y.
std::vector<Jet> along(const SmoothMap& f, std::span<const Jet> y, int order, const DifferentiationConfig& cfg);

std::vector<double> values_of(std::span<const Jet> jets);

}  // namespace conelift

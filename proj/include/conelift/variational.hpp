#pragma once

// Discrete energy and bienergy of closed sampled curves on unit spheres and
// a projected gradient flow for them.
//
// With D p_k = (p_{k+1} - p_{k-1}) / 2dt, sigma_k = |D p_k| and
// D2 p_k = (p_{k+1} - 2 p_k + p_{k-1}) / dt^2:
//   E   = 1/2 sum |D p_k|^2 dt
//   tau_k = P_k (D2 p_k - <D2 p_k, T_k> T_k) / sigma_k^2,  T_k = D p_k / sigma_k
//   E2  = 1/2 sum |tau_k|^2 sigma_k dt
//   pen = sum <D p_k, J0 p_k>^2 dt
//   spacing = sum (|p_{k+1} - p_k| - |p_k - p_{k-1}|)^2 / dt^3
// where P_k = I - p_k p_k^T.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "conelift/differentiation.hpp"

namespace conelift {

struct DiscreteCurve {
  Eigen::MatrixXd points;  // K x ambient, row k = p_k
  double period = 0.0;

  int K() const { return static_cast<int>(points.rows()); }
  int ambient() const { return static_cast<int>(points.cols()); }
  double dt() const { return period / K(); }
  double t(int k) const { return k * dt(); }

  // K >= 16 and even, rows on the unit sphere to 1e-12.
  void validate() const;
  void normalize();
  // Samples a map R -> R^ambient at t_k = k period / K (rows normalized).
  static DiscreteCurve sample(const SmoothMap& curve, int K, double period);
};

struct Functionals {
  double energy = 0.0;
  double bienergy = 0.0;
  double penalty = 0.0;
  double spacing = 0.0;
  double length = 0.0;
  double min_segment = 0.0;
};
Functionals discrete_functionals(const DiscreteCurve& c);

struct FunctionalGradients {
  Functionals values;
  Eigen::MatrixXd energy;  // K x ambient, d E / d p_k
  Eigen::MatrixXd bienergy;
  Eigen::MatrixXd penalty;
  Eigen::MatrixXd spacing;
};
// Exact gradients of the discrete functionals with respect to the sample
// coordinates, assembled from local forward jets of each stencil term.
FunctionalGradients discrete_gradients(const DiscreteCurve& c);

// Discrete arc-length tension tau_k (rows).
Eigen::MatrixXd discrete_tension(const DiscreteCurve& c);

enum class Functional { Energy, Bienergy };

struct FlowConfig {
  Functional functional = Functional::Bienergy;
  double step = 1e-2;
  int max_iterations = 2000;
  double tolerance = 1e-8;
  double penalty_weight = 0.0;
  // Hold E on a level set (bienergy flow): the initial energy, or
  // energy_level when positive, in which case the initial curve is first
  // moved onto that level.
  bool fix_energy = false;
  double energy_level = 0.0;
  // Preconditioner (I + alpha L)^power with L the periodic second difference.
  double sobolev_alpha = 0.02;
  int sobolev_power = 1;
  // Weight of the spacing term; it vanishes with its gradient on uniformly
  // spaced curves and keeps samples from bunching.
  double spacing_weight = 0.0;
  // Newton steps on the Lagrange system after the descent phase.
  int newton_steps = 0;
  std::uint64_t seed = 0;

  void validate() const;
  std::string to_json() const;
  std::uint64_t hash() const;
};

struct FlowLogEntry {
  int iteration = 0;
  double objective = 0.0;
  double gradient_norm = 0.0;
  double min_segment = 0.0;
  double step = 0.0;
  double energy = 0.0;
};

struct NewtonReport {
  std::vector<double> residuals;  // before each step and after the last
  int accepted = 0;
  double multiplier = 0.0;  // of the energy constraint
};

struct FlowResult {
  DiscreteCurve curve;
  std::vector<FlowLogEntry> log;
  int accepted = 0;
  bool converged = false;
  NewtonReport newton;
};

// Projected, preconditioned gradient descent with backtracking. Throws
// NoDescentStep when 60 halvings fail to decrease the objective.
FlowResult flow(const DiscreteCurve& c0, const FlowConfig& cfg);

double flow_objective(const Functionals& f, const FlowConfig& cfg);

// Newton iteration on grad F - mu grad E = 0 (tangential) and E = E0, with a
// central-difference Jacobian in sphere tangent coordinates and a truncated SVD
// solve for the symmetry directions. Steps that do not reduce the residual
// are rejected and end the iteration.
NewtonReport newton_refine(DiscreteCurve& c, const FlowConfig& cfg, double E0);

struct VariationCheck {
  double numeric = 0.0;  // central difference in s
  double formula = 0.0;
  double residual = 0.0;
};
// d/ds E(c + s V) at s = 0 against -sum <tau_map_k, V_k> dt, where tau_map is
// the tension of the sampled map, P_k (p_{k+2} - 2 p_k + p_{k-2}) / (2 dt)^2.
VariationCheck first_variation_check(const DiscreteCurve& c, const Eigen::MatrixXd& V);
// d^2/ds^2 E(normalize(c + s V)) at s = 0 against sum <J V, V> dt with
// J V = -D~2 V - |D p|^2 V for V normal to a geodesic.
VariationCheck second_variation_check(const DiscreteCurve& c, const Eigen::MatrixXd& V);

// Circle of the given radius in the real span of the first three complex
// coordinate axes (a Legendrian circle when m >= 2), centred on the third
// axis, plus a seeded smooth perturbation with Fourier modes 2..4 of the given
// amplitude, normalized to the sphere. For m = 1 the centre offset points
// along i e_1, so only radius 1 gives a Legendrian (great) circle.
DiscreteCurve perturbed_legendrian_circle(int m, int K, double radius, double amplitude, std::uint64_t seed,
                                          double period = 2.0 * 3.14159265358979323846);

// Trigonometric interpolant of the samples, projected radially to the sphere;
// evaluable on jets.
SmoothMap fourier_interpolant(const DiscreteCurve& c);

// E of the uniformly sampled circle of the given radius on a unit sphere.
double uniform_circle_energy(int K, double radius, double period = 2.0 * 3.14159265358979323846);

// A flow run as read from a config file: the flow settings plus the initial
// curve (perturbed_legendrian_circle with the flow seed). A positive
// target_radius sets the energy level to uniform_circle_energy(K, target_radius).
struct FlowJob {
  FlowConfig flow;
  int m = 2;
  int K = 128;
  double radius = 0.8;
  double amplitude = 0.05;
  double target_radius = 0.0;
  std::string output;  // fixture path, relative to the config file

  // Throws ConfigError on unknown keys or bad values.
  static FlowJob from_json(const std::string& text);
  static FlowJob load(const std::string& path);
  std::string to_json() const;
  std::string hash_hex() const;  // FNV-1a of to_json
  DiscreteCurve initial() const;
  FlowConfig effective_config() const;
  std::string provenance() const;
};

struct CurveFixture {
  DiscreteCurve curve;
  int m = 1;
  std::string config_hash;
  std::string provenance;
};
void write_fixture(const std::string& path, const CurveFixture& f);
CurveFixture read_fixture(const std::string& path);

}  // namespace conelift

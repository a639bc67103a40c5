#pragma once

// Catalog of immersions into unit spheres used by the verifier.

#include <string>
#include <vector>

#include "conelift/immersion.hpp"

namespace conelift {

struct ExpectedFlags {
  bool legendrian = false;
  bool harmonic = false;
  bool proper_biharmonic = false;
};

struct CatalogEntry {
  std::string name;
  Immersion immersion;  // embedded sphere target
  // m when the target is S^{2m+1} with its standard Sasaki structure, else 0.
  int sasaki_m = 0;
  double epsilon = 1.0;
  ExpectedFlags expected;
  std::string provenance;
  // Sampling region inside the source chart.
  Box sample_box;

  bool contact_target() const { return sasaki_m > 0 && immersion.m() == sasaki_m; }
};

std::vector<std::string> catalog_names();
// Throws ConfigError for an unknown name.
CatalogEntry catalog_entry(const std::string& name);
std::vector<CatalogEntry> catalog();

// Individual immersions, also used directly by tests.
Immersion great_legendrian_circle();
Immersion latitude_circle(double colatitude);
Immersion biharmonic_small_circle();
Immersion legendrian_clifford_torus();
Immersion totally_geodesic_real_sphere();
// Legendrian curve (cos a e^{i sin^2 a t}, sin a e^{-i cos^2 a t}) in S^3.
Immersion legendrian_torus_curve(double a);

// A closed curve on the unit sphere with its induced metric; the source
// chart covers two periods on either side of 0.
Immersion sphere_curve(SmoothMap map, double period, const std::string& label);

// Location of the solver-produced fixture; the CONELIFT_FIXTURE environment
// variable overrides the built-in path.
std::string fixture_path();

}  // namespace conelift

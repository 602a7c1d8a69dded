#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gpm/rng.hpp"

namespace gpm {

// A point on the d-sphere embedded in (d+1)-space. The sphere is scaled so
// its total surface area is 1; all distances are chord (embedding) distances.
struct SpherePoint {
  std::vector<double> coords;

  int dim() const { return static_cast<int>(coords.size()) - 1; }
};

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

// Surface area of S^d with embedding radius `radius`.
double surface_area(int d, double radius);

// Radius R(d) for which surface_area(d, R) == 1.
double unit_area_radius(int d);

SpherePoint sample_uniform(int d, RandomStream& rng);

// Uniform point in the cap {y : chord(center, y) <= chord_radius}.
SpherePoint sample_in_cap(const SpherePoint& center, double chord_radius, RandomStream& rng);

double chord_distance(const SpherePoint& x, const SpherePoint& y);
double chord_distance(std::span<const double> x, std::span<const double> y);

// Area fraction of a cap of chord radius r: I_{(r/2R)^2}(d/2, d/2), with
// closed forms for d = 1, 2. Strictly increasing in r on (0, 2R).
double cap_area_fraction(int d, double chord_radius);

// Inverse of cap_area_fraction by bisection (p in (0,1]).
double radius_for_area(int d, double area_fraction);

// Area fraction of the intersection of two caps of chord radius r whose
// centers are chord distance s apart. Closed form for d = 1, 2; inner Monte
// Carlo for d >= 3 (hence the rng and sample count).
double lens_area_fraction(int d, double center_chord, double chord_radius,
                          RandomStream* rng = nullptr, int inner_samples = 10000);

// Monte Carlo estimate of F_p, the mean of p^{-1} * lens area over pairs
// (V_i uniform, V_j uniform in the cap around V_i).
Estimate estimate_fp(int d, double p, std::int64_t samples, RandomStream& rng);

class PreferenceKernel;

struct KernelConstants {
  Estimate p;  // integral of f(D(u,z)) du
  Estimate f;  // triple integral of f f f over pairs (u, v)
};

KernelConstants estimate_kernel_constants(int d, const PreferenceKernel& kernel,
                                          std::int64_t samples, RandomStream& rng);

}  // namespace gpm

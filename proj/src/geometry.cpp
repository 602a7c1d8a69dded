#include "gpm/geometry.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gpm/kernel.hpp"

namespace gpm {

namespace {

constexpr double kPi = std::numbers::pi;

void require_dim(int d) {
  if (d < 1) throw std::invalid_argument("sphere dimension must be >= 1");
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

double clamp1(double x) { return std::min(1.0, std::max(-1.0, x)); }

// Angular (geodesic) radius corresponding to a chord radius.
double polar_angle(double chord, double radius) {
  return 2.0 * std::asin(clamp1(chord / (2.0 * radius)));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Fraction of the unit 2-sphere covered by the intersection of two caps with
// angular radius theta whose centers subtend angle gamma. The solid angle is
// 2(pi - 2*alpha*cos(theta) - phi) where alpha is the dihedral angle at a cap
// center in the triangle (center, center, boundary crossing) and phi the angle
// at the crossing point. Clamping drives every degenerate configuration
// (nested, tangent, antipodal) to the correct limit.
double sphere2_lens_fraction(double gamma, double theta) {
  if (theta <= 0.0) return 0.0;
  if (theta >= kPi) return 1.0;
  const double cap = 0.5 * (1.0 - std::cos(theta));
  if (gamma <= 1e-14) return cap;
  const double cos_alpha =
      clamp1(std::cos(theta) * (1.0 - std::cos(gamma)) / (std::sin(gamma) * std::sin(theta)));
  const double alpha = std::acos(cos_alpha);
  const double sin2_alpha = 1.0 - cos_alpha * cos_alpha;
  const double phi = std::acos(clamp1(-cos_alpha * cos_alpha + sin2_alpha * std::cos(gamma)));
  const double solid = 2.0 * (kPi - 2.0 * alpha * std::cos(theta) - phi);
  return clamp01(solid / (4.0 * kPi));
}

}  // namespace

double surface_area(int d, double radius) {
  require_dim(d);
  const double omega = 2.0 * std::pow(kPi, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1));
  return omega * std::pow(radius, d);
}

double unit_area_radius(int d) {
  require_dim(d);
  const double omega = 2.0 * std::pow(kPi, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1));
  return std::pow(omega, -1.0 / d);
}

SpherePoint sample_uniform(int d, RandomStream& rng) {
  require_dim(d);
  const double radius = unit_area_radius(d);
  SpherePoint pt;
  pt.coords.resize(d + 1);
  for (;;) {
    double norm2 = 0.0;
    for (auto& c : pt.coords) {
      c = rng.next_normal();
      norm2 += c * c;
    }
    if (norm2 > 1e-12) {
      const double scale = radius / std::sqrt(norm2);
      for (auto& c : pt.coords) c *= scale;
      return pt;
    }
  }
}

SpherePoint sample_in_cap(const SpherePoint& center, double chord_radius, RandomStream& rng) {
  const int d = center.dim();
  require_dim(d);
  const double radius = unit_area_radius(d);
  const double u_max = clamp01(chord_radius / (2.0 * radius) * (chord_radius / (2.0 * radius)));

  // u = sin^2(theta/2) of the polar angle has CDF I_u(d/2, d/2); inverting a
  // uniform draw on [0, cap fraction] gives the exact radial law.
  const double w = rng.next_double();
  double u;
  if (d == 2) {
    u = w * u_max;
  } else if (d == 1) {
    const double t = w * (2.0 / kPi) * std::asin(std::sqrt(u_max));
    const double s = std::sin(0.5 * kPi * t);
    u = s * s;
  } else {
    const double t = w * boost::math::ibeta(0.5 * d, 0.5 * d, u_max);
    u = boost::math::ibeta_inv(0.5 * d, 0.5 * d, t);
  }
  const double cos_theta = 1.0 - 2.0 * u;
  const double sin_theta = 2.0 * std::sqrt(std::max(0.0, u * (1.0 - u)));

  // Uniform tangent direction: Gaussian vector with the radial part removed.
  std::vector<double> axis(center.coords.begin(), center.coords.end());
  for (auto& c : axis) c /= radius;
  std::vector<double> tangent(d + 1);
  for (;;) {
    double proj = 0.0;
    for (int i = 0; i <= d; ++i) {
      tangent[i] = rng.next_normal();
      proj += tangent[i] * axis[i];
    }
    double norm2 = 0.0;
    for (int i = 0; i <= d; ++i) {
      tangent[i] -= proj * axis[i];
      norm2 += tangent[i] * tangent[i];
    }
    if (norm2 > 1e-12) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (auto& c : tangent) c *= inv;
      break;
    }
  }

  SpherePoint pt;
  pt.coords.resize(d + 1);
  for (int i = 0; i <= d; ++i) {
    pt.coords[i] = radius * (cos_theta * axis[i] + sin_theta * tangent[i]);
  }
  return pt;
}

double chord_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("chord_distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - y[i];
    s += diff * diff;
  }
  return std::sqrt(s);
}

double chord_distance(const SpherePoint& x, const SpherePoint& y) {
  return chord_distance(std::span<const double>(x.coords), std::span<const double>(y.coords));
}

double cap_area_fraction(int d, double chord_radius) {
  require_dim(d);
  const double radius = unit_area_radius(d);
  if (chord_radius < -1e-12 || chord_radius > 2.0 * radius + 1e-12) {
    throw std::invalid_argument("cap_area_fraction: chord radius out of [0, 2R]");
  }
  const double half = clamp01(chord_radius / (2.0 * radius));
  const double u = half * half;
  if (d == 1) return (2.0 / kPi) * std::asin(half);
  if (d == 2) return u;
  return boost::math::ibeta(0.5 * d, 0.5 * d, u);
}

double radius_for_area(int d, double area_fraction) {
  require_dim(d);
  if (!(area_fraction > 0.0) || area_fraction > 1.0) {
    throw std::invalid_argument("radius_for_area: area fraction must be in (0, 1]");
  }
  const double radius = unit_area_radius(d);
  if (area_fraction == 1.0) return 2.0 * radius;
  double lo = 0.0;
  double hi = 2.0 * radius;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cap_area_fraction(d, mid) < area_fraction) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double lens_area_fraction(int d, double center_chord, double chord_radius,
                          RandomStream* rng, int inner_samples) {
  require_dim(d);
  const double radius = unit_area_radius(d);
  const double gamma = polar_angle(center_chord, radius);
  const double theta = polar_angle(chord_radius, radius);

  if (d == 1) {
    const double p = theta / kPi;
    const double t = gamma / (2.0 * kPi);
    return std::max(0.0, p - t) + std::max(0.0, p + t - 1.0);
  }
  if (d == 2) return sphere2_lens_fraction(gamma, theta);

  if (rng == nullptr) {
    throw std::invalid_argument("lens_area_fraction: d >= 3 needs a random stream");
  }
  if (inner_samples < 1) throw std::invalid_argument("lens_area_fraction: inner_samples >= 1");
  // Rotation invariance: put one center at the pole and the other in a fixed
  // 2-plane, then count cap samples landing in the second cap.
  SpherePoint a, b;
  a.coords.assign(d + 1, 0.0);
  b.coords.assign(d + 1, 0.0);
  a.coords[0] = radius;
  b.coords[0] = radius * std::cos(gamma);
  b.coords[1] = radius * std::sin(gamma);
  const double p = cap_area_fraction(d, chord_radius);
  std::int64_t hit = 0;
  for (int i = 0; i < inner_samples; ++i) {
    const SpherePoint x = sample_in_cap(a, chord_radius, *rng);
    if (chord_distance(x, b) <= chord_radius) ++hit;
  }
  return p * static_cast<double>(hit) / inner_samples;
}

Estimate estimate_fp(int d, double p, std::int64_t samples, RandomStream& rng) {
  require_dim(d);
  if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("estimate_fp: p must be in (0, 1]");
  if (samples < 1) throw std::invalid_argument("estimate_fp: samples must be >= 1");
  if (p == 1.0) return {1.0, 0.0};  // B(X, r) is the whole sphere, f == 1

  const double r = radius_for_area(d, p);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const SpherePoint vi = sample_uniform(d, rng);
    const SpherePoint vj = sample_in_cap(vi, r, rng);
    const double s = chord_distance(vi, vj);
    double f;
    if (d <= 2) {
      f = lens_area_fraction(d, s, r) / p;
    } else {
      f = lens_area_fraction(d, s, r, &rng) / p;
    }
    sum += f;
    sum_sq += f * f;
  }
  const double mean = sum / samples;
  double se = 0.0;
  if (samples > 1) {
    const double var = std::max(0.0, (sum_sq - sum * mean) / (samples - 1));
    se = std::sqrt(var / samples);
  }
  return {mean, se};
}

KernelConstants estimate_kernel_constants(int d, const PreferenceKernel& kernel,
                                          std::int64_t samples, RandomStream& rng) {
  require_dim(d);
  if (samples < 1) throw std::invalid_argument("estimate_kernel_constants: samples >= 1");
  if (std::abs(kernel(0.0) - 1.0) > 1e-9) {
    throw std::invalid_argument("preference kernel must satisfy f(0) = 1");
  }

  const double radius = unit_area_radius(d);
  SpherePoint z;
  z.coords.assign(d + 1, 0.0);
  z.coords[0] = radius;  // any fixed point; the integrals are rotation invariant

  double p_sum = 0.0, p_sq = 0.0;
  double f_sum = 0.0, f_sq = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const SpherePoint u = sample_uniform(d, rng);
    const SpherePoint v = sample_uniform(d, rng);
    const double fu = kernel(chord_distance(u, z));
    const double fv = kernel(chord_distance(v, z));
    const double fuv = kernel(chord_distance(u, v));
    p_sum += fu;
    p_sq += fu * fu;
    const double triple = fuv * fv * fu;
    f_sum += triple;
    f_sq += triple * triple;
  }
  auto finish = [samples](double sum, double sq) {
    Estimate e;
    e.value = sum / samples;
    if (samples > 1) {
      const double var = std::max(0.0, (sq - sum * e.value) / (samples - 1));
      e.stderr_ = std::sqrt(var / samples);
    }
    return e;
  };
  return {finish(p_sum, p_sq), finish(f_sum, f_sq)};
}

}  // namespace gpm

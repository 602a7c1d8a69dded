#include "gpm/cap_grid.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gpm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kXMargin = 1e-9;    // classification margin in cos(dlambda) space
constexpr double kPhiMargin = 1e-9;  // band pre-skip margin in radians

struct GInterval {
  double lo;
  double hi;
  bool empty() const { return !(lo <= hi); }
};

// Positive-g solutions of alpha * g <= beta, intersected with (0, cap].
GInterval solve_linear(double alpha, double beta, double cap) {
  if (alpha > 0.0) {
    if (beta <= 0.0) return {1.0, 0.0};
    return {0.0, std::min(cap, beta / alpha)};
  }
  if (alpha == 0.0) {
    if (beta >= 0.0) return {0.0, cap};
    return {1.0, 0.0};
  }
  // alpha < 0: g >= beta / alpha, which is a lower bound.
  const double lo = beta / alpha;
  if (lo > cap) return {1.0, 0.0};
  return {std::max(0.0, lo), cap};
}

GInterval intersect(GInterval a, GInterval b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

}  // namespace

BandWindow band_cap_window(double phi1, double phi2, double phi_center, double cos_theta) {
  // cos d(phi, x) = A(phi) + B(phi) * x with x = cos(dlambda),
  // A = sin(phi) sin(phi_c), B = cos(phi) cos(phi_c) >= 0. Pointwise
  // nondecreasing in x, so both classifications are single thresholds.
  const double sc = std::sin(phi_center);
  const double cc = std::cos(phi_center);
  const double s1 = std::sin(phi1), c1 = std::cos(phi1);
  const double s2 = std::sin(phi2), c2 = std::cos(phi2);
  const double a1 = s1 * sc, b1 = c1 * cc;
  const double a2 = s2 * sc, b2 = c2 * cc;
  const double c0 = cos_theta;

  // Endpoint thresholds: f_i(x) = a_i + b_i x crosses c0 at (c0 - a_i) / b_i.
  auto endpoint_in = [&](double a, double b) {
    if (b > 0.0) return (c0 - a) / b;
    return a >= c0 ? -2.0 : 2.0;
  };
  auto endpoint_out = [&](double a, double b) {
    if (b > 0.0) return (c0 - a) / b;
    return a < c0 ? 2.0 : -2.0;
  };

  double x_in = std::max(endpoint_in(a1, b1), endpoint_in(a2, b2));
  double x_out = std::min(endpoint_out(a1, b1), endpoint_out(a2, b2));

  // Interior trough (minimum of f over phi inside the band) exists only for
  // x < 0, at latitude atan2(-sin(phi_c), cos(phi_c)|x|). There the column
  // minimum is -hypot <= 0, so with c0 > 0 such columns can never be fully
  // inside: push x_in above the trough-in-band interval. Membership in
  // g = cos(phi_c)|x|: g sin(phi_i) vs -sin(phi_c) cos(phi_i).
  if (cc > 0.0) {
    const GInterval trough = intersect(solve_linear(s1, -sc * c1, cc),
                                       GInterval{0.0, cc});
    const GInterval trough2 = solve_linear(-s2, sc * c2, cc);  // -sc <= g tan(phi2)
    const GInterval tr = intersect(trough, trough2);
    if (!tr.empty() && tr.hi > 0.0) {
      // Trough value is -hypot(sc, g); for caps under a hemisphere (c0 > 0)
      // every trough column fails, otherwise only those with g above g_ok.
      double g_ok = -1.0;
      if (c0 <= 0.0) {
        const double rad = c0 * c0 - sc * sc;
        if (rad >= 0.0) g_ok = std::sqrt(rad);
      }
      const double lo_excluded = std::max(tr.lo, g_ok);
      if (lo_excluded <= tr.hi) x_in = std::max(x_in, -lo_excluded / cc);
    }
  }

  // Interior peak exists only for x > 0, at atan2(sin(phi_c), cos(phi_c) x);
  // its value hypot(sin(phi_c), cos(phi_c) x) breaks the fully-outside
  // certificate once it reaches c0.
  if (cc > 0.0) {
    // Membership: g sin(phi1) <= sc cos(phi1) and sc cos(phi2) <= g sin(phi2).
    const GInterval peak = intersect(solve_linear(s1, sc * c1, cc),
                                     solve_linear(-s2, -sc * c2, cc));
    if (!peak.empty() && peak.hi > 0.0) {
      double g_cut;
      if (c0 <= std::abs(sc)) {
        g_cut = 0.0;  // peak value already >= c0 for any g
      } else {
        g_cut = std::sqrt(std::max(0.0, c0 * c0 - sc * sc));
      }
      const double onset_g = std::max(peak.lo, g_cut);
      if (onset_g <= peak.hi) {
        x_out = std::min(x_out, onset_g / cc);
      }
    }
  }

  return {std::min(x_in + kXMargin, 2.0), std::max(x_out - kXMargin, -2.0)};
}

CapGrid::CapGrid(std::uint32_t expected_points, double theta_cap) {
  const double theta = std::clamp(theta_cap, 1e-6, kPi);
  int bands = static_cast<int>(std::round(12.0 * kPi / (2.0 * theta)));
  bands_ = std::clamp(bands, 12, 96);
  const std::uint32_t target = std::max<std::uint32_t>(expected_points / (3u * bands_), 1u);
  buckets_ = static_cast<int>(std::clamp<std::uint32_t>(target, 64u, 8192u));
  band_width_ = kPi / bands_;
  bucket_width_ = 2.0 * kPi / buckets_;
  fen_count_.assign(static_cast<std::size_t>(bands_) * (buckets_ + 1), 0);
  fen_deg_.assign(fen_count_.size(), 0);
  band_total_.assign(bands_, BallSum{});
  cell_points_.assign(static_cast<std::size_t>(bands_) * buckets_, {});
}

void CapGrid::fenwick_add(std::uint32_t band, std::uint32_t bucket, std::int64_t dc,
                          std::int64_t dd) {
  std::int64_t* fc = fen_count_.data() + static_cast<std::size_t>(band) * (buckets_ + 1);
  std::int64_t* fd = fen_deg_.data() + static_cast<std::size_t>(band) * (buckets_ + 1);
  for (int i = static_cast<int>(bucket) + 1; i <= buckets_; i += i & (-i)) {
    fc[i] += dc;
    fd[i] += dd;
  }
}

CapGrid::BallSum CapGrid::fenwick_prefix(std::uint32_t band, std::int32_t bucket) const {
  BallSum s;
  if (bucket < 0) return s;
  const std::int64_t* fc = fen_count_.data() + static_cast<std::size_t>(band) * (buckets_ + 1);
  const std::int64_t* fd = fen_deg_.data() + static_cast<std::size_t>(band) * (buckets_ + 1);
  for (int i = std::min(bucket, buckets_ - 1) + 1; i > 0; i -= i & (-i)) {
    s.count += fc[i];
    s.degree_sum += fd[i];
  }
  return s;
}

CapGrid::BallSum CapGrid::fenwick_range(std::uint32_t band, std::int32_t lo,
                                        std::int32_t hi) const {
  const BallSum a = fenwick_prefix(band, hi);
  const BallSum b = fenwick_prefix(band, lo - 1);
  return {a.count - b.count, a.degree_sum - b.degree_sum};
}

void CapGrid::insert(std::uint32_t id, double x, double y, double z, std::int64_t degree) {
  const double norm = std::sqrt(x * x + y * y + z * z);
  const double phi = std::asin(std::clamp(z / norm, -1.0, 1.0));
  double lambda = std::atan2(y, x);
  int band = static_cast<int>((phi + 0.5 * kPi) / band_width_);
  band = std::clamp(band, 0, bands_ - 1);
  int bucket = static_cast<int>((lambda + kPi) / bucket_width_);
  bucket = std::clamp(bucket, 0, buckets_ - 1);
  if (point_cell_.size() < id + 1) point_cell_.resize(id + 1, CellRef{0, 0});
  point_cell_[id] = {static_cast<std::uint32_t>(band), static_cast<std::uint32_t>(bucket)};
  cell_points_[cell_index(band, bucket)].push_back(id);
  fenwick_add(band, bucket, 1, degree);
  band_total_[band].count += 1;
  band_total_[band].degree_sum += degree;
}

void CapGrid::add_degree(std::uint32_t id, std::int64_t delta) {
  const CellRef ref = point_cell_[id];
  fenwick_add(ref.band, ref.bucket, 0, delta);
  band_total_[ref.band].degree_sum += delta;
}

template <typename FullBand, typename InRange, typename Boundary>
void CapGrid::scan_cap(const double* center, double chord_radius, FullBand&& full_band,
                       InRange&& in_range, Boundary&& boundary) const {
  const double cnorm =
      std::sqrt(center[0] * center[0] + center[1] * center[1] + center[2] * center[2]);
  const double phi_c = std::asin(std::clamp(center[2] / cnorm, -1.0, 1.0));
  const double lambda_c = std::atan2(center[1], center[0]);
  // Chord on a radius-R sphere -> central angle.
  const double half = std::clamp(chord_radius / (2.0 * cnorm), 0.0, 1.0);
  const double theta = 2.0 * std::asin(half);
  const double cos_theta = std::cos(theta);

  const double jc = (lambda_c + kPi) / bucket_width_;
  int j0 = std::clamp(static_cast<int>(jc), 0, buckets_ - 1);
  const double frac = jc - j0;

  for (int band = 0; band < bands_; ++band) {
    if (band_total_[band].count == 0) continue;
    const double phi1 = -0.5 * kPi + band * band_width_;
    const double phi2 = phi1 + band_width_;
    double dphi = 0.0;
    if (phi_c < phi1) dphi = phi1 - phi_c;
    if (phi_c > phi2) dphi = phi_c - phi2;
    if (dphi > theta + kPhiMargin) continue;

    const BandWindow win = band_cap_window(phi1, phi2, phi_c, cos_theta);
    const double delta_in = win.x_in <= 1.0 ? std::acos(std::max(win.x_in, -1.0)) : -1.0;
    const double delta_out = win.x_out >= -1.0 ? std::acos(std::min(win.x_out, 1.0)) : kPi;

    if (delta_in >= kPi) {
      full_band(band);
      continue;
    }

    // Signed bucket offsets o from the center bucket j0. A bucket at offset o
    // spans relative longitudes [(o - frac) w, (o + 1 - frac) w).
    const double w = bucket_width_;
    std::int64_t in_pos = -1, in_neg = 1;
    if (delta_in >= 0.0) {
      in_pos = static_cast<std::int64_t>(std::floor(delta_in / w - 1.0 + frac));
      in_neg = static_cast<std::int64_t>(std::ceil(frac - delta_in / w));
      if (in_neg > 0 || in_pos < 0) {
        in_pos = -1;
        in_neg = 1;  // no fully-inside bucket
      }
    }
    std::int64_t out_pos = static_cast<std::int64_t>(std::floor(delta_out / w + frac));
    std::int64_t out_neg = static_cast<std::int64_t>(std::ceil(frac - 1.0 - delta_out / w));

    const std::int64_t in_count = in_pos >= in_neg ? in_pos - in_neg + 1 : 0;
    if (in_count >= buckets_) {
      full_band(band);
      continue;
    }
    if (out_pos - out_neg + 1 > buckets_ - in_count) {
      // Cap girdles the band; visit every bucket outside the in-range once.
      out_neg = in_pos + 1;
      out_pos = in_pos + (buckets_ - in_count);
    }

    if (in_count > 0) {
      const int lo = static_cast<int>(((in_neg + j0) % buckets_ + buckets_) % buckets_);
      const int hi = static_cast<int>(((in_pos + j0) % buckets_ + buckets_) % buckets_);
      in_range(band, lo, hi);
    }
    for (std::int64_t o = out_neg; o <= out_pos; ++o) {
      if (o >= in_neg && o <= in_pos) continue;
      const int j = static_cast<int>(((o + j0) % buckets_ + buckets_) % buckets_);
      boundary(band, j);
    }
  }
}

CapGrid::BallSum CapGrid::query(const double* center, double chord_radius,
                                std::span<const double> xs, std::span<const double> ys,
                                std::span<const double> zs,
                                std::span<const std::uint32_t> degrees) const {
  BallSum total;
  const double r2 = chord_radius * chord_radius;
  scan_cap(
      center, chord_radius,
      [&](int band) {
        total.count += band_total_[band].count;
        total.degree_sum += band_total_[band].degree_sum;
      },
      [&](int band, int lo, int hi) {
        BallSum s;
        if (lo <= hi) {
          s = fenwick_range(band, lo, hi);
        } else {
          const BallSum whole = band_total_[band];
          const BallSum mid = fenwick_range(band, hi + 1, lo - 1);
          s = {whole.count - mid.count, whole.degree_sum - mid.degree_sum};
        }
        total.count += s.count;
        total.degree_sum += s.degree_sum;
      },
      [&](int band, int bucket) {
        for (std::uint32_t id : cell_points_[cell_index(band, bucket)]) {
          const double dx = xs[id - 1] - center[0];
          const double dy = ys[id - 1] - center[1];
          const double dz = zs[id - 1] - center[2];
          if (dx * dx + dy * dy + dz * dz <= r2) {
            total.count += 1;
            total.degree_sum += degrees[id - 1];
          }
        }
      });
  return total;
}

void CapGrid::enumerate(const double* center, double chord_radius,
                        std::span<const double> xs, std::span<const double> ys,
                        std::span<const double> zs,
                        const std::function<void(std::uint32_t)>& visit) const {
  const double r2 = chord_radius * chord_radius;
  scan_cap(
      center, chord_radius,
      [&](int band) {
        for (int j = 0; j < buckets_; ++j) {
          for (std::uint32_t id : cell_points_[cell_index(band, j)]) visit(id);
        }
      },
      [&](int band, int lo, int hi) {
        auto emit = [&](int from, int to) {
          for (int j = from; j <= to; ++j) {
            for (std::uint32_t id : cell_points_[cell_index(band, j)]) visit(id);
          }
        };
        if (lo <= hi) {
          emit(lo, hi);
        } else {
          emit(lo, buckets_ - 1);
          emit(0, hi);
        }
      },
      [&](int band, int bucket) {
        for (std::uint32_t id : cell_points_[cell_index(band, bucket)]) {
          const double dx = xs[id - 1] - center[0];
          const double dy = ys[id - 1] - center[1];
          const double dz = zs[id - 1] - center[2];
          if (dx * dx + dy * dy + dz * dz <= r2) visit(id);
        }
      });
}

}  // namespace gpm

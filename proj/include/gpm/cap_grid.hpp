#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace gpm {

// Latitude-band grid over S^2 with per-bucket Fenwick aggregates of point
// count and degree sum. Supports exact spherical-cap queries: buckets whose
// longitude window is provably inside the cap contribute through the
// aggregates, provably-outside buckets are skipped, and only the boundary
// buckets are scanned point by point. Classification is conservative, so
// results match a brute-force scan exactly.
class CapGrid {
 public:
  // theta_cap: angular radius of the caps that will be queried (sizing hint).
  CapGrid(std::uint32_t expected_points, double theta_cap);

  void insert(std::uint32_t id, double x, double y, double z, std::int64_t degree);
  void add_degree(std::uint32_t id, std::int64_t delta);

  struct BallSum {
    std::int64_t count = 0;
    std::int64_t degree_sum = 0;
  };

  // Exact count / degree sum over stored points within chord distance
  // `chord_radius` of `center`. Coordinate and degree columns belong to the
  // caller; ids index into them 1-based.
  BallSum query(const double* center, double chord_radius,
                std::span<const double> xs, std::span<const double> ys,
                std::span<const double> zs, std::span<const std::uint32_t> degrees) const;

  // Visit every stored point within the cap (exact, unsorted).
  void enumerate(const double* center, double chord_radius,
                 std::span<const double> xs, std::span<const double> ys,
                 std::span<const double> zs,
                 const std::function<void(std::uint32_t)>& visit) const;

  int bands() const { return bands_; }
  int buckets_per_band() const { return buckets_; }

 private:
  struct CellRef {
    std::uint32_t band;
    std::uint32_t bucket;
  };

  std::size_t cell_index(std::uint32_t band, std::uint32_t bucket) const {
    return static_cast<std::size_t>(band) * buckets_ + bucket;
  }

  void fenwick_add(std::uint32_t band, std::uint32_t bucket, std::int64_t dc, std::int64_t dd);
  // Prefix sum over buckets [0, bucket] of one band.
  BallSum fenwick_prefix(std::uint32_t band, std::int32_t bucket) const;
  BallSum fenwick_range(std::uint32_t band, std::int32_t lo, std::int32_t hi) const;

  template <typename FullBand, typename InRange, typename Boundary>
  void scan_cap(const double* center, double chord_radius, FullBand&& full_band,
                InRange&& in_range, Boundary&& boundary) const;

  int bands_ = 0;
  int buckets_ = 0;
  double band_width_ = 0.0;
  double bucket_width_ = 0.0;

  std::vector<std::int64_t> fen_count_;
  std::vector<std::int64_t> fen_deg_;
  std::vector<BallSum> band_total_;
  std::vector<std::vector<std::uint32_t>> cell_points_;
  std::vector<CellRef> point_cell_;
};

// Longitude window of a cap within one latitude band, used by CapGrid and the
// RGG builder. x = cos(delta_lambda); columns with x >= x_in are certainly
// inside the cap for every latitude in the band, columns with x < x_out are
// certainly outside. Conservative: x_in may overshoot and x_out undershoot,
// never the reverse.
struct BandWindow {
  double x_in;   // > 1 means no column is certainly inside
  double x_out;  // < -1 means no column is certainly outside
};

BandWindow band_cap_window(double phi1, double phi2, double phi_center, double cos_theta);

}  // namespace gpm

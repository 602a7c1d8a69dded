#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gpm/geometry.hpp"
#include "gpm/kernel.hpp"

namespace gpm {

// Model parameters. Vertices arrive one at a time, land uniformly on the
// unit-area d-sphere, and attach m edges to vertices inside the detection
// cap (area fraction p) with probability proportional to degree + m*delta.
struct GpmParams {
  int d = 2;
  int m = 1;
  double delta = 1.0;
  double p = 1.0;
  PreferenceKernel kernel = PreferenceKernel::indicator();

  void validate() const;
};

// One attachment slot: the t-th edge of vertex `source` points at `target`.
// Vertex ids are 1-based arrival ranks; target == source marks a self-loop.
struct EdgeRecord {
  std::uint32_t source = 0;
  std::uint16_t slot = 0;  // 1..m
  std::uint32_t target = 0;
};

class GraphRecord {
 public:
  GraphRecord() = default;
  GraphRecord(GpmParams params, std::uint64_t seed);

  const GpmParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }
  // Detection radius used for indicator-kernel generation (chord length).
  double chord_radius() const { return chord_radius_; }
  void set_chord_radius(double r) { chord_radius_ = r; }

  std::uint32_t num_vertices() const { return n_; }
  std::uint64_t num_edges() const { return static_cast<std::uint64_t>(n_) * params_.m; }

  // Flat coordinate columns, one per embedding axis; coords(k)[v-1] is the
  // k-th coordinate of vertex v. Laid out for vectorized distance scans.
  std::span<const double> coords(int axis) const { return coord_cols_[axis]; }
  SpherePoint position(std::uint32_t id) const;

  std::uint32_t degree(std::uint32_t id) const { return degrees_[id - 1]; }
  std::span<const std::uint32_t> degrees() const { return degrees_; }
  double weight(std::uint32_t id) const {
    return degree(id) + static_cast<double>(params_.m) * params_.delta;
  }

  // Target of edge (source, slot); slots are 1..m.
  std::uint32_t edge_target(std::uint32_t source, int slot) const {
    return targets_[static_cast<std::size_t>(source - 1) * params_.m + (slot - 1)];
  }
  std::span<const std::uint32_t> edge_targets() const { return targets_; }
  EdgeRecord edge(std::uint64_t flat_index) const;

  // Mutation is restricted to the generator.
  std::uint32_t append_vertex(const SpherePoint& pos);
  void record_edge(std::uint32_t source, int slot, std::uint32_t target);
  void bump_degree(std::uint32_t id, std::uint32_t amount) { degrees_[id - 1] += amount; }

 private:
  GpmParams params_;
  std::uint64_t seed_ = 0;
  double chord_radius_ = 0.0;
  std::uint32_t n_ = 0;
  std::vector<std::vector<double>> coord_cols_;
  std::vector<std::uint32_t> degrees_;
  std::vector<std::uint32_t> targets_;
};

// Per-vertex audit log of the attachment normalizer. L is the total weight
// in the detection cap plus m(2+delta); the denominator of the i-th edge draw
// must equal L - m + i exactly.
struct GenerationTrace {
  int m = 0;
  std::vector<double> L;
  std::vector<std::uint32_t> candidate_count;
  std::vector<double> denominators;  // m per vertex, flat

  double denominator(std::uint32_t vertex, int edges_placed) const {
    return denominators[static_cast<std::size_t>(vertex - 1) * m + edges_placed];
  }
};

struct Generated {
  GraphRecord graph;
  GenerationTrace trace;
};

// Threshold graph on a fixed point set: i ~ j iff chord distance <= r.
struct RggRecord {
  std::uint32_t n = 0;
  std::vector<std::uint64_t> offsets;       // n + 1
  std::vector<std::uint32_t> neighbors;     // sorted within each row

  std::span<const std::uint32_t> row(std::uint32_t id) const {
    return {neighbors.data() + offsets[id - 1], neighbors.data() + offsets[id]};
  }
};

}  // namespace gpm

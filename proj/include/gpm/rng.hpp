#pragma once

#include <array>
#include <cstdint>

namespace gpm {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// One block maps a 128-bit counter and a 64-bit key to 128 output bits.
// Streams are cheap: any (key, counter) pair is an independent draw, so
// parallel replicas and per-vertex substreams never share state.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        std::uint32_t key0, std::uint32_t key1);

// A stateful view over one Philox stream. `key` identifies the stream,
// `pos` advances block by block. Splitting derives a child key from a tag,
// so substreams never overlap with the parent and are reproducible.
class RandomStream {
 public:
  RandomStream() : key_(0), pos_(0) {}
  explicit RandomStream(std::uint64_t key) : key_(key), pos_(0) {}

  std::uint64_t key() const { return key_; }

  RandomStream split(std::uint64_t tag) const;

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // Uniform on [0,1) with 53 random bits.
  double next_double();
  // Uniform integer in [0, bound), bound >= 1. Unbiased (Lemire rejection).
  std::uint64_t next_below(std::uint64_t bound);
  // Standard normal via Box-Muller; consumes two uniforms per pair.
  double next_normal();

 private:
  void refill();

  std::uint64_t key_;
  std::uint64_t pos_;
  std::array<std::uint32_t, 4> buf_{};
  int avail_ = 0;
  double spare_normal_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace gpm

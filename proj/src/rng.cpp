#include "gpm/rng.hpp"

#include <cmath>

namespace gpm {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c, std::uint32_t k0, std::uint32_t k1) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        std::uint32_t key0, std::uint32_t key1) {
  std::array<std::uint32_t, 4> c = counter;
  std::uint32_t k0 = key0;
  std::uint32_t k1 = key1;
  for (int round = 0; round < 10; ++round) {
    philox_round(c, k0, k1);
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return c;
}

RandomStream RandomStream::split(std::uint64_t tag) const {
  // Domain-separated key derivation: counter word 2 marks a split block so
  // child keys never collide with draw blocks of the same stream.
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32), 0x5917A5EDu, 0u};
  const auto out = philox4x32(counter, static_cast<std::uint32_t>(key_),
                              static_cast<std::uint32_t>(key_ >> 32));
  return RandomStream(static_cast<std::uint64_t>(out[0]) | (static_cast<std::uint64_t>(out[1]) << 32));
}

void RandomStream::refill() {
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(pos_), static_cast<std::uint32_t>(pos_ >> 32), 0u, 0u};
  buf_ = philox4x32(counter, static_cast<std::uint32_t>(key_),
                    static_cast<std::uint32_t>(key_ >> 32));
  ++pos_;
  avail_ = 4;
}

std::uint32_t RandomStream::next_u32() {
  if (avail_ == 0) refill();
  return buf_[4 - avail_--];
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return lo | (hi << 32);
}

double RandomStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::next_below(std::uint64_t bound) {
  // Lemire's multiply-shift with rejection on the biased low region.
  std::uint64_t x = next_u64();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
  std::uint64_t l = static_cast<std::uint64_t>(m);
  if (l < bound) {
    const std::uint64_t floor = (0 - bound) % bound;
    while (l < floor) {
      x = next_u64();
      m = static_cast<unsigned __int128>(x) * bound;
      l = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double RandomStream::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_normal_;
  }
  double u1 = next_double();
  const double u2 = next_double();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 6.283185307179586476925286766559 * u2;
  spare_normal_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace gpm

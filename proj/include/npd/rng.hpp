#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace npd {

// Counter-based random streams in the SplitMix64 family.
//
// A stream is identified by a 64-bit key; the k-th output is a pure
// function of (key, k), so draws can be generated in any order on any
// thread with identical results. Keys are derived hierarchically with
// derive_key, e.g. (dataset seed -> cloud -> point), which keeps
// per-point noise independent of iteration order.

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace detail

inline constexpr std::uint64_t derive_key(std::uint64_t parent,
                                          std::uint64_t child) {
  return detail::mix64(parent ^ detail::mix64((child + 1) * detail::kGolden));
}

inline constexpr std::uint64_t derive_key(
    std::uint64_t parent, std::initializer_list<std::uint64_t> path) {
  std::uint64_t k = parent;
  for (std::uint64_t c : path) k = derive_key(k, c);
  return k;
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : key_(key) {}
  RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
      : key_(derive_key(seed, path)) {}

  // k-th raw output, independent of all other counters.
  std::uint64_t at(std::uint64_t counter) const {
    return detail::mix64(key_ + (counter + 1) * detail::kGolden);
  }

  std::uint64_t next_u64() { return at(counter_++); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; safe to feed to log().
  double next_double_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (rejection-free, so the counter
  // advances by a fixed amount per draw).
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_double_open();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // Uniform integer in [0, bound), rejection-free (128-bit scaling).
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace npd

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace eprnet {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Shortest decimal representation that round-trips to the same double.
// Used for every numeric field written to CSV, JSON and SVG so the same
// value always serializes to the same bytes.
std::string format_double(double v);

// FNV-1a, used for config provenance hashes.
std::uint64_t fnv1a(const std::string& data);
std::string hex64(std::uint64_t v);

// mt19937_64 wrapped with draw helpers that do not depend on
// libstdc++-specific distribution internals, so a seed reproduces the
// same stream everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, n). Lemire's multiply-shift reduction.
  std::size_t bounded(std::size_t n) {
    unsigned __int128 wide = static_cast<unsigned __int128>(gen_()) * n;
    return static_cast<std::size_t>(wide >> 64);
  }

  // Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[bounded(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace eprnet

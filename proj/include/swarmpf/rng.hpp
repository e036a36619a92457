#pragma once

// Deterministic splitmix64 streams. Each robot draws from its own child
// stream derived from the master seed, so replays are bit-identical and
// robots never observe their simulator-side index.

#include <cstdint>

namespace swarmpf {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    detail::splitmix64(state_);  // decorrelate trivially related seeds
  }

  static Rng child(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master;
    std::uint64_t a = detail::splitmix64(s);
    s = a ^ (index * 0xD6E8FEB86659FD93ULL + 0x2545F4914F6CDD1DULL);
    detail::splitmix64(s);
    return Rng(s);
  }

  std::uint64_t next() { return detail::splitmix64(state_); }

  // uniform in [0, 1)
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

 private:
  std::uint64_t state_;
};

}  // namespace swarmpf

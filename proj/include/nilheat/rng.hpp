#pragma once

#include <cmath>
#include <cstdint>

namespace nilheat {

/// Counter-based randomness.  Every random number in the project is a pure
/// function of a 64-bit key, so Monte Carlo runs are reproducible regardless
/// of worker count and path ordering.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t key_combine(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (0x9e3779b97f4a7c15ULL + b + (a << 6) + (a >> 2)));
}

inline std::uint64_t key_combine(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return key_combine(key_combine(a, b), c);
}

inline std::uint64_t key_combine(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                                 std::uint64_t d) {
  return key_combine(key_combine(a, b, c), d);
}

/// Uniform in (0,1); never returns 0 or 1.
inline double key_uniform(std::uint64_t key) {
  const std::uint64_t r = splitmix64(key);
  return (static_cast<double>(r >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

/// Standard normal deviate determined by the key (Box-Muller, cosine branch).
inline double key_gaussian(std::uint64_t key) {
  const double u1 = key_uniform(key_combine(key, 0x475f11a5c0a7e2d1ULL));
  const double u2 = key_uniform(key_combine(key, 0xa3ec647659359acdULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

/// Tiny sequential stream on top of the counter primitives; used where a
/// consumer wants "next value" semantics (e.g. the distance optimizer).
class KeyStream {
 public:
  explicit KeyStream(std::uint64_t seed) : m_seed(seed) {}
  double uniform() { return key_uniform(key_combine(m_seed, m_counter++)); }
  double gaussian() { return key_gaussian(key_combine(m_seed, m_counter++)); }
  std::uint64_t next_key() { return key_combine(m_seed, m_counter++); }

 private:
  std::uint64_t m_seed;
  std::uint64_t m_counter = 0;
};

}  // namespace nilheat

#pragma once
#include <cstdint>

// Counter-based randomness: every variate is a pure function of a 64-bit key
// chain (seed, realization, point, slot). No generator state is carried
// between draws, so realizations can be produced in any order, on any thread,
// and still be bit-identical.
namespace homvar::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Fold a sub-key into an existing key. Chaining mixes is enough here: the
// finalizer scrambles all 64 bits per step, and keys differ in at least one
// chained component by construction.
inline std::uint64_t mix(std::uint64_t key, std::uint64_t sub) {
  return splitmix64(key ^ (sub + 0x9e3779b97f4a7c15ULL));
}

// Slot tags keep independent purposes (coordinates vs. shifts vs. rotations)
// on disjoint streams even when the numeric indices collide.
enum Slot : std::uint64_t {
  slot_coord = 0x1001,
  slot_shift = 0x2002,
  slot_rotation = 0x3003,
  slot_jitter = 0x4004,
};

inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0,1)
}

// uniform in [0,1): key chain (seed, realization, point, slot, axis)
inline double uniform(std::uint64_t seed, std::uint64_t realization,
                      std::uint64_t point, std::uint64_t slot,
                      std::uint64_t axis) {
  std::uint64_t k = splitmix64(seed);
  k = mix(k, realization);
  k = mix(k, point);
  k = mix(k, slot);
  k = mix(k, axis);
  return to_unit(k);
}

}  // namespace homvar::rng

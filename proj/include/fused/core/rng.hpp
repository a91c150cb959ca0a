#pragma once

#include <cstdint>
#include <random>

namespace fused {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

enum class StreamId : std::uint64_t {
  camera = 1,
  radar = 2,
  warmup_camera = 3,
  warmup_radar = 4,
};

/// Independent generator for one sensor at one control tick. Streams never
/// depend on draws made at other ticks, so a replay that diverges after some
/// tick still sees identical noise before it.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t tick,
                                   StreamId id) {
  const std::uint64_t key =
      splitmix64(seed) ^ splitmix64(tick * 0xD1B54A32D192ED03ull +
                                    static_cast<std::uint64_t>(id));
  return std::mt19937_64(splitmix64(key));
}

}  // namespace fused

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace memolab {

using Engine = std::mt19937_64;

// Stream families. Every random draw in the library comes from an engine
// seeded by derive_seed(seed, tag, index); nothing reads ambient entropy.
enum class StreamTag : std::uint64_t {
  kProcess = 1,
  kPartition = 2,
  kTarget = 3,
  kNoise = 4,
  kTest = 5,
  kTrial = 6,
  kCover = 7,
  kExperiment = 8,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(tag));
  return splitmix64(h ^ index);
}

inline Engine make_engine(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  return Engine(derive_seed(seed, tag, index));
}

inline double uniform01(Engine& engine) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine);
}

// FNV-1a; folds an experiment-kind name into the seed tree.
constexpr std::uint64_t tag_hash(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace memolab

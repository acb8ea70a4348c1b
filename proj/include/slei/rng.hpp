#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace slei {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Derives independent, reproducible engines from one run seed. Each
/// subsystem asks for its own named stream so perturbing one does not shift
/// the draws of another.
class SeedSplitter {
 public:
  explicit SeedSplitter(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t derive(std::string_view name, std::uint64_t salt = 0) const {
    return splitmix64(seed_ ^ splitmix64(fnv1a(name) + salt));
  }

  std::mt19937_64 stream(std::string_view name, std::uint64_t salt = 0) const {
    return std::mt19937_64(derive(name, salt));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace slei

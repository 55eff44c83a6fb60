#pragma once

#include <cstdint>
#include <random>

#include "wronski/polynomial.hpp"

namespace wronski {

// splitmix64 finalizer; decorrelates (seed, index) pairs into stream seeds.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
  return mix64(mix64(seed) ^ (index * 0xd1342543de82ef95ULL + 1));
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}
  Rng(uint64_t seed, uint64_t index) : eng_(derive_seed(seed, index)) {}

  double uniform(double a = 0.0, double b = 1.0) {
    return std::uniform_real_distribution<double>(a, b)(eng_);
  }
  double normal(double sigma = 1.0) { return std::normal_distribution<double>(0.0, sigma)(eng_); }
  cplx cnormal(double sigma = 1.0) { return {normal(sigma), normal(sigma)}; }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  uint64_t next() { return eng_(); }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace wronski

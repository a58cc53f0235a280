#pragma once
#include <cstdint>
#include <random>

namespace mlsc::core {

// The single generator behind every randomized probe.  Variates are derived
// with explicit arithmetic (not std::uniform_real_distribution /
// std::normal_distribution, whose streams are implementation-defined), so a
// seed reproduces byte-identical runs on any standard library.
struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}

  std::uint64_t u64() { return eng(); }
  double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }  // [0,1)
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double normal();  // Box-Muller, spare cached

 private:
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// decorrelated child seed for a named sub-stream
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace mlsc::core

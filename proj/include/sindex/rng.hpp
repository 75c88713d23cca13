#pragma once

#include <cstdint>

namespace sindex {

// Counter-based deterministic RNG. Every draw is addressed by an explicit
// 64-bit counter, so the same (seed, stream, counter) triple yields the same
// value on every platform and under any parallel schedule. The generator is
// the splitmix64 finalizer applied to an affine counter sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  // Uniform on the open interval (0, 1).
  double uniform(std::uint64_t counter) const;

  // Standard normal via Box-Muller. Adjacent even/odd counters share one
  // uniform pair, so a normal costs one uniform amortized.
  double normal(std::uint64_t counter) const;

  std::uint64_t bits(std::uint64_t counter) const;

  // Derived generator statistically independent of this one; use one stream
  // per trial/chain/worker.
  Rng stream(std::uint64_t id) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t base_ = 0;
};

// Stateful adapter for sequential draws from an Rng.
class NormalStream {
 public:
  explicit NormalStream(Rng rng) : rng_(rng) {}
  double operator()() { return rng_.normal(next_++); }

 private:
  Rng rng_;
  std::uint64_t next_ = 0;
};

}  // namespace sindex

#include "sindex/rng.hpp"

#include <cmath>

namespace sindex {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t splitmix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed) {
  base_ = splitmix64(seed + kGolden) ^ splitmix64(stream * 0xD1342543DE82EF95ull + 0x2545F4914F6CDD1Dull);
}

std::uint64_t Rng::bits(std::uint64_t counter) const {
  return splitmix64(base_ + (counter + 1) * kGolden);
}

double Rng::uniform(std::uint64_t counter) const {
  // 53 top bits, offset by half an ulp so the result is strictly inside (0,1).
  return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal(std::uint64_t counter) const {
  const std::uint64_t pair = counter >> 1;
  const double u1 = uniform(2 * pair);
  const double u2 = uniform(2 * pair + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  return (counter & 1) ? r * std::sin(a) : r * std::cos(a);
}

Rng Rng::stream(std::uint64_t id) const {
  Rng out(0, 0);
  out.seed_ = seed_;
  out.base_ = splitmix64(base_ ^ splitmix64(id * kGolden + 0x6A09E667F3BCC909ull));
  return out;
}

}  // namespace sindex

#pragma once

#include <cstdint>
#include <random>

namespace trust {

// Deterministic random stream. Identical (seed, stream) pairs reproduce the
// identical draw sequence; distinct stream ids give statistically independent
// streams. All stochastic code in the library draws through this class so
// that every run is bit-reproducible.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Derived stream, independent of this one and of other ids.
  RngStream substream(std::uint64_t id) const;

  std::uint64_t raw();

  // Uniform on the open interval (0,1).
  double uniform();

  // Standard normal via inverse CDF (one uniform per draw).
  double normal();

  double exponential();  // rate 1

  // Gamma(shape, rate) via Marsaglia-Tsang squeezing.
  double gamma(double shape, double rate);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 gen_;
};

}  // namespace trust

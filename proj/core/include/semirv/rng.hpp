#pragma once

#include <cstdint>

namespace semirv {

// Counter-based splittable generator in the SplittableRandom style: every
// (seed, stream) pair owns an independent sequence, and the value at any
// counter position is a pure function of (seed, stream, counter).  Parallel
// consumers can therefore draw from disjoint streams or disjoint counter
// blocks and reproduce results bit-exactly regardless of scheduling.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : state_(mix(seed + 0x9e3779b97f4a7c15ull * stream)),
          gamma_(mix(seed ^ rotl(stream + 0x6a09e667f3bcc909ull, 31)) | 1ull),
          counter_(0) {}

    static std::uint64_t value_at(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter) {
        CounterRng r(seed, stream);
        return mix(r.state_ + r.gamma_ * (counter + 1));
    }

    std::uint64_t next_u64() { return mix(state_ + gamma_ * (++counter_)); }

    // Uniform in the open interval (0, 1); never returns 0 or 1 exactly.
    double next_double() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t counter() const { return counter_; }

  private:
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }
    // splitmix64 finalizer.
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    std::uint64_t gamma_;
    std::uint64_t counter_;
};

}  // namespace semirv

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>

namespace vrrw {

// Counter-based replica RNG. A stream is fully determined by
// (master_seed, stream_index): output i is a strong 64-bit mix of
// key + i*phi, where the per-stream key is itself derived by mixing
// seed and stream index. Streams with distinct indices are de-correlated
// by the key derivation; there is no sequential state beyond the counter,
// so replicas can be assigned to threads in any order.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index,
              std::uint64_t start_counter = 0)
        : master_seed_(master_seed),
          stream_index_(stream_index),
          counter_(start_counter) {
        key_ = mix(mix(master_seed + kPhi) ^ mix(stream_index + kKeySalt));
    }

    std::uint64_t next_u64() {
        if (counter_ == std::numeric_limits<std::uint64_t>::max())
            throw std::runtime_error("RngStream: counter exhausted (misconfigured horizon?)");
        return mix(key_ + (++counter_) * kPhi);
    }

    // Uniform on [0,1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }
    std::uint64_t counter() const { return counter_; }

private:
    static constexpr std::uint64_t kPhi = 0x9e3779b97f4a7c15ULL;
    static constexpr std::uint64_t kKeySalt = 0x6a09e667f3bcc909ULL;

    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace vrrw

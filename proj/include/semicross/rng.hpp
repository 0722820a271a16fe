#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace semicross {

/// Philox4x32-10 counter-based generator.
///
/// A stream is identified by (seed, stream id); the i-th output block of a
/// stream is a pure function of (seed, stream id, i). Replication k of an
/// experiment uses stream id k, so results never depend on how replications
/// are distributed across workers.
class Philox4x32 {
public:
    using result_type = std::uint64_t;

    Philox4x32(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (pos_ == 2) {
            refill();
        }
        return buffer_[pos_++];
    }

    std::uint64_t stream() const noexcept { return stream_; }
    std::uint64_t blocks_consumed() const noexcept { return counter_; }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    void refill() noexcept {
        std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(counter_),
                                         static_cast<std::uint32_t>(counter_ >> 32),
                                         static_cast<std::uint32_t>(stream_),
                                         static_cast<std::uint32_t>(stream_ >> 32)};
        std::array<std::uint32_t, 2> key = key_;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        buffer_[0] = (static_cast<std::uint64_t>(ctr[0]) << 32) | ctr[1];
        buffer_[1] = (static_cast<std::uint64_t>(ctr[2]) << 32) | ctr[3];
        ++counter_;
        pos_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int pos_ = 2;
};

/// Uniform variate on the open interval (0,1) with 53 bits of resolution.
template <class Engine>
double uniform_open(Engine& engine) {
    return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

/// Stream ids reserved for the preliminary chains, disjoint from the
/// replication index range [0, 2^62).
namespace streams {
inline constexpr std::uint64_t kChain = std::uint64_t{1} << 62;
inline constexpr std::uint64_t kResidualChain = kChain + 1;
inline constexpr std::uint64_t kAuxiliary = kChain + 2;
}  // namespace streams

}  // namespace semicross

// Counter-based RNG (Philox4x32-10) with one independent stream per sample path.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace mf {

// Philox4x32-10 keyed counter block cipher (Salmon et al., 2011).
struct Philox4x32 {
    static constexpr std::uint32_t M0 = 0xD2511F53u;
    static constexpr std::uint32_t M1 = 0xCD9E8D57u;
    static constexpr std::uint32_t W0 = 0x9E3779B9u;
    static constexpr std::uint32_t W1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += W0;
            key[1] += W1;
        }
        return ctr;
    }
};

// One stream per (seed, stream-id); consecutive draws advance a 128-bit counter.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          hi_{static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

    std::uint32_t next_u32() {
        if (have_ == 0) refill();
        return buf_[--have_];
    }

    std::uint64_t next_u64() {
        const std::uint64_t a = next_u32();
        const std::uint64_t b = next_u32();
        return (a << 32) | b;
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1], safe as a log() argument
    double uniform_pos() { return 1.0 - uniform(); }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

    double normal() {
        if (have_normal_) {
            have_normal_ = false;
            return cached_normal_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 6.283185307179586476925286766559 * u2;
        cached_normal_ = r * std::sin(th);
        have_normal_ = true;
        return r * std::cos(th);
    }

  private:
    void refill() {
        buf_ = Philox4x32::block({static_cast<std::uint32_t>(ctr_),
                                  static_cast<std::uint32_t>(ctr_ >> 32), hi_[0], hi_[1]},
                                 key_);
        ++ctr_;
        have_ = 4;
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 2> hi_;  // stream id occupies the counter's top lanes
    std::uint64_t ctr_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int have_ = 0;
    bool have_normal_ = false;
    double cached_normal_ = 0.0;
};

}  // namespace mf

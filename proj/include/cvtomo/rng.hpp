#pragma once

#include <cmath>
#include <cstdint>

namespace cvtomo {

/// Philox4x32-10 counter-based generator. Streams are cheap: a generator is
/// fully determined by (seed, stream), so parallel consumers can derive
/// independent streams without sharing state.
class Philox {
  public:
    Philox(uint64_t seed, uint64_t stream = 0) {
        key_[0] = uint32_t(seed);
        key_[1] = uint32_t(seed >> 32);
        ctr_[2] = uint32_t(stream);
        ctr_[3] = uint32_t(stream >> 32);
    }

    uint32_t next_u32() {
        if (out_pos_ == 4) {
            block();
            out_pos_ = 0;
            if (++ctr_[0] == 0) ++ctr_[1];
        }
        return out_[out_pos_++];
    }

    uint64_t next_u64() {
        uint64_t lo = next_u32();
        return lo | (uint64_t(next_u32()) << 32);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; draws are unconditioned on history.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    /// FNV-1a mix, used to derive per-setting stream ids from (index, seed).
    static uint64_t mix(uint64_t a, uint64_t b) {
        uint64_t h = 14695981039346656037ULL;
        for (uint64_t v : {a, b}) {
            for (int i = 0; i < 8; ++i) {
                h ^= (v >> (8 * i)) & 0xff;
                h *= 1099511628211ULL;
            }
        }
        return h;
    }

  private:
    void block() {
        uint32_t c0 = ctr_[0], c1 = ctr_[1], c2 = ctr_[2], c3 = ctr_[3];
        uint32_t k0 = key_[0], k1 = key_[1];
        for (int round = 0; round < 10; ++round) {
            uint64_t p0 = uint64_t(0xD2511F53u) * c0;
            uint64_t p1 = uint64_t(0xCD9E8D57u) * c2;
            uint32_t h0 = uint32_t(p0 >> 32), l0 = uint32_t(p0);
            uint32_t h1 = uint32_t(p1 >> 32), l1 = uint32_t(p1);
            uint32_t n0 = h1 ^ c1 ^ k0;
            uint32_t n1 = l1;
            uint32_t n2 = h0 ^ c3 ^ k1;
            uint32_t n3 = l0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        out_[0] = c0; out_[1] = c1; out_[2] = c2; out_[3] = c3;
    }

    uint32_t key_[2] = {0, 0};
    uint32_t ctr_[4] = {0, 0, 0, 0};
    uint32_t out_[4] = {0, 0, 0, 0};
    int out_pos_ = 4;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace cvtomo

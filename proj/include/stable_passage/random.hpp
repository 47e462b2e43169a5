#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace stable_passage {

// Philox4x32-10 counter-based generator (Salmon et al., Random123).
// A stream is fully determined by (key, stream index); draws are a pure
// function of the 128-bit counter, so replicas can be assigned to workers
// in any order without changing the sequence each replica sees.
class PhiloxEngine {
 public:
  using Block = std::array<std::uint32_t, 4>;

  PhiloxEngine(std::uint64_t key, std::uint64_t stream)
      : key0_(static_cast<std::uint32_t>(key)),
        key1_(static_cast<std::uint32_t>(key >> 32)),
        stream_(stream) {}

  // Block for counter value `ctr` within this stream.
  Block block(std::uint64_t ctr) const {
    std::uint32_t c0 = static_cast<std::uint32_t>(ctr);
    std::uint32_t c1 = static_cast<std::uint32_t>(ctr >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(stream_);
    std::uint32_t c3 = static_cast<std::uint32_t>(stream_ >> 32);
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = kMul0 * static_cast<std::uint64_t>(c0);
      const std::uint64_t p1 = kMul1 * static_cast<std::uint64_t>(c2);
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      c0 = hi1 ^ c1 ^ k0;
      c1 = lo1;
      c2 = hi0 ^ c3 ^ k1;
      c3 = lo0;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return {c0, c1, c2, c3};
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  std::uint32_t key0_;
  std::uint32_t key1_;
  std::uint64_t stream_;
};

// Buffered draw interface over one Philox stream.
class Stream {
 public:
  Stream(std::uint64_t master_seed, std::uint64_t stream_index)
      : engine_(master_seed, stream_index) {}

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
  }

  // Uniform on the open interval (0,1); never returns 0 or 1, so logs and
  // inverse-CDF transforms are safe.
  double uniform() {
    const std::uint64_t bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform()); }

  // Single fair bit, consumed from a 64-bit buffer.
  bool bit() {
    if (bit_count_ == 0) {
      bit_buf_ = next_u64();
      bit_count_ = 64;
    }
    const bool b = (bit_buf_ & 1u) != 0;
    bit_buf_ >>= 1;
    --bit_count_;
    return b;
  }

  // 64 fair bits at once, for batched +-1 walks.
  std::uint64_t bits64() {
    bit_count_ = 0;
    return next_u64();
  }

 private:
  void refill() {
    buf_ = engine_.block(ctr_++);
    pos_ = 0;
  }

  PhiloxEngine engine_;
  PhiloxEngine::Block buf_{};
  std::uint64_t ctr_ = 0;
  int pos_ = 4;
  std::uint64_t bit_buf_ = 0;
  int bit_count_ = 0;
};

// master_seed plus replica index -> independent stream. The mapping is the
// identity on the index: any 64-bit index space carve-up is collision free.
inline Stream resolve_stream(std::uint64_t master_seed, std::uint64_t replica_index) {
  return Stream(master_seed, replica_index);
}

}  // namespace stable_passage

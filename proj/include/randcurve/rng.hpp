#pragma once
#include <array>
#include <cstdint>

namespace randcurve {

// inverse of the standard normal CDF (Wichura's PPND16 rational fits)
double inverse_normal_cdf(double p);

// Counter-based random stream (Philox4x32-10). A stream is identified by
// (seed, stream_id); draws are indexed by an internal counter, so replicas on
// distinct stream ids are independent and any (seed, stream, draw-index)
// triple maps to the same output on every platform.
//
// Consumption contract: uniform01() consumes one 64-bit lane (half a Philox
// block), normal() consumes exactly one uniform01() via the inverse normal
// CDF. Keeping the draw count per sample fixed is what makes common random
// numbers and replays work.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id), block_(0) {}

  // uniform on (0,1), both endpoints excluded
  double uniform01() {
    if (avail_ == 0) refill();
    const std::uint64_t bits = buf_[2 - avail_];
    --avail_;
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  // standard normal by inverse transform
  double normal() { return inverse_normal_cdf(uniform01()); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // independent substream, e.g. one per replica; a multiplicative hash keeps
  // replica-derived ids away from manually chosen ones
  RngStream substream(std::uint64_t replica) const {
    return RngStream(seed_, stream_id_ ^ (0x9E3779B97F4A7C15ull * (replica + 1)));
  }

 private:
  void refill() {
    std::uint32_t c[4] = {static_cast<std::uint32_t>(block_),
                          static_cast<std::uint32_t>(block_ >> 32),
                          static_cast<std::uint32_t>(stream_id_),
                          static_cast<std::uint32_t>(stream_id_ >> 32)};
    std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
    ++block_;
    for (int r = 0; r < 10; ++r) {
      const std::uint64_t p0 = 0xD2511F53ull * c[0];
      const std::uint64_t p1 = 0xCD9E8D57ull * c[2];
      const std::uint32_t c1 = c[1], c3 = c[3];
      c[0] = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ k0;
      c[1] = static_cast<std::uint32_t>(p1);
      c[2] = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ k1;
      c[3] = static_cast<std::uint32_t>(p0);
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    buf_[0] = (static_cast<std::uint64_t>(c[0]) << 32) | c[1];
    buf_[1] = (static_cast<std::uint64_t>(c[2]) << 32) | c[3];
    avail_ = 2;
  }

  std::uint64_t seed_, stream_id_;
  std::uint64_t block_;
  std::array<std::uint64_t, 2> buf_{};
  int avail_ = 0;
};

}  // namespace randcurve

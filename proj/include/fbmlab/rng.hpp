#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace fbmlab {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Stateless:
// the output block is a pure function of (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key) noexcept;

  // Blocks for counters first, first + 1, ... (incrementing word 0), eight
  // lanes at a time so the rounds vectorise. out[i] == generate(first + i, key).
  static void generate_blocks(Counter first, Key key, std::span<Counter> out) noexcept;
};

// Independent random streams are addressed by (seed, stream id, domain).
// The domain keeps different consumers of the same seed apart (e.g. the
// circulant sampler and the Cholesky oracle never share variates).
enum class StreamDomain : std::uint32_t {
  Circulant = 1,
  Cholesky = 2,
  Test = 0xfffe,
};

// 64-bit words of one Philox stream; each block gives two words. Satisfies
// UniformRandomBitGenerator.
class PhiloxStream {
 public:
  using result_type = std::uint64_t;
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  PhiloxStream(std::uint64_t seed, std::uint64_t stream, StreamDomain domain) noexcept;

  result_type operator()() {
    if (next_ == kWords) refill();
    return words_[next_++];
  }

 private:
  static constexpr std::size_t kBlocks = 32;
  static constexpr std::size_t kWords = 2 * kBlocks;

  void refill();

  Philox4x32::Key key_;
  Philox4x32::Counter counter_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, kWords> words_{};
  std::size_t next_ = kWords;
};

// Standard normal variates from one Philox stream (ziggurat transform).
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream, StreamDomain domain) noexcept
      : bits_(seed, stream, domain) {}

  double next();
  void fill(std::span<double> out);

 private:
  PhiloxStream bits_;
};

}  // namespace fbmlab

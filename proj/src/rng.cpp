#include "fbmlab/rng.hpp"

#include <boost/random/normal_distribution.hpp>

#if defined(__x86_64__) && defined(__GNUC__)
#include <immintrin.h>
#define FBMLAB_HAVE_AVX2_PATH 1
#endif

#include "fbmlab/error.hpp"

namespace fbmlab {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round(Philox4x32::Counter& c, const Philox4x32::Key& k) noexcept {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

#ifdef FBMLAB_HAVE_AVX2_PATH

// Four blocks per register with each 32-bit word in the low half of a 64-bit
// lane, so _mm256_mul_epu32 yields the full 32 x 32 -> 64 products. Integer
// only: the output equals the scalar rounds bit for bit.
__attribute__((target("avx2"))) void generate_blocks_avx2(Philox4x32::Counter first,
                                                          Philox4x32::Key key,
                                                          Philox4x32::Counter* out,
                                                          std::size_t groups) noexcept {
  const __m256i lo_mask = _mm256_set1_epi64x(0xffffffffLL);
  const __m256i m0 = _mm256_set1_epi64x(kMul0);
  const __m256i m1 = _mm256_set1_epi64x(kMul1);
  // Two independent groups per pass hide the multiply latency.
  for (std::size_t g = 0; g < groups; g += 2) {
    const std::size_t width = groups - g >= 2 ? 2 : 1;
    __m256i c0[2], c1[2], c2[2], c3[2];
    for (std::size_t v = 0; v < 2; ++v) {
      const std::uint32_t base = first[0] + static_cast<std::uint32_t>(4 * (g + v));
      c0[v] = _mm256_set_epi64x(static_cast<std::uint32_t>(base + 3u),
                                static_cast<std::uint32_t>(base + 2u),
                                static_cast<std::uint32_t>(base + 1u), base);
      c1[v] = _mm256_set1_epi64x(first[1]);
      c2[v] = _mm256_set1_epi64x(first[2]);
      c3[v] = _mm256_set1_epi64x(first[3]);
    }
    std::uint32_t k0 = key[0];
    std::uint32_t k1 = key[1];
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        k0 += kWeyl0;
        k1 += kWeyl1;
      }
      const __m256i kk0 = _mm256_set1_epi64x(k0);
      const __m256i kk1 = _mm256_set1_epi64x(k1);
      for (std::size_t v = 0; v < 2; ++v) {
        const __m256i p0 = _mm256_mul_epu32(c0[v], m0);
        const __m256i p1 = _mm256_mul_epu32(c2[v], m1);
        const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p1, 32), c1[v]), kk0);
        const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p0, 32), c3[v]), kk1);
        c1[v] = _mm256_and_si256(p1, lo_mask);
        c3[v] = _mm256_and_si256(p0, lo_mask);
        c0[v] = n0;
        c2[v] = n2;
      }
    }
    for (std::size_t v = 0; v < width; ++v) {
      alignas(32) std::uint64_t w[4][4];
      _mm256_store_si256(reinterpret_cast<__m256i*>(w[0]), c0[v]);
      _mm256_store_si256(reinterpret_cast<__m256i*>(w[1]), c1[v]);
      _mm256_store_si256(reinterpret_cast<__m256i*>(w[2]), c2[v]);
      _mm256_store_si256(reinterpret_cast<__m256i*>(w[3]), c3[v]);
      for (std::size_t l = 0; l < 4; ++l) {
        out[4 * (g + v) + l] = {
            static_cast<std::uint32_t>(w[0][l]), static_cast<std::uint32_t>(w[1][l]),
            static_cast<std::uint32_t>(w[2][l]), static_cast<std::uint32_t>(w[3][l])};
      }
    }
  }
}

const bool kCpuHasAvx2 = __builtin_cpu_supports("avx2");

#endif

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter counter, Key key) noexcept {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    round(counter, key);
  }
  return counter;
}

void Philox4x32::generate_blocks(Counter first, Key key, std::span<Counter> out) noexcept {
  std::size_t done = 0;
#ifdef FBMLAB_HAVE_AVX2_PATH
  if (kCpuHasAvx2) {
    generate_blocks_avx2(first, key, out.data(), out.size() / 4);
    done = out.size() / 4 * 4;
  }
#endif
  for (; done < out.size(); ++done) {
    Counter c = first;
    c[0] += static_cast<std::uint32_t>(done);
    out[done] = generate(c, key);
  }
}

// Counter layout: [block, domain, stream lo, stream hi]; key = seed.
PhiloxStream::PhiloxStream(std::uint64_t seed, std::uint64_t stream, StreamDomain domain) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      counter_{0, static_cast<std::uint32_t>(domain), static_cast<std::uint32_t>(stream),
               static_cast<std::uint32_t>(stream >> 32)} {}

void PhiloxStream::refill() {
  if (block_ + kBlocks > 0x100000000ull) {
    throw Error("rng", "Philox stream exhausted (block counter would wrap)");
  }
  counter_[0] = static_cast<std::uint32_t>(block_);
  block_ += kBlocks;
  std::array<Philox4x32::Counter, kBlocks> blocks;
  Philox4x32::generate_blocks(counter_, key_, blocks);
  for (std::size_t b = 0; b < kBlocks; ++b) {
    words_[2 * b] = (static_cast<std::uint64_t>(blocks[b][0]) << 32) | blocks[b][1];
    words_[2 * b + 1] = (static_cast<std::uint64_t>(blocks[b][2]) << 32) | blocks[b][3];
  }
  next_ = 0;
}

// The Boost ziggurat keeps no state between calls, so a fresh distribution
// per draw is equivalent to a long-lived one.
double NormalStream::next() { return boost::random::normal_distribution<double>()(bits_); }

void NormalStream::fill(std::span<double> out) {
  boost::random::normal_distribution<double> normal;
  for (double& v : out) v = normal(bits_);
}

}  // namespace fbmlab

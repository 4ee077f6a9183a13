#pragma once

#include <array>
#include <cstdint>

namespace nlspike {

/// Identifies one reproducible random stream. Every sample drawn by the
/// library is a pure function of (seed, stream_id) and a per-sample counter.
struct SeededStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  /// Derives an independent sub-stream, e.g. noise vs. signal of one model.
  [[nodiscard]] SeededStream child(std::uint64_t tag) const noexcept;

  friend bool operator==(const SeededStream&, const SeededStream&) = default;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Non-commutative hash combination used to key replica streams.
std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) noexcept;

/// Philox4x32-10 block cipher keyed by a stream. Sample (a, b) is addressed
/// directly, so matrix entries can be generated in any order or in parallel.
class CounterRng {
 public:
  explicit CounterRng(const SeededStream& stream) noexcept;

  [[nodiscard]] std::array<std::uint32_t, 4> block(std::uint64_t a, std::uint64_t b) const noexcept;

  /// Two uniforms in the open interval (0, 1) with 53-bit resolution.
  [[nodiscard]] std::array<double, 2> uniforms(std::uint64_t a, std::uint64_t b) const noexcept;

  /// Standard normal via Box-Muller on the block's two uniforms.
  [[nodiscard]] double normal(std::uint64_t a, std::uint64_t b) const noexcept;

 private:
  std::array<std::uint32_t, 2> key_;
};

/// Raw Philox4x32-10; exposed for known-answer testing.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

}  // namespace nlspike

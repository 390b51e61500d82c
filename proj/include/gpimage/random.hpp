#pragma once

#include <array>
#include <cstdint>

namespace gpimage {

/// Philox4x32-10 counter-based block function (Salmon et al., Random123).
[[nodiscard]] std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                                      std::array<std::uint32_t, 2> key);

/// Purpose tags keep the draws of different consumers disjoint under one seed.
enum class StreamPurpose : std::uint32_t { paths = 1, scalar = 2 };

/// Reproducible substream of uniforms and normals.
///
/// Substream derivation: key = (seed low word, seed high word); counter =
/// (block index, purpose tag, stream low word, stream high word). Each block
/// yields two 53-bit uniforms in (0, 1), and Box–Muller turns a pair of
/// uniforms into two normals. A stream depends only on (seed, purpose, stream),
/// so per-path streams give results independent of thread count.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t stream);

    double uniform();
    double normal();
    double exponential();

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<double, 2> uniforms_{};
    int uniforms_left_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

} // namespace gpimage

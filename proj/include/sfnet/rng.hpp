#pragma once

#include <array>
#include <cstdint>

namespace sfnet {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
// A block is a pure function of (counter, key), so random values can be
// keyed by entity instead of drawn in sequence. This is what makes the
// nested-intensity couplings reproducible and order-independent: the coin
// of a vertex or of an unordered vertex pair is the same no matter which
// graph of a coupled family asks for it, or in which order.
struct Philox4x32 {
    static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                              const std::array<std::uint32_t, 2>& key);
};

// Substream purposes. Each purpose gets its own key so that e.g. the
// position stream of vertex 7 never collides with its weight stream.
enum class StreamKind : std::uint64_t {
    vertex_position = 1,
    vertex_weight = 2,
    vertex_retention = 3,
    edge_coin = 4,
    edge_length = 5,
    poisson_count = 6,
    pair_sample = 7,
    experiment = 8,
    brw_trial = 9,
    generic = 10,
};

// One independent random stream, identified by (seed, kind, entity).
// Draws are counted, so a stream can be re-created from its identity and
// replayed; two streams with different identities never share a block.
class RngStream {
public:
    RngStream(std::uint64_t seed, StreamKind kind, std::uint64_t entity);

    std::uint64_t next_u64();

    // Uniform on [0,1).
    double next_unit();
    // Uniform on (0,1), usable as the argument of a quantile function.
    double next_unit_open();
    // Inversion sampling, t = -log(1-U)/rate.
    double next_exponential(double rate);
    // Uniform integer in [0, bound), bound > 0, by rejection.
    std::uint64_t next_below(std::uint64_t bound);
    // Exact Poisson count by inversion of the CDF; large means are split
    // into chunks so the inversion never underflows.
    std::uint64_t next_poisson(double mean);

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t entity_;
    std::uint64_t draw_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int buffered_ = 0; // number of unemitted 64-bit words in buffer_ (0..2)

    std::uint64_t poisson_small(double mean);
};

// Key for an unordered vertex pair; ids must fit in 32 bits.
std::uint64_t pair_key(std::uint32_t u, std::uint32_t v);

// Convenience: the uniform coin of an unordered pair under a given purpose.
// draw = 0 is the canonical coin; draw >= 1 are fresh re-trials.
double pair_unit(std::uint64_t seed, StreamKind kind, std::uint32_t u, std::uint32_t v,
                 std::uint64_t draw = 0);

} // namespace sfnet

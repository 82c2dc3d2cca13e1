#include "sfnet/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace sfnet {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(p);
    hi = static_cast<std::uint32_t>(p >> 32);
}

inline void philox_round(std::array<std::uint32_t, 4>& c, const std::array<std::uint32_t, 2>& k) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mul_hi_lo(kPhiloxM0, c[0], lo0, hi0);
    mul_hi_lo(kPhiloxM1, c[2], lo1, hi1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace

std::array<std::uint32_t, 4> Philox4x32::block(const std::array<std::uint32_t, 4>& counter,
                                               const std::array<std::uint32_t, 2>& key) {
    std::array<std::uint32_t, 4> c = counter;
    std::array<std::uint32_t, 2> k = key;
    philox_round(c, k);
    for (int r = 1; r < 10; ++r) {
        k[0] += kPhiloxW0;
        k[1] += kPhiloxW1;
        philox_round(c, k);
    }
    return c;
}

RngStream::RngStream(std::uint64_t seed, StreamKind kind, std::uint64_t entity) : entity_(entity) {
    const std::uint64_t k = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(kind)));
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

std::uint64_t RngStream::next_u64() {
    if (buffered_ == 0) {
        const std::array<std::uint32_t, 4> counter = {
            static_cast<std::uint32_t>(entity_), static_cast<std::uint32_t>(entity_ >> 32),
            static_cast<std::uint32_t>(draw_), static_cast<std::uint32_t>(draw_ >> 32)};
        buffer_ = Philox4x32::block(counter, key_);
        ++draw_;
        buffered_ = 2;
    }
    const int i = 2 * (2 - buffered_);
    --buffered_;
    return (static_cast<std::uint64_t>(buffer_[i + 1]) << 32) | buffer_[i];
}

double RngStream::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_unit_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_exponential(double rate) {
    return -std::log1p(-next_unit()) / rate;
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t u;
    do {
        u = next_u64();
    } while (u >= limit);
    return u % bound;
}

std::uint64_t RngStream::poisson_small(double mean) {
    const double u = next_unit_open();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    const std::uint64_t guard =
        static_cast<std::uint64_t>(mean + 20.0 * std::sqrt(mean + 1.0) + 200.0);
    while (u > cdf && k < guard) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
    }
    return k;
}

std::uint64_t RngStream::next_poisson(double mean) {
    if (!(mean >= 0.0)) throw std::invalid_argument("next_poisson: mean must be nonnegative");
    // Poi(a+b) = Poi(a) + Poi(b); chunking keeps exp(-mean) away from underflow.
    std::uint64_t count = 0;
    while (mean > 400.0) {
        count += poisson_small(400.0);
        mean -= 400.0;
    }
    return count + poisson_small(mean);
}

std::uint64_t pair_key(std::uint32_t u, std::uint32_t v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

double pair_unit(std::uint64_t seed, StreamKind kind, std::uint32_t u, std::uint32_t v,
                 std::uint64_t draw) {
    RngStream s(seed, kind, pair_key(u, v));
    double x = 0.0;
    for (std::uint64_t i = 0; i <= draw; ++i) x = s.next_unit_open();
    return x;
}

} // namespace sfnet

#include "cubeslice/rng.hpp"

#include <cmath>
#include <numbers>

namespace cubeslice {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline Philox4x32::Key split_key(std::uint64_t k) noexcept {
    return {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

SeedStream SeedStream::split(std::uint64_t child) const noexcept {
    return SeedStream(mix64(key_ ^ mix64(child + 0x243F6A8885A308D3ULL)), 0);
}

std::array<std::uint64_t, 2> SeedStream::block(std::uint64_t index, std::uint32_t sub) const noexcept {
    const auto out = Philox4x32::block(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), sub, 0u},
        split_key(key_));
    return {(static_cast<std::uint64_t>(out[1]) << 32) | out[0],
            (static_cast<std::uint64_t>(out[3]) << 32) | out[2]};
}

std::uint64_t CounterRng::next_u64() noexcept {
    if (buffered_ == 0) {
        const auto out = Philox4x32::block(
            {static_cast<std::uint32_t>(position_), static_cast<std::uint32_t>(position_ >> 32),
             static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
            split_key(key_));
        ++position_;
        buffer_ = {(static_cast<std::uint64_t>(out[1]) << 32) | out[0],
                   (static_cast<std::uint64_t>(out[3]) << 32) | out[2]};
        buffered_ = 2;
    }
    return buffer_[2 - buffered_--];
}

double CounterRng::uniform() noexcept { return to_unit_double(next_u64()); }

double CounterRng::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    // Box-Muller; both outputs are used.
    const double r = std::sqrt(-2.0 * std::log(uniform_open_low()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_normal_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

}  // namespace cubeslice

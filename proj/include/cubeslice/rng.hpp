#pragma once

#include <array>
#include <cstdint>

namespace cubeslice {

struct Seed {
    std::uint64_t value = 0;
};

/// Philox4x32-10 block function (Salmon et al., Random123). Stateless:
/// maps a 128-bit counter and 64-bit key to 128 random bits.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) noexcept;
};

/// SplitMix64 finalizer. Used only for deriving keys from (seed, stream).
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Sequential view over a single Philox stream. Cheap to copy; copies
/// continue independently from the same position.
class CounterRng {
public:
    CounterRng(std::uint64_t key, std::uint64_t stream) noexcept : key_(key), stream_(stream) {}

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform on (0, 1].
    double uniform_open_low() noexcept { return 1.0 - uniform(); }
    double normal() noexcept;

    std::uint64_t position() const noexcept { return position_; }

private:
    std::uint64_t key_;
    std::uint64_t stream_;
    std::uint64_t position_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// A seed together with a position in the split tree. `split(i)` derives
/// an independent child; `generator()` opens a sequential stream. Sample i
/// of a parallel loop uses `split(i).generator()`, so results never depend
/// on how samples are distributed across threads.
class SeedStream {
public:
    explicit SeedStream(Seed seed) noexcept : key_(mix64(seed.value ^ 0x6a09e667f3bcc909ULL)) {}

    SeedStream split(std::uint64_t child) const noexcept;
    CounterRng generator() const noexcept { return CounterRng(key_, 0); }

    /// Direct block access for hot loops: 128 bits for (index, block).
    std::array<std::uint64_t, 2> block(std::uint64_t index, std::uint32_t sub) const noexcept;

    std::uint64_t key() const noexcept { return key_; }

private:
    explicit SeedStream(std::uint64_t key, int) noexcept : key_(key) {}
    std::uint64_t key_;
};

inline double to_unit_double(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace cubeslice

#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace fadingrate {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The output
/// is a pure function of (key, counter), so independent streams come from
/// distinct keys and any draw can be reproduced without replaying the
/// stream.
class Philox4x32 {
public:
    using block = std::array<std::uint32_t, 4>;

    explicit Philox4x32(std::uint64_t key) noexcept;

    /// Output block for an explicit counter.
    block generate(std::uint64_t counter_lo, std::uint64_t counter_hi = 0) const noexcept;

private:
    std::array<std::uint32_t, 2> key_;
};

/// Stream of uniforms and normals on top of Philox. Normals use the
/// Box-Muller transform so streams are identical across standard libraries.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t stream_key) noexcept;

    std::uint32_t next_u32() noexcept;
    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept;
    double normal() noexcept;
    /// Circularly-symmetric complex Gaussian: real and imaginary parts
    /// i.i.d. N(0, variance/2).
    std::complex<double> proper_gaussian(double variance = 1.0) noexcept;

private:
    Philox4x32 engine_;
    std::uint64_t counter_ = 0;
    Philox4x32::block buffer_{};
    int used_ = 4;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fadingrate

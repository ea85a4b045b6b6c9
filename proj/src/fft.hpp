#pragma once

#include <complex>
#include <memory>
#include <span>

namespace fadingrate::detail {

// In-place complex DFT of fixed length backed by an FFTW plan.
// Forward: X_k = sum_n x_n e^{-j 2 pi k n / N}; backward uses e^{+j...}.
// Neither direction normalizes.
class Dft {
public:
    enum class Direction { Forward, Backward };

    Dft(std::size_t n, Direction dir);
    ~Dft();
    Dft(const Dft&) = delete;
    Dft& operator=(const Dft&) = delete;
    Dft(Dft&&) noexcept;
    Dft& operator=(Dft&&) noexcept;

    std::size_t size() const { return n_; }
    void execute(std::span<std::complex<double>> data) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::size_t n_ = 0;
};

}  // namespace fadingrate::detail

#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace fadingrate::detail {

namespace {
// The FFTW planner is not re-entrant.
std::mutex planner_mutex;
}  // namespace

struct Dft::Impl {
    fftw_plan plan = nullptr;
    fftw_complex* scratch = nullptr;
};

Dft::Dft(std::size_t n, Direction dir) : impl_(std::make_unique<Impl>()), n_(n) {
    if (n == 0) throw std::invalid_argument("Dft: length must be positive");
    std::lock_guard lock(planner_mutex);
    impl_->scratch = fftw_alloc_complex(n);
    impl_->plan = fftw_plan_dft_1d(static_cast<int>(n), impl_->scratch, impl_->scratch,
                                   dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE);
    if (impl_->plan == nullptr) {
        fftw_free(impl_->scratch);
        throw std::runtime_error("Dft: FFTW planning failed");
    }
}

Dft::~Dft() {
    if (!impl_) return;
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(impl_->plan);
    fftw_free(impl_->scratch);
}

Dft::Dft(Dft&&) noexcept = default;
Dft& Dft::operator=(Dft&&) noexcept = default;

void Dft::execute(std::span<std::complex<double>> data) const {
    if (data.size() != n_) throw std::invalid_argument("Dft: length mismatch");
    // new-array execute: FFTW requires the same alignment as the planning
    // buffer, so go through the aligned scratch.
    auto* buf = reinterpret_cast<std::complex<double>*>(impl_->scratch);
    std::copy(data.begin(), data.end(), buf);
    fftw_execute(impl_->plan);
    std::copy(buf, buf + n_, data.begin());
}

}  // namespace fadingrate::detail

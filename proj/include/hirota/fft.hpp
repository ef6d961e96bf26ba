#pragma once

#include <fftw3.h>

#include <algorithm>

#include <complex>
#include <mutex>
#include <vector>

#include "hirota/errors.hpp"
#include "hirota/mat2.hpp"

namespace hirota {

namespace detail {
inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

// In-place c2c transform pair for one fixed size. FFTW_ESTIMATE keeps plans
// deterministic across runs. Forward is unnormalized; inverse divides by n.
class Fft {
  public:
    explicit Fft(std::size_t n) : n_(n), buf_(n) {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        auto* raw = reinterpret_cast<fftw_complex*>(buf_.data());
        fwd_ = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd_ || !bwd_) throw AccuracyError("fftw plan creation failed");
    }
    ~Fft() {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    // plans are bound to buf_, so transforms stage through it; new-array
    // execution would demand matching alignment, which vector storage cannot
    // guarantee
    void forward(std::vector<cx>& v) {
        std::copy(v.begin(), v.end(), buf_.begin());
        fftw_execute(fwd_);
        std::copy(buf_.begin(), buf_.end(), v.begin());
    }
    void inverse(std::vector<cx>& v) {
        std::copy(v.begin(), v.end(), buf_.begin());
        fftw_execute(bwd_);
        const double s = 1.0 / static_cast<double>(n_);
        for (std::size_t j = 0; j < n_; ++j) v[j] = buf_[j] * s;
    }

    std::size_t size() const { return n_; }

  private:
    std::size_t n_;
    std::vector<cx> buf_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

}  // namespace hirota

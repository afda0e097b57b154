#pragma once

#include <cstddef>
#include <memory>

namespace splitlab::detail {

void fftw_buffer_free(double* p) noexcept;

struct FftwFree {
    void operator()(double* p) const noexcept { fftw_buffer_free(p); }
};
using FftwBuffer = std::unique_ptr<double[], FftwFree>;

FftwBuffer make_fftw_buffer(std::size_t n);

/// Unnormalised DCT-I (FFTW REDFT00). Applying it twice scales by 2(n-1).
/// Plans are created once per size under a lock; execution is thread-safe.
class DctI {
public:
    explicit DctI(std::size_t n);

    std::size_t size() const noexcept { return n_; }

    /// in and out must come from make_fftw_buffer (same alignment as the plan).
    void execute(double* in, double* out) const;

private:
    std::size_t n_;
    void* plan_;
};

}  // namespace splitlab::detail

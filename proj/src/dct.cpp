#include "splitlab/detail/dct.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <new>
#include <stdexcept>

namespace splitlab::detail {

void fftw_buffer_free(double* p) noexcept { fftw_free(p); }

FftwBuffer make_fftw_buffer(std::size_t n) {
    auto* p = fftw_alloc_real(n);
    if (p == nullptr) throw std::bad_alloc();
    return FftwBuffer(p);
}

namespace {

fftw_plan plan_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, fftw_plan> plans;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = plans.find(n);
    if (it != plans.end()) return it->second;
    auto in = make_fftw_buffer(n);
    auto out = make_fftw_buffer(n);
    fftw_plan p = fftw_plan_r2r_1d(static_cast<int>(n), in.get(), out.get(), FFTW_REDFT00, FFTW_ESTIMATE);
    if (p == nullptr) throw std::runtime_error("FFTW could not create a DCT-I plan");
    plans.emplace(n, p);
    return p;
}

}  // namespace

DctI::DctI(std::size_t n) : n_(n), plan_(plan_for(n)) {}

void DctI::execute(double* in, double* out) const { fftw_execute_r2r(static_cast<fftw_plan>(plan_), in, out); }

}  // namespace splitlab::detail

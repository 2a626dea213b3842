#include "modeforge/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace modeforge::detail {

FftBuffer::FftBuffer(std::size_t count) : count_(count) {
    ptr_ = static_cast<cplx*>(fftw_malloc(sizeof(cplx) * count));
    if (!ptr_) throw std::bad_alloc();
}

FftBuffer::~FftBuffer() { fftw_free(ptr_); }

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_plan plan_for(int ny, int nx, bool inverse) {
    using Key = std::tuple<int, int, bool>;
    static std::map<Key, fftw_plan> cache;  // guarded by planner_mutex

    std::lock_guard<std::mutex> lock(planner_mutex());
    const Key key{ny, nx, inverse};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    FftBuffer scratch(static_cast<std::size_t>(nx) * ny);
    fftw_complex* p = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_2d(ny, nx, p, p, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                      FFTW_ESTIMATE);
    if (!plan) throw std::runtime_error("fftw planning failed");
    cache.emplace(key, plan);
    return plan;
}

}  // namespace

void fft2(int ny, int nx, cplx* inout, bool inverse) {
    fftw_plan plan = plan_for(ny, nx, inverse);
    fftw_complex* p = reinterpret_cast<fftw_complex*>(inout);
    fftw_execute_dft(plan, p, p);
    if (inverse) {
        const double scale = 1.0 / (static_cast<double>(nx) * ny);
        const std::size_t n = static_cast<std::size_t>(nx) * ny;
        for (std::size_t i = 0; i < n; ++i) inout[i] *= scale;
    }
}

}  // namespace modeforge::detail

#pragma once

#include <cstddef>

#include "modeforge/field.hpp"

namespace modeforge::detail {

/// fftw_malloc-backed scratch buffer so cached plans can be executed on it
/// (FFTW requires matching alignment between planning and execution arrays).
class FftBuffer {
  public:
    explicit FftBuffer(std::size_t count);
    ~FftBuffer();
    FftBuffer(const FftBuffer&) = delete;
    FftBuffer& operator=(const FftBuffer&) = delete;

    cplx* data() { return ptr_; }
    std::size_t size() const { return count_; }

  private:
    cplx* ptr_ = nullptr;
    std::size_t count_ = 0;
};

/// In-place 2-D complex DFT on an FftBuffer. Plans are cached per size and
/// created with FFTW_ESTIMATE under a global mutex (the FFTW planner is not
/// thread-safe); execution is safe from concurrent threads. The inverse
/// transform includes the 1/(nx*ny) scale.
void fft2(int ny, int nx, cplx* inout, bool inverse);

}  // namespace modeforge::detail

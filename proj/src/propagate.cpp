#include "modeforge/propagate.hpp"

#include <cmath>
#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

#include "modeforge/fft.hpp"

namespace modeforge {

namespace {

using Transfer = std::shared_ptr<const std::vector<cplx>>;

// H(kx, ky; z) = exp(i z sqrt(k^2 - kx^2 - ky^2)), zero in the evanescent
// region, sampled in FFT index order. Cached: training revisits the same few
// (grid, distance) pairs thousands of times.
Transfer transfer_function(int px, int py, double pitch, double wavelength, double z) {
    using Key = std::tuple<int, int, double, double, double>;
    static std::mutex mutex;
    static std::map<Key, Transfer> cache;  // guarded by mutex

    const Key key{px, py, pitch, wavelength, z};
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    auto h = std::make_shared<std::vector<cplx>>(static_cast<std::size_t>(px) * py);
    const double k = 2.0 * std::numbers::pi / wavelength;
    const double k2 = k * k;
    const double dkx = 2.0 * std::numbers::pi / (px * pitch);
    const double dky = 2.0 * std::numbers::pi / (py * pitch);
    for (int iy = 0; iy < py; ++iy) {
        const double ky = dky * (iy < py / 2 ? iy : iy - py);
        const double ky2 = ky * ky;
        for (int ix = 0; ix < px; ++ix) {
            const double kx = dkx * (ix < px / 2 ? ix : ix - px);
            const double kz2 = k2 - kx * kx - ky2;
            (*h)[static_cast<std::size_t>(iy) * px + ix] =
                kz2 > 0.0 ? std::polar(1.0, z * std::sqrt(kz2)) : cplx(0.0, 0.0);
        }
    }

    std::lock_guard<std::mutex> lock(mutex);
    if (cache.size() > 64) cache.clear();
    return cache.emplace(key, std::move(h)).first->second;
}

}  // namespace

ComplexField propagate(const ComplexField& f, double distance, const PropagationOptions& opt) {
    const int nx = f.grid.nx;
    const int ny = f.grid.ny;
    const int px = opt.zero_pad ? 2 * nx : nx;
    const int py = opt.zero_pad ? 2 * ny : ny;
    const int ox = (px - nx) / 2;
    const int oy = (py - ny) / 2;

    detail::FftBuffer buf(static_cast<std::size_t>(px) * py);
    std::fill(buf.data(), buf.data() + static_cast<std::size_t>(px) * py, cplx(0.0, 0.0));
    for (int iy = 0; iy < ny; ++iy)
        std::memcpy(buf.data() + static_cast<std::size_t>(iy + oy) * px + ox,
                    f.amp.data() + static_cast<std::size_t>(iy) * nx, sizeof(cplx) * nx);

    detail::fft2(py, px, buf.data(), false);
    const Transfer h = transfer_function(px, py, f.grid.pitch, f.grid.wavelength, distance);
    const std::size_t n = static_cast<std::size_t>(px) * py;
    for (std::size_t i = 0; i < n; ++i) buf.data()[i] *= (*h)[i];
    detail::fft2(py, px, buf.data(), true);

    ComplexField out(f.grid);
    for (int iy = 0; iy < ny; ++iy)
        std::memcpy(out.amp.data() + static_cast<std::size_t>(iy) * nx,
                    buf.data() + static_cast<std::size_t>(iy + oy) * px + ox, sizeof(cplx) * nx);
    return out;
}

}  // namespace modeforge

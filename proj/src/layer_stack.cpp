#include "modeforge/layer_stack.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

#include "modeforge/fft.hpp"
#include "modeforge/zernike.hpp"

namespace modeforge {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void PhaseLayerStack::validate() const {
    grid.validate();
    if (spacings.size() != layers.size() + 1)
        throw std::invalid_argument("PhaseLayerStack: need layers+1 spacings");
    for (double s : spacings)
        if (!(s > 0.0)) throw std::invalid_argument("PhaseLayerStack: spacings must be > 0");
    for (const PhaseLayer& l : layers) {
        if (!(l.grid == grid))
            throw std::invalid_argument("PhaseLayerStack: all layers must share the stack grid");
        if (l.phase.size() != grid.size())
            throw std::invalid_argument("PhaseLayerStack: phase raster size mismatch");
    }
}

double PhaseLayerStack::total_length() const {
    double t = 0.0;
    for (double s : spacings) t += s;
    return t;
}

PhaseLayerStack uniform_stack(const GridSpec& grid, int layers, double spacing) {
    PhaseLayerStack s;
    s.grid = grid;
    s.layers.assign(layers, PhaseLayer{grid, std::vector<double>(grid.size(), 0.0)});
    s.spacings.assign(layers + 1, spacing);
    s.validate();
    return s;
}

ComplexField forward(const PhaseLayerStack& stack, const ComplexField& input,
                     const ForwardOptions& opt) {
    if (!(input.grid == stack.grid)) throw std::invalid_argument("forward: grid mismatch");
    const PropagationOptions prop{opt.zero_pad};
    ComplexField field = propagate(input, stack.spacings[0], prop);
    for (std::size_t j = 0; j < stack.layers.size(); ++j) {
        const std::vector<double>& phase = stack.layers[j].phase;
        if (opt.blur_sigma > 0.0) {
            std::vector<cplx> mod(phase.size());
            for (std::size_t i = 0; i < phase.size(); ++i) mod[i] = std::polar(1.0, phase[i]);
            mod = gaussian_blur(mod, stack.grid.nx, stack.grid.ny, opt.blur_sigma);
            for (std::size_t i = 0; i < phase.size(); ++i) field.amp[i] *= mod[i];
        } else {
            for (std::size_t i = 0; i < phase.size(); ++i)
                field.amp[i] *= std::polar(1.0, phase[i]);
        }
        field = propagate(field, stack.spacings[j + 1], prop);
    }
    return field;
}

std::vector<double> lateral_shift(const std::vector<double>& values, const GridSpec& grid,
                                  double dx, double dy) {
    if (dx == 0.0 && dy == 0.0) return values;
    const int nx = grid.nx, ny = grid.ny;
    detail::FftBuffer buf(grid.size());
    for (std::size_t i = 0; i < values.size(); ++i) buf.data()[i] = values[i];
    detail::fft2(ny, nx, buf.data(), false);
    const double dkx = kTwoPi / (nx * grid.pitch);
    const double dky = kTwoPi / (ny * grid.pitch);
    for (int iy = 0; iy < ny; ++iy) {
        const double ky = dky * (iy < ny / 2 ? iy : iy - ny);
        for (int ix = 0; ix < nx; ++ix) {
            const double kx = dkx * (ix < nx / 2 ? ix : ix - nx);
            buf.data()[static_cast<std::size_t>(iy) * nx + ix] *=
                std::polar(1.0, -(kx * dx + ky * dy));
        }
    }
    detail::fft2(ny, nx, buf.data(), true);
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf.data()[i].real();
    return out;
}

std::vector<cplx> gaussian_blur(const std::vector<cplx>& values, int nx, int ny,
                                double sigma_px) {
    if (sigma_px <= 0.0) return values;
    detail::FftBuffer buf(values.size());
    std::memcpy(buf.data(), values.data(), sizeof(cplx) * values.size());
    detail::fft2(ny, nx, buf.data(), false);
    // Frequency response of a unit-DC Gaussian kernel: exp(-sigma^2 kappa^2 / 2)
    // with kappa in radians per pixel.
    for (int iy = 0; iy < ny; ++iy) {
        const double fy = kTwoPi * (iy < ny / 2 ? iy : iy - ny) / ny;
        for (int ix = 0; ix < nx; ++ix) {
            const double fx = kTwoPi * (ix < nx / 2 ? ix : ix - nx) / nx;
            buf.data()[static_cast<std::size_t>(iy) * nx + ix] *=
                std::exp(-0.5 * sigma_px * sigma_px * (fx * fx + fy * fy));
        }
    }
    detail::fft2(ny, nx, buf.data(), true);
    return std::vector<cplx>(buf.data(), buf.data() + values.size());
}

PhaseLayerStack perturb(const PhaseLayerStack& stack, const PerturbationSpec& p) {
    stack.validate();
    if (std::abs(p.dx) >= stack.grid.aperture_x() / 4.0)
        throw std::invalid_argument("perturb: |dx| must be below a quarter aperture");
    for (double s : stack.spacings)
        if (!(s + p.dz > 0.0))
            throw std::invalid_argument("perturb: dz would make a spacing non-positive");
    if (p.gray_levels && *p.gray_levels < 1)
        throw std::invalid_argument("perturb: gray_levels must be >= 1");
    if (p.blur_sigma < 0.0) throw std::invalid_argument("perturb: blur_sigma must be >= 0");

    PhaseLayerStack out = stack;
    const GridSpec& g = stack.grid;

    std::vector<double> zernike_sum;
    if (!p.zernike.empty()) {
        zernike_sum.assign(g.size(), 0.0);
        const double radius = 0.5 * std::min(g.aperture_x(), g.aperture_y());
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix) {
                const double x = g.x(ix), y = g.y(iy);
                const double rho = std::sqrt(x * x + y * y) / radius;
                const double theta = std::atan2(y, x);
                double v = 0.0;
                for (const auto& [idx, coeff] : p.zernike)
                    v += coeff * zernike_noll(idx, rho, theta);
                zernike_sum[static_cast<std::size_t>(iy) * g.nx + ix] = v;
            }
    }

    for (PhaseLayer& layer : out.layers) {
        if (p.dx != 0.0) layer.phase = lateral_shift(layer.phase, g, p.dx);
        if (!zernike_sum.empty())
            for (std::size_t i = 0; i < layer.phase.size(); ++i)
                layer.phase[i] += zernike_sum[i];
        if (p.gray_levels) {
            const int levels = *p.gray_levels;
            for (double& ph : layer.phase) {
                double wrapped = std::fmod(ph, kTwoPi);
                if (wrapped < 0.0) wrapped += kTwoPi;
                int level = static_cast<int>(std::floor(wrapped * levels / kTwoPi));
                level = std::min(level, levels - 1);
                ph = level * kTwoPi / levels;
            }
        }
        if (p.blur_sigma > 0.0) {
            std::vector<cplx> mod(layer.phase.size());
            for (std::size_t i = 0; i < mod.size(); ++i) mod[i] = std::polar(1.0, layer.phase[i]);
            mod = gaussian_blur(mod, g.nx, g.ny, p.blur_sigma);
            for (std::size_t i = 0; i < mod.size(); ++i) layer.phase[i] = std::arg(mod[i]);
        }
    }

    for (double& s : out.spacings) s += p.dz;
    return out;
}

PhaseLayerStack scale_pixels(const PhaseLayerStack& stack, PixelScaleMode mode, int new_n) {
    stack.validate();
    if (new_n < 8 || new_n % 2 != 0)
        throw std::invalid_argument("scale_pixels: new_n must be even and >= 8");

    const GridSpec& g = stack.grid;
    GridSpec ng = g;
    ng.nx = ng.ny = new_n;
    if (mode == PixelScaleMode::FixAperture)
        ng.pitch = g.pitch * g.nx / static_cast<double>(new_n);

    PhaseLayerStack out;
    out.grid = ng;
    out.spacings = stack.spacings;
    out.layers.reserve(stack.layers.size());

    for (const PhaseLayer& layer : stack.layers) {
        PhaseLayer nl{ng, std::vector<double>(ng.size(), 0.0)};
        if (mode == PixelScaleMode::FixAperture) {
            // Nearest neighbor on pixel centers; identity when new_n == nx.
            for (int iy = 0; iy < new_n; ++iy) {
                const int sy = std::min<int>(g.ny - 1, (2 * iy + 1) * g.ny / (2 * new_n));
                for (int ix = 0; ix < new_n; ++ix) {
                    const int sx = std::min<int>(g.nx - 1, (2 * ix + 1) * g.nx / (2 * new_n));
                    nl.phase[static_cast<std::size_t>(iy) * new_n + ix] =
                        layer.phase[static_cast<std::size_t>(sy) * g.nx + sx];
                }
            }
        } else {
            const int off = (new_n - g.nx) / 2;  // negative: crop, positive: pad
            for (int iy = 0; iy < new_n; ++iy) {
                const int sy = iy - off;
                if (sy < 0 || sy >= g.ny) continue;
                for (int ix = 0; ix < new_n; ++ix) {
                    const int sx = ix - off;
                    if (sx < 0 || sx >= g.nx) continue;
                    nl.phase[static_cast<std::size_t>(iy) * new_n + ix] =
                        layer.phase[static_cast<std::size_t>(sy) * g.nx + sx];
                }
            }
        }
        out.layers.push_back(std::move(nl));
    }
    return out;
}

}  // namespace modeforge

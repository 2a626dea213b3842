#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "modeforge/field.hpp"
#include "modeforge/propagate.hpp"

namespace modeforge {

/// One diffractive plane. Phases are stored unwrapped in radians; the
/// applied modulation is exp(i*phase), so only the value mod 2pi matters
/// physically.
struct PhaseLayer {
    GridSpec grid;
    std::vector<double> phase;
};

/// Phase layers interleaved with free-space gaps. spacings holds the gap
/// before the first layer, the gaps between layers, and the gap to the
/// output plane: layers.size() + 1 entries, all positive.
struct PhaseLayerStack {
    GridSpec grid;
    std::vector<PhaseLayer> layers;
    std::vector<double> spacings;  // meters

    void validate() const;
    int layer_count() const { return static_cast<int>(layers.size()); }
    double total_length() const;
};

/// Zero-phase stack with every gap set to `spacing`.
PhaseLayerStack uniform_stack(const GridSpec& grid, int layers, double spacing);

struct ForwardOptions {
    bool zero_pad = true;
    /// Fringe-effect width in pixels; when > 0 each layer's modulation
    /// exp(i*phase) is Gaussian-blurred before being applied.
    double blur_sigma = 0.0;
};

/// Runs the cascade: propagate each gap, multiply each layer's modulation,
/// propagate the final gap. Linear in the input field.
ComplexField forward(const PhaseLayerStack& stack, const ComplexField& input,
                     const ForwardOptions& opt = {});

/// Physical-imperfection transforms, applied in the order dx, zernike,
/// gray_levels, blur_sigma; dz is added to every gap.
struct PerturbationSpec {
    double dx = 0.0;                   // meters, rigid lateral shift of the whole stack
    double dz = 0.0;                   // meters, added to every gap
    std::optional<int> gray_levels;    // SLM lookup-table depth
    double blur_sigma = 0.0;           // pixels
    std::vector<std::pair<int, double>> zernike;  // (noll index, radians)
};

PhaseLayerStack perturb(const PhaseLayerStack& stack, const PerturbationSpec& p);

enum class PixelScaleMode {
    FixAperture,  // resample onto new_n pixels over the same physical aperture
    FixPitch,     // crop / zero-phase-pad to new_n at constant pitch
};

PhaseLayerStack scale_pixels(const PhaseLayerStack& stack, PixelScaleMode mode, int new_n);

/// FFT sub-pixel shift of a real raster by (dx, dy) meters. At integer
/// multiples of the pitch this is an exact circular roll.
std::vector<double> lateral_shift(const std::vector<double>& values, const GridSpec& grid,
                                  double dx, double dy = 0.0);

/// Circular Gaussian convolution, sigma in pixels. The kernel has unit DC
/// gain and is even, so the operation is its own adjoint.
std::vector<cplx> gaussian_blur(const std::vector<cplx>& values, int nx, int ny,
                                double sigma_px);

}  // namespace modeforge

#pragma once

#include "modeforge/field.hpp"

namespace modeforge {

struct PropagationOptions {
    /// Propagate on a 2x zero-padded grid and crop back. Suppresses FFT
    /// wrap-around; energy diffracted past the window is discarded, which is
    /// the model of aperture scatter loss used throughout.
    bool zero_pad = true;
};

/// Angular-spectrum free-space propagation over `distance` meters (negative
/// distance back-propagates). Evanescent spectral components are zeroed, so
/// the operator is unitary on the propagating band and propagate(f, -z) is
/// its exact adjoint.
ComplexField propagate(const ComplexField& f, double distance,
                       const PropagationOptions& opt = {});

}  // namespace modeforge

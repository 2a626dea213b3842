#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "modeforge/tomography.hpp"
#include "modeforge/trainer.hpp"

namespace modeforge {

// --- Deutsch algorithm -----------------------------------------------------

enum class DeutschOracle { Constant, Balanced };
enum class DeutschMode { Ideal, Trained };

struct DeutschResult {
    /// Projections onto |0x0y>, |0x1y>, |1x0y>, |1x1y>. Ideal mode sums to 1;
    /// trained mode leaves `residual` out-of-basis scatter.
    std::array<double, 4> probabilities{};
    double residual = 0.0;
};

/// The compressed oracle-plus-interference unitary (H (x) H) * O loaded on
/// the single gate stage: O = I4 (constant) or CNOT (balanced).
GateSpec deutsch_unitary(DeutschOracle oracle);

DeutschResult deutsch_ideal(DeutschOracle oracle);

/// Runs the prepared superposition (H (x) H)|0x 1y> through a stack trained
/// for deutsch_unitary(oracle) and projects onto the two-qubit basis.
DeutschResult deutsch_trained(DeutschOracle oracle, const PhaseLayerStack& stack,
                              const ModeBasis& basis, const ForwardOptions& fwd = {});

/// Dispatcher matching the protocol surface; throws if mode is Trained and
/// no stack/basis is supplied.
DeutschResult deutsch_run(DeutschOracle oracle, DeutschMode mode,
                          const PhaseLayerStack* stack = nullptr,
                          const ModeBasis* basis = nullptr, const ForwardOptions& fwd = {});

// --- Spacing search (five-point update rules) --------------------------------

struct SpacingSearchConfig {
    double estimated_low = 0.0;   // initial searching range
    double estimated_high = 0.0;
    double range_low = 0.0;       // hard range threshold
    double range_high = 0.0;
    double spacing_threshold = 0.0;  // terminal interval width

    void validate() const;
};

enum class SpacingSearchExit { Converged, RangeThreshold, NoBranchMatched };

struct SpacingSearchStep {
    std::array<double, 5> spacings{};
    std::array<double, 5> visibilities{};
};

struct SpacingSearchResult {
    double best_spacing = 0.0;
    double best_visibility = 0.0;
    std::vector<SpacingSearchStep> steps;
    SpacingSearchExit exit_reason = SpacingSearchExit::Converged;
    double final_range = 0.0;
};

/// Five equally spaced samples per step; a max at the top (bottom) edge with
/// the min at the opposite edge doubles the range upward (downward), an
/// interior max narrows to its neighbors, anything else exits flagged.
/// Terminates when the range drops below spacing_threshold or a sample
/// leaves [range_low, range_high]. Evaluations are memoized per spacing.
SpacingSearchResult spacing_search(const std::function<double(double)>& evaluate,
                                   const SpacingSearchConfig& cfg);

// --- Gate self-identification ------------------------------------------------

struct IdentifyResult {
    int best_index = -1;
    std::vector<double> fidelities;
    bool tie = false;  // another candidate matched the winning fidelity
};

/// One MLE reconstruction, then process fidelity against every candidate's
/// theoretical chi; the argmax is reported (first listed wins ties).
IdentifyResult identify_gate(const TomographyRecord& record,
                             const std::vector<GateSpec>& candidates,
                             const MleOptions& mle = {});

// --- Parameter sweeps ---------------------------------------------------------

enum class SweepAxis {
    Epochs,
    Spacing,
    LayersFixedSpacing,
    LayersFixedTotal,
    PixelsFixAperture,
    PixelsFixPitch,
    GrayLevels,
    ZernikeAmp,
    Dx,
    Dz,
    OffsetSigma,
    EnergyWeight,
};

std::string sweep_axis_name(SweepAxis axis);
SweepAxis sweep_axis_from_name(const std::string& name);

struct SweepPoint {
    double value = 0.0;
    Metrics metrics;
};

struct SweepReport {
    SweepAxis axis = SweepAxis::Epochs;
    std::vector<SweepPoint> points;  // sorted ascending by value
};

struct SweepBase {
    GridSpec grid;
    double waist = 0.0;
    GateSpec gate;
    int layers = 4;
    double spacing = 0.041;
    TrainConfig train;
    std::vector<int> zernike_indices = {4, 15};  // used by the ZernikeAmp axis
};

/// Training axes (epochs, spacing, layer counts, offset_sigma, energy_weight)
/// retrain per point with seed = base seed + point index; perturbation axes
/// (gray, zernike, dx, dz, pixel scaling) train one frozen stack and perturb
/// it per point.
SweepReport run_sweep(SweepAxis axis, const std::vector<double>& points, const SweepBase& base);

}  // namespace modeforge

#pragma once

#include <cstdint>
#include <vector>

#include "modeforge/gates.hpp"
#include "modeforge/layer_stack.hpp"
#include "modeforge/mode_basis.hpp"

namespace modeforge {

struct TrainConfig {
    int epochs = 500;
    double learning_rate = 0.01;
    double energy_weight = 0.0;   // weight of the separate energy-loss term
    double offset_sigma = 0.0;    // meters; one Gaussian lateral offset drawn per epoch
    std::uint64_t seed = 1;
    bool blur_correction = false; // model the fringe blur during training
    double blur_sigma = 0.5;      // pixels, used when blur_correction is set
    bool random_init = false;     // uniform [0, 2pi) phases instead of zeros
    int threads = 1;              // 0 = all cores; reductions stay in state order
    bool zero_pad = true;
};

struct AdamState {
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    long step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Standard bias-corrected Adam update, in place. Moments are lazily sized
/// on the first call; throws on a shape mismatch afterwards.
void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               double learning_rate);

struct Metrics {
    std::vector<double> visibility;   // per input state
    std::vector<double> energy_loss;  // per input state
    double mse = 0.0;

    double mean_visibility() const;
    double min_visibility() const;
    double max_visibility() const;
    double mean_energy_loss() const;
    double min_energy_loss() const;
    double max_energy_loss() const;
};

struct EpochStats {
    int epoch = 0;
    double loss = 0.0;
    double mean_visibility = 0.0;
    double mean_energy_loss = 0.0;
    double wall_ms = 0.0;
};

/// Mean over states of the per-pixel MSE (1/n^2) sum |E - E_hat|^2, plus
/// energy_weight times the mean energy loss 1 - |E|^2 (inputs are assumed
/// unit power, as all encoded probe states are).
double training_loss(const std::vector<ComplexField>& outputs,
                     const std::vector<ComplexField>& targets, double energy_weight);

/// Crosstalk-normalized projection quality for one orthonormal target block:
/// V_i = |<t_i|o_i>|^2 / sum_j |<t_j|o_i>|^2. Invariant under global phases.
std::vector<double> visibility(const std::vector<ComplexField>& outputs,
                               const std::vector<ComplexField>& targets);

/// (|E_in|^2 - |E_out|^2) / |E_in|^2. Throws on zero input power.
double energy_loss(const ComplexField& input, const ComplexField& output);

struct GradientOptions {
    double energy_weight = 0.0;
    double blur_sigma = 0.0;      // > 0 inserts the fringe model in the chain
    double lateral_offset = 0.0;  // meters, rigid stack shift for this evaluation
    bool zero_pad = true;
    int threads = 1;
};

struct GradientResult {
    double loss = 0.0;
    std::vector<std::vector<double>> phase_grad;  // d(loss)/d(phase), per layer
    std::vector<ComplexField> outputs;            // forward fields at the output plane
};

/// Loss and adjoint gradient of the cascade for a batch of input/target
/// pairs. The backward pass reuses the forward propagation with negated
/// distances (the exact adjoint of the padded angular-spectrum operator).
GradientResult stack_gradient(const PhaseLayerStack& stack,
                              const std::vector<ComplexField>& inputs,
                              const std::vector<ComplexField>& targets,
                              const GradientOptions& opt = {});

struct TrainResult {
    PhaseLayerStack stack;
    std::vector<EpochStats> history;
    Metrics final_metrics;  // evaluated at zero offset after training
};

/// Full-batch Adam training of the phase layers against gate * probe-state
/// targets. Probes are the complete MUB set (12 states for d = 3) or the
/// 36-state overcomplete set for d = 4. Bit-reproducible for a fixed seed
/// independent of the thread count.
TrainResult train_d2nn(const GateSpec& gate, const ModeBasis& basis,
                       const PhaseLayerStack& stack0, const TrainConfig& config);

struct WfmOptions {
    int threads = 1;
    bool zero_pad = true;
};

/// Wavefront-matching baseline: per sweep each layer's phase is set from the
/// coherent overlap of forward fields and back-propagated targets, front to
/// back. Layers stay unimodular, so the result is nearly lossless.
TrainResult wfm_train(const GateSpec& gate, const ModeBasis& basis,
                      const PhaseLayerStack& stack0, int iterations,
                      const WfmOptions& opt = {});

/// Forwards every probe state through the stack and reports visibility per
/// state (grouped per orthonormal basis block), energy loss, and MSE.
Metrics evaluate_stack(const PhaseLayerStack& stack, const GateSpec& gate,
                       const ModeBasis& basis, const ForwardOptions& fwd = {},
                       int threads = 1);

/// (inputs, targets) fields for gate training/evaluation: encoded probe
/// states and their gate-mapped images at the measurement plane.
void training_fields(const GateSpec& gate, const ModeBasis& basis,
                     std::vector<ComplexField>& inputs, std::vector<ComplexField>& targets);

}  // namespace modeforge

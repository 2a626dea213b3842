#include "modeforge/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "modeforge/parallel.hpp"
#include "modeforge/propagate.hpp"

namespace modeforge {

namespace {

double vec_mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
}

double vec_min(const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

double vec_max(const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

}  // namespace

double Metrics::mean_visibility() const { return vec_mean(visibility); }
double Metrics::min_visibility() const { return vec_min(visibility); }
double Metrics::max_visibility() const { return vec_max(visibility); }
double Metrics::mean_energy_loss() const { return vec_mean(energy_loss); }
double Metrics::min_energy_loss() const { return vec_min(energy_loss); }
double Metrics::max_energy_loss() const { return vec_max(energy_loss); }

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               double learning_rate) {
    if (params.size() != grads.size()) throw std::invalid_argument("adam_step: shape mismatch");
    if (state.first_moment.empty()) {
        state.first_moment.assign(params.size(), 0.0);
        state.second_moment.assign(params.size(), 0.0);
    }
    if (state.first_moment.size() != params.size())
        throw std::invalid_argument("adam_step: state shape mismatch");

    ++state.step;
    const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        double& m = state.first_moment[i];
        double& v = state.second_moment[i];
        m = state.beta1 * m + (1.0 - state.beta1) * grads[i];
        v = state.beta2 * v + (1.0 - state.beta2) * grads[i] * grads[i];
        params[i] -= learning_rate * (m / c1) / (std::sqrt(v / c2) + state.epsilon);
    }
}

double training_loss(const std::vector<ComplexField>& outputs,
                     const std::vector<ComplexField>& targets, double energy_weight) {
    if (outputs.size() != targets.size() || outputs.empty())
        throw std::invalid_argument("training_loss: list length mismatch");
    double base = 0.0, energy = 0.0;
    for (std::size_t s = 0; s < outputs.size(); ++s) {
        if (!(outputs[s].grid == targets[s].grid))
            throw std::invalid_argument("training_loss: grid mismatch");
        const std::size_t n2 = outputs[s].grid.size();
        double acc = 0.0;
        for (std::size_t i = 0; i < n2; ++i) acc += std::norm(outputs[s].amp[i] - targets[s].amp[i]);
        base += acc / static_cast<double>(n2);
        energy += 1.0 - outputs[s].norm2();
    }
    const double n = static_cast<double>(outputs.size());
    return base / n + energy_weight * energy / n;
}

std::vector<double> visibility(const std::vector<ComplexField>& outputs,
                               const std::vector<ComplexField>& targets) {
    if (outputs.empty() || outputs.size() != targets.size())
        throw std::invalid_argument("visibility: empty or mismatched state sets");
    std::vector<double> v(outputs.size(), 0.0);
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        double self = 0.0, total = 0.0;
        for (std::size_t j = 0; j < targets.size(); ++j) {
            const double p = std::norm(overlap(targets[j], outputs[i]));
            total += p;
            if (j == i) self = p;
        }
        v[i] = total > 0.0 ? self / total : 0.0;
    }
    return v;
}

double energy_loss(const ComplexField& input, const ComplexField& output) {
    const double in2 = input.norm2();
    if (!(in2 > 0.0)) throw std::invalid_argument("energy_loss: zero input power");
    return (in2 - output.norm2()) / in2;
}

namespace {

Metrics metrics_from_outputs(const std::vector<ComplexField>& outputs,
                             const std::vector<ComplexField>& inputs,
                             const std::vector<ComplexField>& targets, int block) {
    if (outputs.size() % block != 0)
        throw std::invalid_argument("metrics: state count not a multiple of the basis block");
    Metrics m;
    for (std::size_t b = 0; b < outputs.size(); b += block) {
        std::vector<ComplexField> ob(outputs.begin() + b, outputs.begin() + b + block);
        std::vector<ComplexField> tb(targets.begin() + b, targets.begin() + b + block);
        for (double v : visibility(ob, tb)) m.visibility.push_back(v);
    }
    for (std::size_t s = 0; s < outputs.size(); ++s)
        m.energy_loss.push_back(energy_loss(inputs[s], outputs[s]));
    m.mse = training_loss(outputs, targets, 0.0);
    return m;
}

}  // namespace

void training_fields(const GateSpec& gate, const ModeBasis& basis,
                     std::vector<ComplexField>& inputs, std::vector<ComplexField>& targets) {
    if (gate.dim() != basis.dim())
        throw std::invalid_argument("training_fields: gate/basis dimension mismatch");
    inputs.clear();
    targets.clear();
    for (const StateVector& s : flatten(probe_set_for_dim(gate.dim()))) {
        inputs.push_back(encode(s, basis));
        targets.push_back(encode(gate.matrix * s, basis));
    }
}

GradientResult stack_gradient(const PhaseLayerStack& stack,
                              const std::vector<ComplexField>& inputs,
                              const std::vector<ComplexField>& targets,
                              const GradientOptions& opt) {
    stack.validate();
    if (inputs.size() != targets.size() || inputs.empty())
        throw std::invalid_argument("stack_gradient: input/target mismatch");
    for (std::size_t s = 0; s < inputs.size(); ++s)
        if (!(inputs[s].grid == stack.grid) || !(targets[s].grid == stack.grid))
            throw std::invalid_argument("stack_gradient: grid mismatch");

    const GridSpec& g = stack.grid;
    const int L = stack.layer_count();
    const std::size_t S = inputs.size();
    const std::size_t n2 = g.size();
    const double pitch2 = g.pitch * g.pitch;
    const PropagationOptions prop{opt.zero_pad};
    const bool blur = opt.blur_sigma > 0.0;

    // Effective per-layer modulation for this evaluation: shifted phase,
    // unimodular exp(i phi), and optionally the fringe-blurred transmission.
    std::vector<std::vector<double>> phi(L);
    std::vector<std::vector<cplx>> mod(L), trans(L);
    for (int j = 0; j < L; ++j) {
        phi[j] = opt.lateral_offset != 0.0
                     ? lateral_shift(stack.layers[j].phase, g, opt.lateral_offset)
                     : stack.layers[j].phase;
        mod[j].resize(n2);
        for (std::size_t i = 0; i < n2; ++i) mod[j][i] = std::polar(1.0, phi[j][i]);
        trans[j] = blur ? gaussian_blur(mod[j], g.nx, g.ny, opt.blur_sigma) : mod[j];
    }

    std::vector<std::vector<std::vector<double>>> grads(S);
    std::vector<ComplexField> outputs(S);
    std::vector<double> base_terms(S), energy_terms(S);

    parallel_for(S, opt.threads, [&](std::size_t s) {
        std::vector<ComplexField> pre(L);  // field arriving at each layer
        ComplexField field = propagate(inputs[s], stack.spacings[0], prop);
        for (int j = 0; j < L; ++j) {
            pre[j] = field;
            for (std::size_t i = 0; i < n2; ++i) field.amp[i] = pre[j].amp[i] * trans[j][i];
            field = propagate(field, stack.spacings[j + 1], prop);
        }

        double acc = 0.0;
        for (std::size_t i = 0; i < n2; ++i) acc += std::norm(field.amp[i] - targets[s].amp[i]);
        base_terms[s] = acc / static_cast<double>(n2);
        energy_terms[s] = 1.0 - field.norm2();

        // Adjoint seed dL/dE* for the mean of both loss terms over states.
        ComplexField adj(g);
        const double base_c = 1.0 / (static_cast<double>(S) * n2);
        const double energy_c = opt.energy_weight * pitch2 / static_cast<double>(S);
        for (std::size_t i = 0; i < n2; ++i)
            adj.amp[i] = base_c * (field.amp[i] - targets[s].amp[i]) - energy_c * field.amp[i];

        grads[s].assign(L, std::vector<double>(n2));
        for (int j = L - 1; j >= 0; --j) {
            adj = propagate(adj, -stack.spacings[j + 1], prop);
            std::vector<cplx> gt(n2);
            for (std::size_t i = 0; i < n2; ++i) gt[i] = adj.amp[i] * std::conj(pre[j].amp[i]);
            const std::vector<cplx> gm = blur ? gaussian_blur(gt, g.nx, g.ny, opt.blur_sigma)
                                              : std::move(gt);
            for (std::size_t i = 0; i < n2; ++i)
                grads[s][j][i] = 2.0 * std::imag(gm[i] * std::conj(mod[j][i]));
            for (std::size_t i = 0; i < n2; ++i) adj.amp[i] *= std::conj(trans[j][i]);
        }
        outputs[s] = std::move(field);
    });

    GradientResult r;
    r.outputs = std::move(outputs);
    r.loss = vec_mean(base_terms) + opt.energy_weight * vec_mean(energy_terms);
    r.phase_grad.assign(L, std::vector<double>(n2, 0.0));
    for (std::size_t s = 0; s < S; ++s)  // fixed reduction order: seed-reproducible
        for (int j = 0; j < L; ++j)
            for (std::size_t i = 0; i < n2; ++i) r.phase_grad[j][i] += grads[s][j][i];
    if (opt.lateral_offset != 0.0)
        for (int j = 0; j < L; ++j)
            r.phase_grad[j] = lateral_shift(r.phase_grad[j], g, -opt.lateral_offset);
    return r;
}

TrainResult train_d2nn(const GateSpec& gate, const ModeBasis& basis,
                       const PhaseLayerStack& stack0, const TrainConfig& config) {
    if (gate.dim() != basis.dim())
        throw std::invalid_argument("train_d2nn: gate/basis dimension mismatch");
    if (config.epochs < 1) throw std::invalid_argument("train_d2nn: epochs must be >= 1");
    if (!(config.learning_rate > 0.0))
        throw std::invalid_argument("train_d2nn: learning_rate must be > 0");
    stack0.validate();

    std::vector<ComplexField> inputs, targets;
    training_fields(gate, basis, inputs, targets);

    PhaseLayerStack stack = stack0;
    std::mt19937_64 rng(config.seed);
    if (config.random_init) {
        std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
        for (PhaseLayer& l : stack.layers)
            for (double& p : l.phase) p = uni(rng);
    }

    const int L = stack.layer_count();
    const std::size_t n2 = stack.grid.size();
    std::vector<double> params(L * n2), grad_flat(L * n2);
    for (int j = 0; j < L; ++j)
        std::copy(stack.layers[j].phase.begin(), stack.layers[j].phase.end(),
                  params.begin() + j * n2);

    AdamState adam;
    GradientOptions gopt;
    gopt.energy_weight = config.energy_weight;
    gopt.blur_sigma = config.blur_correction ? config.blur_sigma : 0.0;
    gopt.zero_pad = config.zero_pad;
    gopt.threads = config.threads;

    std::normal_distribution<double> gauss(0.0, 1.0);
    TrainResult result;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        gopt.lateral_offset = config.offset_sigma * gauss(rng);

        GradientResult gr = stack_gradient(stack, inputs, targets, gopt);
        Metrics m = metrics_from_outputs(gr.outputs, inputs, targets, basis.dim());

        for (int j = 0; j < L; ++j)
            std::copy(gr.phase_grad[j].begin(), gr.phase_grad[j].end(),
                      grad_flat.begin() + j * n2);
        adam_step(params, grad_flat, adam, config.learning_rate);
        for (int j = 0; j < L; ++j)
            std::copy(params.begin() + j * n2, params.begin() + (j + 1) * n2,
                      stack.layers[j].phase.begin());

        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        result.history.push_back(
            {epoch, gr.loss, m.mean_visibility(), m.mean_energy_loss(), ms});
    }

    result.stack = std::move(stack);
    result.final_metrics = evaluate_stack(result.stack, gate, basis,
                                          {config.zero_pad, gopt.blur_sigma}, config.threads);
    return result;
}

TrainResult wfm_train(const GateSpec& gate, const ModeBasis& basis,
                      const PhaseLayerStack& stack0, int iterations, const WfmOptions& opt) {
    if (gate.dim() != basis.dim())
        throw std::invalid_argument("wfm_train: gate/basis dimension mismatch");
    if (iterations < 1) throw std::invalid_argument("wfm_train: iterations must be >= 1");
    stack0.validate();

    std::vector<ComplexField> inputs, targets;
    training_fields(gate, basis, inputs, targets);

    PhaseLayerStack stack = stack0;
    const GridSpec& g = stack.grid;
    const int L = stack.layer_count();
    const std::size_t S = inputs.size();
    const std::size_t n2 = g.size();
    const PropagationOptions prop{opt.zero_pad};

    TrainResult result;
    for (int iter = 1; iter <= iterations; ++iter) {
        const auto t0 = std::chrono::steady_clock::now();

        // Desired field just after each layer, from the targets pulled
        // backward through the current later layers.
        std::vector<std::vector<ComplexField>> back(S, std::vector<ComplexField>(L));
        parallel_for(S, opt.threads, [&](std::size_t s) {
            ComplexField b = propagate(targets[s], -stack.spacings[L], prop);
            back[s][L - 1] = b;
            for (int j = L - 1; j >= 1; --j) {
                for (std::size_t i = 0; i < n2; ++i)
                    b.amp[i] *= std::polar(1.0, -stack.layers[j].phase[i]);
                b = propagate(b, -stack.spacings[j], prop);
                back[s][j - 1] = b;
            }
        });

        std::vector<ComplexField> fwd(S);
        parallel_for(S, opt.threads,
                     [&](std::size_t s) { fwd[s] = propagate(inputs[s], stack.spacings[0], prop); });

        for (int j = 0; j < L; ++j) {
            std::vector<cplx> sum(n2, cplx(0.0, 0.0));
            for (std::size_t s = 0; s < S; ++s)  // fixed order
                for (std::size_t i = 0; i < n2; ++i)
                    sum[i] += std::conj(fwd[s].amp[i]) * back[s][j].amp[i];
            for (std::size_t i = 0; i < n2; ++i) stack.layers[j].phase[i] = std::arg(sum[i]);

            parallel_for(S, opt.threads, [&](std::size_t s) {
                for (std::size_t i = 0; i < n2; ++i)
                    fwd[s].amp[i] *= std::polar(1.0, stack.layers[j].phase[i]);
                fwd[s] = propagate(fwd[s], stack.spacings[j + 1], prop);
            });
        }

        Metrics m = metrics_from_outputs(fwd, inputs, targets, basis.dim());
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        result.history.push_back({iter, m.mse, m.mean_visibility(), m.mean_energy_loss(), ms});
    }

    result.stack = std::move(stack);
    result.final_metrics =
        evaluate_stack(result.stack, gate, basis, {opt.zero_pad, 0.0}, opt.threads);
    return result;
}

Metrics evaluate_stack(const PhaseLayerStack& stack, const GateSpec& gate,
                       const ModeBasis& basis, const ForwardOptions& fwd, int threads) {
    std::vector<ComplexField> inputs, targets;
    training_fields(gate, basis, inputs, targets);
    std::vector<ComplexField> outputs(inputs.size());
    parallel_for(inputs.size(), threads,
                 [&](std::size_t s) { outputs[s] = forward(stack, inputs[s], fwd); });
    return metrics_from_outputs(outputs, inputs, targets, basis.dim());
}

}  // namespace modeforge

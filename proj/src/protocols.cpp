#include "modeforge/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace modeforge {

// --- Deutsch ---------------------------------------------------------------

GateSpec deutsch_unitary(DeutschOracle oracle) {
    const GateSpec h2 = standard_gate("H2D");
    const GateSpec o = standard_gate(oracle == DeutschOracle::Constant ? "I4" : "CNOT");
    GateSpec u = compose({tensor_product(h2, h2), o});
    u.name = oracle == DeutschOracle::Constant ? "(HxH)I4" : "(HxH)CNOT";
    return u;
}

namespace {

StateVector deutsch_prepared_state() {
    // (H (x) H) |0>_x |1>_y, the post-preparation superposition.
    const GateSpec h2 = standard_gate("H2D");
    StateVector e01 = StateVector::Zero(4);
    e01(1) = 1.0;
    return kron(h2.matrix, h2.matrix) * e01;
}

}  // namespace

DeutschResult deutsch_ideal(DeutschOracle oracle) {
    const GateSpec o = standard_gate(oracle == DeutschOracle::Constant ? "I4" : "CNOT");
    const GateSpec h2 = standard_gate("H2D");
    const Eigen::MatrixXcd hh = kron(h2.matrix, h2.matrix);
    const StateVector out = hh * (o.matrix * deutsch_prepared_state());
    DeutschResult r;
    for (int k = 0; k < 4; ++k) r.probabilities[k] = std::norm(out(k));
    r.residual = 0.0;
    return r;
}

DeutschResult deutsch_trained(DeutschOracle /*oracle*/, const PhaseLayerStack& stack,
                              const ModeBasis& basis, const ForwardOptions& fwd) {
    if (basis.dim() != 4)
        throw std::invalid_argument("deutsch_trained: needs the two-qubit mode basis");
    const ComplexField prepared = encode(deutsch_prepared_state(), basis);
    const ComplexField out = forward(stack, prepared, fwd);
    const Eigen::VectorXcd c = decode(out, basis).coeffs;
    DeutschResult r;
    double total = 0.0;
    for (int k = 0; k < 4; ++k) {
        r.probabilities[k] = std::norm(c(k));
        total += r.probabilities[k];
    }
    r.residual = 1.0 - total;
    return r;
}

DeutschResult deutsch_run(DeutschOracle oracle, DeutschMode mode, const PhaseLayerStack* stack,
                          const ModeBasis* basis, const ForwardOptions& fwd) {
    if (mode == DeutschMode::Ideal) return deutsch_ideal(oracle);
    if (!stack || !basis)
        throw std::invalid_argument("deutsch_run: trained mode requires a trained stack");
    return deutsch_trained(oracle, *stack, *basis, fwd);
}

// --- Spacing search ----------------------------------------------------------

void SpacingSearchConfig::validate() const {
    if (!(estimated_low < estimated_high))
        throw std::invalid_argument("spacing_search: estimated range must be increasing");
    if (!(range_low < range_high))
        throw std::invalid_argument("spacing_search: range threshold must be increasing");
    if (!(spacing_threshold > 0.0))
        throw std::invalid_argument("spacing_search: spacing threshold must be > 0");
}

SpacingSearchResult spacing_search(const std::function<double(double)>& evaluate,
                                   const SpacingSearchConfig& cfg) {
    cfg.validate();
    std::map<double, double> memo;
    auto eval = [&](double s) {
        auto it = memo.find(s);
        if (it != memo.end()) return it->second;
        const double v = evaluate(s);
        memo.emplace(s, v);
        return v;
    };

    SpacingSearchResult result;
    double lo = cfg.estimated_low, hi = cfg.estimated_high;
    while (true) {
        std::array<double, 5> s{};
        for (int m = 0; m < 5; ++m) s[m] = lo + m * (hi - lo) / 4.0;

        if (s[0] <= cfg.range_low || s[4] >= cfg.range_high) {
            result.exit_reason = SpacingSearchExit::RangeThreshold;
            break;
        }
        if (hi - lo <= cfg.spacing_threshold) {
            result.exit_reason = SpacingSearchExit::Converged;
            break;
        }

        SpacingSearchStep step;
        step.spacings = s;
        for (int m = 0; m < 5; ++m) step.visibilities[m] = eval(s[m]);
        result.steps.push_back(step);

        const auto& v = step.visibilities;
        const int imin = static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
        const int imax = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
        if (imin == 0 && imax == 4) {
            hi = s[0] + 2.0 * (s[4] - s[0]);  // extend upward, keep the lower anchor
        } else if (imin == 4 && imax == 0) {
            lo = s[4] - 2.0 * (s[4] - s[0]);  // mirrored: extend downward
        } else if (imax > 0 && imax < 4) {
            lo = s[imax - 1];
            hi = s[imax + 1];
        } else {
            // Edge max without the opposite-edge min: the update rules do not
            // cover this pattern, so stop rather than guess.
            result.exit_reason = SpacingSearchExit::NoBranchMatched;
            break;
        }
    }

    result.final_range = hi - lo;
    if (memo.empty()) {
        result.best_spacing = 0.5 * (lo + hi);
        result.best_visibility = 0.0;
    } else {
        auto best = memo.begin();
        for (auto it = memo.begin(); it != memo.end(); ++it)
            if (it->second > best->second) best = it;
        result.best_spacing = best->first;
        result.best_visibility = best->second;
    }
    return result;
}

// --- Gate identification -------------------------------------------------------

IdentifyResult identify_gate(const TomographyRecord& record,
                             const std::vector<GateSpec>& candidates, const MleOptions& mle) {
    if (candidates.empty()) throw std::invalid_argument("identify_gate: empty candidate list");
    for (const GateSpec& c : candidates)
        if (c.dim() != record.dim)
            throw std::invalid_argument("identify_gate: candidate dimension mismatch");

    const MleResult rec = mle_reconstruct(record, mle);
    const OperatorBasis basis = default_basis_for_dim(record.dim);
    const ProcessMatrix chi_e = chi_from_choi(rec.choi, basis);

    IdentifyResult out;
    out.fidelities.reserve(candidates.size());
    for (const GateSpec& c : candidates) {
        const ProcessMatrix chi_t = chi_from_choi(choi_from_unitary(c.matrix), basis);
        out.fidelities.push_back(process_fidelity(chi_t, chi_e));
    }
    out.best_index = static_cast<int>(
        std::max_element(out.fidelities.begin(), out.fidelities.end()) - out.fidelities.begin());
    for (std::size_t i = 0; i < out.fidelities.size(); ++i)
        if (static_cast<int>(i) != out.best_index &&
            std::abs(out.fidelities[i] - out.fidelities[out.best_index]) < 1e-12)
            out.tie = true;
    return out;
}

// --- Sweeps ----------------------------------------------------------------------

std::string sweep_axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Epochs: return "epochs";
        case SweepAxis::Spacing: return "spacing";
        case SweepAxis::LayersFixedSpacing: return "layers_fixed_spacing";
        case SweepAxis::LayersFixedTotal: return "layers_fixed_total";
        case SweepAxis::PixelsFixAperture: return "pixels_fix_aperture";
        case SweepAxis::PixelsFixPitch: return "pixels_fix_pitch";
        case SweepAxis::GrayLevels: return "gray_levels";
        case SweepAxis::ZernikeAmp: return "zernike_amp";
        case SweepAxis::Dx: return "dx";
        case SweepAxis::Dz: return "dz";
        case SweepAxis::OffsetSigma: return "offset_sigma";
        case SweepAxis::EnergyWeight: return "energy_weight";
    }
    throw std::invalid_argument("sweep_axis_name: unknown axis");
}

SweepAxis sweep_axis_from_name(const std::string& name) {
    for (SweepAxis a :
         {SweepAxis::Epochs, SweepAxis::Spacing, SweepAxis::LayersFixedSpacing,
          SweepAxis::LayersFixedTotal, SweepAxis::PixelsFixAperture, SweepAxis::PixelsFixPitch,
          SweepAxis::GrayLevels, SweepAxis::ZernikeAmp, SweepAxis::Dx, SweepAxis::Dz,
          SweepAxis::OffsetSigma, SweepAxis::EnergyWeight})
        if (sweep_axis_name(a) == name) return a;
    throw std::invalid_argument("run_sweep: unknown axis '" + name + "'");
}

namespace {

bool is_training_axis(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Epochs:
        case SweepAxis::Spacing:
        case SweepAxis::LayersFixedSpacing:
        case SweepAxis::LayersFixedTotal:
        case SweepAxis::OffsetSigma:
        case SweepAxis::EnergyWeight:
            return true;
        default:
            return false;
    }
}

}  // namespace

SweepReport run_sweep(SweepAxis axis, const std::vector<double>& points, const SweepBase& base) {
    if (points.empty()) throw std::invalid_argument("run_sweep: no sample points");
    std::vector<double> sorted = points;
    std::sort(sorted.begin(), sorted.end());

    SweepReport report;
    report.axis = axis;

    const ModeBasis basis = basis_for_dim(base.grid, base.waist, base.gate.dim());
    const ForwardOptions fwd{base.train.zero_pad,
                             base.train.blur_correction ? base.train.blur_sigma : 0.0};

    if (is_training_axis(axis)) {
        for (std::size_t idx = 0; idx < sorted.size(); ++idx) {
            const double value = sorted[idx];
            TrainConfig cfg = base.train;
            cfg.seed = base.train.seed + idx;
            int layers = base.layers;
            double spacing = base.spacing;
            switch (axis) {
                case SweepAxis::Epochs: cfg.epochs = static_cast<int>(std::lround(value)); break;
                case SweepAxis::Spacing: spacing = value; break;
                case SweepAxis::LayersFixedSpacing:
                    layers = static_cast<int>(std::lround(value));
                    break;
                case SweepAxis::LayersFixedTotal: {
                    layers = static_cast<int>(std::lround(value));
                    const double total = base.spacing * (base.layers + 1);
                    spacing = total / (layers + 1);
                    break;
                }
                case SweepAxis::OffsetSigma: cfg.offset_sigma = value; break;
                case SweepAxis::EnergyWeight: cfg.energy_weight = value; break;
                default: break;
            }
            const PhaseLayerStack stack0 = uniform_stack(base.grid, layers, spacing);
            TrainResult tr = train_d2nn(base.gate, basis, stack0, cfg);
            report.points.push_back({value, std::move(tr.final_metrics)});
        }
        return report;
    }

    // Perturbation axes evaluate one frozen trained stack.
    const PhaseLayerStack stack0 = uniform_stack(base.grid, base.layers, base.spacing);
    const TrainResult trained = train_d2nn(base.gate, basis, stack0, base.train);

    for (double value : sorted) {
        Metrics metrics;
        switch (axis) {
            case SweepAxis::GrayLevels: {
                PerturbationSpec p;
                p.gray_levels = static_cast<int>(std::lround(value));
                metrics = evaluate_stack(perturb(trained.stack, p), base.gate, basis, fwd,
                                         base.train.threads);
                break;
            }
            case SweepAxis::ZernikeAmp: {
                PerturbationSpec p;
                for (int idx : base.zernike_indices) p.zernike.emplace_back(idx, value);
                metrics = evaluate_stack(perturb(trained.stack, p), base.gate, basis, fwd,
                                         base.train.threads);
                break;
            }
            case SweepAxis::Dx: {
                PerturbationSpec p;
                p.dx = value;
                metrics = evaluate_stack(perturb(trained.stack, p), base.gate, basis, fwd,
                                         base.train.threads);
                break;
            }
            case SweepAxis::Dz: {
                PerturbationSpec p;
                p.dz = value;
                metrics = evaluate_stack(perturb(trained.stack, p), base.gate, basis, fwd,
                                         base.train.threads);
                break;
            }
            case SweepAxis::PixelsFixAperture:
            case SweepAxis::PixelsFixPitch: {
                const PixelScaleMode mode = axis == SweepAxis::PixelsFixAperture
                                                ? PixelScaleMode::FixAperture
                                                : PixelScaleMode::FixPitch;
                const PhaseLayerStack scaled =
                    scale_pixels(trained.stack, mode, static_cast<int>(std::lround(value)));
                const ModeBasis scaled_basis =
                    basis_for_dim(scaled.grid, base.waist, base.gate.dim());
                metrics = evaluate_stack(scaled, base.gate, scaled_basis, fwd,
                                         base.train.threads);
                break;
            }
            default:
                throw std::invalid_argument("run_sweep: unhandled axis");
        }
        report.points.push_back({value, std::move(metrics)});
    }
    return report;
}

}  // namespace modeforge

#pragma once

#include <filesystem>
#include <vector>

#include "modeforge/layer_stack.hpp"
#include "modeforge/protocols.hpp"
#include "modeforge/tomography.hpp"
#include "modeforge/trainer.hpp"

namespace modeforge {

/// Field file: one JSON header line {nx, ny, pitch_m, wavelength_m} followed
/// by row-major (re, im) little-endian float64 pairs.
void save_field(const ComplexField& field, const std::filesystem::path& path);
ComplexField load_field(const std::filesystem::path& path);

/// Stack persistence: JSON manifest {version, grid, wavelength_m, spacings_m,
/// layers} plus one raw little-endian float64 file of radians per layer,
/// written beside the manifest. Round trips are bit-exact.
void save_stack(const PhaseLayerStack& stack, const std::filesystem::path& manifest_path);
PhaseLayerStack load_stack(const std::filesystem::path& manifest_path);

/// CSV rows (probe_index, projector_index, frequency) with a header line.
void save_record_csv(const TomographyRecord& record, const std::filesystem::path& path);
/// Rebuilds a record from its CSV using the standard probe/projector sets
/// for the dimension.
TomographyRecord load_record_csv(const std::filesystem::path& path, int dim);

void save_chi_json(const ProcessMatrix& chi, const std::filesystem::path& path);

/// Gate matrices as nested [re, im] arrays.
void save_gate_json(const GateSpec& gate, const std::filesystem::path& path);
GateSpec load_gate_json(const std::filesystem::path& path);

/// Per-epoch CSV: epoch, loss, mean_visibility, mean_energy_loss, wall_ms.
void save_history_csv(const std::vector<EpochStats>& history, const std::filesystem::path& path);

void save_metrics_json(const Metrics& metrics, const std::filesystem::path& path);

/// Per-axis CSV: point_value, mean/min/max visibility, mean/min/max energy loss.
void save_sweep_csv(const SweepReport& report, const std::filesystem::path& path);

}  // namespace modeforge

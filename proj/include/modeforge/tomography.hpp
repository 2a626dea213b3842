#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "modeforge/gates.hpp"
#include "modeforge/layer_stack.hpp"
#include "modeforge/mode_basis.hpp"

namespace modeforge {

/// Probe preparations and projective analysis outcomes of one process
/// tomography run. Probes and projectors are grouped per orthonormal basis;
/// each basis is a complete measurement, and frequencies are normalized so
/// every probe's row sums to 1 (each basis block carries weight 1/n_bases).
struct TomographyRecord {
    int dim = 0;
    std::vector<std::vector<StateVector>> probe_bases;
    std::vector<std::vector<StateVector>> projector_bases;
    Eigen::MatrixXd frequencies;  // n_probes x n_projectors, flattened block order

    int n_probes() const { return static_cast<int>(frequencies.rows()); }
    int n_projectors() const { return static_cast<int>(frequencies.cols()); }
    int n_projector_bases() const { return static_cast<int>(projector_bases.size()); }
    void validate() const;
};

/// Statistics of the ideal channel rho -> U rho U†, bypassing the optics.
/// With `shots` set, per-basis multinomial sampling with the given seed.
TomographyRecord simulate_tomography(const GateSpec& gate,
                                     const std::vector<std::vector<StateVector>>& probes,
                                     const std::vector<std::vector<StateVector>>& projectors,
                                     std::optional<long> shots = std::nullopt,
                                     std::uint64_t seed = 1);

/// Statistics of the simulated optical channel: probes are encoded, pushed
/// through the stack, decoded, and projected; frequencies are normalized
/// within each analysis basis as a heralded measurement would be.
TomographyRecord simulate_tomography(const PhaseLayerStack& stack, const ModeBasis& basis,
                                     const std::vector<std::vector<StateVector>>& probes,
                                     const std::vector<std::vector<StateVector>>& projectors,
                                     std::optional<long> shots = std::nullopt,
                                     std::uint64_t seed = 1, const ForwardOptions& fwd = {},
                                     int threads = 1);

/// Choi operator E on H (x) K (input space first); trace-preserving maps
/// satisfy Tr_K(E) = I_H.
struct ChoiOperator {
    int dim_in = 0;
    int dim_out = 0;
    Eigen::MatrixXcd matrix;

    double trace_preservation_error() const;  // max|Tr_K(E) - I|
    double min_eigenvalue() const;
};

ChoiOperator choi_from_unitary(const Eigen::MatrixXcd& u);

struct MleIterationDiagnostics {
    double tp_error = 0.0;
    double min_eigenvalue = 0.0;
    double delta = 0.0;  // max|E_{i+1} - E_i|
};

struct MleResult {
    ChoiOperator choi;
    int iterations = 0;
    bool converged = false;
    std::vector<MleIterationDiagnostics> diagnostics;  // filled when requested
};

struct MleOptions {
    int max_iters = 5000;
    double tol = 1e-10;
    bool record_diagnostics = false;
};

/// Maximum-likelihood channel reconstruction by the symmetric fixed-point
/// iteration E <- Lambda^-1 R E R Lambda^-1 with R = sum (f/p) rho^T (x) Pi
/// and lambda = sqrt(Tr_K(R E R)), starting from E_0 = I / d_K. Every
/// iterate stays positive semidefinite and trace-preserving by construction.
MleResult mle_reconstruct(const TomographyRecord& record, const MleOptions& opt = {});

enum class OperatorBasis { GellMann3, TwoQubitPauli };

/// Process matrix in an operator basis scaled so that trace-preserving maps
/// have Tr(chi) = 1 and unitary channels are rank-1 with unit fidelity to
/// themselves. GellMann3: identity then the eight Gell-Mann matrices;
/// TwoQubitPauli: {I,X,Y,Z} (x) {I,X,Y,Z} row-major.
struct ProcessMatrix {
    int dim = 0;
    OperatorBasis basis = OperatorBasis::GellMann3;
    Eigen::MatrixXcd chi;
};

ProcessMatrix chi_from_choi(const ChoiOperator& choi, OperatorBasis basis);

OperatorBasis default_basis_for_dim(int dim);

/// F = Tr(chi_t chi_e); in [0, 1] when chi_t is a unitary (pure) process.
double process_fidelity(const ProcessMatrix& theory, const ProcessMatrix& estimate);

/// Mean over all (probe, projector) cells of the squared frequency error.
double tomography_mse(const TomographyRecord& a, const TomographyRecord& b);

}  // namespace modeforge

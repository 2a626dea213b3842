#pragma once

#include <string>
#include <vector>

#include "modeforge/field.hpp"
#include "modeforge/gates.hpp"

namespace modeforge {

/// Orthonormal spatial-mode encoding of the computational basis. Modes are
/// individually unit-norm; the Gram matrix is the identity to within the
/// grid discretization (2e-3 off-diagonal).
struct ModeBasis {
    GridSpec grid;
    std::vector<ComplexField> modes;
    std::vector<std::string> labels;

    int dim() const { return static_cast<int>(modes.size()); }
};

/// 3-D basis: LG_0^{-2}, LG_1^{0}, LG_0^{+2} mapped to |0>, |1>, |2>.
ModeBasis lg3_basis(const GridSpec& grid, double waist);

/// Two-qubit OAM coding: l = -1, +1, -3, +3 (p = 0) mapped to
/// |00>, |01>, |10>, |11>.
ModeBasis oam4_basis(const GridSpec& grid, double waist);

ModeBasis basis_for_dim(const GridSpec& grid, double waist, int dim);

Eigen::MatrixXcd gram(const ModeBasis& basis);

/// Superposition field sum_k s_k * mode_k.
ComplexField encode(const StateVector& state, const ModeBasis& basis);

struct DecodeResult {
    Eigen::VectorXcd coeffs;  // raw projections <mode_k|field>
    double residual;          // power outside the basis span: |f|^2 - sum|c|^2

    /// Unit-norm state from the projections (for round-trip comparisons).
    StateVector normalized() const;
};

DecodeResult decode(const ComplexField& field, const ModeBasis& basis);

}  // namespace modeforge

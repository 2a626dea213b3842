#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace modeforge {

using StateVector = Eigen::VectorXcd;

struct GateSpec {
    std::string name;
    Eigen::MatrixXcd matrix;

    int dim() const { return static_cast<int>(matrix.rows()); }
};

/// max|U†U - I|; the unitarity invariant asserts this <= 1e-12.
double unitarity_error(const Eigen::MatrixXcd& u);

/// Named gates: X0/X1/X2 (3-D cyclic shifts, column convention X1|0> = |2>),
/// H0..H3 (3-D Hadamards, omega = exp(2 pi i / 3)), CNOT on the OAM coding
/// |00>,|01>,|10>,|11> = |-1>,|+1>,|-3>,|+3>, I4, and H2D (qubit Hadamard).
/// Throws std::invalid_argument for unknown names.
GateSpec standard_gate(const std::string& name);

/// Mutually unbiased bases as unit column vectors, grouped per basis.
/// d=3: 4 bases of 3 (columns of H0..H3, 12 states); d=2: 3 bases of 2.
std::vector<std::vector<StateVector>> mub_states(int d);

/// 36-state overcomplete set for d=4: columns of C (x) C, grouped into the
/// 9 orthonormal 4-blocks formed by pairs of 2-D bases.
std::vector<std::vector<StateVector>> overcomplete_4d();

/// Probe/analysis set used for training and tomography at dimension d.
std::vector<std::vector<StateVector>> probe_set_for_dim(int d);

std::vector<StateVector> flatten(const std::vector<std::vector<StateVector>>& grouped);

/// Matrix product in the listed order: compose({A, B}) = A * B, so the
/// rightmost gate acts first, as in written operator products.
GateSpec compose(const std::vector<GateSpec>& gates);

GateSpec tensor_product(const GateSpec& a, const GateSpec& b);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace modeforge

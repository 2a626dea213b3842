#include "modeforge/gates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "modeforge/field.hpp"

namespace modeforge {

namespace {

Eigen::MatrixXcd hadamard3(int which) {
    const cplx w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const cplx w2 = w * w;
    Eigen::MatrixXcd h(3, 3);
    switch (which) {
        case 0: return Eigen::MatrixXcd::Identity(3, 3);
        case 1: h << 1, 1, 1, 1, w, w2, 1, w2, w; break;
        case 2: h << 1, 1, 1, w, w2, 1, w, 1, w2; break;
        case 3: h << 1, 1, 1, w2, 1, w, w2, w, 1; break;
        default: throw std::invalid_argument("hadamard3: index out of range");
    }
    return h / std::sqrt(3.0);
}

Eigen::MatrixXcd shift3(int times) {
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(3, 3);
    x << 0, 1, 0, 0, 0, 1, 1, 0, 0;
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(3, 3);
    for (int i = 0; i < times; ++i) r = x * r;
    return r;
}

// 2x6 matrix of the three qubit MUBs (computational, diagonal, circular).
Eigen::MatrixXcd qubit_mubs() {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd c(2, 6);
    c << cplx(1), cplx(0), cplx(s), cplx(s), cplx(s), cplx(s),
         cplx(0), cplx(1), cplx(s), cplx(-s), cplx(0, s), cplx(0, -s);
    return c;
}

}  // namespace

double unitarity_error(const Eigen::MatrixXcd& u) {
    Eigen::MatrixXcd d = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.cols(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

GateSpec standard_gate(const std::string& name) {
    if (name == "X0") return {name, shift3(0)};
    if (name == "X1") return {name, shift3(1)};
    if (name == "X2") return {name, shift3(2)};
    if (name == "H0") return {name, hadamard3(0)};
    if (name == "H1") return {name, hadamard3(1)};
    if (name == "H2") return {name, hadamard3(2)};
    if (name == "H3") return {name, hadamard3(3)};
    if (name == "I4") return {name, Eigen::MatrixXcd::Identity(4, 4)};
    if (name == "CNOT") {
        // Control = OAM sign, target = OAM order: |10> <-> |11| swap.
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
        m(0, 0) = 1;
        m(1, 1) = 1;
        m(2, 3) = 1;
        m(3, 2) = 1;
        return {name, m};
    }
    if (name == "H2D") {
        Eigen::MatrixXcd m(2, 2);
        m << 1, 1, 1, -1;
        return {name, m / std::sqrt(2.0)};
    }
    throw std::invalid_argument("standard_gate: unknown gate '" + name + "'");
}

std::vector<std::vector<StateVector>> mub_states(int d) {
    std::vector<std::vector<StateVector>> out;
    if (d == 3) {
        for (int b = 0; b < 4; ++b) {
            Eigen::MatrixXcd h = hadamard3(b);
            std::vector<StateVector> basis;
            for (int c = 0; c < 3; ++c) basis.push_back(h.col(c));
            out.push_back(std::move(basis));
        }
    } else if (d == 2) {
        Eigen::MatrixXcd c = qubit_mubs();
        for (int b = 0; b < 3; ++b) {
            std::vector<StateVector> basis;
            basis.push_back(c.col(2 * b));
            basis.push_back(c.col(2 * b + 1));
            out.push_back(std::move(basis));
        }
    } else {
        throw std::invalid_argument("mub_states: only d = 2 and d = 3 are supported");
    }
    return out;
}

std::vector<std::vector<StateVector>> overcomplete_4d() {
    const Eigen::MatrixXcd c = qubit_mubs();
    std::vector<std::vector<StateVector>> out;
    for (int ba = 0; ba < 3; ++ba)
        for (int bb = 0; bb < 3; ++bb) {
            std::vector<StateVector> block;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    StateVector s(4);
                    const auto a = c.col(2 * ba + i);
                    const auto b = c.col(2 * bb + j);
                    s << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
                    block.push_back(std::move(s));
                }
            out.push_back(std::move(block));
        }
    return out;
}

std::vector<std::vector<StateVector>> probe_set_for_dim(int d) {
    if (d == 4) return overcomplete_4d();
    return mub_states(d);
}

std::vector<StateVector> flatten(const std::vector<std::vector<StateVector>>& grouped) {
    std::vector<StateVector> out;
    for (const auto& block : grouped)
        for (const auto& s : block) out.push_back(s);
    return out;
}

GateSpec compose(const std::vector<GateSpec>& gates) {
    if (gates.empty()) throw std::invalid_argument("compose: empty gate list");
    Eigen::MatrixXcd m = gates.front().matrix;
    std::string name = gates.front().name;
    for (std::size_t i = 1; i < gates.size(); ++i) {
        if (gates[i].dim() != m.rows()) throw std::invalid_argument("compose: dimension mismatch");
        m = m * gates[i].matrix;
        name += "*" + gates[i].name;
    }
    return {name, std::move(m)};
}

GateSpec tensor_product(const GateSpec& a, const GateSpec& b) {
    return {a.name + "(x)" + b.name, kron(a.matrix, b.matrix)};
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace modeforge

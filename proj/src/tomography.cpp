#include "modeforge/tomography.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <stdexcept>

#include "modeforge/parallel.hpp"

namespace modeforge {

namespace {

Eigen::MatrixXcd partial_trace_out(const Eigen::MatrixXcd& e, int d_in, int d_out) {
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(d_in, d_in);
    for (int h1 = 0; h1 < d_in; ++h1)
        for (int h2 = 0; h2 < d_in; ++h2)
            for (int k = 0; k < d_out; ++k) t(h1, h2) += e(h1 * d_out + k, h2 * d_out + k);
    return t;
}

// Multinomial draw via a binomial chain; deterministic for a fixed rng state.
std::vector<long> multinomial(std::mt19937_64& rng, const std::vector<double>& probs,
                              long shots) {
    std::vector<long> counts(probs.size(), 0);
    long remaining = shots;
    double rem_p = 1.0;
    for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
        if (remaining <= 0 || rem_p <= 0.0) break;
        double q = probs[k] / rem_p;
        q = std::clamp(q, 0.0, 1.0);
        std::binomial_distribution<long> bin(remaining, q);
        counts[k] = bin(rng);
        remaining -= counts[k];
        rem_p -= probs[k];
    }
    counts.back() += remaining;
    return counts;
}

// Per-basis renormalization (each analysis basis is a complete measurement),
// then 1/n_bases so each probe row sums to one; optional sampling noise.
void fill_frequencies(TomographyRecord& rec,
                      const std::vector<std::vector<double>>& block_probs_per_probe,
                      std::optional<long> shots, std::uint64_t seed) {
    const int n_bases = rec.n_projector_bases();
    std::mt19937_64 rng(seed);
    for (int m = 0; m < rec.n_probes(); ++m) {
        int col = 0;
        int block_index = 0;
        for (const auto& basis : rec.projector_bases) {
            const int d = static_cast<int>(basis.size());
            std::vector<double> q(d);
            double sum = 0.0;
            for (int n = 0; n < d; ++n) {
                q[n] = block_probs_per_probe[m][col + n];
                sum += q[n];
            }
            for (int n = 0; n < d; ++n) q[n] = sum > 0.0 ? q[n] / sum : 1.0 / d;
            if (shots) {
                const std::vector<long> counts = multinomial(rng, q, *shots);
                for (int n = 0; n < d; ++n)
                    q[n] = static_cast<double>(counts[n]) / static_cast<double>(*shots);
            }
            for (int n = 0; n < d; ++n) rec.frequencies(m, col + n) = q[n] / n_bases;
            col += d;
            ++block_index;
        }
    }
}

int total_states(const std::vector<std::vector<StateVector>>& grouped) {
    int n = 0;
    for (const auto& b : grouped) n += static_cast<int>(b.size());
    return n;
}

}  // namespace

void TomographyRecord::validate() const {
    if (frequencies.rows() != total_states(probe_bases) ||
        frequencies.cols() != total_states(projector_bases))
        throw std::invalid_argument("TomographyRecord: frequency shape mismatch");
    for (int m = 0; m < n_probes(); ++m) {
        const double row = frequencies.row(m).sum();
        if (std::abs(row - 1.0) > 1e-9)
            throw std::invalid_argument("TomographyRecord: probe rows must sum to 1");
    }
}

TomographyRecord simulate_tomography(const GateSpec& gate,
                                     const std::vector<std::vector<StateVector>>& probes,
                                     const std::vector<std::vector<StateVector>>& projectors,
                                     std::optional<long> shots, std::uint64_t seed) {
    const int d = gate.dim();
    for (const auto& b : probes)
        for (const auto& s : b)
            if (s.size() != d) throw std::invalid_argument("simulate_tomography: probe dim");
    for (const auto& b : projectors)
        for (const auto& s : b)
            if (s.size() != d) throw std::invalid_argument("simulate_tomography: projector dim");

    TomographyRecord rec;
    rec.dim = d;
    rec.probe_bases = probes;
    rec.projector_bases = projectors;
    rec.frequencies.resize(total_states(probes), total_states(projectors));

    const std::vector<StateVector> flat_probes = flatten(probes);
    const std::vector<StateVector> flat_proj = flatten(projectors);
    std::vector<std::vector<double>> probs(flat_probes.size(),
                                           std::vector<double>(flat_proj.size()));
    for (std::size_t m = 0; m < flat_probes.size(); ++m) {
        const StateVector out = gate.matrix * flat_probes[m];
        for (std::size_t n = 0; n < flat_proj.size(); ++n)
            probs[m][n] = std::norm(flat_proj[n].dot(out));  // Eigen dot conjugates the lhs
    }
    fill_frequencies(rec, probs, shots, seed);
    return rec;
}

TomographyRecord simulate_tomography(const PhaseLayerStack& stack, const ModeBasis& basis,
                                     const std::vector<std::vector<StateVector>>& probes,
                                     const std::vector<std::vector<StateVector>>& projectors,
                                     std::optional<long> shots, std::uint64_t seed,
                                     const ForwardOptions& fwd, int threads) {
    const int d = basis.dim();
    TomographyRecord rec;
    rec.dim = d;
    rec.probe_bases = probes;
    rec.projector_bases = projectors;
    rec.frequencies.resize(total_states(probes), total_states(projectors));

    const std::vector<StateVector> flat_probes = flatten(probes);
    const std::vector<StateVector> flat_proj = flatten(projectors);
    for (const auto& s : flat_probes)
        if (s.size() != d) throw std::invalid_argument("simulate_tomography: probe dim");
    for (const auto& s : flat_proj)
        if (s.size() != d) throw std::invalid_argument("simulate_tomography: projector dim");

    std::vector<std::vector<double>> probs(flat_probes.size(),
                                           std::vector<double>(flat_proj.size()));
    parallel_for(flat_probes.size(), threads, [&](std::size_t m) {
        const ComplexField out = forward(stack, encode(flat_probes[m], basis), fwd);
        const Eigen::VectorXcd c = decode(out, basis).coeffs;
        for (std::size_t n = 0; n < flat_proj.size(); ++n)
            probs[m][n] = std::norm(flat_proj[n].dot(c));
    });
    fill_frequencies(rec, probs, shots, seed);
    return rec;
}

double ChoiOperator::trace_preservation_error() const {
    const Eigen::MatrixXcd t = partial_trace_out(matrix, dim_in, dim_out) -
                               Eigen::MatrixXcd::Identity(dim_in, dim_in);
    return t.cwiseAbs().maxCoeff();
}

double ChoiOperator::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (matrix + matrix.adjoint()));
    return es.eigenvalues().minCoeff();
}

ChoiOperator choi_from_unitary(const Eigen::MatrixXcd& u) {
    const int d = static_cast<int>(u.rows());
    Eigen::VectorXcd phi(d * d);
    for (int h = 0; h < d; ++h)
        for (int k = 0; k < d; ++k) phi(h * d + k) = u(k, h);
    ChoiOperator e;
    e.dim_in = e.dim_out = d;
    e.matrix = phi * phi.adjoint();
    return e;
}

MleResult mle_reconstruct(const TomographyRecord& record, const MleOptions& opt) {
    record.validate();
    const int d = record.dim;
    const int dd = d * d;
    const int n_bases = record.n_projector_bases();

    const std::vector<StateVector> probes = flatten(record.probe_bases);
    const std::vector<StateVector> projectors = flatten(record.projector_bases);

    // K_mn = rho_m^T (x) Pi_n / n_bases, fixed through the iteration.
    std::vector<Eigen::MatrixXcd> kernels;
    kernels.reserve(probes.size() * projectors.size());
    for (const StateVector& psi : probes) {
        const StateVector psi_c = psi.conjugate();
        const Eigen::MatrixXcd rho_t = psi_c * psi_c.adjoint();
        for (const StateVector& pi : projectors)
            kernels.push_back(kron(rho_t, (pi * pi.adjoint()) / n_bases));
    }

    Eigen::MatrixXcd e = Eigen::MatrixXcd::Identity(dd, dd) / d;
    MleResult result;
    for (int iter = 1; iter <= opt.max_iters; ++iter) {
        Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(dd, dd);
        std::size_t k = 0;
        for (int m = 0; m < record.n_probes(); ++m)
            for (int n = 0; n < record.n_projectors(); ++n, ++k) {
                const double f = record.frequencies(m, n);
                if (f <= 0.0) continue;
                double p = (e.cwiseProduct(kernels[k].transpose())).sum().real();
                p = std::max(p, 1e-12);  // guard against division blow-up
                r += (f / p) * kernels[k];
            }

        const Eigen::MatrixXcd rer = r * e * r;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(partial_trace_out(rer, d, d));
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(1e-30);
        const Eigen::MatrixXcd lambda_inv = es.eigenvectors() *
                                            ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                                            es.eigenvectors().adjoint();
        const Eigen::MatrixXcd big_lambda_inv =
            kron(lambda_inv, Eigen::MatrixXcd::Identity(d, d));
        Eigen::MatrixXcd next = big_lambda_inv * rer * big_lambda_inv;
        next = 0.5 * (next + next.adjoint());

        const double delta = (next - e).cwiseAbs().maxCoeff();
        e = std::move(next);
        result.iterations = iter;

        if (opt.record_diagnostics) {
            ChoiOperator probe{d, d, e};
            result.diagnostics.push_back(
                {probe.trace_preservation_error(), probe.min_eigenvalue(), delta});
        }
        if (delta < opt.tol) {
            result.converged = true;
            break;
        }
    }

    result.choi = ChoiOperator{d, d, std::move(e)};
    return result;
}

namespace {

std::vector<Eigen::MatrixXcd> orthonormal_operator_basis(OperatorBasis basis) {
    const cplx i(0.0, 1.0);
    std::vector<Eigen::MatrixXcd> out;
    if (basis == OperatorBasis::GellMann3) {
        auto m = [](std::initializer_list<cplx> v) {
            Eigen::MatrixXcd h(3, 3);
            int k = 0;
            for (cplx c : v) h(k / 3, k % 3) = c, ++k;
            return h;
        };
        out.push_back(Eigen::MatrixXcd::Identity(3, 3) / std::sqrt(3.0));
        const double s2 = std::sqrt(2.0);
        out.push_back(m({0, 1, 0, 1, 0, 0, 0, 0, 0}) / s2);
        out.push_back(m({0, -i, 0, i, 0, 0, 0, 0, 0}) / s2);
        out.push_back(m({1, 0, 0, 0, -1, 0, 0, 0, 0}) / s2);
        out.push_back(m({0, 0, 1, 0, 0, 0, 1, 0, 0}) / s2);
        out.push_back(m({0, 0, -i, 0, 0, 0, i, 0, 0}) / s2);
        out.push_back(m({0, 0, 0, 0, 0, 1, 0, 1, 0}) / s2);
        out.push_back(m({0, 0, 0, 0, 0, -i, 0, i, 0}) / s2);
        const double s3 = std::sqrt(3.0);
        out.push_back(m({1 / s3, 0, 0, 0, 1 / s3, 0, 0, 0, -2 / s3}) / s2);
    } else {
        Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
        Eigen::MatrixXcd x(2, 2), y(2, 2), z(2, 2);
        x << 0, 1, 1, 0;
        y << 0, -i, i, 0;
        z << 1, 0, 0, -1;
        const std::vector<Eigen::MatrixXcd> pauli{id, x, y, z};
        for (const auto& a : pauli)
            for (const auto& b : pauli) out.push_back(kron(a, b) / 2.0);
    }
    return out;
}

}  // namespace

OperatorBasis default_basis_for_dim(int dim) {
    if (dim == 3) return OperatorBasis::GellMann3;
    if (dim == 4) return OperatorBasis::TwoQubitPauli;
    throw std::invalid_argument("default_basis_for_dim: only d = 3 and d = 4");
}

ProcessMatrix chi_from_choi(const ChoiOperator& choi, OperatorBasis basis) {
    const int d = choi.dim_in;
    if ((basis == OperatorBasis::GellMann3 && d != 3) ||
        (basis == OperatorBasis::TwoQubitPauli && d != 4))
        throw std::invalid_argument("chi_from_choi: basis/dimension mismatch");
    const std::vector<Eigen::MatrixXcd> ops = orthonormal_operator_basis(basis);

    // chi = V† E V / d with V's columns v_m[(h,k)] = (E_m)_{k,h}; the 1/d
    // makes Tr(chi) = 1 for trace-preserving maps.
    Eigen::MatrixXcd v(d * d, ops.size());
    for (std::size_t m = 0; m < ops.size(); ++m)
        for (int h = 0; h < d; ++h)
            for (int k = 0; k < d; ++k) v(h * d + k, m) = ops[m](k, h);

    ProcessMatrix chi;
    chi.dim = d;
    chi.basis = basis;
    chi.chi = (v.adjoint() * choi.matrix * v) / d;
    return chi;
}

double process_fidelity(const ProcessMatrix& theory, const ProcessMatrix& estimate) {
    if (theory.dim != estimate.dim || theory.basis != estimate.basis)
        throw std::invalid_argument("process_fidelity: basis mismatch");
    return (theory.chi * estimate.chi).trace().real();
}

double tomography_mse(const TomographyRecord& a, const TomographyRecord& b) {
    if (a.frequencies.rows() != b.frequencies.rows() ||
        a.frequencies.cols() != b.frequencies.cols())
        throw std::invalid_argument("tomography_mse: shape mismatch");
    return (a.frequencies - b.frequencies).array().square().mean();
}

}  // namespace modeforge

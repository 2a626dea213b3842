#include "modeforge/mode_basis.hpp"

#include <stdexcept>

namespace modeforge {

ModeBasis lg3_basis(const GridSpec& grid, double waist) {
    ModeBasis b;
    b.grid = grid;
    b.modes = {lg_mode({ModeFamily::LaguerreGaussian, -2, 0, waist}, grid),
               lg_mode({ModeFamily::LaguerreGaussian, 0, 1, waist}, grid),
               lg_mode({ModeFamily::LaguerreGaussian, 2, 0, waist}, grid)};
    b.labels = {"|0>", "|1>", "|2>"};
    return b;
}

ModeBasis oam4_basis(const GridSpec& grid, double waist) {
    ModeBasis b;
    b.grid = grid;
    b.modes = {lg_mode({ModeFamily::LaguerreGaussian, -1, 0, waist}, grid),
               lg_mode({ModeFamily::LaguerreGaussian, +1, 0, waist}, grid),
               lg_mode({ModeFamily::LaguerreGaussian, -3, 0, waist}, grid),
               lg_mode({ModeFamily::LaguerreGaussian, +3, 0, waist}, grid)};
    b.labels = {"|00>", "|01>", "|10>", "|11>"};
    return b;
}

ModeBasis basis_for_dim(const GridSpec& grid, double waist, int dim) {
    if (dim == 3) return lg3_basis(grid, waist);
    if (dim == 4) return oam4_basis(grid, waist);
    throw std::invalid_argument("basis_for_dim: only dimensions 3 and 4 are encoded");
}

Eigen::MatrixXcd gram(const ModeBasis& basis) {
    const int d = basis.dim();
    Eigen::MatrixXcd g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = overlap(basis.modes[i], basis.modes[j]);
    return g;
}

ComplexField encode(const StateVector& state, const ModeBasis& basis) {
    if (state.size() != basis.dim()) throw std::invalid_argument("encode: dimension mismatch");
    ComplexField f(basis.grid);
    for (int k = 0; k < basis.dim(); ++k) {
        const cplx c = state(k);
        if (c == cplx(0.0, 0.0)) continue;
        const ComplexField& m = basis.modes[k];
        for (std::size_t i = 0; i < f.amp.size(); ++i) f.amp[i] += c * m.amp[i];
    }
    return f;
}

DecodeResult decode(const ComplexField& field, const ModeBasis& basis) {
    if (!(field.grid == basis.grid)) throw std::invalid_argument("decode: grid mismatch");
    DecodeResult r;
    r.coeffs.resize(basis.dim());
    for (int k = 0; k < basis.dim(); ++k) r.coeffs(k) = overlap(basis.modes[k], field);
    r.residual = field.norm2() - r.coeffs.squaredNorm();
    return r;
}

StateVector DecodeResult::normalized() const {
    const double n = coeffs.norm();
    if (n == 0.0) throw std::domain_error("DecodeResult: zero projection, cannot normalize");
    return coeffs / n;
}

}  // namespace modeforge

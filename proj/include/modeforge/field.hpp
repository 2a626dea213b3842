#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace modeforge {

using cplx = std::complex<double>;

/// Sampling geometry of a square-pixel grid. Physical coordinates are
/// centered on pixel (nx/2, ny/2) so the optical axis coincides with the
/// FFT origin after shifting.
struct GridSpec {
    int nx = 0;
    int ny = 0;
    double pitch = 0.0;       // meters per pixel
    double wavelength = 0.0;  // meters

    void validate() const;  // throws std::invalid_argument on bad geometry

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    double x(int ix) const { return (ix - nx / 2) * pitch; }
    double y(int iy) const { return (iy - ny / 2) * pitch; }
    double aperture_x() const { return nx * pitch; }
    double aperture_y() const { return ny * pitch; }

    bool operator==(const GridSpec&) const = default;
};

/// Sampled scalar field. Amplitudes are row-major with index iy*nx + ix.
/// The L2 norm carries the pitch^2 area element, so unit-norm fields hold
/// unit optical power regardless of sampling.
struct ComplexField {
    GridSpec grid;
    std::vector<cplx> amp;

    ComplexField() = default;
    explicit ComplexField(const GridSpec& g) : grid(g), amp(g.size(), cplx(0.0, 0.0)) {}

    cplx& at(int ix, int iy) { return amp[static_cast<std::size_t>(iy) * grid.nx + ix]; }
    const cplx& at(int ix, int iy) const { return amp[static_cast<std::size_t>(iy) * grid.nx + ix]; }

    double norm2() const;  // sum |a|^2 * pitch^2
    double norm() const;
    ComplexField& operator*=(cplx s);
    ComplexField& operator+=(const ComplexField& other);  // grids must match
};

/// Discrete <a|b> = sum conj(a)*b*pitch^2. Throws on grid mismatch.
cplx overlap(const ComplexField& a, const ComplexField& b);

enum class ModeFamily { LaguerreGaussian };

struct ModeSpec {
    ModeFamily family = ModeFamily::LaguerreGaussian;
    int l = 0;           // azimuthal order (OAM charge)
    int p = 0;           // radial order, >= 0
    double waist = 0.0;  // meters
};

/// Normalized Laguerre-Gaussian mode sampled at its waist plane. The field
/// is renormalized to unit L2 norm on the grid; if more than 1e-3 of the
/// analytic mode energy falls outside the aperture, throws std::domain_error.
ComplexField lg_mode(const ModeSpec& spec, const GridSpec& grid);

/// Generalized Laguerre polynomial L_p^alpha(x) by the standard recurrence.
double laguerre(int p, int alpha, double x);

}  // namespace modeforge

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "modeforge/field.hpp"
#include "modeforge/gates.hpp"
#include "modeforge/mode_basis.hpp"
#include "modeforge/propagate.hpp"

using namespace modeforge;

namespace {

const GridSpec kDesk{128, 128, 24e-6, 1550e-9};
constexpr double kWaist = 0.35e-3;

ComplexField random_field(const GridSpec& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexField f(g);
    for (cplx& a : f.amp) a = cplx(gauss(rng), gauss(rng));
    f *= cplx(1.0 / f.norm(), 0.0);
    return f;
}

// Beam radius from the intensity second moment: w = sqrt(2 <r^2>) for a
// Gaussian, independent of the propagation model under test.
double second_moment_radius(const ComplexField& f) {
    double power = 0.0, r2 = 0.0;
    for (int iy = 0; iy < f.grid.ny; ++iy)
        for (int ix = 0; ix < f.grid.nx; ++ix) {
            const double i = std::norm(f.at(ix, iy));
            const double x = f.grid.x(ix), y = f.grid.y(iy);
            power += i;
            r2 += i * (x * x + y * y);
        }
    return std::sqrt(2.0 * r2 / power);
}

}  // namespace

TEST_CASE("fundamental LG mode is a unit-norm centered Gaussian") {
    const ComplexField f = lg_mode({ModeFamily::LaguerreGaussian, 0, 0, kWaist}, kDesk);
    CHECK(f.norm() == doctest::Approx(1.0).epsilon(1e-6));
    // real positive everywhere, peak on the axis
    double peak = 0.0;
    int peak_ix = -1, peak_iy = -1;
    for (int iy = 0; iy < kDesk.ny; ++iy)
        for (int ix = 0; ix < kDesk.nx; ++ix) {
            CHECK(f.at(ix, iy).imag() == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(f.at(ix, iy).real() >= 0.0);
            if (f.at(ix, iy).real() > peak) {
                peak = f.at(ix, iy).real();
                peak_ix = ix;
                peak_iy = iy;
            }
        }
    CHECK(peak_ix == kDesk.nx / 2);
    CHECK(peak_iy == kDesk.ny / 2);
}

TEST_CASE("distinct LG modes are orthogonal on the grid") {
    const ComplexField a = lg_mode({ModeFamily::LaguerreGaussian, -2, 0, kWaist}, kDesk);
    const ComplexField b = lg_mode({ModeFamily::LaguerreGaussian, 0, 1, kWaist}, kDesk);
    CHECK(std::abs(overlap(a, b)) < 1e-6);

    const ComplexField c = lg_mode({ModeFamily::LaguerreGaussian, 0, 0, kWaist}, kDesk);
    const ComplexField d = lg_mode({ModeFamily::LaguerreGaussian, 1, 0, kWaist}, kDesk);
    CHECK(std::abs(overlap(c, d)) < 1e-6);
}

TEST_CASE("phase winds by 2 pi l around the axis") {
    const ComplexField f = lg_mode({ModeFamily::LaguerreGaussian, 2, 0, kWaist}, kDesk);
    const double r = kWaist;  // ring of peak intensity for l=2
    const int steps = 720;
    double total = 0.0, prev = 0.0;
    for (int k = 0; k <= steps; ++k) {
        const double ang = 2.0 * std::numbers::pi * k / steps;
        const int ix = kDesk.nx / 2 + static_cast<int>(std::lround(r * std::cos(ang) / kDesk.pitch));
        const int iy = kDesk.ny / 2 + static_cast<int>(std::lround(r * std::sin(ang) / kDesk.pitch));
        const double ph = std::arg(f.at(ix, iy));
        if (k > 0) {
            double d = ph - prev;
            while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
            while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
            total += d;
        }
        prev = ph;
    }
    CHECK(total == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("aperture-too-small mode generation throws") {
    GridSpec tiny{32, 32, 24e-6, 1550e-9};  // 0.77 mm aperture
    CHECK_THROWS_AS(lg_mode({ModeFamily::LaguerreGaussian, 2, 0, 0.4e-3}, tiny),
                    std::domain_error);
}

TEST_CASE("overlap: self-overlap, conjugate symmetry, grid mismatch") {
    const ComplexField f = lg_mode({ModeFamily::LaguerreGaussian, -2, 0, kWaist}, kDesk);
    CHECK(std::abs(overlap(f, f) - cplx(1.0, 0.0)) < 1e-9);

    const ComplexField g = random_field(kDesk, 7);
    const cplx ab = overlap(f, g);
    const cplx ba = overlap(g, f);
    CHECK(std::abs(ab - std::conj(ba)) < 1e-12);

    GridSpec other = kDesk;
    other.nx = other.ny = 64;
    CHECK_THROWS_AS(overlap(f, ComplexField(other)), std::invalid_argument);
}

TEST_CASE("LG working-basis Gram matrix is the identity within 2e-3") {
    for (int dim : {3, 4}) {
        const ModeBasis basis = basis_for_dim(kDesk, kWaist, dim);
        const Eigen::MatrixXcd g = gram(basis);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                const double expect = i == j ? 1.0 : 0.0;
                CHECK(std::abs(g(i, j) - cplx(expect, 0.0)) < 2e-3);
            }
    }
}

TEST_CASE("cross-MUB encoded overlaps obey the 1/3 law on the grid") {
    const ModeBasis basis = lg3_basis(kDesk, kWaist);
    const auto mubs = mub_states(3);
    const ComplexField a = encode(mubs[0][0], basis);
    const ComplexField b = encode(mubs[1][2], basis);
    const ComplexField c = encode(mubs[2][1], basis);
    CHECK(std::norm(overlap(a, b)) == doctest::Approx(1.0 / 3.0).epsilon(2e-3));
    CHECK(std::norm(overlap(a, c)) == doctest::Approx(1.0 / 3.0).epsilon(2e-3));
    CHECK(std::norm(overlap(b, c)) == doctest::Approx(1.0 / 3.0).epsilon(2e-3));
}

TEST_CASE("zero-distance propagation is the identity") {
    const ComplexField f = lg_mode({ModeFamily::LaguerreGaussian, 2, 0, kWaist}, kDesk);
    const ComplexField out = propagate(f, 0.0);
    double max_err = 0.0;
    for (std::size_t i = 0; i < f.amp.size(); ++i)
        max_err = std::max(max_err, std::abs(out.amp[i] - f.amp[i]));
    CHECK(max_err < 1e-12);
}

TEST_CASE("propagation conserves the norm of a contained beam") {
    const ComplexField f = lg_mode({ModeFamily::LaguerreGaussian, -2, 0, kWaist}, kDesk);
    CHECK(propagate(f, 41e-3).norm() == doctest::Approx(f.norm()).epsilon(1e-9));
}

TEST_CASE("Gaussian beam expansion matches the analytic radius law") {
    GridSpec g{256, 256, 40e-6, 1550e-9};
    const double w0 = 0.5e-3;
    const double zr = std::numbers::pi * w0 * w0 / g.wavelength;
    const ComplexField f = lg_mode({ModeFamily::LaguerreGaussian, 0, 0, w0}, g);
    for (double frac : {0.5, 1.0, 2.0}) {
        const double z = frac * zr;
        const ComplexField out = propagate(f, z);
        const double expected = w0 * std::sqrt(1.0 + (z / zr) * (z / zr));
        CHECK(second_moment_radius(out) == doctest::Approx(expected).epsilon(0.01));
        CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("propagation is linear in the field") {
    const ComplexField a = random_field(kDesk, 1);
    const ComplexField b = random_field(kDesk, 2);
    const cplx alpha(0.3, -0.8), beta(-1.1, 0.25);
    ComplexField sum(kDesk);
    for (std::size_t i = 0; i < sum.amp.size(); ++i)
        sum.amp[i] = alpha * a.amp[i] + beta * b.amp[i];

    const ComplexField lhs = propagate(sum, 17e-3);
    const ComplexField pa = propagate(a, 17e-3);
    const ComplexField pb = propagate(b, 17e-3);
    double max_err = 0.0;
    for (std::size_t i = 0; i < lhs.amp.size(); ++i)
        max_err = std::max(max_err,
                           std::abs(lhs.amp[i] - (alpha * pa.amp[i] + beta * pb.amp[i])));
    CHECK(max_err < 1e-10);
}

TEST_CASE("back-propagation is the adjoint of propagation") {
    const ComplexField a = random_field(kDesk, 3);
    const ComplexField b = random_field(kDesk, 4);
    const cplx lhs = overlap(propagate(a, 23e-3), b);
    const cplx rhs = overlap(a, propagate(b, -23e-3));
    CHECK(std::abs(lhs - rhs) < 1e-9);
}

TEST_CASE("propagation composes over distances") {
    const ComplexField f = lg_mode({ModeFamily::LaguerreGaussian, 0, 1, 0.3e-3}, kDesk);
    const ComplexField two_step = propagate(propagate(f, 20e-3), 21e-3);
    const ComplexField one_step = propagate(f, 41e-3);
    double err2 = 0.0;
    for (std::size_t i = 0; i < f.amp.size(); ++i)
        err2 += std::norm(two_step.amp[i] - one_step.amp[i]);
    CHECK(std::sqrt(err2) * kDesk.pitch < 1e-9);  // physical L2 of the difference
}

TEST_CASE("grid validation rejects bad geometry") {
    CHECK_THROWS_AS((GridSpec{6, 6, 24e-6, 1550e-9}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{128, 127, 24e-6, 1550e-9}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{128, 128, 0.0, 1550e-9}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{128, 128, 24e-6, -1.0}).validate(), std::invalid_argument);
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "modeforge/layer_stack.hpp"
#include "modeforge/mode_basis.hpp"
#include "modeforge/trainer.hpp"
#include "modeforge/zernike.hpp"

using namespace modeforge;

namespace {

const GridSpec kDesk{128, 128, 24e-6, 1550e-9};
constexpr double kWaist = 0.35e-3;

double phys_l2_diff(const ComplexField& a, const ComplexField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.amp.size(); ++i) s += std::norm(a.amp[i] - b.amp[i]);
    return std::sqrt(s) * a.grid.pitch;
}

PhaseLayerStack random_stack(const GridSpec& g, int layers, double spacing, unsigned seed) {
    PhaseLayerStack s = uniform_stack(g, layers, spacing);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
    for (PhaseLayer& l : s.layers)
        for (double& p : l.phase) p = uni(rng);
    return s;
}

}  // namespace

TEST_CASE("zero-phase cascade equals free propagation over the total length") {
    const PhaseLayerStack stack = uniform_stack(kDesk, 4, 2e-3);
    const ComplexField in = lg_mode({ModeFamily::LaguerreGaussian, -2, 0, 0.25e-3}, kDesk);
    const ComplexField through = forward(stack, in);
    const ComplexField direct = propagate(in, stack.total_length());
    CHECK(phys_l2_diff(through, direct) < 1e-10);
}

TEST_CASE("constant layer phases contribute one global phase per layer") {
    PhaseLayerStack stack = uniform_stack(kDesk, 3, 30e-3);
    const double c = 0.7;
    for (PhaseLayer& l : stack.layers)
        for (double& p : l.phase) p = c;
    const ComplexField in = lg_mode({ModeFamily::LaguerreGaussian, 0, 1, 0.3e-3}, kDesk);
    ComplexField expected = forward(uniform_stack(kDesk, 3, 30e-3), in);
    expected *= std::polar(1.0, 3.0 * c);
    CHECK(phys_l2_diff(forward(stack, in), expected) < 1e-10);
}

TEST_CASE("forward is linear in the input field") {
    const PhaseLayerStack stack = random_stack(kDesk, 2, 20e-3, 11);
    const ComplexField a = lg_mode({ModeFamily::LaguerreGaussian, -2, 0, kWaist}, kDesk);
    const ComplexField b = lg_mode({ModeFamily::LaguerreGaussian, 2, 0, kWaist}, kDesk);
    const cplx alpha(0.6, 0.2), beta(-0.3, 0.7);
    ComplexField sum(kDesk);
    for (std::size_t i = 0; i < sum.amp.size(); ++i)
        sum.amp[i] = alpha * a.amp[i] + beta * b.amp[i];
    const ComplexField lhs = forward(stack, sum);
    const ComplexField fa = forward(stack, a);
    const ComplexField fb = forward(stack, b);
    ComplexField rhs(kDesk);
    for (std::size_t i = 0; i < rhs.amp.size(); ++i)
        rhs.amp[i] = alpha * fa.amp[i] + beta * fb.amp[i];
    CHECK(phys_l2_diff(lhs, rhs) < 1e-10);
}

TEST_CASE("unimodular layers never gain power; generous apertures stay lossless") {
    const ComplexField in = lg_mode({ModeFamily::LaguerreGaussian, 2, 0, 0.3e-3}, kDesk);
    const PhaseLayerStack wild = random_stack(kDesk, 4, 41e-3, 5);
    CHECK(forward(wild, in).norm() <= in.norm() + 1e-9);

    const PhaseLayerStack clear = uniform_stack(kDesk, 4, 41e-3);
    CHECK(energy_loss(in, forward(clear, in)) <= 1e-6);
}

TEST_CASE("identity perturbation leaves the stack bit-for-bit unchanged") {
    const PhaseLayerStack stack = random_stack(kDesk, 3, 41e-3, 2);
    const PhaseLayerStack same = perturb(stack, PerturbationSpec{});
    CHECK(same.spacings == stack.spacings);
    for (int j = 0; j < 3; ++j)
        CHECK(same.layers[j].phase == stack.layers[j].phase);
}

TEST_CASE("one-pitch lateral offset is an integer roll of the pattern") {
    const PhaseLayerStack stack = random_stack(kDesk, 1, 41e-3, 3);
    PerturbationSpec p;
    p.dx = kDesk.pitch;
    const PhaseLayerStack shifted = perturb(stack, p);
    double max_err = 0.0;
    for (int iy = 1; iy + 1 < kDesk.ny; ++iy)
        for (int ix = 1; ix + 1 < kDesk.nx; ++ix)
            max_err = std::max(max_err,
                               std::abs(shifted.layers[0].phase[iy * kDesk.nx + ix] -
                                        stack.layers[0].phase[iy * kDesk.nx + ix - 1]));
    CHECK(max_err < 1e-9);
}

TEST_CASE("perturb validates its preconditions") {
    const PhaseLayerStack stack = uniform_stack(kDesk, 2, 10e-3);
    PerturbationSpec bad_dx;
    bad_dx.dx = kDesk.aperture_x();  // way past a quarter aperture
    CHECK_THROWS_AS(perturb(stack, bad_dx), std::invalid_argument);

    PerturbationSpec bad_dz;
    bad_dz.dz = -10e-3;
    CHECK_THROWS_AS(perturb(stack, bad_dz), std::invalid_argument);

    PerturbationSpec bad_gray;
    bad_gray.gray_levels = 0;
    CHECK_THROWS_AS(perturb(stack, bad_gray), std::invalid_argument);
}

TEST_CASE("dz and grayscale commute and match the combined spec") {
    const PhaseLayerStack stack = random_stack(kDesk, 2, 41e-3, 7);
    PerturbationSpec dz_only, gray_only, both;
    dz_only.dz = 1.5e-3;
    gray_only.gray_levels = 64;
    both.dz = 1.5e-3;
    both.gray_levels = 64;

    const PhaseLayerStack seq = perturb(perturb(stack, dz_only), gray_only);
    const PhaseLayerStack combined = perturb(stack, both);
    CHECK(seq.spacings == combined.spacings);
    for (int j = 0; j < 2; ++j)
        CHECK(seq.layers[j].phase == combined.layers[j].phase);
}

TEST_CASE("16-bit grayscale leaves visibility numerically unchanged") {
    const GridSpec g{64, 64, 48e-6, 1550e-9};
    const ModeBasis basis = lg3_basis(g, kWaist);
    const GateSpec x1 = standard_gate("X1");
    const PhaseLayerStack stack = random_stack(g, 2, 41e-3, 13);

    PerturbationSpec p;
    p.gray_levels = 1 << 16;
    const Metrics before = evaluate_stack(stack, x1, basis);
    const Metrics after = evaluate_stack(perturb(stack, p), x1, basis);
    for (std::size_t i = 0; i < before.visibility.size(); ++i)
        CHECK(std::abs(before.visibility[i] - after.visibility[i]) < 1e-4);
}

TEST_CASE("fringe blur keeps constant patterns fixed and softens wraps") {
    const GridSpec g = kDesk;
    PhaseLayerStack stack = uniform_stack(g, 1, 41e-3);
    for (double& p : stack.layers[0].phase) p = 1.234;
    PerturbationSpec blur;
    blur.blur_sigma = 1.0;
    const PhaseLayerStack same = perturb(stack, blur);
    for (double v : same.layers[0].phase) CHECK(v == doctest::Approx(1.234).epsilon(1e-12));

    // A sawtooth of 2 pi wraps: blurring the modulation softens the extremes.
    PhaseLayerStack saw = uniform_stack(g, 1, 41e-3);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            saw.layers[0].phase[iy * g.nx + ix] =
                std::fmod(ix * 0.9, 2.0 * std::numbers::pi);
    const PhaseLayerStack soft = perturb(saw, blur);
    auto spread = [&](const PhaseLayerStack& s) {
        double lo = 1e9, hi = -1e9;
        for (int ix = 0; ix < g.nx; ++ix) {
            const double v = s.layers[0].phase[(g.ny / 2) * g.nx + ix];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return hi - lo;
    };
    CHECK(spread(soft) < spread(saw));
}

TEST_CASE("Zernike polynomials: Noll indexing and disk orthogonality") {
    int n, m;
    bool sine;
    noll_to_nm(4, n, m, sine);
    CHECK(n == 2);
    CHECK(m == 0);  // defocus
    noll_to_nm(15, n, m, sine);
    CHECK(n == 4);
    CHECK(m == 4);  // 4th-order azimuthal term
    CHECK(sine);

    CHECK(zernike_noll(4, 1.0, 0.3) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(zernike_noll(15, 1.0, std::numbers::pi / 8.0) ==
          doctest::Approx(std::sqrt(10.0)).epsilon(1e-12));

    // Unit-RMS orthogonality on a 256^2 disk quadrature; rim pixels are
    // subsampled so the quadrature resolves the boundary.
    const int N = 256;
    const double h = 2.0 / N;
    for (int j : {1, 2, 4, 11, 15}) {
        for (int k : {1, 2, 4, 11, 15}) {
            double acc = 0.0, area = 0.0;
            for (int iy = 0; iy < N; ++iy)
                for (int ix = 0; ix < N; ++ix) {
                    const double x0 = ix * h - 1.0, y0 = iy * h - 1.0;
                    const double rmin = std::hypot(std::min(std::abs(x0), std::abs(x0 + h)),
                                                   std::min(std::abs(y0), std::abs(y0 + h)));
                    const double rmax = std::hypot(std::max(std::abs(x0), std::abs(x0 + h)),
                                                   std::max(std::abs(y0), std::abs(y0 + h)));
                    if (rmin > 1.0) continue;
                    const int sub = rmax > 1.0 ? 16 : 1;  // straddles the rim
                    const double w = h * h / (sub * sub);
                    for (int sy = 0; sy < sub; ++sy)
                        for (int sx = 0; sx < sub; ++sx) {
                            const double x = x0 + (sx + 0.5) * h / sub;
                            const double y = y0 + (sy + 0.5) * h / sub;
                            const double rho = std::hypot(x, y);
                            if (rho > 1.0) continue;
                            const double th = std::atan2(y, x);
                            acc += w * zernike_noll(j, rho, th) * zernike_noll(k, rho, th);
                            area += w;
                        }
                }
            const double mean = acc / area;
            CHECK(std::abs(mean - (j == k ? 1.0 : 0.0)) < 1e-3);
        }
    }
}

TEST_CASE("zernike perturbation adds the requested surface to every layer") {
    const PhaseLayerStack stack = uniform_stack(kDesk, 2, 41e-3);
    PerturbationSpec p;
    p.zernike = {{4, 0.25}};
    const PhaseLayerStack bent = perturb(stack, p);
    // center pixel: rho = 0, Z4 = -sqrt(3)
    const std::size_t c = (kDesk.ny / 2) * kDesk.nx + kDesk.nx / 2;
    for (int j = 0; j < 2; ++j)
        CHECK(bent.layers[j].phase[c] ==
              doctest::Approx(-0.25 * std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("pixel scaling: identity, block round trip, pad and crop") {
    const PhaseLayerStack stack = random_stack(kDesk, 2, 41e-3, 17);

    const PhaseLayerStack same = scale_pixels(stack, PixelScaleMode::FixAperture, kDesk.nx);
    for (int j = 0; j < 2; ++j) CHECK(same.layers[j].phase == stack.layers[j].phase);

    const PhaseLayerStack down = scale_pixels(stack, PixelScaleMode::FixAperture, kDesk.nx / 2);
    CHECK(down.grid.pitch == doctest::Approx(2.0 * kDesk.pitch));
    const PhaseLayerStack up = scale_pixels(down, PixelScaleMode::FixAperture, kDesk.nx);
    // blockwise-constant: every 2x2 block holds one value drawn from the block
    for (int iy = 0; iy < kDesk.ny; iy += 2)
        for (int ix = 0; ix < kDesk.nx; ix += 2) {
            const double v = up.layers[0].phase[iy * kDesk.nx + ix];
            CHECK(up.layers[0].phase[iy * kDesk.nx + ix + 1] == v);
            CHECK(up.layers[0].phase[(iy + 1) * kDesk.nx + ix] == v);
            CHECK(up.layers[0].phase[(iy + 1) * kDesk.nx + ix + 1] == v);
        }

    const PhaseLayerStack padded = scale_pixels(stack, PixelScaleMode::FixPitch, kDesk.nx + 32);
    CHECK(padded.grid.pitch == kDesk.pitch);
    CHECK(padded.layers[0].phase[0] == 0.0);  // zero-phase border
    const PhaseLayerStack cropped = scale_pixels(padded, PixelScaleMode::FixPitch, kDesk.nx);
    for (int j = 0; j < 2; ++j) CHECK(cropped.layers[j].phase == stack.layers[j].phase);

    CHECK_THROWS_AS(scale_pixels(stack, PixelScaleMode::FixAperture, 7), std::invalid_argument);
}

TEST_CASE("stack and forward validate grids") {
    PhaseLayerStack stack = uniform_stack(kDesk, 1, 41e-3);
    GridSpec other = kDesk;
    other.nx = other.ny = 64;
    CHECK_THROWS_AS(forward(stack, ComplexField(other)), std::invalid_argument);
    stack.spacings[0] = 0.0;
    CHECK_THROWS_AS(stack.validate(), std::invalid_argument);
}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "modeforge/field.hpp"
#include "modeforge/gates.hpp"
#include "modeforge/mode_basis.hpp"

using namespace modeforge;

TEST_CASE("X1 shifts |0> to |2> under the column convention") {
    const GateSpec x1 = standard_gate("X1");
    StateVector e0 = StateVector::Zero(3);
    e0(0) = 1.0;
    const StateVector out = x1.matrix * e0;
    CHECK(std::abs(out(0)) < 1e-15);
    CHECK(std::abs(out(1)) < 1e-15);
    CHECK(std::abs(out(2) - cplx(1.0, 0.0)) < 1e-15);
}

TEST_CASE("all standard gates are unitary to machine precision") {
    for (const char* name : {"X0", "X1", "X2", "H0", "H1", "H2", "H3", "CNOT", "I4", "H2D"})
        CHECK(unitarity_error(standard_gate(name).matrix) <= 1e-12);
    CHECK_THROWS_AS(standard_gate("X9"), std::invalid_argument);
}

TEST_CASE("H1 columns are orthonormal") {
    const Eigen::MatrixXcd h = standard_gate("H1").matrix;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double expect = i == j ? 1.0 : 0.0;
            CHECK(std::abs(h.col(i).dot(h.col(j))) == doctest::Approx(expect).epsilon(1e-12));
        }
}

TEST_CASE("CNOT is an involution that flips only the high-order pair") {
    const Eigen::MatrixXcd c = standard_gate("CNOT").matrix;
    CHECK((c * c - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);
    StateVector e2 = StateVector::Zero(4);
    e2(2) = 1.0;  // |10>, coded as |-3>
    CHECK(std::abs((c * e2)(3) - cplx(1.0, 0.0)) < 1e-15);
    StateVector e0 = StateVector::Zero(4);
    e0(0) = 1.0;
    CHECK(std::abs((c * e0)(0) - cplx(1.0, 0.0)) < 1e-15);
}

TEST_CASE("three-dimensional MUBs: counts and overlap laws") {
    const auto mubs = mub_states(3);
    REQUIRE(mubs.size() == 4);
    int count = 0;
    for (const auto& basis : mubs) count += static_cast<int>(basis.size());
    CHECK(count == 12);

    // |<psi|phi>|^2 is exactly 1/3 across bases, delta_ij within a basis.
    for (std::size_t a = 0; a < mubs.size(); ++a)
        for (std::size_t b = 0; b < mubs.size(); ++b)
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) {
                    const double p = std::norm(mubs[a][i].dot(mubs[b][j]));
                    if (a == b)
                        CHECK(p == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
                    else
                        CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
                }
}

TEST_CASE("two-dimensional MUBs have 6 states in 3 bases") {
    const auto mubs = mub_states(2);
    REQUIRE(mubs.size() == 3);
    for (const auto& basis : mubs) CHECK(basis.size() == 2);
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = a + 1; b < 3; ++b)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    CHECK(std::norm(mubs[a][i].dot(mubs[b][j])) ==
                          doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(mub_states(5), std::invalid_argument);
}

TEST_CASE("overcomplete 4-D set: 36 unit vectors in 9 orthonormal blocks") {
    const auto set = overcomplete_4d();
    REQUIRE(set.size() == 9);
    int count = 0;
    for (const auto& block : set) {
        REQUIRE(block.size() == 4);
        count += 4;
        for (int i = 0; i < 4; ++i) {
            CHECK(block[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
            for (int j = 0; j < 4; ++j)
                CHECK(std::abs(block[i].dot(block[j])) ==
                      doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
        }
    }
    CHECK(count == 36);

    // First element is (col 1 of C) (x) (col 1 of C) = e_0.
    const StateVector& first = set[0][0];
    CHECK(std::abs(first(0) - cplx(1.0, 0.0)) < 1e-15);
    for (int k = 1; k < 4; ++k) CHECK(std::abs(first(k)) < 1e-15);
}

TEST_CASE("compose multiplies in listed order; X1*X2 is the identity") {
    const GateSpec id = compose({standard_gate("X1"), standard_gate("X2")});
    CHECK((id.matrix - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_THROWS_AS(compose({standard_gate("X1"), standard_gate("CNOT")}),
                    std::invalid_argument);
    CHECK_THROWS_AS(compose({}), std::invalid_argument);
}

TEST_CASE("tensor of qubit Hadamards maps e0 to the uniform superposition") {
    const GateSpec hh = tensor_product(standard_gate("H2D"), standard_gate("H2D"));
    StateVector e0 = StateVector::Zero(4);
    e0(0) = 1.0;
    const StateVector out = hh.matrix * e0;
    for (int k = 0; k < 4; ++k)
        CHECK(std::abs(out(k) - cplx(0.5, 0.0)) < 1e-12);
}

TEST_CASE("(HxH)CNOT reproduces the balanced-oracle output state") {
    const GateSpec hh = tensor_product(standard_gate("H2D"), standard_gate("H2D"));
    const GateSpec u = compose({hh, standard_gate("CNOT")});
    StateVector e01 = StateVector::Zero(4);
    e01(1) = 1.0;
    const StateVector pre = hh.matrix * e01;   // (H (x) H)|01>
    const StateVector out = u.matrix * pre;    // = (H (x) H) CNOT (H (x) H)|01>
    CHECK(std::norm(out(3)) == doctest::Approx(1.0).epsilon(1e-12));  // |1x 1y>
}

TEST_CASE("encode/decode round trip and projection idempotence") {
    const GridSpec grid{128, 128, 24e-6, 1550e-9};
    const ModeBasis basis = lg3_basis(grid, 0.35e-3);

    // basis state e_k maps to the k-th mode exactly
    StateVector e1 = StateVector::Zero(3);
    e1(1) = 1.0;
    const ComplexField f = encode(e1, basis);
    double max_err = 0.0;
    for (std::size_t i = 0; i < f.amp.size(); ++i)
        max_err = std::max(max_err, std::abs(f.amp[i] - basis.modes[1].amp[i]));
    CHECK(max_err == 0.0);

    StateVector s(3);
    s << cplx(0.31, -0.4), cplx(-0.55, 0.2), cplx(0.12, 0.62);
    s.normalize();
    const DecodeResult dec = decode(encode(s, basis), basis);
    CHECK((dec.coeffs - s).cwiseAbs().maxCoeff() < 2e-3);
    CHECK(std::norm(s.dot(dec.normalized())) >= 0.999);

    // encode(decode(.)) is idempotent within grid tolerance
    const ComplexField once = encode(dec.normalized(), basis);
    const DecodeResult dec2 = decode(once, basis);
    CHECK((dec2.coeffs - dec.normalized()).cwiseAbs().maxCoeff() < 2e-3);

    CHECK_THROWS_AS(encode(StateVector::Zero(4), basis), std::invalid_argument);
}

TEST_CASE("equal-weight opposite-OAM superposition has petal symmetry") {
    const GridSpec grid{128, 128, 24e-6, 1550e-9};
    const ModeBasis basis = lg3_basis(grid, 0.35e-3);
    StateVector s(3);
    s << cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0);
    s /= std::sqrt(2.0);
    const ComplexField f = encode(s, basis);

    // |LG_0^-2 + LG_0^+2|^2 ~ cos^2(2 phi): invariant under 90-degree
    // rotation, which maps this grid onto itself away from the wrap row.
    double max_err = 0.0, peak = 0.0;
    for (const cplx& a : f.amp) peak = std::max(peak, std::norm(a));
    for (int iy = 1; iy < grid.ny; ++iy)
        for (int ix = 1; ix < grid.nx; ++ix) {
            const int rx = grid.nx - iy;  // (x, y) -> (-y, x) about pixel (n/2, n/2)
            const int ry = ix;
            if (rx <= 0 || rx >= grid.nx || ry <= 0 || ry >= grid.ny) continue;
            max_err = std::max(max_err,
                               std::abs(std::norm(f.at(ix, iy)) - std::norm(f.at(rx, ry))));
        }
    CHECK(max_err / peak < 1e-9);
}

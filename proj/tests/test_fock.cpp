#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "support/oracles.hpp"
#include "telegate/fock.hpp"

using namespace telegate;

namespace {

// All occupation vectors of `modes` modes with `n` photons total.
void enumerate_occupations(int modes, int n, OccupationVector& cur,
                           std::vector<OccupationVector>& out) {
    if (modes == 1) {
        cur.push_back(n);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int k = 0; k <= n; ++k) {
        cur.push_back(k);
        enumerate_occupations(modes - 1, n - k, cur, out);
        cur.pop_back();
    }
}

std::vector<OccupationVector> occupations(int modes, int n) {
    std::vector<OccupationVector> out;
    OccupationVector cur;
    enumerate_occupations(modes, n, cur, out);
    return out;
}

Eigen::MatrixXcd random_unitary(int n, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(g(gen), g(gen));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

}  // namespace

TEST_CASE("identity interferometer amplitudes") {
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
    CHECK(std::abs(output_amplitude(id, {2, 1, 0}, {2, 1, 0}) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(output_amplitude(id, {2, 1, 0}, {1, 2, 0})) < 1e-12);
    CHECK_THROWS_AS(output_amplitude(id, {2, 1, 0}, {1, 1, 0}), std::invalid_argument);
}

TEST_CASE("Hong-Ou-Mandel suppression") {
    Eigen::MatrixXcd bs = beam_splitter_50_50();
    CHECK(std::abs(output_amplitude(bs, {1, 1}, {1, 1})) < 1e-12);
    CHECK(std::abs(output_amplitude(bs, {1, 1}, {2, 0})) ==
          Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("nonlinear-sign interferometer") {
    HeraldedGateSetup setup = klm_nss_setup();
    setup.validate();

    CHECK(output_amplitude(setup.unitary, {2, 1, 0}, {2, 1, 0}).real() ==
          Catch::Approx(-0.5).margin(1e-10));

    auto alphas = heralded_gate_coefficients(setup, 6);
    CHECK(std::abs(alphas[0] - Complex(0.5, 0.0)) < 1e-10);
    CHECK(std::abs(alphas[1] - Complex(0.5, 0.0)) < 1e-10);
    CHECK(std::abs(alphas[2] - Complex(-0.5, 0.0)) < 1e-10);
    for (int n = 0; n <= 6; ++n)
        CHECK(std::abs(alphas[n] - Complex(nss_fock_coefficient(n), 0.0)) < 1e-10);
}

TEST_CASE("identity heralded setup is transparent") {
    HeraldedGateSetup setup;
    setup.unitary = Eigen::MatrixXcd::Identity(3, 3);
    setup.ancilla_in = {1, 0};
    setup.herald_out = {1, 0};
    auto alphas = heralded_gate_coefficients(setup, 4);
    for (const Complex& a : alphas) CHECK(std::abs(a - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("evolution is unitary on each photon-number sector") {
    Eigen::MatrixXcd u = random_unitary(3, 777);
    for (int n : {1, 2, 3}) {
        for (const auto& in : occupations(3, n)) {
            double total = 0.0;
            for (const auto& out : occupations(3, n))
                total += std::norm(output_amplitude(u, in, out));
            CHECK(total == Catch::Approx(1.0).margin(1e-9));
        }
    }
}

TEST_CASE("dual-rail CSIGN circuit") {
    CsignCircuit circuit = csign_circuit();
    for (int b1 : {0, 1})
        for (int b2 : {0, 1}) {
            Complex amp = circuit.basis_amplitude(b1, b2);
            double expected = (b1 == 1 && b2 == 1) ? -0.25 : 0.25;
            CHECK(std::abs(amp - Complex(expected, 0.0)) < 1e-9);
            CHECK(std::norm(amp) == Catch::Approx(1.0 / 16.0).margin(1e-9));
        }
}

TEST_CASE("unitary dilation of contractions") {
    // already unitary: corner block preserved, rest block diagonal
    Eigen::MatrixXcd u = random_unitary(3, 31);
    Eigen::MatrixXcd big = dilate_contraction(u);
    CHECK((big.topLeftCorner(3, 3) - u).cwiseAbs().maxCoeff() < 1e-10);
    // defect magnitudes are sqrt(1 - sigma^2), so eps-level singular values
    // blow up to sqrt(eps)
    CHECK(big.topRightCorner(3, 3).cwiseAbs().maxCoeff() < 1e-7);

    Eigen::MatrixXcd half(1, 1);
    half << 0.5;
    Eigen::MatrixXcd dil = dilate_contraction(half);
    CHECK(std::abs(dil(0, 0)) == Catch::Approx(0.5).margin(1e-12));
    CHECK(std::abs(dil(0, 1)) == Catch::Approx(std::sqrt(3.0) / 2.0).margin(1e-12));
    CHECK(std::abs(dil(1, 0)) == Catch::Approx(std::sqrt(3.0) / 2.0).margin(1e-12));
    CHECK(std::abs(dil(1, 1)) == Catch::Approx(0.5).margin(1e-12));

    // random contractions stay unitary and keep the corner block
    std::mt19937 gen(99);
    std::normal_distribution<double> g(0.0, 0.3);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXcd v(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) v(i, j) = Complex(g(gen), g(gen));
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
        if (svd.singularValues()(0) > 1.0) v /= svd.singularValues()(0) * 1.01;
        Eigen::MatrixXcd w = dilate_contraction(v);
        CHECK((w.adjoint() * w - Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() <
              1e-10);
        CHECK((w.topLeftCorner(3, 3) - v).cwiseAbs().maxCoeff() < 1e-10);
    }

    Eigen::MatrixXcd too_big(1, 1);
    too_big << 1.5;
    CHECK_THROWS_AS(dilate_contraction(too_big), std::invalid_argument);
}

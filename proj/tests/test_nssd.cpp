#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "telegate/fock.hpp"
#include "telegate/nssd.hpp"

using namespace telegate;

TEST_CASE("self-Kerr phase factor") {
    for (int m = 0; m < 16; ++m) {
        double expected = std::cos(kPi * m * (m - 1) / 2.0);
        CHECK(self_kerr_sign(m) == Catch::Approx(expected).margin(1e-12));
    }
}

TEST_CASE("signal self-transmission") {
    CHECK(v11_of(1) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(v11_of(2) == Catch::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-12));
    CHECK(v11_of(3) == Catch::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(v11_of(0), std::invalid_argument);
}

TEST_CASE("beta coefficients") {
    const Complex a0(0.37, 0.0);
    for (int d : {2, 3, 4, 5}) {
        auto betas = beta_coefficients(d, a0);
        CHECK(std::abs(betas[0] - a0) < 1e-14);
    }
    auto b2 = beta_coefficients(2, a0);
    CHECK(std::abs(b2[1] - a0 * std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("d = 2 reproduces the standard NSS coefficients") {
    auto betas = beta_coefficients(2, Complex(0.5, 0.0));
    auto alphas = alpha_from_betas(2, betas, 6);
    for (int n = 0; n <= 6; ++n)
        CHECK(std::abs(alphas[n] - Complex(nss_fock_coefficient(n), 0.0)) < 1e-10);
}

TEST_CASE("self-Kerr matching up to level d") {
    for (int d : {2, 3, 4, 5, 10, 100}) {
        auto r = alpha_ratios(d, d);
        for (int n = 0; n <= d; ++n)
            CHECK(r[n] == Catch::Approx(self_kerr_sign(n)).margin(1e-9));
    }
}

TEST_CASE("higher Fock states are suppressed") {
    auto r = alpha_ratios(5, 12);
    for (int n = 6; n < 12; ++n) CHECK(std::abs(r[n + 1]) < std::abs(r[n]));
    for (int n = 6; n <= 12; ++n) CHECK(std::abs(r[n]) < 1.0);
}

TEST_CASE("double-sum form agrees with the two-step form") {
    for (int d : {2, 3, 4, 5}) {
        auto betas = beta_coefficients(d, Complex(1.0, 0.0));
        auto alphas = alpha_from_betas(d, betas, 10);
        for (int n = 0; n <= 10; ++n)
            CHECK(std::abs(alpha_double_sum(d, Complex(1.0, 0.0), n) - alphas[n]) < 1e-9);
    }
}

TEST_CASE("lambda roots reproduce elementary symmetric polynomials") {
    const Complex a0(0.1, 0.0);
    auto l2 = solve_lambdas(2, a0);
    REQUIRE(l2.size() == 1);
    CHECK(std::abs(l2[0] - Complex(std::sqrt(2.0), 0.0)) < 1e-10);

    for (int d : {3, 4, 5}) {
        auto betas = beta_coefficients(d, a0);
        auto lambdas = solve_lambdas(d, a0);
        REQUIRE(static_cast<int>(lambdas.size()) == d - 1);
        // e_k(lambda) * k! * alpha0 == beta_k
        std::vector<Complex> poly{1.0};
        for (Complex r : lambdas) {
            std::vector<Complex> next(poly.size() + 1, Complex(0.0, 0.0));
            for (std::size_t i = 0; i < poly.size(); ++i) {
                next[i] += poly[i];
                next[i + 1] += poly[i] * r;
            }
            poly = next;
        }
        for (int k = 1; k < d; ++k) {
            Complex beta_rec = poly[k] * std::exp(log_factorial(k)) * a0;
            CHECK(std::abs(beta_rec - betas[k]) < 1e-8);
        }
    }
}

TEST_CASE("contraction matrix structure") {
    const int d = 4;
    const Complex a0(0.05, 0.0);
    auto lambdas = solve_lambdas(d, a0);
    const double x = 0.2;
    Eigen::MatrixXcd v = assemble_vmat(d, a0, x, lambdas);
    CHECK(std::abs(v(0, 0) - Complex(v11_of(d), 0.0)) < 1e-14);
    for (int j = 1; j < d; ++j) CHECK(std::abs(v(0, j) - Complex(x, 0.0)) < 1e-14);
    for (int i = 1; i < d - 1; ++i) {
        CHECK(std::abs(v(i, 0) - lambdas[i - 1]) < 1e-14);
        CHECK(std::abs(v(i, i) - Complex(x, 0.0)) < 1e-14);
    }
    CHECK(std::abs(v(d - 1, 0) - a0 * lambdas[d - 2] / std::pow(x, d - 1)) < 1e-12);
    CHECK(std::abs(v(d - 1, d - 1) - a0 / std::pow(x, d - 2)) < 1e-12);
    CHECK_THROWS_AS(assemble_vmat(d, a0, -1.0, lambdas), std::invalid_argument);
}

TEST_CASE("maximized success probability scale") {
    for (int d : {2, 3}) {
        auto [p, spec] = max_success_probability(d);
        double anchor = 25.0 * std::pow(10.0, -d);
        CHECK(p > 0.5 * anchor);
        CHECK(p < 2.0 * anchor);
        CHECK(spectral_norm(spec.vmat) <= 1.0 + 1e-10);
        CHECK(std::abs(spec.betas[0] - spec.alpha0) < 1e-14);
        CHECK(spec.v11 == Catch::Approx(v11_of(d)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(max_success_probability(8), std::invalid_argument);
}

TEST_CASE("dilated unitary realizes the gate coefficients") {
    for (int d : {2, 3}) {
        auto [p, spec] = max_success_probability(d);
        (void)p;
        Eigen::MatrixXcd big = dilate_contraction(spec.vmat);

        HeraldedGateSetup setup;
        setup.unitary = big;
        setup.ancilla_in.assign(2 * d - 1, 0);
        for (int i = 0; i < d - 1; ++i) setup.ancilla_in[i] = 1;
        setup.herald_out = setup.ancilla_in;

        auto alphas = alpha_from_betas(d, spec.betas, d + 2);
        auto coeffs = heralded_gate_coefficients(setup, d + 2);
        // align the unobservable global phase on the vacuum amplitude
        Complex phase = coeffs[0] / alphas[0];
        CHECK(std::abs(std::abs(phase) - 1.0) < 1e-8);
        for (int n = 0; n <= d + 2; ++n)
            CHECK(std::abs(coeffs[n] / phase - alphas[n]) < 1e-8);
    }
}

TEST_CASE("spec text export carries the full record") {
    auto [p, spec] = max_success_probability(2);
    (void)p;
    std::string text = spec.to_text();
    CHECK(text.find("d=2") != std::string::npos);
    CHECK(text.find("p_d=") != std::string::npos);
    CHECK(text.find("vmat=") != std::string::npos);
    CHECK(text.find("lambdas=") != std::string::npos);
}

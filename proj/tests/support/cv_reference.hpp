#pragma once

// Quadrature-based reference values for the CV teleportation quantities:
// densities are assembled directly from transfer/displacement matrix
// elements and integrated numerically, independent of the closed forms.

#include <complex>
#include <vector>

#include "oracles.hpp"
#include "telegate/cv_gate_teleport.hpp"
#include "telegate/cv_teleport.hpp"

namespace cvref {

using telegate::Complex;

// <k| D((g-q) beta) T_q(beta) |n>
inline Complex transfer_amplitude(int k, int n, double q, double g, Complex beta) {
    Complex total(0.0, 0.0);
    for (int r = 0; r <= n; ++r)
        total += telegate::displacement_matrix_element(k, r, (g - q) * beta) *
                 telegate::transfer_matrix_element(r, n, q, beta);
    return total;
}

// Probability density p(beta) of the Bell outcome for the given input.
inline double probability_density(const telegate::InputState& state, double q, Complex beta) {
    const int top = state.max_level();
    double total = 0.0;
    for (int r = 0; r <= top; ++r) {
        Complex amp(0.0, 0.0);
        for (int n = r; n <= top; ++n)
            amp += state.coeffs[n] * telegate::transfer_matrix_element(r, n, q, beta);
        total += std::norm(amp);
    }
    return total;
}

// Fidelity-weighted density f(beta) p(beta).
inline double fidelity_density(const telegate::InputState& state, double q, double g,
                               Complex beta) {
    const int top = state.max_level();
    Complex overlap(0.0, 0.0);
    for (int k = 0; k <= top; ++k)
        for (int n = 0; n <= top; ++n)
            overlap += std::conj(state.coeffs[k]) * state.coeffs[n] *
                       transfer_amplitude(k, n, q, g, beta);
    return std::norm(overlap);
}

inline double success_probability_by_quadrature(const telegate::InputState& state, double q,
                                                double b_radius) {
    return oracles::disc_quadrature(
        [&](Complex beta) { return probability_density(state, q, beta); }, b_radius);
}

inline double raw_fidelity_by_quadrature(const telegate::InputState& state, double q, double g,
                                         double b_radius) {
    return oracles::disc_quadrature(
        [&](Complex beta) { return fidelity_density(state, q, g, beta); }, b_radius);
}

// Integrand of the teleported-gate block integral, before disc integration.
inline double block_density(int n, int m, int k, int l, const telegate::GateTeleportParams& p,
                            Complex beta) {
    const double nn = telegate::resource_normalization(p);
    Complex total(0.0, 0.0);
    for (int r = 0; r <= p.top_level(); ++r)
        for (int s = 0; s <= p.top_level(); ++s) {
            double weight = std::pow(p.q, r + s) * telegate::self_kerr_sign(r) * p.alphas[r] *
                            telegate::self_kerr_sign(s) * p.alphas[s];
            total += weight * telegate::displacement_matrix_element(k, r, p.g * beta) *
                     std::conj(telegate::displacement_matrix_element(n, r, beta)) *
                     telegate::displacement_matrix_element(m, s, beta) *
                     std::conj(telegate::displacement_matrix_element(l, s, p.g * beta));
        }
    return (nn * nn / telegate::kPi) * total.real();
}

inline double block_integral_by_quadrature(int n, int m, int k, int l,
                                           const telegate::GateTeleportParams& p,
                                           double b_radius) {
    return oracles::disc_quadrature(
        [&](Complex beta) { return block_density(n, m, k, l, p, beta); }, b_radius);
}

// Bell-outcome density for the teleported gate.
inline double gate_probability_density(const telegate::InputState& state,
                                       const telegate::GateTeleportParams& p, Complex beta) {
    const double nn = telegate::resource_normalization(p);
    double total = 0.0;
    for (int r = 0; r <= p.top_level(); ++r) {
        Complex amp(0.0, 0.0);
        for (int n = 0; n <= state.max_level(); ++n)
            amp += state.coeffs[n] * std::pow(p.q, r) * p.alphas[r] *
                   std::conj(telegate::displacement_matrix_element(n, r, beta));
        total += std::norm(amp);
    }
    return (nn * nn / telegate::kPi) * total;
}

inline double gate_success_by_quadrature(const telegate::InputState& state,
                                         const telegate::GateTeleportParams& p,
                                         double b_radius) {
    return oracles::disc_quadrature(
        [&](Complex beta) { return gate_probability_density(state, p, beta); }, b_radius);
}

}  // namespace cvref

#pragma once

// Continuous-variable state-teleportation analytics: transfer-operator and
// displacement matrix elements in the Fock basis, conditioned success
// probability, average fidelity, quality, gain optimization and dual-rail
// teleportation.
//
// All conditioned quantities are disc integrals of products of matrix
// elements that are (Gaussian weight) x (monomials in beta, beta*).  The
// angular integral kills unbalanced monomials and the radial integral is an
// incomplete gamma function, so every closed form here is a finite sum of
// incomplete-gamma terms.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "telegate/numerics.hpp"

namespace telegate {

// Conditioning radius B for the CV Bell measurement; the unconditioned case
// is a dedicated flag, not a large float.
struct ConditioningRadius {
    double value = 0.0;
    bool is_infinite = false;

    static ConditioningRadius infinite() { return {0.0, true}; }
    static ConditioningRadius finite(double b) {
        if (b <= 0.0) throw std::invalid_argument("ConditioningRadius: B must be > 0");
        return {b, false};
    }
};

struct TeleportParams {
    double q = 0.0;                      // squeezing parameter in [0, 1)
    double g = 0.0;                      // gain-tuning parameter
    ConditioningRadius B = ConditioningRadius::infinite();
    int n_trunc = 60;                    // truncation used by oracle computations

    void validate() const {
        if (q < 0.0 || q >= 1.0) throw std::invalid_argument("TeleportParams: q must lie in [0,1)");
        if (g < 0.0) throw std::invalid_argument("TeleportParams: g must be >= 0");
    }
};

// Pure input state with finite Fock expansion.
struct InputState {
    std::vector<Complex> coeffs;

    static InputState fock(int n, int dim = -1) {
        InputState s;
        s.coeffs.assign(dim < 0 ? n + 1 : dim, Complex(0.0, 0.0));
        s.coeffs[n] = 1.0;
        return s;
    }

    int max_level() const { return static_cast<int>(coeffs.size()) - 1; }

    void validate() const {
        double norm = 0.0;
        for (Complex c : coeffs) norm += std::norm(c);
        if (std::abs(norm - 1.0) > 1e-12)
            throw std::invalid_argument("InputState: coefficients must be normalized");
    }
};

// T_{k,l} = <k| T_q(beta) |l>; zero for k > l (the transfer operator can
// only decrease the photon number).
inline Complex transfer_matrix_element(int k, int l, double q, Complex beta) {
    if (k < 0 || l < 0) throw std::invalid_argument("transfer_matrix_element: negative index");
    if (k > l) return {0.0, 0.0};
    const double one_q2 = 1.0 - q * q;
    double log_mag = 0.5 * std::log(one_q2 / kPi) - 0.5 * one_q2 * std::norm(beta) +
                     log_binomial(l, k) + 0.5 * (log_factorial(k) - log_factorial(l)) +
                     k * std::log(q > 0.0 ? q : 1.0);
    if (q == 0.0 && k > 0) return {0.0, 0.0};
    Complex phase_part = std::pow(one_q2 * std::conj(beta), l - k);
    return std::exp(log_mag) * phase_part;
}

// D_{k,r} = <k| D(gamma) |r>, evaluated through the finite scattering sum
// valid for every index pair (it satisfies D_{k,r}(gamma) = conj(D_{r,k}(-gamma))).
inline Complex displacement_matrix_element(int k, int r, Complex gamma) {
    if (k < 0 || r < 0) throw std::invalid_argument("displacement_matrix_element: negative index");
    Complex sum(0.0, 0.0);
    for (int t = 0; t <= std::min(k, r); ++t) {
        double log_mag = 0.5 * (log_factorial(r) - log_factorial(k)) + log_binomial(k, t) -
                         log_factorial(r - t);
        sum += std::exp(log_mag) * std::pow(gamma, k - t) * std::pow(-std::conj(gamma), r - t);
    }
    return sum * std::exp(-0.5 * std::norm(gamma));
}

namespace detail {

// integral over |beta| <= B of beta^p conj(beta)^p' e^{-a |beta|^2} d^2 beta;
// zero unless p == p', else pi * gamma(p+1, a B^2) / a^(p+1).
inline double disc_monomial_integral(int p, int p_conj, double a, const ConditioningRadius& B) {
    if (p != p_conj) return 0.0;
    double log_mag;
    if (B.is_infinite)
        log_mag = log_factorial(p);
    else
        log_mag = log_lower_incomplete_gamma_int(p + 1, a * B.value * B.value);
    return kPi * std::exp(log_mag - (p + 1) * std::log(a));
}

// J(k,n; l,m) = integral over the disc of G_{k,n} conj(G_{l,m}) where
// G_{k,n}(beta) = <k| D((g-q) beta) T_q(beta) |n>.  Real-valued.
inline double teleport_pair_integral(int k, int n, int l, int m, double q, double g,
                                     const ConditioningRadius& B) {
    if (k + m != n + l) return 0.0;  // angular selection
    const double one_q2 = 1.0 - q * q;
    const double e = g - q;
    const double a = one_q2 + e * e;

    struct Term {
        double coeff;
        int p;        // beta power
        int p_conj;   // conj(beta) power
    };
    auto expand = [&](int kk, int nn) {
        std::vector<Term> terms;
        for (int r = 0; r <= nn; ++r) {
            double t_coeff = binomial(nn, r) *
                             std::exp(0.5 * (log_factorial(r) - log_factorial(nn))) *
                             std::pow(q, r) * std::pow(one_q2, nn - r);
            for (int t = 0; t <= std::min(kk, r); ++t) {
                double d_coeff = std::exp(0.5 * (log_factorial(r) - log_factorial(kk))) *
                                 binomial(kk, t) * std::pow(e, kk - t) * std::pow(-e, r - t) /
                                 std::exp(log_factorial(r - t));
                terms.push_back({t_coeff * d_coeff, kk - t, nn - t});
            }
        }
        return terms;
    };

    auto left = expand(k, n);
    auto right = expand(l, m);
    double total = 0.0;
    for (const Term& ta : left)
        for (const Term& tb : right)
            total += ta.coeff * tb.coeff *
                     disc_monomial_integral(ta.p + tb.p_conj, ta.p_conj + tb.p, a, B);
    return total * one_q2 / kPi;
}

}  // namespace detail

// Probability of a CV Bell measurement result with |beta| <= B.
inline double success_probability(const InputState& state, double q, const ConditioningRadius& B) {
    state.validate();
    if (B.is_infinite) return 1.0;
    const double one_q2 = 1.0 - q * q;
    const double x = one_q2 * B.value * B.value;
    double total = 0.0;
    for (int n = 0; n <= state.max_level(); ++n) {
        double w = std::norm(state.coeffs[n]);
        if (w == 0.0) continue;
        double inner = 0.0;
        for (int k = 0; k <= n; ++k) {
            inner += binomial(n, k) * std::pow(q * q, k) * std::pow(one_q2, n - k) *
                     detail::regularized_lower_gamma_int(n - k + 1, x);
        }
        total += w * inner;
    }
    return total;
}

struct FidelityResult {
    double raw = 0.0;          // probability-weighted integral F(B)
    double conditional = 0.0;  // F(B) / P(B)
};

// Average teleportation fidelity over measurement results with |beta| <= B.
inline FidelityResult average_fidelity(const InputState& state, double q, double g,
                                       const ConditioningRadius& B) {
    state.validate();
    const int top = state.max_level();
    double total = 0.0;
    for (int k = 0; k <= top; ++k)
        for (int n = 0; n <= top; ++n)
            for (int l = 0; l <= top; ++l) {
                const int m = n + l - k;  // angular selection k+m = n+l
                if (m < 0 || m > top) continue;
                Complex coeff = std::conj(state.coeffs[k]) * state.coeffs[n] * state.coeffs[l] *
                                std::conj(state.coeffs[m]);
                if (coeff == Complex(0.0, 0.0)) continue;
                total += (coeff * detail::teleport_pair_integral(k, n, l, m, q, g, B)).real();
            }
    FidelityResult result;
    result.raw = total;
    double p = success_probability(state, q, B);
    result.conditional = (p > 0.0) ? total / p : 0.0;
    return result;
}

// Quality Q = P(B) * conditional fidelity = raw fidelity integral.
inline double quality(const InputState& state, double q, double g, const ConditioningRadius& B) {
    return average_fidelity(state, q, g, B).raw;
}

// Golden-section maximization of the conditional fidelity over the gain.
inline std::pair<double, double> optimize_gain(const InputState& state, double q,
                                               const ConditioningRadius& B) {
    return golden_max(
        [&](double g) { return average_fidelity(state, q, g, B).conditional; }, 0.5 * q, 1.2,
        1e-6);
}

// Unconditioned fidelity of teleporting the dual-rail qubit c0|01> + c1|10>
// through two parallel CV channels; error spaces are kept in the output.
inline double dual_rail_fidelity(Complex c0, Complex c1, double q, double g) {
    double norm = std::norm(c0) + std::norm(c1);
    if (std::abs(norm - 1.0) > 1e-12)
        throw std::invalid_argument("dual_rail_fidelity: qubit amplitudes must be normalized");
    const ConditioningRadius B = ConditioningRadius::infinite();
    const double j0000 = detail::teleport_pair_integral(0, 0, 0, 0, q, g, B);
    const double j1111 = detail::teleport_pair_integral(1, 1, 1, 1, q, g, B);
    const double j0101 = detail::teleport_pair_integral(0, 1, 0, 1, q, g, B);
    const double j1010 = detail::teleport_pair_integral(1, 0, 1, 0, q, g, B);
    const double j0011 = detail::teleport_pair_integral(0, 0, 1, 1, q, g, B);
    const double j1100 = detail::teleport_pair_integral(1, 1, 0, 0, q, g, B);
    const double w = std::norm(c0);
    return (w * w + (1.0 - w) * (1.0 - w)) * j0000 * j1111 +
           2.0 * w * (1.0 - w) * (j0101 * j1010 + j0011 * j1100);
}

}  // namespace telegate

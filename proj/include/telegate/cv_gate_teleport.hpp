#pragma once

// Gate teleportation through an offline-prepared nonlinear resource: the
// two-mode squeezed state with a generalized NSS gate applied to one half,
// a CV Bell measurement, and an f-deformed displacement correction.
//
// Fidelities reduce to disc integrals of four displacement matrix elements.
// Every matrix element is a Gaussian times monomials in beta and beta*, so
// the integrals are finite incomplete-gamma sums.  Terms are grouped by
// monomial power on each side of the integrand before pairing, which keeps
// the work per block linear in the resource truncation.

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "telegate/cv_teleport.hpp"
#include "telegate/nssd.hpp"
#include "telegate/numerics.hpp"

namespace telegate {

struct GateTeleportParams {
    int d = 2;                 // largest Fock level treated exactly by the gate
    int tail = 2;              // extra resource terms kept above level d
    double q = 0.0;
    double g = 1.0;
    ConditioningRadius B = ConditioningRadius::infinite();
    std::vector<double> alphas;  // gate coefficients alpha_n / alpha_0, n = 0..d+tail

    static GateTeleportParams make(int d, int tail, double q, double g,
                                   ConditioningRadius B = ConditioningRadius::infinite()) {
        if (d < 2) throw std::invalid_argument("GateTeleportParams: d must be >= 2");
        if (tail < 0) throw std::invalid_argument("GateTeleportParams: tail must be >= 0");
        GateTeleportParams p;
        p.d = d;
        p.tail = tail;
        p.q = q;
        p.g = g;
        p.B = B;
        p.alphas = alpha_ratios(d, d + tail);
        p.validate();
        return p;
    }

    // Same truncation but with the exact self-Kerr coefficients on every level.
    static GateTeleportParams make_ideal(int d, int tail, double q, double g,
                                         ConditioningRadius B = ConditioningRadius::infinite()) {
        GateTeleportParams p = make(d, tail, q, g, B);
        for (int n = 0; n < static_cast<int>(p.alphas.size()); ++n)
            p.alphas[n] = self_kerr_sign(n);
        return p;
    }

    int top_level() const { return d + tail; }

    void validate() const {
        if (q < 0.0 || q >= 1.0)
            throw std::invalid_argument("GateTeleportParams: q must lie in [0,1)");
        if (g <= 0.0) throw std::invalid_argument("GateTeleportParams: g must be > 0");
        if (static_cast<int>(alphas.size()) != d + tail + 1)
            throw std::invalid_argument("GateTeleportParams: alphas must cover levels 0..d+tail");
    }
};

// Resource normalization N with 1/N^2 = sum_n q^(2n) alpha_n^2.
inline double resource_normalization(const GateTeleportParams& p) {
    p.validate();
    double inv_n2 = 0.0;
    for (int n = 0; n <= p.top_level(); ++n)
        inv_n2 += std::pow(p.q, 2 * n) * p.alphas[n] * p.alphas[n];
    return 1.0 / std::sqrt(inv_n2);
}

// Matrix of the f-deformed displacement C(gamma) = F D(gamma) F^dag with
// F = sum_n U_SK(n) |n><n|, truncated to n_trunc levels.
inline Eigen::MatrixXcd f_deformed_displacement_matrix(Complex gamma, int n_trunc) {
    Eigen::MatrixXcd c(n_trunc, n_trunc);
    for (int k = 0; k < n_trunc; ++k)
        for (int r = 0; r < n_trunc; ++r)
            c(k, r) = self_kerr_sign(k) * displacement_matrix_element(k, r, gamma) *
                      self_kerr_sign(r);
    return c;
}

namespace detail {

// One side of the block integrand: sum_r q^r U_SK(r) alpha_r
// D_{a,r}(g beta) D*_{b,r}(beta), flattened to coefficients per beta power.
// The conjugate-power is determined by the global angular balance, so only
// the beta power is tracked.  With `conjugated` the whole side enters the
// integrand conjugated, which swaps the tracked power.
inline std::vector<double> block_side_coefficients(int a, int b, const GateTeleportParams& p,
                                                   bool conjugated) {
    const double log_g = std::log(p.g);
    const double log_q = p.q > 0.0 ? std::log(p.q) : 0.0;
    std::vector<double> e(std::max(a, b) + p.top_level() + 1, 0.0);
    for (int r = 0; r <= p.top_level(); ++r) {
        if (p.q == 0.0 && r > 0) break;
        if (p.alphas[r] == 0.0) continue;
        double weight = self_kerr_sign(r) * p.alphas[r];
        double log_base = r * log_q + std::log(std::abs(weight)) +
                          0.5 * (log_factorial(r) - log_factorial(a)) +
                          0.5 * (log_factorial(r) - log_factorial(b));
        double sign_base = weight > 0.0 ? 1.0 : -1.0;
        for (int t1 = 0; t1 <= std::min(a, r); ++t1)
            for (int t2 = 0; t2 <= std::min(b, r); ++t2) {
                double log_mag = log_base + log_binomial(a, t1) - log_factorial(r - t1) +
                                 log_binomial(b, t2) - log_factorial(r - t2) +
                                 (a + r - 2 * t1) * log_g;
                double sign = (((r - t1) + (r - t2)) % 2 == 0) ? sign_base : -sign_base;
                int power = conjugated ? (b - t2) + (r - t1) : (a - t1) + (r - t2);
                e[power] += sign * std::exp(log_mag);
            }
    }
    return e;
}

}  // namespace detail

// Block integral F_{n,m,k,l} entering teleported-gate fidelities:
//   N^2 sum_{r,s} q^(r+s) U(r) alpha_r alpha_s U(s)
//     * (1/pi) * disc integral of D_{k,r}(g b) D*_{n,r}(b) D_{m,s}(b) D*_{l,s}(g b).
// Vanishes by the angular integral unless l = k - n + m, which is required.
inline double block_integral(int n, int m, int k, int l, const GateTeleportParams& p) {
    p.validate();
    if (l != k - n + m)
        throw std::invalid_argument("block_integral: indices must satisfy l = k - n + m");
    const double n_res = resource_normalization(p);
    const double a = 1.0 + p.g * p.g;
    const double log_a = std::log(a);

    auto e1 = detail::block_side_coefficients(k, n, p, false);
    auto e2 = detail::block_side_coefficients(l, m, p, true);

    const int p_max = static_cast<int>(e1.size() + e2.size()) - 2;
    std::vector<double> log_disc(p_max + 1);
    for (int pw = 0; pw <= p_max; ++pw) {
        double lg = p.B.is_infinite
                        ? log_factorial(pw)
                        : log_lower_incomplete_gamma_int(pw + 1, a * p.B.value * p.B.value);
        log_disc[pw] = lg - (pw + 1) * log_a;
    }

    double total = 0.0;
    for (std::size_t i = 0; i < e1.size(); ++i) {
        if (e1[i] == 0.0) continue;
        double log_e1 = std::log(std::abs(e1[i]));
        double sign1 = e1[i] > 0.0 ? 1.0 : -1.0;
        for (std::size_t j = 0; j < e2.size(); ++j) {
            if (e2[j] == 0.0) continue;
            double term = log_e1 + std::log(std::abs(e2[j])) + log_disc[i + j];
            double sign = e2[j] > 0.0 ? sign1 : -sign1;
            total += sign * std::exp(term);
        }
    }
    return n_res * n_res * total;
}

// Probability weight of an in-disc Bell result for Fock input |n>; equals 1
// for the unconditioned case.
inline double fock_success_weight(int n, const GateTeleportParams& p) {
    p.validate();
    if (p.B.is_infinite) return 1.0;
    const double n_res = resource_normalization(p);
    const double b2 = p.B.value * p.B.value;
    double total = 0.0;
    for (int k = 0; k <= p.top_level(); ++k) {
        if (p.q == 0.0 && k > 0) break;
        if (p.alphas[k] == 0.0) continue;
        double log_base = 2.0 * k * (p.q > 0.0 ? std::log(p.q) : 0.0) +
                          2.0 * std::log(std::abs(p.alphas[k])) +
                          (log_factorial(k) - log_factorial(n));
        for (int t2 = 0; t2 <= std::min(n, k); ++t2)
            for (int t3 = 0; t3 <= std::min(n, k); ++t3) {
                int pw = (k - t2) + (n - t3);
                double log_mag = log_base + log_binomial(n, t2) + log_binomial(n, t3) -
                                 log_factorial(k - t2) - log_factorial(k - t3) +
                                 log_lower_incomplete_gamma_int(pw + 1, b2);
                double sign = ((t2 + t3) % 2 == 0) ? 1.0 : -1.0;
                total += sign * std::exp(log_mag);
            }
    }
    return n_res * n_res * total;
}

inline double gate_success_probability(const InputState& state, const GateTeleportParams& p) {
    state.validate();
    double total = 0.0;
    for (int n = 0; n <= state.max_level(); ++n) {
        double w = std::norm(state.coeffs[n]);
        if (w > 0.0) total += w * fock_success_weight(n, p);
    }
    return total;
}

// Fidelity of the teleported gate acting on a single-mode input state,
// referenced against the exact self-Kerr action on that state.
inline FidelityResult gate_fidelity(const InputState& state, const GateTeleportParams& p) {
    state.validate();
    const int top = state.max_level();
    double raw = 0.0;
    for (int k = 0; k <= top; ++k)
        for (int n = 0; n <= top; ++n)
            for (int l = 0; l <= top; ++l) {
                const int m = n + l - k;
                if (m < 0 || m > top) continue;
                Complex coeff = std::conj(state.coeffs[k]) * state.coeffs[n] * state.coeffs[l] *
                                std::conj(state.coeffs[m]);
                if (coeff == Complex(0.0, 0.0)) continue;
                raw += (coeff * block_integral(n, m, k, l, p)).real();
            }
    FidelityResult result;
    result.raw = raw;
    double prob = gate_success_probability(state, p);
    result.conditional = prob > 0.0 ? raw / prob : 0.0;
    return result;
}

struct CsignResult {
    double raw = 0.0;
    double conditional = 0.0;
    double success_probability = 1.0;
};

// Worst-case CSIGN fidelity: the two modes of the worst-case input pass
// through independent teleported-gate channels carrying 0 or 2 photons, and
// the two-channel integrals factorize into products of single-mode blocks:
//   F = 1/2 [ F_{0,0,0,0} F_{2,2,2,2} + F_{0,0,2,2} F_{2,2,0,0}
//             + F_{0,2,0,2} F_{2,0,2,0} ].
inline CsignResult csign_worst_case_fidelity(const GateTeleportParams& p) {
    p.validate();
    double raw = 0.5 * (block_integral(0, 0, 0, 0, p) * block_integral(2, 2, 2, 2, p) +
                        block_integral(0, 0, 2, 2, p) * block_integral(2, 2, 0, 0, p) +
                        block_integral(0, 2, 0, 2, p) * block_integral(2, 0, 2, 0, p));

    CsignResult result;
    result.raw = raw;
    const double p0 = fock_success_weight(0, p);
    const double p2 = fock_success_weight(2, p);
    result.success_probability = 0.25 * (p0 + p2) * (p0 + p2);
    result.conditional = result.raw / result.success_probability;
    return result;
}

// Conditional worst-case CSIGN fidelity maximized over the gain.
inline std::pair<double, double> csign_best_gain(int d, int tail, double q,
                                                 ConditioningRadius B, double g_tol = 1e-5) {
    GateTeleportParams p = GateTeleportParams::make(d, tail, q, 1.0, B);
    auto f = [&](double g) {
        p.g = g;
        return csign_worst_case_fidelity(p).conditional;
    };
    return golden_max(f, 0.2, 1.2, g_tol);
}

struct CsignScanPoint {
    double q = 0.0;
    double db = 0.0;
    double g_opt = 0.0;
    double fidelity = 0.0;
};

struct CsignScanResult {
    std::vector<CsignScanPoint> points;
    CsignScanPoint best;
};

// Scans q over a uniform grid, maximizing over the gain at every point, and
// refines the overall optimum in q by golden section.
inline CsignScanResult csign_gain_optimized_scan(int d, int tail, ConditioningRadius B,
                                                 double q_min = 0.5, double q_max = 0.999,
                                                 int q_points = 400) {
    if (q_points < 2) throw std::invalid_argument("csign_gain_optimized_scan: need >= 2 points");
    CsignScanResult result;
    result.points.reserve(q_points);
    int best_i = 0;
    for (int i = 0; i < q_points; ++i) {
        double q = q_min + (q_max - q_min) * i / (q_points - 1);
        auto [g, f] = csign_best_gain(d, tail, q, B);
        result.points.push_back({q, q_to_db(q), g, f});
        if (f > result.points[best_i].fidelity) best_i = i;
    }
    double lo = result.points[std::max(0, best_i - 1)].q;
    double hi = result.points[std::min(q_points - 1, best_i + 1)].q;
    auto [q_best, f_best] = golden_max(
        [&](double q) { return csign_best_gain(d, tail, q, B).second; }, lo, hi, 1e-5);
    auto [g_best, f_check] = csign_best_gain(d, tail, q_best, B);
    (void)f_check;
    result.best = {q_best, q_to_db(q_best), g_best, f_best};
    return result;
}

// Number of source operations needed to prepare 2d heralded resource gates,
// each succeeding with probability p_gate, so that the whole bank is ready
// with probability at least p_total.
inline long long gate_bank_cost(int d, double p_total, double p_gate) {
    if (d < 1) throw std::invalid_argument("gate_bank_cost: d must be >= 1");
    if (p_total <= 0.0 || p_total >= 1.0)
        throw std::invalid_argument("gate_bank_cost: p_total must lie in (0,1)");
    if (p_gate <= 0.0 || p_gate >= 1.0)
        throw std::invalid_argument("gate_bank_cost: p_gate must lie in (0,1)");
    double value = 2.0 * d * std::log(1.0 - std::sqrt(p_total)) / std::log(1.0 - p_gate);
    return static_cast<long long>(std::ceil(value - 1e-9));
}

// Compact count rendering used in summary tables: exact below 1000, then
// thousands ("2.4k") and millions with one decimal below three digits.
inline std::string format_count(long long v) {
    std::ostringstream os;
    auto scaled = [&](double x, const char* suffix) {
        if (x < 100.0) {
            os.precision(1);
            os << std::fixed << x << suffix;
        } else {
            os << static_cast<long long>(std::llround(x)) << suffix;
        }
    };
    if (v < 1000)
        os << v;
    else if (v < 1000000)
        scaled(v / 1e3, "k");
    else
        scaled(v / 1e6, "M");
    return os.str();
}

}  // namespace telegate

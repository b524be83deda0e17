#pragma once

// Synthesis of generalized nonlinear-sign gates that reproduce the self-Kerr
// phase exp(i pi n(n-1)/2) on all Fock states up to |d>: target coefficients,
// ancilla-scattering amplitudes, the structured contraction matrix, and the
// success-probability search.

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "telegate/numerics.hpp"

namespace telegate {

// Self-Kerr phase factor exp(i pi m(m-1)/2); always +1 or -1.
inline double self_kerr_sign(int m) {
    // m(m-1)/2 mod 2 cycles with period 4: 0,0,1,1
    return (((m % 4) + 4) % 4 < 2) ? 1.0 : -1.0;
}

// Signal self-transmission (-1)^(d+1) tan(pi/(4d)).
inline double v11_of(int d) {
    if (d < 1) throw std::invalid_argument("v11_of: d must be >= 1");
    double sign = (d % 2 == 0) ? -1.0 : 1.0;
    return sign * std::tan(kPi / (4.0 * d));
}

// beta_k = alpha0 * sum_l C(k,l) v11^l U_SK(k+l), k = 0..d-1.
inline std::vector<Complex> beta_coefficients(int d, Complex alpha0) {
    if (d < 2) throw std::invalid_argument("beta_coefficients: d must be >= 2");
    const double v11 = v11_of(d);
    std::vector<Complex> betas(d);
    for (int k = 0; k < d; ++k) {
        double sum = 0.0;
        for (int l = 0; l <= k; ++l) {
            sum += binomial(k, l) * std::pow(v11, l) * self_kerr_sign(k + l);
        }
        betas[k] = alpha0 * sum;
    }
    return betas;
}

// alpha_n = sum_k C(n,k) v11^(n-k) beta_k for n = 0..n_max.
inline std::vector<Complex> alpha_from_betas(int d, const std::vector<Complex>& betas, int n_max) {
    const double v11 = v11_of(d);
    std::vector<Complex> alphas(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        Complex sum(0.0, 0.0);
        for (int k = 0; k < d && k <= n; ++k) {
            sum += binomial(n, k) * std::pow(v11, n - k) * betas[k];
        }
        alphas[n] = sum;
    }
    return alphas;
}

// Normalized gate coefficients alpha_n / alpha_0 for n = 0..n_max; the only
// gate data needed by the teleportation fidelity formulas.
inline std::vector<double> alpha_ratios(int d, int n_max) {
    auto betas = beta_coefficients(d, Complex(1.0, 0.0));
    auto alphas = alpha_from_betas(d, betas, n_max);
    std::vector<double> r(n_max + 1);
    for (int n = 0; n <= n_max; ++n) r[n] = alphas[n].real();
    return r;
}

// Ancilla-scattering amplitudes lambda_1..lambda_{d-1}: roots of the monic
// polynomial whose elementary symmetric polynomials are e_k = beta_k/(k! alpha0).
// Sorted by increasing magnitude (ties broken by ascending phase angle), so
// the largest root lands in the last matrix row where it is damped by
// alpha0/x^(d-1); the other rows carry their roots undamped.
inline std::vector<Complex> solve_lambdas(int d, Complex alpha0) {
    if (d < 2) throw std::invalid_argument("solve_lambdas: d must be >= 2");
    auto betas = beta_coefficients(d, alpha0);
    const int m = d - 1;
    std::vector<Complex> esym(m + 1);
    esym[0] = 1.0;
    for (int k = 1; k <= m; ++k) {
        esym[k] = betas[k] / (std::exp(log_factorial(k)) * alpha0);
    }
    if (m == 1) return {esym[1]};

    // companion matrix of z^m - e1 z^(m-1) + e2 z^(m-2) - ...
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
    for (int k = 0; k < m; ++k) {
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        comp(0, k) = sign * esym[k + 1];
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("solve_lambdas: eigenvalue iteration did not converge");

    std::vector<Complex> roots(m);
    for (int i = 0; i < m; ++i) roots[i] = solver.eigenvalues()(i);
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        double ma = std::abs(a), mb = std::abs(b);
        if (std::abs(ma - mb) > 1e-12 * std::max(1.0, std::max(ma, mb))) return ma < mb;
        return std::arg(a) < std::arg(b);
    });

    // residual check: reconstructed elementary symmetric polynomials
    std::vector<Complex> poly{1.0};
    for (Complex r : roots) {
        std::vector<Complex> next(poly.size() + 1, Complex(0.0, 0.0));
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] += poly[i] * r;
        }
        poly = next;  // coefficients of prod (1 + r z): poly[k] = e_k
    }
    for (int k = 1; k <= m; ++k) {
        if (std::abs(poly[k] - esym[k]) > 1e-8 * std::max(1.0, std::abs(esym[k])))
            throw std::runtime_error("solve_lambdas: root residual exceeds 1e-8");
    }
    return roots;
}

// The structured d x d contraction matrix with tuning parameter x > 0.
inline Eigen::MatrixXcd assemble_vmat(int d, Complex alpha0, double x,
                                      const std::vector<Complex>& lambdas) {
    if (x <= 0.0) throw std::invalid_argument("assemble_vmat: x must be > 0");
    if (static_cast<int>(lambdas.size()) != d - 1)
        throw std::invalid_argument("assemble_vmat: need d-1 lambdas");
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(d, d);
    v(0, 0) = v11_of(d);
    for (int j = 1; j < d; ++j) v(0, j) = x;
    for (int i = 1; i < d - 1; ++i) {
        v(i, 0) = lambdas[i - 1];
        v(i, i) = x;
    }
    v(d - 1, 0) = alpha0 * lambdas[d - 2] / std::pow(x, d - 1);
    v(d - 1, d - 1) = alpha0 / std::pow(x, d - 2);
    return v;
}

// Complete description of a synthesized generalized NSS gate.
struct NssdSpec {
    int d = 0;
    Complex alpha0;
    double v11 = 0.0;
    std::vector<Complex> betas;
    std::vector<Complex> lambdas;
    double x = 0.0;
    Eigen::MatrixXcd vmat;
    double success_probability = 0.0;

    // Structured text record consumed by the CLI and the CV gate-teleport side.
    std::string to_text() const {
        std::ostringstream os;
        os.precision(17);
        os << "d=" << d << "\n";
        os << "alpha0=" << alpha0.real() << ":" << alpha0.imag() << "\n";
        os << "v11=" << v11 << "\n";
        os << "x=" << x << "\n";
        os << "p_d=" << success_probability << "\n";
        os << "lambdas=";
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            if (i) os << ";";
            os << lambdas[i].real() << ":" << lambdas[i].imag();
        }
        os << "\n";
        os << "vmat=";
        for (int i = 0; i < vmat.rows(); ++i)
            for (int j = 0; j < vmat.cols(); ++j) {
                if (i || j) os << ";";
                os << vmat(i, j).real() << ":" << vmat(i, j).imag();
            }
        os << "\n";
        return os.str();
    }
};

inline double spectral_norm(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

struct XScan {
    double x_min = 1e-3;
    double x_max = 1.0;
    int points = 200;
};

namespace detail {

// Minimum spectral norm over a log-spaced x grid, refined once around the
// best grid point.  Returns (best_x, best_norm).
inline std::pair<double, double> best_x(int d, Complex alpha0, const std::vector<Complex>& lambdas,
                                        const XScan& scan) {
    auto norm_at = [&](double x) { return spectral_norm(assemble_vmat(d, alpha0, x, lambdas)); };
    double log_min = std::log(scan.x_min), log_max = std::log(scan.x_max);
    double best_norm = std::numeric_limits<double>::infinity();
    int best_i = 0;
    std::vector<double> xs(scan.points);
    for (int i = 0; i < scan.points; ++i) {
        xs[i] = std::exp(log_min + (log_max - log_min) * i / (scan.points - 1));
        double nrm = norm_at(xs[i]);
        if (nrm < best_norm) {
            best_norm = nrm;
            best_i = i;
        }
    }
    double lo = xs[std::max(0, best_i - 1)];
    double hi = xs[std::min(scan.points - 1, best_i + 1)];
    double bx = xs[best_i];
    for (int i = 0; i <= scan.points; ++i) {
        double x = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / scan.points);
        double nrm = norm_at(x);
        if (nrm < best_norm) {
            best_norm = nrm;
            bx = x;
        }
    }
    return {bx, best_norm};
}

}  // namespace detail

// Bisects on |alpha0| (taken real positive; the gate's global phase is
// unobservable) with an inner scan over x, returning the largest feasible
// success probability p_d = alpha0^2 and the corresponding spec.
inline std::pair<double, NssdSpec> max_success_probability(int d, const XScan& scan = {},
                                                           double tol = 1e-6) {
    if (d < 2 || d > 7)
        throw std::invalid_argument("max_success_probability: d must lie in 2..7");

    auto feasible = [&](double a0) {
        auto lambdas = solve_lambdas(d, Complex(a0, 0.0));
        auto [x, nrm] = detail::best_x(d, Complex(a0, 0.0), lambdas, scan);
        return std::tuple<bool, double, std::vector<Complex>>(nrm <= 1.0 + 1e-12, x,
                                                              std::move(lambdas));
    };

    double lo = 0.05 * std::sqrt(25.0 * std::pow(10.0, -d));
    double hi = 1.0;
    auto [lo_ok, lo_x, lo_lambdas] = feasible(lo);
    if (!lo_ok)
        throw std::runtime_error("max_success_probability: no feasible point at smallest alpha0");
    double best_a0 = lo, best_x_val = lo_x;
    std::vector<Complex> best_lambdas = std::move(lo_lambdas);
    while (hi - lo > tol * std::max(1e-3, lo)) {
        double mid = 0.5 * (hi + lo);
        auto [ok, x, lambdas] = feasible(mid);
        if (ok) {
            lo = mid;
            best_a0 = mid;
            best_x_val = x;
            best_lambdas = std::move(lambdas);
        } else {
            hi = mid;
        }
    }

    NssdSpec spec;
    spec.d = d;
    spec.alpha0 = Complex(best_a0, 0.0);
    spec.v11 = v11_of(d);
    spec.betas = beta_coefficients(d, spec.alpha0);
    spec.lambdas = best_lambdas;
    spec.x = best_x_val;
    spec.vmat = assemble_vmat(d, spec.alpha0, best_x_val, best_lambdas);
    spec.success_probability = best_a0 * best_a0;
    return {spec.success_probability, spec};
}

// Gate action written as the double sum over scattering orders; equivalent to
// alpha_from_betas and used as an algebraic cross-check.
inline Complex alpha_double_sum(int d, Complex alpha0, int n) {
    const double v11 = v11_of(d);
    Complex sum(0.0, 0.0);
    for (int k = 0; k < d; ++k) {
        for (int l = 0; l <= k; ++l) {
            sum += binomial(n, k) * binomial(k, l) * std::pow(v11, n - k + l) *
                   self_kerr_sign(k + l);
        }
    }
    return alpha0 * sum;
}

}  // namespace telegate

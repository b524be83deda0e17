#pragma once

// Scalar numerical kernels shared across the library: log-factorials,
// binomial coefficients, the integer-order lower incomplete gamma function,
// squeezing-parameter/dB conversion, matrix permanents and a log-magnitude
// representation for products that overflow double precision.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace telegate {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// ln(n!) for n >= 0.  Table-backed, accurate to ~1e-15 relative.
inline double log_factorial(int n) {
    if (n < 0) throw std::invalid_argument("log_factorial: n must be >= 0");
    static const std::vector<double> table = [] {
        std::vector<double> t(4096);
        t[0] = 0.0;
        for (std::size_t i = 1; i < t.size(); ++i)
            t[i] = t[i - 1] + std::log(static_cast<double>(i));
        return t;
    }();
    if (static_cast<std::size_t>(n) < table.size()) return table[n];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

// C(n, k) as a double.  Exact (integer-valued) for n <= 62, log-space
// otherwise.  Out-of-range k yields 0.
inline double binomial(int n, int k) {
    if (n < 0) throw std::invalid_argument("binomial: n must be >= 0");
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    if (n <= 62) {
        std::uint64_t c = 1;
        for (int i = 1; i <= k; ++i) {
            c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
        }
        return static_cast<double>(c);
    }
    return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

inline double log_binomial(int n, int k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

namespace detail {

// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / (s-1)! for
// integer s >= 1.  Series for x < s + 1, complement sum otherwise.
inline double regularized_lower_gamma_int(int s, double x) {
    if (s < 1) throw std::invalid_argument("lower gamma: s must be >= 1");
    if (x < 0.0) throw std::invalid_argument("lower gamma: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) {
        // P(s,x) = x^s e^-x / s! * sum_k x^k / (s+1)_k
        double term = 1.0;
        double sum = 1.0;
        double denom = s;
        for (int k = 1; k < 10000; ++k) {
            denom += 1.0;
            term *= x / denom;
            sum += term;
            if (term < sum * 1e-17) break;
        }
        // prefactor x^s e^-x / s!
        double log_pref = s * std::log(x) - x - log_factorial(s);
        return std::exp(log_pref) * sum;
    }
    // Q(s,x) = e^-x sum_{j<s} x^j / j!, summed from the largest term down.
    double log_x = std::log(x);
    double q = 0.0;
    for (int j = s - 1; j >= 0; --j) {
        q += std::exp(j * log_x - x - log_factorial(j));
    }
    return 1.0 - q;
}

}  // namespace detail

// Lower incomplete gamma gamma(s, x) for integer order s >= 1.
inline double lower_incomplete_gamma_int(int s, double x) {
    return detail::regularized_lower_gamma_int(s, x) * std::exp(log_factorial(s - 1));
}

// log gamma(s, x); usable where gamma(s, x) itself overflows.
inline double log_lower_incomplete_gamma_int(int s, double x) {
    double p = detail::regularized_lower_gamma_int(s, x);
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(p) + log_factorial(s - 1);
}

// Value kept as log|z| plus a phase, so that products of factorials far
// beyond double range stay representable.  Zero is the distinguished
// sentinel log_magnitude = -inf.
struct LogMagnitudePhase {
    double log_magnitude = -std::numeric_limits<double>::infinity();
    double phase = 0.0;  // radians in [0, 2*pi)

    static LogMagnitudePhase zero() { return {}; }

    static LogMagnitudePhase from_real(double v) {
        if (v == 0.0) return zero();
        return {std::log(std::abs(v)), v > 0.0 ? 0.0 : kPi};
    }

    static LogMagnitudePhase from_complex(Complex z) {
        if (z == Complex(0.0, 0.0)) return zero();
        double ph = std::arg(z);
        if (ph < 0.0) ph += 2.0 * kPi;
        return {std::log(std::abs(z)), ph};
    }

    static LogMagnitudePhase from_log(double log_mag, double ph = 0.0) {
        LogMagnitudePhase r;
        r.log_magnitude = log_mag;
        r.phase = std::fmod(ph, 2.0 * kPi);
        if (r.phase < 0.0) r.phase += 2.0 * kPi;
        return r;
    }

    bool is_zero() const { return std::isinf(log_magnitude) && log_magnitude < 0.0; }

    LogMagnitudePhase operator*(const LogMagnitudePhase& o) const {
        if (is_zero() || o.is_zero()) return zero();
        return from_log(log_magnitude + o.log_magnitude, phase + o.phase);
    }

    Complex to_complex() const {
        if (is_zero()) return {0.0, 0.0};
        double m = std::exp(log_magnitude);
        return {m * std::cos(phase), m * std::sin(phase)};
    }
};

// Squeezing strength in dB for the two-mode squeezed state parameter q.
inline double q_to_db(double q) {
    if (q < 0.0 || q >= 1.0) throw std::invalid_argument("q_to_db: q must lie in [0, 1)");
    return 20.0 * std::atanh(q) / std::log(10.0);
}

inline double db_to_q(double db) {
    if (db < 0.0) throw std::invalid_argument("db_to_q: dB value must be >= 0");
    return std::tanh(db * std::log(10.0) / 20.0);
}

// Matrix permanent via the Ryser formula with Gray-code updates, O(2^n n).
// Intended for the small matrices arising in gate verification; n <= 12.
inline Complex permanent(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("permanent: matrix must be square");
    const int n = static_cast<int>(m.rows());
    if (n > 12) throw std::invalid_argument("permanent: dimension exceeds supported maximum of 12");
    if (n == 0) return {1.0, 0.0};

    std::vector<Complex> row_sum(n, Complex(0.0, 0.0));
    Complex total(0.0, 0.0);
    std::uint32_t prev = 0;
    double sign_subset = 1.0;  // (-1)^|S| tracked incrementally
    for (std::uint32_t k = 1; k < (1u << n); ++k) {
        std::uint32_t gray = k ^ (k >> 1);
        std::uint32_t diff = gray ^ prev;
        int j = 0;
        while (!(diff & (1u << j))) ++j;
        if (gray & diff) {
            for (int i = 0; i < n; ++i) row_sum[i] += m(i, j);
            sign_subset = -sign_subset;
        } else {
            for (int i = 0; i < n; ++i) row_sum[i] -= m(i, j);
            sign_subset = -sign_subset;
        }
        prev = gray;
        Complex prod(1.0, 0.0);
        for (int i = 0; i < n; ++i) prod *= row_sum[i];
        total += sign_subset * prod;
    }
    double sign_n = (n % 2 == 0) ? 1.0 : -1.0;
    return sign_n * total;
}

// Golden-section maximization of a unimodal function on [lo, hi].
template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double x_tol) {
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > x_tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    double x = 0.5 * (a + b);
    return {x, f(x)};
}

}  // namespace telegate

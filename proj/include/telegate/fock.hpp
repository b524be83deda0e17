#pragma once

// Exact multimode Fock-state evolution through linear interferometers via
// matrix permanents, heralded-gate verification, and unitary dilation of
// contraction matrices.

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "telegate/numerics.hpp"

namespace telegate {

// Photon counts per optical mode.
using OccupationVector = std::vector<int>;

inline int total_photons(const OccupationVector& occ) {
    return std::accumulate(occ.begin(), occ.end(), 0);
}

// Interferometer plus ancilla inputs and herald pattern defining a
// conditional single-mode gate.  The signal mode is mode 0; the ancilla and
// detected modes follow.
struct HeraldedGateSetup {
    Eigen::MatrixXcd unitary;          // mode transformation on creation operators
    OccupationVector ancilla_in;       // photons injected on modes 1..
    OccupationVector herald_out;       // detected pattern on modes 1..
    int signal_mode = 0;

    int mode_count() const { return static_cast<int>(unitary.rows()); }

    void validate() const {
        if (unitary.rows() != unitary.cols())
            throw std::invalid_argument("HeraldedGateSetup: unitary must be square");
        double defect = (unitary.adjoint() * unitary -
                         Eigen::MatrixXcd::Identity(unitary.rows(), unitary.cols()))
                            .cwiseAbs()
                            .maxCoeff();
        if (defect > 1e-10)
            throw std::invalid_argument("HeraldedGateSetup: matrix is not unitary within 1e-10");
        if (static_cast<int>(ancilla_in.size()) != mode_count() - 1 ||
            static_cast<int>(herald_out.size()) != mode_count() - 1)
            throw std::invalid_argument("HeraldedGateSetup: ancilla/herald size mismatch");
        if (total_photons(ancilla_in) != total_photons(herald_out))
            throw std::invalid_argument(
                "HeraldedGateSetup: ancilla and herald photon totals must agree");
    }
};

// <out| U |in> for a linear interferometer acting on creation operators as
// a_k^dag -> sum_l U(k,l) a_l^dag.  Evaluated as the permanent of the
// row/column-repeated submatrix divided by sqrt(prod in_i! prod out_j!).
inline Complex output_amplitude(const Eigen::MatrixXcd& unitary, const OccupationVector& in_occ,
                                const OccupationVector& out_occ) {
    const int modes = static_cast<int>(unitary.rows());
    if (static_cast<int>(in_occ.size()) != modes || static_cast<int>(out_occ.size()) != modes)
        throw std::invalid_argument("output_amplitude: occupation length must equal mode count");
    const int n = total_photons(in_occ);
    if (n != total_photons(out_occ))
        throw std::invalid_argument("output_amplitude: photon-number mismatch between in and out");
    if (n > 12) throw std::invalid_argument("output_amplitude: photon total exceeds 12");

    std::vector<int> rows, cols;
    rows.reserve(n);
    cols.reserve(n);
    for (int k = 0; k < modes; ++k)
        for (int c = 0; c < in_occ[k]; ++c) rows.push_back(k);
    for (int l = 0; l < modes; ++l)
        for (int c = 0; c < out_occ[l]; ++c) cols.push_back(l);

    Eigen::MatrixXcd sub(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) sub(a, b) = unitary(rows[a], cols[b]);

    double log_norm = 0.0;
    for (int k = 0; k < modes; ++k) log_norm += log_factorial(in_occ[k]) + log_factorial(out_occ[k]);
    return permanent(sub) * std::exp(-0.5 * log_norm);
}

// Unnormalized conditional amplitudes alpha_n = <n, herald| U |n, ancilla>
// for n = 0..n_max.
inline std::vector<Complex> heralded_gate_coefficients(const HeraldedGateSetup& setup, int n_max) {
    setup.validate();
    const int anc = total_photons(setup.ancilla_in);
    if (n_max + anc > 12)
        throw std::invalid_argument("heralded_gate_coefficients: truncation exceeds photon limit");
    std::vector<Complex> alphas;
    alphas.reserve(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        OccupationVector in{n}, out{n};
        in.insert(in.end(), setup.ancilla_in.begin(), setup.ancilla_in.end());
        out.insert(out.end(), setup.herald_out.begin(), setup.herald_out.end());
        alphas.push_back(output_amplitude(setup.unitary, in, out));
    }
    return alphas;
}

// The three-mode nonlinear-sign-shift interferometer with reflection
// amplitudes r1 = r3 = cos(pi/8), r2 = tan(pi/8); ancilla |1,0>, herald (1,0).
inline HeraldedGateSetup klm_nss_setup() {
    const double s2 = std::sqrt(2.0);
    Eigen::MatrixXcd u(3, 3);
    u << 1.0 - s2, -std::pow(2.0, -0.25), std::sqrt(3.0 / s2 - 2.0),
        -std::pow(2.0, -0.25), 0.5, 1.0 / s2 - 0.5,
        std::sqrt(3.0 / s2 - 2.0), 1.0 / s2 - 0.5, s2 - 0.5;
    HeraldedGateSetup setup;
    setup.unitary = u;
    setup.ancilla_in = {1, 0};
    setup.herald_out = {1, 0};
    return setup;
}

// Closed-form Fock action of the NSS gate: |n> -> nss_fock_coefficient(n) |n>.
inline double nss_fock_coefficient(int n) {
    const double s2 = std::sqrt(2.0);
    return 0.5 * std::pow(1.0 - s2, n) * (1.0 - (2.0 + s2) * n);
}

// Embeds a two-mode transformation into an n-mode identity.
inline Eigen::MatrixXcd embed_two_mode(int modes, int i, int j, const Eigen::Matrix2cd& u) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(modes, modes);
    m(i, i) = u(0, 0);
    m(i, j) = u(0, 1);
    m(j, i) = u(1, 0);
    m(j, j) = u(1, 1);
    return m;
}

// 50:50 beam splitter convention used throughout: (a,b) -> ((a+b), (a-b))/sqrt(2).
inline Eigen::Matrix2cd beam_splitter_50_50() {
    Eigen::Matrix2cd bs;
    bs << 1.0, 1.0, 1.0, -1.0;
    return bs / std::sqrt(2.0);
}

// Dual-rail CSIGN circuit: two 50:50 beam splitters on the "1" rails with one
// NSS gate (plus its two ancilla modes) on each rail in between.
//
// Mode layout (8 modes): 0,1 = qubit-one rails; 2,3 = qubit-two rails;
// 4,5 = ancillas of the first NSS; 6,7 = ancillas of the second.
// Logical |1> puts the photon on the first rail of the pair.
struct CsignCircuit {
    Eigen::MatrixXcd unitary;       // 8x8
    OccupationVector ancilla_in;    // modes 4..7
    OccupationVector herald_out;

    // Occupation of the four signal modes for logical basis state |b1 b2>.
    OccupationVector basis_occupation(int b1, int b2) const {
        OccupationVector occ(8, 0);
        occ[b1 ? 0 : 1] = 1;
        occ[b2 ? 2 : 3] = 1;
        occ[4] = ancilla_in[0];
        occ[5] = ancilla_in[1];
        occ[6] = ancilla_in[2];
        occ[7] = ancilla_in[3];
        return occ;
    }

    OccupationVector basis_output(int b1, int b2) const {
        OccupationVector occ = basis_occupation(b1, b2);
        occ[4] = herald_out[0];
        occ[5] = herald_out[1];
        occ[6] = herald_out[2];
        occ[7] = herald_out[3];
        return occ;
    }

    // Heralded amplitude <basis, herald| U |basis, ancilla>.
    Complex basis_amplitude(int b1, int b2) const {
        return output_amplitude(unitary, basis_occupation(b1, b2), basis_output(b1, b2));
    }
};

inline CsignCircuit csign_circuit() {
    const int modes = 8;
    const HeraldedGateSetup nss = klm_nss_setup();

    auto embed_nss = [&](int signal, int anc1, int anc2) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(modes, modes);
        const std::array<int, 3> idx{signal, anc1, anc2};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) m(idx[a], idx[b]) = nss.unitary(a, b);
        return m;
    };

    Eigen::MatrixXcd bs1 = embed_two_mode(modes, 0, 2, beam_splitter_50_50());
    Eigen::MatrixXcd bs2 = embed_two_mode(modes, 0, 2, beam_splitter_50_50().adjoint());
    Eigen::MatrixXcd nss_pair = embed_nss(0, 4, 5) * embed_nss(2, 6, 7);

    // On creation-operator matrices the first physical element multiplies
    // from the left: a^dag -> M_bs1 M_nss M_bs2 a^dag.
    CsignCircuit circuit;
    circuit.unitary = bs1 * nss_pair * bs2;
    circuit.ancilla_in = {1, 0, 1, 0};
    circuit.herald_out = {1, 0, 1, 0};
    return circuit;
}

// Extends a contraction v (largest singular value <= 1) to a 2d x 2d unitary
// whose upper-left block equals v, using the singular-value-defect
// construction.  The global phase of each defect column is fixed by making
// its first nonzero entry real positive.
inline Eigen::MatrixXcd dilate_contraction(const Eigen::MatrixXcd& v) {
    if (v.rows() != v.cols()) throw std::invalid_argument("dilate_contraction: matrix must be square");
    const int d = static_cast<int>(v.rows());
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double norm2 = svd.singularValues()(0);
    if (norm2 > 1.0 + 1e-10) {
        std::ostringstream msg;
        msg << "dilate_contraction: spectral norm " << norm2 << " exceeds 1";
        throw std::invalid_argument(msg.str());
    }

    Eigen::VectorXd sigma = svd.singularValues().cwiseMin(1.0);
    Eigen::VectorXd defect = (Eigen::VectorXd::Ones(d) - sigma.cwiseProduct(sigma))
                                 .cwiseMax(0.0)
                                 .cwiseSqrt();

    Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
    Eigen::MatrixXcd w = svd.matrixU();
    Eigen::MatrixXcd vh = svd.matrixV().adjoint();
    big.topLeftCorner(d, d) = w * sigma.asDiagonal() * vh;
    big.topRightCorner(d, d) = w * defect.asDiagonal();
    big.bottomLeftCorner(d, d) = defect.asDiagonal() * vh;
    big.bottomRightCorner(d, d) = -sigma.asDiagonal().toDenseMatrix().cast<Complex>();

    for (int j = d; j < 2 * d; ++j) {
        for (int i = 0; i < 2 * d; ++i) {
            Complex e = big(i, j);
            if (std::abs(e) > 1e-12) {
                big.col(j) *= std::conj(e) / std::abs(e);
                break;
            }
        }
    }
    return big;
}

}  // namespace telegate

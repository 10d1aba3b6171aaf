#ifndef LDECHAIN_ENTANGLEMENT_HPP
#define LDECHAIN_ENTANGLEMENT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <iostream>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "chain_model.hpp"

// End-to-end two-qubit observables of the chain: reduced density matrix
// via Wick's theorem (with the Jordan-Wigner string determinant),
// concurrence, fully entangled fraction and maximal teleportation
// fidelity. Basis ordering is {uu, ud, du, dd} for (site 1, site N).

namespace ldechain {

using complexd = std::complex<double>;

struct TwoQubitDensity {
    Eigen::Matrix4cd rho;
};

/// <S^z_i> = G_ii - 1/2, sites indexed 1..N.
inline double local_magnetization(const CorrelationMatrix& c, int i) {
    const int n = static_cast<int>(c.g.rows());
    if (i < 1 || i > n) throw std::out_of_range("local_magnetization: site index out of range");
    return c.g(i - 1, i - 1) - 0.5;
}

/// <S^z_i S^z_j> by Wick contraction of the Gaussian state.
inline double zz_correlator(const CorrelationMatrix& c, int i, int j) {
    const int n = static_cast<int>(c.g.rows());
    if (i < 1 || i > n || j < 1 || j > n)
        throw std::out_of_range("zz_correlator: site index out of range");
    if (i == j) throw std::invalid_argument("zz_correlator: i == j (use local_magnetization)");
    return (c.g(i - 1, i - 1) - 0.5) * (c.g(j - 1, j - 1) - 0.5) - c.g(i - 1, j - 1) * c.g(j - 1, i - 1);
}

/// <S+_1 S-_N> = <c+_1 prod_{k=2}^{N-1}(1 - 2 n_k) c_N>, evaluated as
/// (1/2) det D, D_{jk} = 2 G_{jk} - delta_{jk} with rows j in 1..N-1 and
/// columns k in 2..N. The 1/2 prefactor is pinned against the
/// sector-ED oracle on N = 2..10.
inline double string_correlator(const CorrelationMatrix& c) {
    const int n = static_cast<int>(c.g.rows());
    if (n < 2) throw std::invalid_argument("string_correlator: need N >= 2");
    Eigen::MatrixXd d(n - 1, n - 1);
    for (int j = 0; j < n - 1; ++j)
        for (int k = 0; k < n - 1; ++k)
            d(j, k) = 2.0 * c.g(j, k + 1) - (j == k + 1 ? 1.0 : 0.0);
    return 0.5 * d.determinant();
}

/// End-to-end reduced density matrix (an X state with no uu<->dd
/// coherence; particle-number conservation forbids it).
inline TwoQubitDensity end_to_end_rdm(const CorrelationMatrix& c) {
    const int n = static_cast<int>(c.g.rows());
    const double m1 = local_magnetization(c, 1);
    const double mn = local_magnetization(c, n);
    const double zz = zz_correlator(c, 1, n);
    const double s = string_correlator(c);

    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    rho(0, 0) = 0.25 + 0.5 * (m1 + mn) + zz;
    rho(1, 1) = 0.25 + 0.5 * (m1 - mn) - zz;
    rho(2, 2) = 0.25 - 0.5 * (m1 - mn) - zz;
    rho(3, 3) = 0.25 - 0.5 * (m1 + mn) + zz;
    rho(1, 2) = s;
    rho(2, 1) = s;

    // PSD clip within tolerance
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-9)
        throw std::runtime_error("end_to_end_rdm: density matrix not PSD beyond tolerance");
    if (min_eig < 0.0) {
        std::cerr << "end_to_end_rdm: clipping eigenvalue " << min_eig << " to zero\n";
        Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
        ev /= ev.sum();
        rho = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    }
    return {rho};
}

namespace detail {

inline void check_density(const Eigen::Matrix4cd& rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
        throw std::invalid_argument("density matrix not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-8)
        throw std::invalid_argument("density matrix trace != 1");
}

inline Eigen::Matrix4cd spin_flip_yy() {
    // sigma_y (x) sigma_y, real representation: antidiagonal {-1, 1, 1, -1}
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    return yy;
}

}  // namespace detail

/// Wootters concurrence via the spin-flipped spectrum.
inline double concurrence(const TwoQubitDensity& state) {
    detail::check_density(state.rho);
    const Eigen::Matrix4cd yy = detail::spin_flip_yy();
    const Eigen::Matrix4cd r = state.rho * yy * state.rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(r);
    Eigen::Vector4d lam;
    for (int i = 0; i < 4; ++i)
        lam(i) = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
    std::sort(lam.data(), lam.data() + 4, std::greater<double>());
    return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

/// Closed-form concurrence for X states: 2 max(0, |rho_23| - sqrt(rho_11 rho_44),
///                                             |rho_14| - sqrt(rho_22 rho_33)).
inline double concurrence_x_state(const TwoQubitDensity& state) {
    const Eigen::Matrix4cd& r = state.rho;
    const double c1 = std::abs(r(1, 2)) - std::sqrt(std::max(0.0, r(0, 0).real() * r(3, 3).real()));
    const double c2 = std::abs(r(0, 3)) - std::sqrt(std::max(0.0, r(1, 1).real() * r(2, 2).real()));
    return 2.0 * std::max({0.0, c1, c2});
}

/// Columns are the magic Bell basis: real combinations of these are
/// exactly the maximally entangled states.
inline Eigen::Matrix4cd magic_basis() {
    const complexd i(0.0, 1.0);
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m.col(0) << s, 0, 0, s;          // (uu + dd)/sqrt2
    m.col(1) << i * s, 0, 0, -i * s; // i(uu - dd)/sqrt2
    m.col(2) << 0, i * s, i * s, 0;  // i(ud + du)/sqrt2
    m.col(3) << 0, s, -s, 0;         // (ud - du)/sqrt2
    return m;
}

/// Fully entangled fraction: the largest eigenvalue of Re(rho) in the
/// magic basis.
inline double fully_entangled_fraction(const TwoQubitDensity& state) {
    detail::check_density(state.rho);
    const Eigen::Matrix4cd m = magic_basis();
    const Eigen::Matrix4cd in_magic = m.adjoint() * state.rho * m;
    const Eigen::Matrix4d re = in_magic.real();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(0.5 * (re + re.transpose()));
    return es.eigenvalues().maxCoeff();
}

/// Maximal standard teleportation fidelity, F = (2f + 1)/3.
inline double max_fidelity(const TwoQubitDensity& state) {
    return (2.0 * fully_entangled_fraction(state) + 1.0) / 3.0;
}

/// A Haar-random maximally entangled two-qubit state, (U (x) I)|Phi+>.
template <class Rng>
Eigen::Vector4cd random_max_entangled(Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    // Haar U(2) via QR of a Ginibre matrix
    Eigen::Matrix2cd a;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            a(i, j) = complexd(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::Matrix2cd> qr(a);
    Eigen::Matrix2cd q = qr.householderQ();
    Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < 2; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));

    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Vector4cd phi;
    // |Phi> = sum_k (U|k>) (x) |k> / sqrt2; index = 2*site1 + site2
    phi << s * q(0, 0), s * q(0, 1), s * q(1, 0), s * q(1, 1);
    return phi;
}

}  // namespace ldechain

#endif  // LDECHAIN_ENTANGLEMENT_HPP

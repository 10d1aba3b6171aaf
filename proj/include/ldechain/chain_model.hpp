#ifndef LDECHAIN_CHAIN_MODEL_HPP
#define LDECHAIN_CHAIN_MODEL_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Open XX spin chains with site-dependent couplings, mapped to free
// fermions. All energies and temperatures are in units of the bulk
// coupling J_b, with k_B = 1.

namespace ldechain {

enum class ProfileKind { uniform, dimerized, lambda, lambda_mu, custom };

inline const char* to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::uniform: return "uniform";
        case ProfileKind::dimerized: return "dimerized";
        case ProfileKind::lambda: return "lambda";
        case ProfileKind::lambda_mu: return "lambda_mu";
        case ProfileKind::custom: return "custom";
    }
    return "?";
}

/// Nearest-neighbor couplings J_1..J_{N-1} of an open N-site chain.
struct CouplingProfile {
    int n_sites = 0;
    std::vector<double> couplings;  // length N-1, all > 0
    ProfileKind kind = ProfileKind::custom;
    double lambda = 1.0;
    double mu = 1.0;
};

inline CouplingProfile make_profile(ProfileKind kind, int n_sites,
                                    double lambda = 1.0, double mu = 1.0,
                                    const std::vector<double>& custom = {}) {
    if (n_sites < 2) throw std::invalid_argument("make_profile: need N >= 2");
    if (lambda <= 0.0 || mu <= 0.0)
        throw std::invalid_argument("make_profile: couplings must be positive");

    CouplingProfile p;
    p.n_sites = n_sites;
    p.kind = kind;
    p.lambda = lambda;
    p.mu = mu;
    const int nb = n_sites - 1;
    switch (kind) {
        case ProfileKind::uniform:
            p.couplings.assign(nb, 1.0);
            break;
        case ProfileKind::dimerized:
            p.couplings.resize(nb);
            for (int k = 1; k <= nb; ++k)
                p.couplings[k - 1] = (k % 2 == 1) ? lambda : 1.0;
            break;
        case ProfileKind::lambda:
            if (n_sites < 4)
                throw std::invalid_argument("make_profile: lambda kind needs N >= 4");
            p.couplings.assign(nb, 1.0);
            p.couplings.front() = lambda;
            p.couplings.back() = lambda;
            break;
        case ProfileKind::lambda_mu:
            if (n_sites < 6)
                throw std::invalid_argument("make_profile: lambda_mu kind needs N >= 6");
            p.couplings.assign(nb, 1.0);
            p.couplings[0] = lambda;
            p.couplings[1] = mu;
            p.couplings[nb - 2] = mu;
            p.couplings[nb - 1] = lambda;
            break;
        case ProfileKind::custom:
            if (static_cast<int>(custom.size()) != nb)
                throw std::invalid_argument("make_profile: custom couplings must have length N-1");
            for (double j : custom)
                if (j <= 0.0)
                    throw std::invalid_argument("make_profile: couplings must be positive");
            p.couplings = custom;
            break;
    }
    return p;
}

/// Jordan-Wigner hopping matrix of the chain: tridiagonal with
/// M_{k,k+1} = -J_k/2. (S^x S^x + S^y S^y) = (S+S- + S-S+)/2 maps the
/// spin Hamiltonian to -sum_k (J_k/2)(c+_k c_{k+1} + h.c.).
inline Eigen::MatrixXd hopping_matrix(const CouplingProfile& p) {
    const int n = p.n_sites;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) {
        m(k, k + 1) = -0.5 * p.couplings[k];
        m(k + 1, k) = m(k, k + 1);
    }
    return m;
}

/// Single-particle eigenpairs of the hopping matrix, energies ascending.
struct FermionModes {
    Eigen::VectorXd energies;  // ascending
    Eigen::MatrixXd vectors;   // column q is the mode phi_q
};

/// Full eigendecomposition with a deterministic sign convention: the
/// first component of each eigenvector exceeding 1e-8 in magnitude is
/// made positive.
inline FermionModes diagonalize_modes(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("diagonalize_modes: square matrix required");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("diagonalize_modes: eigensolver failed to converge");
    FermionModes modes;
    modes.energies = es.eigenvalues();
    modes.vectors = es.eigenvectors();
    for (int q = 0; q < modes.vectors.cols(); ++q) {
        for (int i = 0; i < modes.vectors.rows(); ++i) {
            const double v = modes.vectors(i, q);
            if (std::abs(v) > 1e-8) {
                if (v < 0.0) modes.vectors.col(q) = -modes.vectors.col(q);
                break;
            }
        }
    }
    return modes;
}

inline FermionModes diagonalize_modes(const CouplingProfile& p) {
    return diagonalize_modes(hopping_matrix(p));
}

/// Fermi occupation at chemical potential zero. T = 0 is the grand
/// canonical T -> 0+ limit: zero modes (|e| <= 1e-12) are half filled.
inline double fermi_occupation(double energy, double temperature) {
    if (temperature < 0.0) throw std::invalid_argument("fermi_occupation: negative temperature");
    if (temperature == 0.0) {
        const double tol = 1e-12;
        if (energy < -tol) return 1.0;
        if (energy > tol) return 0.0;
        return 0.5;
    }
    return 1.0 / (1.0 + std::exp(energy / temperature));
}

/// G_ij = <c+_i c_j> for the Gibbs state of the quadratic Hamiltonian.
struct CorrelationMatrix {
    Eigen::MatrixXd g;
    double temperature = 0.0;
};

inline CorrelationMatrix correlation_matrix(const FermionModes& modes, double temperature) {
    if (temperature < 0.0) throw std::invalid_argument("correlation_matrix: negative temperature");
    const int n = static_cast<int>(modes.energies.size());
    Eigen::VectorXd occ(n);
    for (int q = 0; q < n; ++q) occ(q) = fermi_occupation(modes.energies(q), temperature);
    CorrelationMatrix c;
    c.g = modes.vectors * occ.asDiagonal() * modes.vectors.transpose();
    c.g = 0.5 * (c.g + c.g.transpose()).eval();
    c.temperature = temperature;
    return c;
}

inline CorrelationMatrix correlation_matrix(const CouplingProfile& p, double temperature) {
    return correlation_matrix(diagonalize_modes(p), temperature);
}

/// Lowest particle-hole excitation energy: the smallest nonnegative mode
/// energy minus the largest nonpositive one. A zero mode gives gap 0.
inline double energy_gap(const CouplingProfile& p) {
    const FermionModes modes = diagonalize_modes(p);
    double lowest_particle = std::numeric_limits<double>::infinity();
    double highest_hole = -std::numeric_limits<double>::infinity();
    for (int q = 0; q < modes.energies.size(); ++q) {
        const double e = modes.energies(q);
        if (e >= 0.0 && e < lowest_particle) lowest_particle = e;
        if (e <= 0.0 && e > highest_hole) highest_hole = e;
    }
    if (!std::isfinite(lowest_particle) || !std::isfinite(highest_hole)) {
        // all modes strictly on one side; excitation is the spectral spread
        return modes.energies(modes.energies.size() - 1) - modes.energies(0);
    }
    return lowest_particle - highest_hole;
}

}  // namespace ldechain

#endif  // LDECHAIN_CHAIN_MODEL_HPP

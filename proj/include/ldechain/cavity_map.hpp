#ifndef LDECHAIN_CAVITY_MAP_HPP
#define LDECHAIN_CAVITY_MAP_HPP

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "chain_model.hpp"

// Jaynes-Cummings polariton algebra, the two-level truncation validity
// check, and a geometry-to-couplings model for engineering lambda-mu
// profiles in a coupled cavity array.

namespace ldechain::cavity {

struct CavityParams {
    double omega = 0.0;        // photon energy
    double omega_prime = 0.0;  // atomic gap
    double g = 0.0;            // atom-photon coupling, > 0

    double delta() const { return omega_prime - omega; }
};

enum class Branch { vacuum, minus, plus };

/// eps_0 = 0; eps_{n,±} = n*omega ± sqrt(n g^2 + Delta^2).
inline double polariton_energy(const CavityParams& p, int n, Branch branch) {
    if (n < 0) throw std::invalid_argument("polariton_energy: n must be >= 0");
    if (n == 0) {
        if (branch != Branch::vacuum)
            throw std::invalid_argument("polariton_energy: n = 0 has only the vacuum level");
        return 0.0;
    }
    if (branch == Branch::vacuum)
        throw std::invalid_argument("polariton_energy: vacuum branch requires n = 0");
    const double root = std::sqrt(n * p.g * p.g + p.delta() * p.delta());
    return n * p.omega + (branch == Branch::plus ? root : -root);
}

/// theta_n with tan(2 theta_n) = -g sqrt(n) / Delta, resolved by atan2
/// (Delta = 0 gives -pi/4).
inline double mixing_angle(const CavityParams& p, int n) {
    if (n < 1) throw std::invalid_argument("mixing_angle: n must be >= 1");
    return 0.5 * std::atan2(-p.g * std::sqrt(static_cast<double>(n)), p.delta());
}

/// Dressed-state coefficients on {|g,n>, |e,n-1>}:
/// |n+> = (cos, sin), |n-> = (sin, -cos).
inline Eigen::Vector2d dressed_state(const CavityParams& p, int n, Branch branch) {
    if (branch == Branch::vacuum)
        throw std::invalid_argument("dressed_state: no dressed vacuum");
    const double th = mixing_angle(p, n);
    if (branch == Branch::plus) return {std::cos(th), std::sin(th)};
    return {std::sin(th), -std::cos(th)};
}

/// The photon energy making the local ground state two-fold degenerate:
/// omega = sqrt(g^2 + Delta^2), so eps_{1-} = 0.
inline double resonance_frequency(double g, double delta) {
    return std::hypot(g, delta);
}

/// Gap protecting the two-level truncation at resonance.
inline double eps_two_minus(double g, double delta) {
    return 2.0 * std::hypot(g, delta) - std::sqrt(2.0 * g * g + delta * delta);
}

struct ValidityReport {
    double eps2minus = 0.0;
    double max_coupling = 0.0;
    double temperature = 0.0;
    double r_coupling = 0.0;  // max{J_k} / eps2minus
    double r_temperature = 0.0;
    double threshold = 0.1;
    bool pass = false;
};

/// Two-level truncation check at resonance: both max{J_k}/eps_{2-} and
/// T/eps_{2-} must stay below the threshold.
inline ValidityReport validity_check(double g, double delta, double max_coupling,
                                     double temperature, double threshold = 0.1) {
    if (g <= 0.0) throw std::invalid_argument("validity_check: g must be positive");
    ValidityReport rep;
    rep.eps2minus = eps_two_minus(g, delta);
    rep.max_coupling = max_coupling;
    rep.temperature = temperature;
    rep.threshold = threshold;
    rep.r_coupling = max_coupling / rep.eps2minus;
    rep.r_temperature = temperature / rep.eps2minus;
    rep.pass = rep.r_coupling < threshold && rep.r_temperature < threshold;
    return rep;
}

inline ValidityReport validity_check(const CavityParams& p, const CouplingProfile& profile,
                                     double temperature, double threshold = 0.1) {
    double max_j = 0.0;
    for (double j : profile.couplings) max_j = std::max(max_j, j);
    return validity_check(p.g, p.delta(), max_j, temperature, threshold);
}

/// Cavity geometry: the two next-to-end cavities of an equispaced array
/// (spacing d0) displaced by delta towards the bulk. With the overlap
/// model J(d) = J_b exp(-(d - d0)/xi), the end bond stretches to d0 +
/// delta and the near-end bond shrinks to d0 - delta, so lambda =
/// exp(-delta/xi) and mu = exp(+delta/xi); the symmetric displacement
/// forces lambda * mu = 1.
inline CouplingProfile geometry_to_couplings(int n_sites, double d0, double displacement,
                                             double xi) {
    if (xi <= 0.0) throw std::invalid_argument("geometry_to_couplings: xi must be positive");
    if (displacement < 0.0 || displacement >= d0)
        throw std::invalid_argument("geometry_to_couplings: need 0 <= displacement < d0");
    if (displacement == 0.0) return make_profile(ProfileKind::uniform, n_sites);
    const double lambda = std::exp(-displacement / xi);
    const double mu = std::exp(displacement / xi);
    return make_profile(ProfileKind::lambda_mu, n_sites, lambda, mu);
}

/// Independent-displacement variant (end bond stretched by d_end, near-end
/// bond shrunk by d_neb), allowing lambda * mu != 1.
inline CouplingProfile geometry_to_couplings(int n_sites, double d0, double d_end,
                                             double d_neb, double xi) {
    if (xi <= 0.0) throw std::invalid_argument("geometry_to_couplings: xi must be positive");
    if (d_end < 0.0 || d_end >= d0 || d_neb < 0.0 || d_neb >= d0)
        throw std::invalid_argument("geometry_to_couplings: displacements must be in [0, d0)");
    if (d_end == 0.0 && d_neb == 0.0) return make_profile(ProfileKind::uniform, n_sites);
    const double lambda = std::exp(-d_end / xi);
    const double mu = std::exp(d_neb / xi);
    return make_profile(ProfileKind::lambda_mu, n_sites, lambda, mu);
}

}  // namespace ldechain::cavity

#endif  // LDECHAIN_CAVITY_MAP_HPP

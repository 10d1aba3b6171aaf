#ifndef LDECHAIN_TELEPORT_HPP
#define LDECHAIN_TELEPORT_HPP

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "chain_model.hpp"
#include "ed_oracle.hpp"

// Measurement-based end-to-end teleportation: the ideal two-cavity
// analytic protocol and the full finite-temperature N-cavity simulation.
// The sender qubit is site 0, the channel occupies sites 1..N, the
// receiver is site N.

namespace ldechain::teleport {

struct resource_limit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputQubit {
    complexd alpha{1.0, 0.0};
    complexd beta{0.0, 0.0};
};

inline void check_input(const InputQubit& q) {
    if (std::abs(std::norm(q.alpha) + std::norm(q.beta) - 1.0) > 1e-12)
        throw std::invalid_argument("InputQubit: state not normalized");
}

struct ProtocolConfig {
    CouplingProfile channel;        // N sites, couplings in units of J_b
    double nu = 50.0;               // J_0 / J_b
    double temperature = 0.0;       // channel Gibbs temperature
    double measurement_time = -1.0; // < 0 means the default pi/(4 J_0)
    bool phase_average = false;     // average over 16 relative input phases
};

struct OutcomeRecord {
    int s0 = 0, s1 = 0;  // measured spins on sites 0 and 1, 1 = up
    bool accepted = false;
    double probability = 0.0;
    Eigen::Matrix2cd receiver = Eigen::Matrix2cd::Zero();  // normalized; corrected if accepted
};

struct ProtocolOutcome {
    double accepted_probability = 0.0;
    double fidelity = 0.0;  // post-selected, probability-weighted
    std::vector<OutcomeRecord> records;
};

/// +-pi/2 z-rotation correcting the accepted branches: outcome (up,down)
/// gets diag(1, -i), outcome (down,up) gets diag(1, i).
inline Eigen::Matrix2cd correction_rotation(int s0, int s1) {
    Eigen::Matrix2cd k = Eigen::Matrix2cd::Identity();
    if (s0 == 1 && s1 == 0)
        k(1, 1) = complexd(0.0, -1.0);
    else if (s0 == 0 && s1 == 1)
        k(1, 1) = complexd(0.0, 1.0);
    else
        throw std::invalid_argument("correction_rotation: outcome is not accepted");
    return k;
}

/// Closed-form three-qubit state of the ideal J_0 >> J_1 protocol.
/// Amplitude index is (d0<<2)|(d1<<1)|d2 with d = 0 for up, 1 for down.
inline Eigen::VectorXcd ideal_state_at(const InputQubit& in, double j0, double t) {
    check_input(in);
    if (j0 <= 0.0) throw std::invalid_argument("ideal_state_at: J_0 must be positive");
    const double s = 1.0 / std::sqrt(2.0);
    // ferromagnetic coupling: e^{-iHt} transfers amplitude with phase +i
    const complexd ph(0.0, 1.0);
    const double co = std::cos(j0 * t), si = std::sin(j0 * t);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
    psi(0b001) = s * in.alpha;            // up up down
    psi(0b110) = s * in.beta;             // down down up
    psi(0b010) = s * in.alpha * co;       // up down up
    psi(0b011) = s * ph * in.beta * si;   // up down down
    psi(0b100) = s * ph * in.alpha * si;  // down up up
    psi(0b101) = s * in.beta * co;        // down up down
    return psi;
}

/// Ideal two-cavity protocol: measure S^z on sites 0 and 1 at
/// t = pi/(4 J_0), keep the zero-pair-magnetization outcomes, rotate.
inline ProtocolOutcome ideal_protocol(const InputQubit& in, double j0) {
    const double t_star = std::numbers::pi / (4.0 * j0);
    const Eigen::VectorXcd psi = ideal_state_at(in, j0, t_star);
    const Eigen::Vector2cd target(in.alpha, in.beta);

    ProtocolOutcome out;
    double fidelity_sum = 0.0;
    for (int d0 = 0; d0 < 2; ++d0)
        for (int d1 = 0; d1 < 2; ++d1) {
            OutcomeRecord rec;
            rec.s0 = 1 - d0;
            rec.s1 = 1 - d1;
            rec.accepted = (d0 != d1);
            Eigen::Vector2cd amp(psi((d0 << 2) | (d1 << 1) | 0), psi((d0 << 2) | (d1 << 1) | 1));
            rec.probability = amp.squaredNorm();
            if (rec.probability > 1e-15) {
                Eigen::Matrix2cd rho = amp * amp.adjoint() / rec.probability;
                if (rec.accepted) {
                    const Eigen::Matrix2cd k = correction_rotation(rec.s0, rec.s1);
                    rho = k * rho * k.adjoint();
                    out.accepted_probability += rec.probability;
                    fidelity_sum += rec.probability * (target.adjoint() * rho * target)(0).real();
                }
                rec.receiver = rho;
            } else if (rec.accepted) {
                out.accepted_probability += rec.probability;
            }
            out.records.push_back(rec);
        }
    out.fidelity = out.accepted_probability > 0.0 ? fidelity_sum / out.accepted_probability : 0.0;
    return out;
}

/// Finite-temperature protocol engine. The channel Gibbs state is
/// expanded over its eigenstates; each retained eigenstate contributes a
/// pair of evolved branches (sender up / sender down) whose
/// per-measurement-outcome receiver blocks are cached as quadratic forms
/// in (alpha, beta). Running a grid of inputs and temperatures then
/// reuses all the heavy linear algebra.
class ThermalProtocolEngine {
  public:
    ThermalProtocolEngine(const CouplingProfile& channel, double nu,
                          double measurement_time = -1.0)
        : n_channel_(channel.n_sites), n_total_(channel.n_sites + 1), nu_(nu) {
        if (nu <= 0.0) throw std::invalid_argument("ThermalProtocolEngine: nu must be positive");
        if (n_total_ > 14)
            throw resource_limit_error("ThermalProtocolEngine: more than 14 spins requested");
        t_star_ = measurement_time > 0.0 ? measurement_time
                                         : std::numbers::pi / (4.0 * nu);

        channel_spectra_ = ed::diagonalize_sectors(channel);

        // J_0 = nu J_b is the hopping amplitude of the sender bond in the
        // single-excitation sector; a profile coupling J gives hopping J/2,
        // so the bond enters the extended profile as 2 nu.
        std::vector<double> extended(channel.couplings);
        extended.insert(extended.begin(), 2.0 * nu);
        full_spectra_ = ed::diagonalize_sectors(
            make_profile(ProfileKind::custom, n_total_, 1.0, 1.0, extended));

        for (int m = 0; m <= n_channel_; ++m) {
            const auto& s = channel_spectra_.sectors[m];
            for (int i = 0; i < s.energies.size(); ++i)
                levels_.push_back({m, i, s.energies(i)});
        }
        std::sort(levels_.begin(), levels_.end(),
                  [](const Level& a, const Level& b) { return a.energy < b.energy; });
        kernels_.resize(levels_.size());
    }

    double measurement_time() const { return t_star_; }

    ProtocolOutcome run(const InputQubit& in, double temperature,
                        bool phase_average = false) const {
        check_input(in);
        if (temperature < 0.0) throw std::invalid_argument("run: negative temperature");

        // joint Boltzmann weights over all channel eigenstates
        const double e0 = levels_.front().energy;
        std::vector<double> w(levels_.size());
        double z = 0.0;
        for (std::size_t j = 0; j < levels_.size(); ++j) {
            if (temperature == 0.0) {
                const double tol = 1e-9 * (1.0 + std::abs(e0));
                w[j] = (levels_[j].energy <= e0 + tol) ? 1.0 : 0.0;
            } else {
                w[j] = std::exp(-(levels_[j].energy - e0) / temperature);
            }
            z += w[j];
        }

        std::array<Eigen::Matrix2cd, 4> a, b, c;
        a.fill(Eigen::Matrix2cd::Zero());
        b.fill(Eigen::Matrix2cd::Zero());
        c.fill(Eigen::Matrix2cd::Zero());
        for (std::size_t j = 0; j < levels_.size(); ++j) {
            const double wj = w[j] / z;
            if (wj < weight_cutoff_) continue;
            const BranchKernel& k = kernel(j);
            for (int o = 0; o < 4; ++o) {
                a[o] += wj * k.a[o];
                b[o] += wj * k.b[o];
                c[o] += wj * k.c[o];
            }
        }

        if (!phase_average) return assemble(in, a, b, c);

        // uniform relative-phase average, 16-point quadrature
        ProtocolOutcome avg;
        const int n_phase = 16;
        for (int p = 0; p < n_phase; ++p) {
            const double phi = 2.0 * std::numbers::pi * p / n_phase;
            InputQubit rotated{in.alpha, in.beta * std::exp(complexd(0.0, phi))};
            const ProtocolOutcome one = assemble(rotated, a, b, c);
            avg.accepted_probability += one.accepted_probability / n_phase;
            avg.fidelity += one.fidelity / n_phase;
        }
        return avg;
    }

  private:
    struct Level {
        int sector;
        int index;
        double energy;
    };
    struct BranchKernel {
        // receiver blocks per outcome o = 2*(1-s0) + (1-s1):
        // R_o = |alpha|^2 a_o + alpha conj(beta) b_o + h.c.-term + |beta|^2 c_o
        std::array<Eigen::Matrix2cd, 4> a, b, c;
    };

    // evolve a full-space vector living in one magnetization sector
    Eigen::VectorXcd evolve_full(const Eigen::VectorXcd& full, int m) const {
        const auto& s = full_spectra_.sectors[m];
        const int dim = static_cast<int>(s.basis.states.size());
        Eigen::VectorXcd sec(dim);
        for (int i = 0; i < dim; ++i) sec(i) = full(s.basis.states[i]);
        Eigen::VectorXcd coeff = s.vectors.transpose().cast<complexd>() * sec;
        for (int i = 0; i < dim; ++i)
            coeff(i) *= std::exp(complexd(0.0, -s.energies(i) * t_star_));
        sec = s.vectors.cast<complexd>() * coeff;
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(full.size());
        for (int i = 0; i < dim; ++i) out(s.basis.states[i]) = sec(i);
        return out;
    }

    const BranchKernel& kernel(std::size_t j) const {
        if (kernels_[j]) return *kernels_[j];
        const Level& lv = levels_[j];
        const auto& cs = channel_spectra_.sectors[lv.sector];
        const int full_dim = 1 << n_total_;

        // sender-up / sender-down branches of |q0> (x) |chi>
        Eigen::VectorXcd up = Eigen::VectorXcd::Zero(full_dim);
        Eigen::VectorXcd down = Eigen::VectorXcd::Zero(full_dim);
        for (std::size_t i = 0; i < cs.basis.states.size(); ++i) {
            const std::uint32_t fp = cs.basis.states[i] << 1;  // channel occupies bits 1..N
            up(fp | 1u) = cs.vectors(static_cast<int>(i), lv.index);
            down(fp) = cs.vectors(static_cast<int>(i), lv.index);
        }
        up = evolve_full(up, lv.sector + 1);
        down = evolve_full(down, lv.sector);

        BranchKernel k;
        k.a.fill(Eigen::Matrix2cd::Zero());
        k.b.fill(Eigen::Matrix2cd::Zero());
        k.c.fill(Eigen::Matrix2cd::Zero());
        const std::uint32_t recv = 1u << (n_total_ - 1);
        for (std::uint32_t p = 0; p < static_cast<std::uint32_t>(full_dim); ++p) {
            if (!(p & recv)) continue;  // visit each rest-pattern once, receiver up
            const int s0 = p & 1u, s1 = (p >> 1) & 1u;
            const int o = 2 * (1 - s0) + (1 - s1);
            const std::uint32_t pu = p, pd = p ^ recv;
            const std::array<std::uint32_t, 2> idx{pu, pd};  // receiver basis {up, down}
            for (int r = 0; r < 2; ++r)
                for (int q = 0; q < 2; ++q) {
                    k.a[o](r, q) += up(idx[r]) * std::conj(up(idx[q]));
                    k.b[o](r, q) += up(idx[r]) * std::conj(down(idx[q]));
                    k.c[o](r, q) += down(idx[r]) * std::conj(down(idx[q]));
                }
        }
        kernels_[j] = std::move(k);
        return *kernels_[j];
    }

    ProtocolOutcome assemble(const InputQubit& in, const std::array<Eigen::Matrix2cd, 4>& a,
                             const std::array<Eigen::Matrix2cd, 4>& b,
                             const std::array<Eigen::Matrix2cd, 4>& c) const {
        const complexd al = in.alpha, be = in.beta;
        const Eigen::Vector2cd target(al, be);
        ProtocolOutcome out;
        double fidelity_sum = 0.0;
        for (int o = 0; o < 4; ++o) {
            OutcomeRecord rec;
            rec.s0 = 1 - (o >> 1);
            rec.s1 = 1 - (o & 1);
            rec.accepted = rec.s0 != rec.s1;
            Eigen::Matrix2cd r = std::norm(al) * a[o] + al * std::conj(be) * b[o] +
                                 std::conj(al) * be * b[o].adjoint() + std::norm(be) * c[o];
            rec.probability = r.trace().real();
            if (rec.probability > 1e-15) {
                r /= rec.probability;
                if (rec.accepted) {
                    const Eigen::Matrix2cd km = correction_rotation(rec.s0, rec.s1);
                    r = km * r * km.adjoint();
                }
                rec.receiver = r;
            }
            if (rec.accepted) {
                out.accepted_probability += rec.probability;
                if (rec.probability > 1e-15)
                    fidelity_sum +=
                        rec.probability * (target.adjoint() * rec.receiver * target)(0).real();
            }
            out.records.push_back(rec);
        }
        out.fidelity = out.accepted_probability > 0.0 ? fidelity_sum / out.accepted_probability : 0.0;
        return out;
    }

    int n_channel_;
    int n_total_;
    double nu_;
    double t_star_ = 0.0;
    double weight_cutoff_ = 1e-13;
    ed::ChainSpectra channel_spectra_;
    ed::ChainSpectra full_spectra_;
    std::vector<Level> levels_;
    mutable std::vector<std::optional<BranchKernel>> kernels_;
};

inline ProtocolOutcome thermal_protocol(const ProtocolConfig& config, const InputQubit& in) {
    ThermalProtocolEngine engine(config.channel, config.nu, config.measurement_time);
    return engine.run(in, config.temperature, config.phase_average);
}

struct FidelityPoint {
    double alpha = 0.0;
    double fidelity = 0.0;
    double accepted_probability = 0.0;
};

/// Fidelity table over an |alpha| grid, beta = sqrt(1 - alpha^2) real.
inline std::vector<FidelityPoint> fidelity_vs_alpha(const ProtocolConfig& config,
                                                    const std::vector<double>& alpha_grid) {
    ThermalProtocolEngine engine(config.channel, config.nu, config.measurement_time);
    std::vector<FidelityPoint> table;
    for (double alpha : alpha_grid) {
        if (alpha <= 0.0 || alpha >= 1.0)
            throw std::invalid_argument("fidelity_vs_alpha: grid values must be in (0, 1)");
        InputQubit in{complexd(alpha, 0.0), complexd(std::sqrt(1.0 - alpha * alpha), 0.0)};
        const ProtocolOutcome res = engine.run(in, config.temperature, config.phase_average);
        table.push_back({alpha, res.fidelity, res.accepted_probability});
    }
    return table;
}

}  // namespace ldechain::teleport

#endif  // LDECHAIN_TELEPORT_HPP

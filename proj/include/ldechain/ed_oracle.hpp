#ifndef LDECHAIN_ED_ORACLE_HPP
#define LDECHAIN_ED_ORACLE_HPP

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "chain_model.hpp"
#include "entanglement.hpp"

// Brute-force exact diagonalization of the XX chain resolved by total
// S^z (bit k of a basis pattern = spin at 0-based site k, 1 = up).
// Dense per-sector storage; intended for N <= 14 spins.

namespace ldechain::ed {

inline std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 0; i < std::min(k, n - k); ++i) r = r * (n - i) / (i + 1);
    return r;
}

/// Lexicographically ordered bit patterns with a fixed number of up spins.
struct SectorBasis {
    int n_sites = 0;
    int n_up = 0;
    std::vector<std::uint32_t> states;

    int index_of(std::uint32_t pattern) const {
        auto it = std::lower_bound(states.begin(), states.end(), pattern);
        if (it == states.end() || *it != pattern)
            throw std::logic_error("SectorBasis: pattern not in sector");
        return static_cast<int>(it - states.begin());
    }
};

inline SectorBasis make_sector_basis(int n_sites, int n_up) {
    if (n_up < 0 || n_up > n_sites)
        throw std::invalid_argument("make_sector_basis: invalid magnetization sector");
    SectorBasis b;
    b.n_sites = n_sites;
    b.n_up = n_up;
    b.states.reserve(binomial(n_sites, n_up));
    for (std::uint32_t s = 0; s < (1u << n_sites); ++s)
        if (std::popcount(s) == n_up) b.states.push_back(s);
    return b;
}

/// XX Hamiltonian restricted to the n_up sector: element -J_k/2 between
/// patterns related by one adjacent up-down swap, zero diagonal.
inline Eigen::MatrixXd sector_hamiltonian(const CouplingProfile& p, int n_up) {
    const SectorBasis basis = make_sector_basis(p.n_sites, n_up);
    const int dim = static_cast<int>(basis.states.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const std::uint32_t s = basis.states[r];
        for (int k = 0; k + 1 < p.n_sites; ++k) {
            const std::uint32_t mask = (1u << k) | (1u << (k + 1));
            const std::uint32_t pair = s & mask;
            if (pair == mask || pair == 0) continue;  // no swap possible
            const int c = basis.index_of(s ^ mask);
            if (c > r) h(r, c) = h(c, r) = -0.5 * p.couplings[k];
        }
    }
    return h;
}

struct SectorSpectrum {
    SectorBasis basis;
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;  // columns are eigenstates, energies ascending
};

/// All magnetization sectors of the chain, diagonalized.
struct ChainSpectra {
    int n_sites = 0;
    std::vector<SectorSpectrum> sectors;  // indexed by n_up = 0..N
};

inline ChainSpectra diagonalize_sectors(const CouplingProfile& p) {
    ChainSpectra spectra;
    spectra.n_sites = p.n_sites;
    spectra.sectors.resize(p.n_sites + 1);
    for (int m = 0; m <= p.n_sites; ++m) {
        SectorSpectrum& s = spectra.sectors[m];
        s.basis = make_sector_basis(p.n_sites, m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sector_hamiltonian(p, m));
        if (es.info() != Eigen::Success)
            throw std::runtime_error("diagonalize_sectors: eigensolver failed");
        s.energies = es.eigenvalues();
        s.vectors = es.eigenvectors();
    }
    return spectra;
}

/// Magnetization-blocked density matrix: diagonal blocks per sector plus
/// coherence blocks between adjacent sectors (all the protocol needs).
struct BlockDensityMatrix {
    int n_sites = 0;
    double temperature = 0.0;
    std::vector<Eigen::MatrixXcd> diag;  // diag[m], may be zero-sized when absent
    std::vector<Eigen::MatrixXcd> coh;   // coh[m] is the (m, m+1) block

    double trace() const {
        double t = 0.0;
        for (const auto& b : diag)
            if (b.size() > 0) t += b.trace().real();
        return t;
    }
};

inline BlockDensityMatrix empty_block_state(int n_sites) {
    BlockDensityMatrix rho;
    rho.n_sites = n_sites;
    rho.diag.resize(n_sites + 1);
    rho.coh.resize(n_sites);
    return rho;
}

/// Gibbs state (diagonal blocks only), Boltzmann weights normalized
/// jointly across all sectors. T = 0 is the equal mixture over the
/// global ground manifold.
inline BlockDensityMatrix gibbs_state(const ChainSpectra& spectra, double temperature) {
    if (temperature < 0.0) throw std::invalid_argument("gibbs_state: negative temperature");
    const int n = spectra.n_sites;
    BlockDensityMatrix rho = empty_block_state(n);
    rho.temperature = temperature;

    double e_min = std::numeric_limits<double>::infinity();
    for (const auto& s : spectra.sectors) e_min = std::min(e_min, s.energies.minCoeff());

    double z = 0.0;
    std::vector<Eigen::VectorXd> weights(n + 1);
    for (int m = 0; m <= n; ++m) {
        const auto& s = spectra.sectors[m];
        Eigen::VectorXd w(s.energies.size());
        for (int i = 0; i < s.energies.size(); ++i) {
            if (temperature == 0.0) {
                const double tol = 1e-9 * (1.0 + std::abs(e_min));
                w(i) = (s.energies(i) <= e_min + tol) ? 1.0 : 0.0;
            } else {
                w(i) = std::exp(-(s.energies(i) - e_min) / temperature);
            }
        }
        z += w.sum();
        weights[m] = std::move(w);
    }
    for (int m = 0; m <= n; ++m) {
        const auto& s = spectra.sectors[m];
        rho.diag[m] = (s.vectors * (weights[m] / z).asDiagonal() * s.vectors.transpose())
                          .cast<std::complex<double>>();
    }
    return rho;
}

inline BlockDensityMatrix gibbs_state(const CouplingProfile& p, double temperature) {
    return gibbs_state(diagonalize_sectors(p), temperature);
}

/// Partial trace down to the (site_a, site_b) pair, 0-based sites.
/// Basis ordering {uu, ud, du, dd}.
inline TwoQubitDensity reduce_to_pair(const BlockDensityMatrix& rho, int site_a, int site_b) {
    const int n = rho.n_sites;
    if (site_a < 0 || site_a >= n || site_b < 0 || site_b >= n || site_a == site_b)
        throw std::invalid_argument("reduce_to_pair: bad site indices");

    Eigen::Matrix4cd red = Eigen::Matrix4cd::Zero();
    const std::uint32_t pair_mask = (1u << site_a) | (1u << site_b);
    auto pair_index = [&](std::uint32_t s) {
        const int ua = (s >> site_a) & 1u;
        const int ub = (s >> site_b) & 1u;
        return 2 * (1 - ua) + (1 - ub);  // up = index 0
    };

    auto accumulate = [&](const Eigen::MatrixXcd& block, const SectorBasis& rows,
                          const SectorBasis& cols) {
        if (block.size() == 0) return;
        for (int r = 0; r < block.rows(); ++r) {
            const std::uint32_t sr = rows.states[r];
            for (int c = 0; c < block.cols(); ++c) {
                const std::uint32_t sc = cols.states[c];
                if ((sr & ~pair_mask) != (sc & ~pair_mask)) continue;
                red(pair_index(sr), pair_index(sc)) += block(r, c);
            }
        }
    };

    for (int m = 0; m <= n; ++m) {
        if (rho.diag[m].size() == 0) continue;
        const SectorBasis basis = make_sector_basis(n, m);
        accumulate(rho.diag[m], basis, basis);
    }
    for (int m = 0; m < n; ++m) {
        if (rho.coh[m].size() == 0) continue;
        const SectorBasis rows = make_sector_basis(n, m);
        const SectorBasis cols = make_sector_basis(n, m + 1);
        accumulate(rho.coh[m], rows, cols);
        // Hermitian conjugate block
        for (int r = 0; r < rho.coh[m].rows(); ++r)
            for (int c = 0; c < rho.coh[m].cols(); ++c) {
                const std::uint32_t sr = rows.states[r];
                const std::uint32_t sc = cols.states[c];
                if ((sr & ~pair_mask) != (sc & ~pair_mask)) continue;
                red(pair_index(sc), pair_index(sr)) += std::conj(rho.coh[m](r, c));
            }
    }
    return {red};
}

/// Single-site reduced density matrix, basis {up, down}.
inline Eigen::Matrix2cd reduce_to_site(const BlockDensityMatrix& rho, int site) {
    const int n = rho.n_sites;
    if (site < 0 || site >= n) throw std::invalid_argument("reduce_to_site: bad site index");
    Eigen::Matrix2cd red = Eigen::Matrix2cd::Zero();
    const std::uint32_t mask = 1u << site;
    for (int m = 0; m <= n; ++m) {
        if (rho.diag[m].size() == 0) continue;
        const SectorBasis basis = make_sector_basis(n, m);
        for (int r = 0; r < rho.diag[m].rows(); ++r) {
            const int u = (basis.states[r] & mask) ? 0 : 1;
            red(u, u) += rho.diag[m](r, r);
        }
        // off-diagonal site coherence comes from same-m elements differing
        // only at this site -- impossible within one sector; and from
        // (m, m+1) blocks below.
    }
    for (int m = 0; m < n; ++m) {
        if (rho.coh[m].size() == 0) continue;
        const SectorBasis rows = make_sector_basis(n, m);
        const SectorBasis cols = make_sector_basis(n, m + 1);
        for (int r = 0; r < rho.coh[m].rows(); ++r)
            for (int c = 0; c < rho.coh[m].cols(); ++c) {
                const std::uint32_t sr = rows.states[r];
                const std::uint32_t sc = cols.states[c];
                if ((sr & ~mask) != (sc & ~mask)) continue;
                // sr has the site down, sc has it up: <down|rho_red|up>
                red(1, 0) += rho.coh[m](r, c);
                red(0, 1) += std::conj(rho.coh[m](r, c));
            }
    }
    return red;
}

/// Unitary evolution: each block conjugated by the sector propagators,
/// rho^{(m,m')}(t) = U_m rho^{(m,m')}(0) U_{m'}^dagger.
inline BlockDensityMatrix evolve(const BlockDensityMatrix& rho, const ChainSpectra& spectra,
                                 double t) {
    if (t < 0.0) throw std::invalid_argument("evolve: negative time");
    if (spectra.n_sites != rho.n_sites)
        throw std::invalid_argument("evolve: spectra/state size mismatch");
    const int n = rho.n_sites;
    const std::complex<double> minus_i(0.0, -1.0);

    std::vector<Eigen::MatrixXcd> u(n + 1);
    for (int m = 0; m <= n; ++m) {
        const auto& s = spectra.sectors[m];
        Eigen::VectorXcd phases(s.energies.size());
        for (int i = 0; i < s.energies.size(); ++i)
            phases(i) = std::exp(minus_i * s.energies(i) * t);
        u[m] = s.vectors.cast<std::complex<double>>() * phases.asDiagonal() *
               s.vectors.transpose().cast<std::complex<double>>();
    }

    BlockDensityMatrix out = empty_block_state(n);
    out.temperature = rho.temperature;
    for (int m = 0; m <= n; ++m)
        if (rho.diag[m].size() > 0) out.diag[m] = u[m] * rho.diag[m] * u[m].adjoint();
    for (int m = 0; m < n; ++m)
        if (rho.coh[m].size() > 0) out.coh[m] = u[m] * rho.coh[m] * u[m + 1].adjoint();
    return out;
}

struct MeasurementOutcome {
    std::vector<int> bits;  // 1 = up, aligned with the measured site list
    double probability = 0.0;
    BlockDensityMatrix state;  // renormalized post-measurement state
};

/// Projective S^z measurement on the listed (0-based, distinct) sites.
/// Outcomes with probability below 1e-15 are reported with an empty state.
inline std::vector<MeasurementOutcome> measure_z(const BlockDensityMatrix& rho,
                                                 const std::vector<int>& sites) {
    const int n = rho.n_sites;
    if (sites.empty()) throw std::invalid_argument("measure_z: empty site list");
    std::uint32_t site_mask = 0;
    for (int s : sites) {
        if (s < 0 || s >= n) throw std::invalid_argument("measure_z: site out of range");
        if (site_mask & (1u << s)) throw std::invalid_argument("measure_z: duplicate site");
        site_mask |= 1u << s;
    }

    auto outcome_pattern = [&](std::uint32_t idx) {
        // spread outcome bits (in list order) onto the site positions
        std::uint32_t pat = 0;
        for (std::size_t b = 0; b < sites.size(); ++b)
            if ((idx >> b) & 1u) pat |= 1u << sites[b];
        return pat;
    };

    std::vector<MeasurementOutcome> outcomes;
    const std::size_t n_out = std::size_t{1} << sites.size();
    for (std::size_t o = 0; o < n_out; ++o) {
        const std::uint32_t want = outcome_pattern(static_cast<std::uint32_t>(o));
        MeasurementOutcome out;
        for (std::size_t b = 0; b < sites.size(); ++b) out.bits.push_back((o >> b) & 1u);

        BlockDensityMatrix post = empty_block_state(n);
        post.temperature = rho.temperature;
        double prob = 0.0;
        auto project = [&](const Eigen::MatrixXcd& block, const SectorBasis& rows,
                           const SectorBasis& cols, Eigen::MatrixXcd& dst, bool diagonal) {
            if (block.size() == 0) return;
            dst = Eigen::MatrixXcd::Zero(block.rows(), block.cols());
            for (int r = 0; r < block.rows(); ++r) {
                if ((rows.states[r] & site_mask) != want) continue;
                for (int c = 0; c < block.cols(); ++c) {
                    if ((cols.states[c] & site_mask) != want) continue;
                    dst(r, c) = block(r, c);
                    if (diagonal && r == c) prob += block(r, c).real();
                }
            }
        };
        for (int m = 0; m <= n; ++m) {
            const SectorBasis basis = make_sector_basis(n, m);
            project(rho.diag[m], basis, basis, post.diag[m], true);
        }
        for (int m = 0; m < n; ++m)
            project(rho.coh[m], make_sector_basis(n, m), make_sector_basis(n, m + 1),
                    post.coh[m], false);

        out.probability = prob;
        if (prob > 1e-15) {
            for (auto& b : post.diag)
                if (b.size() > 0) b /= prob;
            for (auto& b : post.coh)
                if (b.size() > 0) b /= prob;
            out.state = std::move(post);
        } else {
            out.state = empty_block_state(n);
        }
        outcomes.push_back(std::move(out));
    }
    return outcomes;
}

}  // namespace ldechain::ed

#endif  // LDECHAIN_ED_ORACLE_HPP

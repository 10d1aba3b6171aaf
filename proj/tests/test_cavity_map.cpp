#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <ldechain/cavity_map.hpp>

using namespace ldechain;
using namespace ldechain::cavity;
using Catch::Approx;

TEST_CASE("polariton energies") {
    const CavityParams res{1.0, 1.0, 1.0};  // omega = omega', g = 1 -> Delta = 0
    REQUIRE(polariton_energy(res, 0, Branch::vacuum) == 0.0);
    REQUIRE(polariton_energy(res, 1, Branch::minus) == Approx(0.0).margin(1e-12));
    REQUIRE(polariton_energy(res, 2, Branch::minus) == Approx(2.0 - std::sqrt(2.0)).margin(1e-12));
    REQUIRE_THROWS_AS(polariton_energy(res, 0, Branch::minus), std::invalid_argument);
    REQUIRE_THROWS_AS(polariton_energy(res, 1, Branch::vacuum), std::invalid_argument);

    // branch splitting identity
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(0.1, 3.0);
    for (int i = 0; i < 50; ++i) {
        const double g = uni(rng), delta = uni(rng) - 1.5, omega = uni(rng);
        const CavityParams p{omega, omega + delta, g};
        for (int n : {1, 2, 5}) {
            const double split = polariton_energy(p, n, Branch::plus) -
                                 polariton_energy(p, n, Branch::minus);
            REQUIRE(split == Approx(2.0 * std::sqrt(n * g * g + delta * delta)).margin(1e-12));
        }
    }
}

TEST_CASE("mixing angle and dressed states") {
    const CavityParams far{1.0, 1.0e9, 1.0};
    REQUIRE(mixing_angle(far, 1) == Approx(0.0).margin(1e-8));

    const CavityParams res{1.0, 1.0, 1.0};
    REQUIRE(std::abs(mixing_angle(res, 1)) == Approx(M_PI / 4).margin(1e-12));
    REQUIRE_THROWS_AS(mixing_angle(res, 0), std::invalid_argument);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(0.2, 2.0);
    for (int i = 0; i < 20; ++i) {
        const double g = uni(rng), delta = uni(rng) - 1.0, omega = uni(rng);
        const CavityParams p{omega, omega + delta, g};
        for (int n : {1, 2, 3}) {
            // n-excitation JC block in the {|g,n>, |e,n-1>} basis, in the
            // convention of the polariton formulas: detuning split
            // symmetrically, atomic-state phase gauge absorbing the sign
            Eigen::Matrix2d h;
            h << n * p.omega + delta, -g * std::sqrt(n), -g * std::sqrt(n), n * p.omega - delta;
            const Eigen::Vector2d plus = dressed_state(p, n, Branch::plus);
            const Eigen::Vector2d minus = dressed_state(p, n, Branch::minus);
            REQUIRE(std::abs(plus.dot(minus)) < 1e-12);
            REQUIRE(plus.norm() == Approx(1.0).margin(1e-12));
            REQUIRE((h * plus - polariton_energy(p, n, Branch::plus) * plus).norm() < 1e-12);
            REQUIRE((h * minus - polariton_energy(p, n, Branch::minus) * minus).norm() < 1e-12);
        }
    }
}

TEST_CASE("resonance frequency") {
    REQUIRE(resonance_frequency(1.0, 0.0) == Approx(1.0));
    REQUIRE(resonance_frequency(3.0, 4.0) == Approx(5.0));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.1, 5.0);
    for (int i = 0; i < 100; ++i) {
        const double g = uni(rng), delta = uni(rng) - 2.5;
        const double omega = resonance_frequency(g, delta);
        const CavityParams p{omega, omega + delta, g};
        REQUIRE(polariton_energy(p, 1, Branch::minus) == Approx(0.0).margin(1e-12));
        REQUIRE(polariton_energy(p, 2, Branch::minus) > 0.0);
    }
}

TEST_CASE("validity check") {
    const auto ok = validity_check(1.0, 0.0, 0.01, 0.001);
    REQUIRE(ok.eps2minus == Approx(2.0 - std::sqrt(2.0)).margin(1e-10));
    REQUIRE(ok.r_coupling == Approx(0.01 / (2.0 - std::sqrt(2.0))).margin(1e-10));
    REQUIRE(ok.pass);

    const auto bad = validity_check(1.0, 0.0, 2.0 - std::sqrt(2.0), 0.001);
    REQUIRE_FALSE(bad.pass);

    const auto zero = validity_check(1.0, 0.0, 0.0, 0.0);
    REQUIRE(zero.pass);
    REQUIRE(zero.r_coupling == 0.0);
    REQUIRE(zero.r_temperature == 0.0);
}

TEST_CASE("geometry to couplings") {
    const auto uniform = geometry_to_couplings(8, 1.0, 0.0, 0.2);
    REQUIRE(uniform.couplings == std::vector<double>(7, 1.0));

    const double xi = 0.2;
    const auto p = geometry_to_couplings(8, 1.0, xi * std::log(2.0), xi);
    REQUIRE(p.lambda == Approx(0.5).margin(1e-12));
    REQUIRE(p.mu == Approx(2.0).margin(1e-12));
    REQUIRE(p.couplings.front() == Approx(0.5).margin(1e-12));
    REQUIRE(p.couplings[1] == Approx(2.0).margin(1e-12));

    double prev_lambda = 1.0, prev_mu = 1.0;
    for (double d : {0.1, 0.2, 0.3}) {
        const auto q = geometry_to_couplings(8, 1.0, d, xi);
        REQUIRE(q.lambda < prev_lambda);
        REQUIRE(q.mu > prev_mu);
        REQUIRE(q.lambda * q.mu == Approx(1.0).margin(1e-12));
        prev_lambda = q.lambda;
        prev_mu = q.mu;
    }

    const auto asym = geometry_to_couplings(8, 1.0, xi * std::log(2.0), xi * std::log(4.0), xi);
    REQUIRE(asym.lambda == Approx(0.5).margin(1e-12));
    REQUIRE(asym.mu == Approx(4.0).margin(1e-12));

    REQUIRE_THROWS_AS(geometry_to_couplings(8, 1.0, 1.5, xi), std::invalid_argument);
    REQUIRE_THROWS_AS(geometry_to_couplings(8, 1.0, 0.1, -1.0), std::invalid_argument);
}

#include "zenoqst/dynamics.hpp"
#include "zenoqst/errors.hpp"
#include "zenoqst/hamiltonian.hpp"
#include "zenoqst/zeno.hpp"

#include <doctest.h>

#include <cmath>

using namespace zenoqst;

namespace {

BasisPtr sector() { return excitation_sector(build_basis(SystemSpec::network(2, 1)), 1); }

CouplingConfig pair_config(double omega, double g, double lambda) {
    CouplingConfig c = CouplingConfig::uniform(2, g, lambda);
    c.rabi = {omega, -omega};
    c.active_nodes = {0, 1};
    return c;
}

std::size_t zero_cluster(const ZenoDecomposition& d) {
    std::size_t best = 0;
    for (std::size_t n = 1; n < d.size(); ++n)
        if (std::abs(d.eigenvalues[n]) < std::abs(d.eigenvalues[best])) best = n;
    return best;
}

// The chain phi1..phi7 written out by hand as a tridiagonal matrix.
DenseMatrix chain_matrix(double om_sender, double om_receiver, double g, double lambda) {
    DenseMatrix m = DenseMatrix::Zero(7, 7);
    const double c[6] = {om_sender, g, lambda, lambda, g, om_receiver};
    for (int k = 0; k < 6; ++k) m(k, k + 1) = m(k + 1, k) = c[k];
    return m;
}

}  // namespace

TEST_CASE("five Zeno subspaces of the strong coupling") {
    const auto b = sector();
    for (auto [g, lambda] : {std::pair{1.0, 1.0}, std::pair{1.0, 0.25}, std::pair{0.6, 1.7}}) {
        CAPTURE(lambda);
        const Operator hs = strong_hamiltonian(b, pair_config(0.0, g, lambda));
        const ZenoDecomposition d = zeno_decompose(hs);
        REQUIRE(d.size() == 5);
        const auto analytic = analytic_strong_eigenvalues(g, lambda);
        for (std::size_t n = 0; n < 5; ++n) CHECK(std::abs(d.eigenvalues[n] - analytic[n]) <= 1e-10);
        CHECK(d.ranks == std::vector<std::size_t>{1, 1, 3, 1, 1});
        CHECK(d.completeness_error() <= 1e-10);
        CHECK(d.orthogonality_error() <= 1e-10);
        CHECK(d.reconstruction_error(hs) <= 1e-10);
    }
    const auto w = analytic_strong_eigenvalues(1.0, 1.0);
    CHECK(w[0] == doctest::Approx(-std::sqrt(3.0)));
    CHECK(w[4] == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("zero operator is one cluster") {
    const auto b = sector();
    const ZenoDecomposition d = zeno_decompose(Operator::zero(b));
    REQUIRE(d.size() == 1);
    CHECK(d.eigenvalues[0] == 0.0);
    CHECK(d.ranks[0] == 7);
    CHECK((d.projectors[0].dense() - DenseMatrix::Identity(7, 7)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("near-degenerate clusters are rejected") {
    const auto b = sector();
    DenseMatrix m = DenseMatrix::Zero(7, 7);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0 + 5e-9;
    CHECK_THROWS_AS(zeno_decompose(Operator::from_dense(b, m), 1e-9), NumericalError);
    CHECK_NOTHROW(zeno_decompose(Operator::from_dense(b, m), 1e-8));
    CHECK(zeno_decompose(Operator::from_dense(b, m), 1e-8).size() == 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(zeno_decompose(Operator::from_dense(b, m), 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(zeno_decompose(Operator::zero(b), 0.0), std::invalid_argument);
}

TEST_CASE("dark state") {
    const auto b = sector();
    const StateVector d = analytic_dark_state(1.0, 1.0, b);
    const TransferChain chain = transfer_chain(b->spec(), 0, 1);
    const double s = 1.0 / std::sqrt(3.0);
    CHECK(d.amplitude(chain.phi[1]).real() == doctest::Approx(s));
    CHECK(d.amplitude(chain.phi[3]).real() == doctest::Approx(-s));
    CHECK(d.amplitude(chain.phi[5]).real() == doctest::Approx(s));
    CHECK(std::abs(d.amplitude(chain.phi[2])) == 0.0);
    CHECK(std::abs(d.amplitude(chain.phi[4])) == 0.0);

    for (auto [g, lambda] : {std::pair{1.0, 1.0}, std::pair{0.3, 2.0}, std::pair{2.0, 0.1}}) {
        const StateVector v = analytic_dark_state(g, lambda, b);
        CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));
        const Operator hs = strong_hamiltonian(b, pair_config(0.0, g, lambda));
        CHECK(hs.apply(v.amplitudes()).norm() <= 1e-12);

        // The numerical eta = 0 projector spans {phi1, phi7, dark}.
        const ZenoDecomposition dec = zeno_decompose(hs);
        DenseMatrix cols = DenseMatrix::Zero(7, 3);
        cols(static_cast<Eigen::Index>(b->index_of(chain.phi[0])), 0) = 1.0;
        cols(static_cast<Eigen::Index>(b->index_of(chain.phi[6])), 1) = 1.0;
        cols.col(2) = v.amplitudes();
        CHECK(max_principal_angle_sine(dec.projectors[zero_cluster(dec)], cols) <= 1e-8);
    }
    CHECK_THROWS_AS(analytic_dark_state(0.0, 1.0, b), std::invalid_argument);
}

TEST_CASE("effective Hamiltonian") {
    const auto b = sector();
    const TransferChain chain = transfer_chain(b->spec(), 0, 1);
    const auto i1 = static_cast<Eigen::Index>(b->index_of(chain.phi[0]));
    const auto i7 = static_cast<Eigen::Index>(b->index_of(chain.phi[6]));

    for (auto [g, lambda, omega] : {std::tuple{1.0, 1.0, 0.1}, std::tuple{1.0, 0.5, 0.03}, std::tuple{0.7, 1.4, 0.05}}) {
        const CouplingConfig c = pair_config(omega, g, lambda);
        const Operator hs = strong_hamiltonian(b, c);
        const Operator hw = laser_hamiltonian(b, c);
        const ZenoDecomposition dec = zeno_decompose(hs);
        const Operator heff = effective_hamiltonian(dec, hw);
        CHECK(heff.hermiticity_deviation() <= 1e-14);
        CHECK(dec.off_cluster_magnitude(heff) <= 1e-12);

        const Vector dark = analytic_dark_state(g, lambda, b).amplitudes();
        const DenseMatrix m = heff.dense();
        const cplx sender = (m.row(i1) * dark)(0);
        const cplx receiver = (m.row(i7) * dark)(0);
        const double n = std::sqrt(2 * lambda * lambda + g * g);
        // Each ground configuration couples through its own atom's drive:
        // the sender (node 1) carries -omega, the receiver +omega.
        CHECK(sender.real() == doctest::Approx(-lambda * omega / n).epsilon(1e-10));
        CHECK(receiver.real() == doctest::Approx(lambda * omega / n).epsilon(1e-10));
        CHECK(effective_coupling(g, lambda, omega) == doctest::Approx(lambda * omega / n));
        CHECK(std::abs(m(i1, i7)) <= 1e-14);

        // Compare with an independent projection of the hand-built chain.
        Eigen::Matrix<double, 7, 1> dark7;
        dark7 << 0, lambda / n, 0, -g / n, 0, lambda / n, 0;
        const DenseMatrix chain_h = chain_matrix(-omega, omega, g, lambda);
        CHECK((chain_h * dark7.cast<cplx>())(0).real() == doctest::Approx(sender.real()).epsilon(1e-10));
    }
    CHECK(effective_coupling(1.0, 1.0, 0.1) == doctest::Approx(0.05774).epsilon(1e-4));

    SUBCASE("no weak part leaves the strong part") {
        const Operator hs = strong_hamiltonian(b, pair_config(0.0, 1.0, 1.0));
        const ZenoDecomposition dec = zeno_decompose(hs, 1e-9, 2.5);
        const Operator heff = effective_hamiltonian(dec, Operator::zero(b));
        CHECK((heff.dense() - 2.5 * hs.dense()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((dec.strong_part().dense() - heff.dense()).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("closed-form transfer") {
    const auto b = filter_excitation(build_basis(SystemSpec::network(2, 1)), 1);
    const TransferChain chain = transfer_chain(b->spec(), 0, 1);
    const cplx a(0.6, 0.0), bb(0.0, 0.8);
    const double omega = 0.1, g = 1.0, lambda = 1.0;
    const double T = transfer_time(omega, g, lambda);
    CHECK(T == doctest::Approx(std::sqrt(3.0) * M_PI / (std::sqrt(2.0) * 0.1)));
    CHECK(transfer_angle(T, omega, g, lambda) == doctest::Approx(M_PI));

    const StateVector s0 = analytic_qst_evolution(0.0, omega, g, lambda, a, bb, b);
    CHECK(std::abs(s0.amplitude(b->ground_state()) - a) <= 1e-15);
    CHECK(std::abs(s0.amplitude(chain.phi[0]) - bb) <= 1e-15);

    const StateVector sT = analytic_qst_evolution(T, omega, g, lambda, a, bb, b);
    CHECK(std::abs(sT.amplitude(b->ground_state()) - a) <= 1e-15);
    CHECK(std::abs(sT.amplitude(chain.phi[6]) - bb) <= 1e-12);

    const StateVector sh = analytic_qst_evolution(T / 2, omega, g, lambda, 0.0, 1.0, b);
    CHECK(sh.amplitude(chain.phi[0]).real() == doctest::Approx(0.5));
    CHECK(sh.amplitude(chain.phi[6]).real() == doctest::Approx(0.5));
    const cplx dark_coeff = -cplx(0, 1) / std::sqrt(2.0);
    CHECK(std::abs(analytic_dark_state(g, lambda, b).inner(sh) - dark_coeff) <= 1e-12);
    const auto pops = populations(sh, std::vector<BasisState>(chain.phi.begin(), chain.phi.end()));
    CHECK(pops[0] == doctest::Approx(0.25));
    CHECK(pops[6] == doctest::Approx(0.25));
    CHECK(pops[3] == doctest::Approx(1.0 / 6.0));
    // Fiber photon weight is half the excited-atom weight at g = lambda.
    CHECK(pops[3] == doctest::Approx(0.5 * (pops[1] + pops[5])));

    for (double t = 0.0; t <= 2 * T; t += T / 37)
        CHECK(analytic_qst_evolution(t, omega, 0.8, 1.3, a, bb, b).norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(analytic_qst_evolution(0.0, omega, g, lambda, 1.0, 1.0, b), std::invalid_argument);
}

TEST_CASE("effective model tracks the full dynamics in the Zeno limit") {
    const auto b = excitation_sector(build_basis(SystemSpec::network(2, 1)), 1);
    const auto with_ground = filter_excitation(build_basis(SystemSpec::network(2, 1)), 1);
    const TransferChain chain = transfer_chain(b->spec(), 0, 1);
    const double omega = 0.01, g = 1.0, lambda = 1.0;
    const CouplingConfig c = pair_config(omega, g, lambda);
    const Operator h = total_hamiltonian(b, c);
    const Operator heff = effective_hamiltonian(zeno_decompose(strong_hamiltonian(b, c)), laser_hamiltonian(b, c));
    const StateVector psi0 = StateVector::basis_state(b, chain.phi[0]);
    const double T = transfer_time(omega, g, lambda);
    std::vector<double> times;
    for (int k = 0; k <= 200; ++k) times.push_back(T * k / 200);

    const std::vector<BasisState> ends{chain.phi[0], chain.phi[6]};
    std::vector<std::vector<double>> full, eff;
    evolve_unitary(h, psi0, times, [&](double, const StateVector& s) { full.push_back(populations(s, ends)); });
    evolve_unitary(heff, psi0, times, [&](double, const StateVector& s) { eff.push_back(populations(s, ends)); });
    double worst = 0.0, worst_analytic = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const auto an = populations(analytic_qst_evolution(times[k], -omega, g, lambda, 0.0, 1.0, with_ground), ends);
        for (int j = 0; j < 2; ++j) {
            worst = std::max(worst, std::abs(full[k][j] - eff[k][j]));
            worst_analytic = std::max(worst_analytic, std::abs(eff[k][j] - an[j]));
        }
    }
    CHECK(worst <= 0.01);
    CHECK(worst_analytic <= 1e-8);
    CHECK(full.back()[1] >= 0.999);
}

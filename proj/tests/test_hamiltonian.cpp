#include "zenoqst/dynamics.hpp"
#include "zenoqst/hamiltonian.hpp"
#include "zenoqst/zeno.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>

using namespace zenoqst;

namespace {

BasisPtr two_node(int max_exc = 1, int cutoff = 1) {
    return filter_excitation(build_basis(SystemSpec::network(2, cutoff)), max_exc);
}

std::size_t idx(const BasisPtr& b, const char* label) { return b->index_of(BasisState::parse(label)); }

// Paper labelling: phi1 = sender (node 1) in |1>, ..., phi7 = receiver (node 0) in |1>.
const char* const kChain[7] = {"01:0.0.0", "0e:0.0.0", "00:0.1.0", "00:0.0.1", "00:1.0.0", "e0:0.0.0", "10:0.0.0"};

CouplingConfig pair_config(double omega, double g = 1.0, double lambda = 1.0) {
    CouplingConfig c = CouplingConfig::uniform(2, g, lambda);
    c.rabi = {omega, -omega};
    c.active_nodes = {0, 1};
    return c;
}

double max_abs(const DenseMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("laser term") {
    const auto b = two_node();
    const Operator hl = laser_hamiltonian(b, pair_config(0.1));
    CHECK(hl.element(idx(b, kChain[1]), idx(b, kChain[0])) == cplx(-0.1));
    CHECK(hl.element(idx(b, kChain[5]), idx(b, kChain[6])) == cplx(0.1));
    CHECK(hl.hermiticity_deviation() <= 1e-14);
    CHECK(laser_hamiltonian(b, pair_config(0.0)).matrix().nonZeros() == 0);

    // Closure on the seven chain states.
    for (const char* label : kChain) {
        const Vector out = hl.apply(StateVector::basis_state(b, BasisState::parse(label)).amplitudes());
        for (Eigen::Index i = 0; i < out.size(); ++i)
            if (std::abs(out(i)) > 0) CHECK(b->state(static_cast<std::size_t>(i)).excitation() == 1);
    }

    SUBCASE("switched-off nodes are not driven") {
        CouplingConfig c = pair_config(0.1);
        c.active_nodes.clear();
        CHECK(laser_hamiltonian(b, c).matrix().nonZeros() == 0);
    }
}

TEST_CASE("cavity term") {
    const auto b = two_node();
    const Operator hc = cavity_hamiltonian(b, pair_config(0.1, 0.7, 1.3));
    CHECK(hc.element(idx(b, kChain[2]), idx(b, kChain[1])) == cplx(0.7));
    CHECK(hc.element(idx(b, kChain[4]), idx(b, kChain[5])) == cplx(0.7));
    CHECK(hc.hermiticity_deviation() <= 1e-14);
    for (const char* label : {kChain[0], kChain[6], "00:0.0.0"}) {
        const Vector out = hc.apply(StateVector::basis_state(b, BasisState::parse(label)).amplitudes());
        CHECK(out.norm() == 0.0);
    }
    CouplingConfig off = pair_config(0.1);
    std::fill(off.cavity_coupling.begin(), off.cavity_coupling.end(), 0.0);
    CHECK(cavity_hamiltonian(b, off).matrix().nonZeros() == 0);
}

TEST_CASE("fiber term") {
    const auto b = two_node(3, 1);
    const Operator hf = fiber_hamiltonian(b, pair_config(0.1, 1.0, 0.4));
    CHECK(hf.element(idx(b, kChain[2]), idx(b, kChain[3])) == cplx(0.4));
    CHECK(hf.element(idx(b, kChain[4]), idx(b, kChain[3])) == cplx(0.4));
    CHECK(hf.hermiticity_deviation() <= 1e-14);

    // Photon number conserved, atoms untouched.
    const DenseMatrix d = hf.dense();
    for (Eigen::Index i = 0; i < d.rows(); ++i)
        for (Eigen::Index j = 0; j < d.cols(); ++j) {
            if (std::abs(d(i, j)) == 0.0) continue;
            const auto& si = b->state(static_cast<std::size_t>(i));
            const auto& sj = b->state(static_cast<std::size_t>(j));
            CHECK(si.atoms == sj.atoms);
            int ni = 0, nj = 0;
            for (int p : si.photons) ni += p;
            for (int p : sj.photons) nj += p;
            CHECK(ni == nj);
        }

    CouplingConfig none = pair_config(0.1);
    none.active_nodes.clear();
    CHECK(fiber_hamiltonian(b, none).matrix().nonZeros() == 0);

    const auto b3 = filter_excitation(build_basis(SystemSpec::network(3, 1)), 1);
    CouplingConfig three = CouplingConfig::uniform(3);
    three.active_nodes = {0, 1, 2};
    CHECK_THROWS_AS(fiber_hamiltonian(b3, three), std::invalid_argument);
    three.active_nodes = {2};
    CHECK_THROWS_AS(fiber_hamiltonian(b3, three), std::invalid_argument);

    SUBCASE("only switched-on cavities couple to the bus") {
        three.active_nodes = {0, 2};
        const Operator h = fiber_hamiltonian(b3, three);
        const auto fiber = b3->index_of(BasisState::parse("000:0.0.0.1"));
        CHECK(h.element(b3->index_of(BasisState::parse("000:1.0.0.0")), fiber) == cplx(1.0));
        CHECK(h.element(b3->index_of(BasisState::parse("000:0.1.0.0")), fiber) == cplx(0.0));
        CHECK(h.element(b3->index_of(BasisState::parse("000:0.0.1.0")), fiber) == cplx(1.0));
    }
}

TEST_CASE("total Hamiltonian") {
    const auto b = two_node();
    const Operator h = total_hamiltonian(b, pair_config(0.1));
    CHECK(h.hermiticity_deviation() <= 1e-14);
    const Vector frozen = h.apply(StateVector::basis_state(b, b->ground_state()).amplitudes());
    CHECK(frozen.norm() == 0.0);

    SUBCASE("chain sparsity pattern") {
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) {
                const bool neighbours = std::abs(i - j) == 1;
                CHECK((std::abs(h.element(idx(b, kChain[i]), idx(b, kChain[j]))) > 0.0) == neighbours);
            }
    }

    SUBCASE("undriven spectrum on the chain") {
        for (double lambda : {1.0, 0.3, 2.0}) {
            const auto sector = excitation_sector(build_basis(SystemSpec::network(2, 1)), 1);
            const DenseMatrix m = total_hamiltonian(sector, pair_config(0.0, 1.0, lambda)).dense();
            Eigen::SelfAdjointEigenSolver<DenseMatrix> es(m);
            const double w = std::sqrt(2 * lambda * lambda + 1.0);
            const std::vector<double> expect{-w, -1.0, 0.0, 0.0, 0.0, 1.0, w};
            for (int k = 0; k < 7; ++k) CHECK(es.eigenvalues()(k) == doctest::Approx(expect[static_cast<std::size_t>(k)]).epsilon(1e-12));
        }
    }
}

TEST_CASE("excitation number is conserved") {
    for (int cutoff : {1, 2}) {
        const auto full = build_basis(SystemSpec::network(2, cutoff));
        const Operator n = excitation_number_operator(full);
        CouplingConfig c = pair_config(0.37, 0.8, 1.9);
        const Operator h = total_hamiltonian(full, c);
        CHECK(max_abs((h * n - n * h).dense()) <= 1e-13);
        for (const auto& term : {laser_hamiltonian(full, c), cavity_hamiltonian(full, c), fiber_hamiltonian(full, c)})
            CHECK(term.hermiticity_deviation() <= 1e-14);
    }
}

TEST_CASE("coupling config validation") {
    CouplingConfig c = pair_config(0.1);
    CHECK(c.zeno_ratio() == doctest::Approx(0.1));
    CHECK(c.zeno_regime());
    c.cavity_coupling = {0.4, 1.0};
    CHECK(c.zeno_ratio() == doctest::Approx(0.25));
    CHECK_FALSE(c.zeno_regime());
    CHECK_NOTHROW(c.validate(2));
    c.active_nodes = {0, 0};
    CHECK_THROWS_AS(c.validate(2), std::invalid_argument);
    c.active_nodes = {0, 2};
    CHECK_THROWS_AS(c.validate(2), std::invalid_argument);
    NoiseConfig n;
    n.cavity_decay = -0.1;
    CHECK_THROWS_AS(n.validate(), std::invalid_argument);
}

TEST_CASE("collapse operators") {
    const auto b = two_node();
    NoiseConfig noise{0.1, 0.05, 0.2};
    const auto ops = collapse_operators(b, noise);
    REQUIRE(ops.size() == 7);
    // Two cavities at kappa, one fiber at kappa_f, Gamma/2 into each ground level of each atom.
    std::vector<double> rates;
    for (const auto& c : ops) rates.push_back(c.rate);
    std::sort(rates.begin(), rates.end());
    const std::vector<double> expect{0.05, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
    for (std::size_t k = 0; k < 7; ++k) CHECK(rates[k] == doctest::Approx(expect[k]));

    double total_rate = 0.0;
    for (const auto& c : ops) total_rate += c.rate;
    CHECK(total_rate == doctest::Approx(2 * 0.1 + 0.05 + 4 * 0.1));

    CHECK(collapse_operators(b, NoiseConfig{}).size() == 7);

    SUBCASE("jump targets") {
        // a_2 takes a sender-cavity photon to the ground state; sigma_1e on atom 2 takes phi2 to phi1.
        const Operator a2 = mode_annihilation_operator(b, 1);
        Vector out = a2.apply(StateVector::basis_state(b, BasisState::parse(kChain[2])).amplitudes());
        CHECK(out(static_cast<Eigen::Index>(b->index_of(b->ground_state()))) == cplx(1.0));
        const Operator s = atomic_transition_operator(b, 1, Level::e, Level::g1);
        out = s.apply(StateVector::basis_state(b, BasisState::parse(kChain[1])).amplitudes());
        CHECK(out(static_cast<Eigen::Index>(idx(b, kChain[0]))) == cplx(1.0));
        bool found_cavity = false, found_sigma = false;
        for (const auto& c : ops) {
            found_cavity |= c.rate == 0.1 && max_abs(c.op.dense() - a2.dense()) == 0.0;
            found_sigma |= c.rate == 0.1 && max_abs(c.op.dense() - s.dense()) == 0.0;
        }
        CHECK(found_cavity);
        CHECK(found_sigma);
    }

    SUBCASE("no collapse operator raises the excitation number") {
        const auto big = build_basis(SystemSpec::network(2, 2));
        const auto all = collapse_operators(big, noise);
        for (const auto& c : all) {
            const DenseMatrix d = c.op.dense();
            for (Eigen::Index i = 0; i < d.rows(); ++i)
                for (Eigen::Index j = 0; j < d.cols(); ++j)
                    if (std::abs(d(i, j)) > 0)
                        CHECK(big->state(static_cast<std::size_t>(i)).excitation() <=
                              big->state(static_cast<std::size_t>(j)).excitation());
        }
    }
}

TEST_CASE("excitation-1 sector is closed under the master equation") {
    // Excitation <= 2 with two photons allowed per mode: any leakage out of
    // the one-excitation space would show up in the excitation-2 states.
    const auto b = filter_excitation(build_basis(SystemSpec::network(2, 2)), 2);
    const Operator h = total_hamiltonian(b, pair_config(0.1));
    const auto ops = collapse_operators(b, NoiseConfig{0.1, 0.1, 0.1});
    const StateVector psi = StateVector::basis_state(b, BasisState::parse(kChain[0]));
    const DensityMatrix rho = evolve_lindblad(h, ops, DensityMatrix::pure(psi), transfer_time(0.1, 1.0, 1.0));
    double leaked = 0.0;
    for (std::size_t i = 0; i < b->dim(); ++i)
        if (b->state(i).excitation() == 2) leaked += std::abs(rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
    CHECK(leaked <= 1e-12);
}

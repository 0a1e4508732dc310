#include "oracles.hpp"

#include "solitonchain/dynamics.hpp"
#include "solitonchain/entanglement.hpp"
#include "solitonchain/error.hpp"
#include "solitonchain/rng.hpp"

#include <doctest.h>

using namespace solitonchain;

namespace {

ChainSpec disordered_abc(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    return apply_diagonal_disorder(apply_offdiagonal_disorder(build_abc_chain(0, 0.1, 1.0), 1.0, 0.1, rng), 1.0, 0.1, rng);
}

} // namespace

TEST_CASE("evolution matches the matrix exponential") {
    const auto spec  = disordered_abc(1);
    const auto basis = build_basis(7);
    const auto h     = build_hamiltonian(spec, basis);
    const auto eig   = diagonalize(h);
    const auto psi0  = prepare_initial({{0, 6}, cplx(1.0), cplx(0.0, 1.0), cplx(-0.5), cplx(0.3, 0.2)}, basis);
    for(double t : {0.0, 0.7, 13.0, 225.43, 1000.0}) {
        CAPTURE(t);
        const Eigen::VectorXcd expected = oracle::propagator(h.matrix, t) * psi0.amplitudes();
        CHECK((evolve(psi0, eig, t).amplitudes() - expected).norm() < 1e-9);
    }
}

TEST_CASE("evolution is unitary and composes") {
    const auto basis = build_basis(11);
    const auto eig   = diagonalize(build_hamiltonian(build_storage_chain(0.1, 1.0), basis));
    const auto psi0  = prepare_initial({{2, 8}}, basis);
    std::vector<double> w0;
    for(std::size_t k = 0; k <= 2; ++k) w0.push_back(psi0.block_weight(k));
    for(double t : {0.25, 10.0, 300.0, 4000.0}) {
        const auto psi = evolve(psi0, eig, t);
        CHECK(psi.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-12));
        for(std::size_t k = 0; k <= 2; ++k) CHECK(std::abs(psi.block_weight(k) - w0[k]) < 1e-12);
        CHECK((evolve(evolve(psi0, eig, t), eig, 2 * t).amplitudes() - evolve(psi0, eig, 3 * t).amplitudes()).norm() < 1e-10);
        CHECK((evolve(psi, eig, -t).amplitudes() - psi0.amplitudes()).norm() < 1e-10);
    }
    CHECK(w0[0] == doctest::Approx(0.25));
    CHECK(w0[1] == doctest::Approx(0.5));
    CHECK(w0[2] == doctest::Approx(0.25));
}

TEST_CASE("eigendecomposition") {
    const auto h   = build_hamiltonian(disordered_abc(2), build_basis(7));
    const auto eig = diagonalize(h);
    const auto &v  = eig.eigenvectors;
    CHECK((v.transpose() * v - Eigen::MatrixXd::Identity(29, 29)).norm() < 1e-12);
    CHECK((v * eig.eigenvalues.asDiagonal() * v.transpose() - h.matrix).norm() < 1e-12);
    for(Eigen::Index i = 1; i < eig.eigenvalues.size(); ++i) CHECK(eig.eigenvalues[i - 1] <= eig.eigenvalues[i]);

    Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(3, 3);
    asym(0, 1)           = 1.0;
    CHECK_THROWS_AS(diagonalize(asym), ParameterError);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
    bad(1, 1)           = std::nan("");
    CHECK_THROWS_AS(diagonalize(bad), NumericalError);
}

TEST_CASE("initial state preparation") {
    const auto basis = build_basis(7);
    const auto psi   = prepare_initial({{0, 6}}, basis);
    for(std::uint64_t mask : {0ULL, 1ULL, 64ULL, 65ULL}) CHECK(std::abs(psi[*basis->find(mask)] - 0.5) < 1e-15);
    CHECK(psi.amplitudes().norm() == doctest::Approx(1.0));
    CHECK(eof(reduce_to_two_sites(psi, 0, 6)) < 1e-12);

    CHECK_THROWS_AS(prepare_initial({{0, 6}}, build_basis(7, 1)), CapacityError);
    CHECK_THROWS_AS(prepare_initial({{0, 7}}, basis), ParameterError);
    CHECK_THROWS_AS(prepare_initial({{3, 3}}, basis), ParameterError);
    CHECK_THROWS_AS(PureState(basis, Eigen::VectorXcd::Ones(29)), ParameterError);
}

TEST_CASE("reset-channel injection") {
    // (|01> + |10>)/sqrt2, then the second site is measured and set to |+>.
    const auto       basis = build_basis(2);
    Eigen::VectorXcd amps  = Eigen::VectorXcd::Zero(4);
    amps[static_cast<Eigen::Index>(*basis->find(0b01))] = 1 / std::sqrt(2.0);
    amps[static_cast<Eigen::Index>(*basis->find(0b10))] = 1 / std::sqrt(2.0);
    const auto ens = inject_plus(PureState(basis, amps), 1);
    REQUIRE(ens.size() == 2);
    CHECK(ens.branches()[0].weight == doctest::Approx(0.5));
    CHECK(ens.branches()[1].weight == doctest::Approx(0.5));

    // Expected pair state: (I/2) on site 0 tensor |+><+| on site 1.
    Eigen::Matrix4cd expected;
    expected << 0.25, 0.25, 0, 0, 0.25, 0.25, 0, 0, 0, 0, 0.25, 0.25, 0, 0, 0.25, 0.25;
    CHECK((reduce_to_two_sites(ens, 0, 1).matrix() - expected).norm() < 1e-14);

    // A site that is already empty yields a single branch.
    const auto vac    = prepare_initial({{}}, basis);
    const auto single = inject_plus(vac, 0);
    REQUIRE(single.size() == 1);
    CHECK((single.branches()[0].state.amplitudes() - prepare_initial({{0}}, basis).amplitudes()).norm() < 1e-15);

    // Over the excitation cap.
    const auto b1 = build_basis(3, 1);
    CHECK_THROWS_AS(inject_plus(prepare_initial({{0}}, b1), 2), CapacityError);
}

TEST_CASE("trajectories and quenches") {
    const auto basis = build_basis(7);
    auto       eig   = std::make_shared<const EigenDecomposition>(diagonalize(build_hamiltonian(build_abc_chain(0, 0.1, 1.0), basis)));
    const auto psi0  = prepare_initial({{0, 6}}, basis);
    const Trajectory traj(psi0, eig);
    for(double t : {0.0, 3.0, 225.0}) CHECK((traj.at(t).amplitudes() - evolve(psi0, *eig, t).amplitudes()).norm() < 1e-12);

    auto quenched = std::make_shared<const EigenDecomposition>(
        diagonalize(build_hamiltonian(decouple_site(build_abc_chain(0, 0.1, 1.0), 3), basis)));
    const auto mid   = traj.at(100.0);
    const auto after = requench(mid, quenched);
    CHECK((after.at(0.0).amplitudes() - mid.amplitudes()).norm() < 1e-12);
    CHECK((after.at(50.0).amplitudes() - evolve(mid, *quenched, 50.0).amplitudes()).norm() < 1e-12);

    CHECK_THROWS_AS(inject_plus(mid, 3), CapacityError);
    const auto ens  = inject_plus(evolve(prepare_initial({{0}}, basis), *eig, 60.0), 6);
    REQUIRE(ens.size() == 2);
    const auto etr  = requench(ens, quenched);
    const auto at50 = etr.at(50.0);
    for(std::size_t i = 0; i < ens.size(); ++i) {
        CHECK(at50.branches()[i].weight == ens.branches()[i].weight);
        CHECK((at50.branches()[i].state.amplitudes() - evolve(ens.branches()[i].state, *quenched, 50.0).amplitudes()).norm() < 1e-12);
    }
    CHECK_THROWS_AS(evolve(prepare_initial({{0}}, build_basis(5)), *eig, 1.0), ParameterError);
}

#include "oracles.hpp"

#include "solitonchain/entanglement.hpp"
#include "solitonchain/error.hpp"

#include <doctest.h>

using namespace solitonchain;

namespace {

Eigen::Matrix4cd projector(const Eigen::Vector4cd &v) { return v * v.adjoint() / v.squaredNorm(); }

TwoQubitDensity pure(const Eigen::Vector4cd &v) { return TwoQubitDensity::from_factor(v.normalized()); }

PureState two_site_state(const BasisPtr &b, cplx a00, cplx a01, cplx a10, cplx a11) {
    // Site 0 is bit 0 of the mask and the first qubit of the pair.
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(b->size()));
    amps[static_cast<Eigen::Index>(*b->find(0b00))] = a00;
    amps[static_cast<Eigen::Index>(*b->find(0b10))] = a01;
    amps[static_cast<Eigen::Index>(*b->find(0b01))] = a10;
    amps[static_cast<Eigen::Index>(*b->find(0b11))] = a11;
    return PureState::normalized(b, amps);
}

} // namespace

TEST_CASE("concurrence of standard states") {
    const Eigen::Vector4cd bell(0.0, 1.0, 1.0, 0.0);
    CHECK(concurrence(pure(bell)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eof(pure(bell)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(concurrence(TwoQubitDensity(projector(bell))) == doctest::Approx(1.0).epsilon(1e-12));

    const Eigen::Vector4cd product(0.5, 0.5, 0.5, 0.5);
    CHECK(concurrence(pure(product)) < 1e-15);
    CHECK(eof(pure(product)) < 1e-15);
    // From a bare rank-one matrix the factor carries sqrt(eps) noise.
    CHECK(concurrence(TwoQubitDensity(projector(product))) < 1e-7);

    for(double p : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 0.95, 1.0}) {
        CAPTURE(p);
        CHECK(concurrence(TwoQubitDensity(oracle::werner(p))) == doctest::Approx(std::max(0.0, (3 * p - 1) / 2)).epsilon(1e-10));
    }
    CHECK(concurrence(TwoQubitDensity(oracle::werner(0.8))) == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("entanglement of formation from concurrence") {
    CHECK(eof_from_concurrence(0.0) == 0.0);
    CHECK(eof_from_concurrence(1.0) == doctest::Approx(1.0));
    CHECK(eof_from_concurrence(0.5) == doctest::Approx(0.3546).epsilon(1e-4));
    CHECK(eof_from_concurrence(0.5) == doctest::Approx(oracle::h2((1 + std::sqrt(0.75)) / 2)).epsilon(1e-13));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
    double previous = -1.0;
    for(int k = 0; k <= 200; ++k) {
        const double e = eof_from_concurrence(k / 200.0);
        CHECK(e >= previous);
        previous = e;
    }
}

TEST_CASE("pure-state EoF equals the entropy of the marginal") {
    std::mt19937_64                  gen(7);
    std::normal_distribution<double> g;
    for(int trial = 0; trial < 50; ++trial) {
        Eigen::Vector4cd psi;
        for(int i = 0; i < 4; ++i) psi[i] = cplx(g(gen), g(gen));
        psi.normalize();
        Eigen::Matrix2cd m;
        m << psi[0], psi[1], psi[2], psi[3];
        const Eigen::Matrix2cd marginal = m * m.adjoint();
        const double           lambda   = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(marginal).eigenvalues()[0];
        CHECK(std::abs(eof(pure(psi)) - oracle::h2(lambda)) < 1e-12);
        CHECK(std::abs(eof(TwoQubitDensity(projector(psi))) - oracle::h2(lambda)) < 1e-7);
    }
}

TEST_CASE("EoF is invariant under local unitaries") {
    std::mt19937_64                        gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for(int trial = 0; trial < 50; ++trial) {
        // Mixture of a random pure state and white noise.
        Eigen::Vector4cd psi;
        for(int i = 0; i < 4; ++i) psi[i] = cplx(u(gen) - 0.5, u(gen) - 0.5);
        const double           p   = u(gen);
        const Eigen::Matrix4cd rho = p * projector(psi) + (1 - p) / 4 * Eigen::Matrix4cd::Identity();
        Eigen::Matrix4cd       local;
        const auto             ua = oracle::random_unitary(gen), ub = oracle::random_unitary(gen);
        for(int i = 0; i < 2; ++i)
            for(int j = 0; j < 2; ++j) local.block<2, 2>(2 * i, 2 * j) = ua(i, j) * ub;
        const Eigen::Matrix4cd rotated = local * rho * local.adjoint();
        CHECK(eof(TwoQubitDensity(rotated)) == doctest::Approx(eof(TwoQubitDensity(rho))).epsilon(1e-9));
    }
}

TEST_CASE("density validation") {
    Eigen::Matrix4cd bad = oracle::werner(0.5);
    bad(0, 1)            = 0.3;
    CHECK_THROWS_AS(TwoQubitDensity{bad}, DomainError);
    CHECK_THROWS_AS(TwoQubitDensity{Eigen::Matrix4cd(2.0 * oracle::werner(0.5))}, DomainError);
    Eigen::Matrix4cd negative = Eigen::Matrix4cd::Zero();
    negative.diagonal() << 0.6, 0.6, -0.1, -0.1;
    CHECK_THROWS_AS(TwoQubitDensity{negative}, DomainError);
}

TEST_CASE("partial trace over the rest of the chain") {
    auto b = build_basis(2, 2);
    auto s = two_site_state(b, 0, 1, 1, 0);
    CHECK(eof(reduce_to_two_sites(s, 0, 1)) == doctest::Approx(1.0));

    // Site 1 of a three-site |+>|0>|+> is traced out; the pair stays a product.
    auto             b3   = build_basis(3, 2);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(b3->size()));
    for(std::uint64_t mask : {0b000ULL, 0b001ULL, 0b100ULL, 0b101ULL}) amps[static_cast<Eigen::Index>(*b3->find(mask))] = 0.5;
    const auto rho = reduce_to_two_sites(PureState(b3, amps), 0, 2).matrix();
    CHECK((rho - Eigen::Matrix4cd::Constant(0.25)).norm() < 1e-14);

    // Entangled with the traced site: (|100> + |001>)/sqrt2 restricted to (0,1) is mixed.
    amps.setZero();
    amps[static_cast<Eigen::Index>(*b3->find(0b001))] = 1 / std::sqrt(2.0);
    amps[static_cast<Eigen::Index>(*b3->find(0b100))] = 1 / std::sqrt(2.0);
    const auto mixed = reduce_to_two_sites(PureState(b3, amps), 0, 1).matrix();
    CHECK(mixed(0, 0).real() == doctest::Approx(0.5));
    CHECK(mixed(2, 2).real() == doctest::Approx(0.5));
    CHECK(std::abs(mixed(0, 2)) < 1e-14);

    const SitePairIndex pair(*b3, 2, 0);
    CHECK(pair.first() == 0);
    CHECK(pair.second() == 2);
    CHECK_THROWS_AS(SitePairIndex(*b3, 1, 1), ParameterError);
}

TEST_CASE("fidelity") {
    auto b = build_basis(2, 2);
    auto x = two_site_state(b, 1, 0, 0, 0), y = two_site_state(b, 1, 1, 0, 0);
    CHECK(fidelity(x, x) == doctest::Approx(1.0));
    CHECK(fidelity(x, y) == doctest::Approx(0.5));
    CHECK_THROWS_AS(fidelity(x, two_site_state(build_basis(3, 2), 1, 0, 0, 0)), ParameterError);
}

#include "solitonchain/entanglement.hpp"

#include "solitonchain/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace solitonchain {

namespace {

constexpr double invariant_tolerance = 1e-10;

// sigma_y (x) sigma_y
Eigen::Matrix4cd spin_flip() {
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(0, 3)            = -1.0;
    yy(1, 2)            = 1.0;
    yy(2, 1)            = 1.0;
    yy(3, 0)            = -1.0;
    return yy;
}

} // namespace

TwoQubitDensity::TwoQubitDensity(const Eigen::Matrix4cd &rho) : rho_(rho) {
    check();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(rho_);
    Eigen::Vector4d                                  root;
    for(int i = 0; i < 4; ++i) root[i] = std::sqrt(std::max(solver.eigenvalues()[i], 0.0));
    factor_ = solver.eigenvectors() * root.cast<cplx>().asDiagonal();
}

TwoQubitDensity TwoQubitDensity::from_factor(const Factor &w) {
    // Compress W (4 x k) to a 4 x 4 factor through a QR of W^dagger.
    Eigen::MatrixXcd wt = Eigen::MatrixXcd::Zero(std::max<Eigen::Index>(w.cols(), 4), 4);
    wt.topRows(w.cols()) = w.adjoint();
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(wt);
    const Eigen::Matrix4cd r = qr.matrixQR().topRows(4).triangularView<Eigen::Upper>();

    TwoQubitDensity out;
    out.factor_ = r.adjoint();
    out.rho_    = w * w.adjoint();
    out.check();
    return out;
}

void TwoQubitDensity::check() const {
    if(!rho_.allFinite()) throw DomainError("density matrix has non-finite entries");
    const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    if(herm > invariant_tolerance) throw DomainError("density matrix not Hermitian (deviation " + std::to_string(herm) + ")");
    const cplx tr = rho_.trace();
    if(std::abs(tr - 1.0) > invariant_tolerance) throw DomainError("density matrix trace " + std::to_string(tr.real()) + " is not 1");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(rho_, Eigen::EigenvaluesOnly);
    if(solver.eigenvalues().minCoeff() < -invariant_tolerance) throw DomainError("density matrix has a negative eigenvalue");
}

SitePairIndex::SitePairIndex(const Basis &basis, std::size_t site1, std::size_t site2)
    : n_sites_(basis.n_sites()), max_excitations_(basis.max_excitations()), first_(std::min(site1, site2)), second_(std::max(site1, site2)) {
    if(site1 == site2) throw ParameterError("reduce_to_two_sites: sites must differ");
    if(second_ >= basis.n_sites()) throw ParameterError("reduce_to_two_sites: site out of range");
    const std::uint64_t hi = std::uint64_t{1} << first_, lo = std::uint64_t{1} << second_;
    std::unordered_map<std::uint64_t, std::size_t> by_rest;
    for(std::size_t i = 0; i < basis.size(); ++i) {
        const std::uint64_t mask  = basis.state(i);
        const std::uint64_t rest  = mask & ~(hi | lo);
        const int           local = ((mask & hi) ? 2 : 0) + ((mask & lo) ? 1 : 0);
        auto [it, fresh]          = by_rest.try_emplace(rest, groups_.size());
        if(fresh) groups_.push_back({-1, -1, -1, -1});
        groups_[it->second][static_cast<std::size_t>(local)] = static_cast<long long>(i);
    }
}

TwoQubitDensity::Factor SitePairIndex::factor(const Eigen::VectorXcd &amplitudes) const {
    TwoQubitDensity::Factor w(4, static_cast<Eigen::Index>(groups_.size()));
    for(std::size_t j = 0; j < groups_.size(); ++j)
        for(std::size_t k = 0; k < 4; ++k)
            w(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
                groups_[j][k] < 0 ? cplx{0.0} : amplitudes[static_cast<Eigen::Index>(groups_[j][k])];
    return w;
}

Eigen::Matrix4cd SitePairIndex::accumulate(const Eigen::VectorXcd &amplitudes) const {
    const auto w = factor(amplitudes);
    return w * w.adjoint();
}

TwoQubitDensity reduce_to_two_sites(const PureState &state, const SitePairIndex &pair) {
    if(!pair.matches(*state.basis())) throw ParameterError("reduce_to_two_sites: basis mismatch");
    return TwoQubitDensity::from_factor(pair.factor(state.amplitudes()));
}

TwoQubitDensity reduce_to_two_sites(const BranchEnsemble &ensemble, const SitePairIndex &pair) {
    std::vector<TwoQubitDensity::Factor> parts;
    Eigen::Index                          cols = 0;
    for(const auto &b : ensemble.branches()) {
        if(!pair.matches(*b.state.basis())) throw ParameterError("reduce_to_two_sites: basis mismatch");
        parts.push_back(std::sqrt(b.weight) * pair.factor(b.state.amplitudes()));
        cols += parts.back().cols();
    }
    TwoQubitDensity::Factor w(4, cols);
    Eigen::Index            at = 0;
    for(const auto &p : parts) {
        w.middleCols(at, p.cols()) = p;
        at += p.cols();
    }
    return TwoQubitDensity::from_factor(w);
}

TwoQubitDensity reduce_to_two_sites(const PureState &state, std::size_t site1, std::size_t site2) {
    return reduce_to_two_sites(state, SitePairIndex(*state.basis(), site1, site2));
}

TwoQubitDensity reduce_to_two_sites(const BranchEnsemble &ensemble, std::size_t site1, std::size_t site2) {
    return reduce_to_two_sites(ensemble, SitePairIndex(*ensemble.branches().front().state.basis(), site1, site2));
}

double concurrence(const TwoQubitDensity &density) {
    // With rho = F F^dagger, the square roots of the spectrum of
    // rho (sy x sy) rho* (sy x sy) are the singular values of F^T (sy x sy) F.
    static const Eigen::Matrix4cd yy = spin_flip();
    const Eigen::Matrix4cd       &f  = density.factor();
    const Eigen::Matrix4cd        m  = f.transpose() * yy * f;
    const Eigen::JacobiSVD<Eigen::Matrix4cd> svd(m);
    const Eigen::Vector4d &lambda = svd.singularValues(); // descending
    const double           c      = lambda[0] - lambda[1] - lambda[2] - lambda[3];
    return std::clamp(c, 0.0, 1.0);
}

double binary_entropy(double x) {
    if(x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double eof_from_concurrence(double c) {
    c = std::clamp(c, 0.0, 1.0);
    return binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));
}

double eof(const TwoQubitDensity &rho) { return eof_from_concurrence(concurrence(rho)); }

double fidelity(const PureState &reference, const PureState &state) {
    if(!(*reference.basis() == *state.basis())) throw ParameterError("fidelity: basis mismatch");
    return std::clamp(std::norm(reference.amplitudes().dot(state.amplitudes())), 0.0, 1.0);
}

} // namespace solitonchain

#include "solitonchain/dynamics.hpp"

#include "solitonchain/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace solitonchain {

namespace {

constexpr double norm_tolerance   = 1e-10;
constexpr double branch_cutoff    = 1e-12;
constexpr double capacity_cutoff2 = 1e-24;

void check_same_basis(const BasisPtr &a, const BasisPtr &b, const char *what) {
    if(!a || !b || !(*a == *b)) throw ParameterError(std::string(what) + ": basis mismatch");
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve_block(const Eigen::MatrixXd &m, const std::string &context) {
    if(!m.allFinite()) throw NumericalError(context + ": matrix has non-finite entries");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if(solver.info() != Eigen::Success)
        throw NumericalError(context + ": eigensolver did not converge (dim=" + std::to_string(m.rows()) +
                             ", max|h|=" + std::to_string(m.cwiseAbs().maxCoeff()) + ")");
    return solver;
}

// V * c for real V and complex c without materializing a complex copy of V.
Eigen::VectorXcd real_times_complex(const Eigen::MatrixXd &v, const Eigen::VectorXcd &c) {
    Eigen::VectorXcd out(v.rows());
    out.real() = v * c.real();
    out.imag() = v * c.imag();
    return out;
}

Eigen::VectorXcd to_modal(const Eigen::MatrixXd &v, const Eigen::VectorXcd &psi) {
    Eigen::VectorXcd out(v.cols());
    out.real() = v.transpose() * psi.real();
    out.imag() = v.transpose() * psi.imag();
    return out;
}

Eigen::VectorXcd from_modal(const EigenDecomposition &eig, const Eigen::VectorXcd &modal, double t) {
    Eigen::VectorXcd phased(modal.size());
    for(Eigen::Index i = 0; i < modal.size(); ++i) phased[i] = std::polar(1.0, -eig.eigenvalues[i] * t) * modal[i];
    return real_times_complex(eig.eigenvectors, phased);
}

void check_symmetric(const Eigen::MatrixXd &m) {
    if(m.rows() != m.cols()) throw ParameterError("diagonalize: matrix is not square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw ParameterError("diagonalize: matrix is not symmetric");
}

} // namespace

EigenDecomposition diagonalize(const Eigen::MatrixXd &symmetric) {
    check_symmetric(symmetric);
    auto solver = solve_block(symmetric, "diagonalize");
    return {nullptr, solver.eigenvalues(), solver.eigenvectors()};
}

EigenDecomposition diagonalize(const HamiltonianMatrix &h) {
    if(!h.basis) throw ParameterError("diagonalize: Hamiltonian without basis");
    const auto &basis = *h.basis;
    const auto  dim   = static_cast<Eigen::Index>(basis.size());
    if(h.matrix.rows() != dim || h.matrix.cols() != dim) throw ParameterError("diagonalize: matrix size does not match basis");
    check_symmetric(h.matrix);

    // Fall back to one dense solve if someone handed us couplings between blocks.
    for(std::size_t k = 0; k <= basis.max_excitations(); ++k) {
        auto [b, e] = basis.block(k);
        const auto lo = static_cast<Eigen::Index>(b), n = static_cast<Eigen::Index>(e - b);
        const double outside = h.matrix.middleRows(lo, n).cwiseAbs().sum() - h.matrix.block(lo, lo, n, n).cwiseAbs().sum();
        if(outside != 0.0) {
            auto full  = diagonalize(h.matrix);
            full.basis = h.basis;
            return full;
        }
    }

    std::vector<double> values;
    Eigen::MatrixXd     vectors = Eigen::MatrixXd::Zero(dim, dim);
    values.reserve(basis.size());
    Eigen::Index col = 0;
    for(std::size_t k = 0; k <= basis.max_excitations(); ++k) {
        auto [b, e] = basis.block(k);
        const auto lo = static_cast<Eigen::Index>(b), n = static_cast<Eigen::Index>(e - b);
        auto solver = solve_block(h.matrix.block(lo, lo, n, n), "diagonalize block " + std::to_string(k));
        for(Eigen::Index i = 0; i < n; ++i) {
            values.push_back(solver.eigenvalues()[i]);
            vectors.block(lo, col, n, 1) = solver.eigenvectors().col(i);
            ++col;
        }
    }

    std::vector<Eigen::Index> order(values.size());
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return values[static_cast<std::size_t>(a)] < values[static_cast<std::size_t>(b)];
    });

    EigenDecomposition out{h.basis, Eigen::VectorXd(dim), Eigen::MatrixXd(dim, dim)};
    for(Eigen::Index i = 0; i < dim; ++i) {
        out.eigenvalues[i]      = values[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
        out.eigenvectors.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
    }
    return out;
}

PureState::PureState(BasisPtr basis, Eigen::VectorXcd amplitudes) : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
    if(!basis_) throw ParameterError("PureState: null basis");
    if(amplitudes_.size() != static_cast<Eigen::Index>(basis_->size())) throw ParameterError("PureState: dimension does not match basis");
    const double norm = amplitudes_.norm();
    if(!std::isfinite(norm)) throw NumericalError("PureState: non-finite amplitudes");
    if(std::abs(norm - 1.0) > norm_tolerance) throw ParameterError("PureState: norm " + std::to_string(norm) + " is not 1");
}

PureState PureState::normalized(BasisPtr basis, Eigen::VectorXcd amplitudes) {
    const double norm = amplitudes.norm();
    if(!(norm > 0.0) || !std::isfinite(norm)) throw ParameterError("PureState: cannot normalize a zero or non-finite vector");
    amplitudes /= norm;
    return PureState(std::move(basis), std::move(amplitudes));
}

double PureState::block_weight(std::size_t k) const {
    auto [b, e] = basis_->block(k);
    return amplitudes_.segment(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(e - b)).squaredNorm();
}

BranchEnsemble::BranchEnsemble(std::vector<Branch> branches) : branches_(std::move(branches)) {
    if(branches_.empty()) throw ParameterError("BranchEnsemble: no branches");
    double total = 0.0;
    for(const auto &b : branches_) {
        if(!(b.weight > 0.0)) throw ParameterError("BranchEnsemble: weights must be positive");
        check_same_basis(b.state.basis(), branches_.front().state.basis(), "BranchEnsemble");
        total += b.weight;
    }
    if(std::abs(total - 1.0) > norm_tolerance) throw ParameterError("BranchEnsemble: weights sum to " + std::to_string(total));
}

BranchEnsemble::BranchEnsemble(PureState state) : branches_{Branch{1.0, std::move(state)}} {}

PureState prepare_initial(const InitialStateSpec &spec, const BasisPtr &basis) {
    if(!basis) throw ParameterError("prepare_initial: null basis");
    if(spec.sites.size() > 2) throw ParameterError("prepare_initial: at most two injection sites");
    for(auto s : spec.sites)
        if(s >= basis->n_sites()) throw ParameterError("prepare_initial: site " + std::to_string(s) + " out of range");
    if(spec.sites.size() == 2 && spec.sites[0] == spec.sites[1]) throw ParameterError("prepare_initial: injection sites must differ");

    // (mask, amplitude) pairs of the product state; vacuum on every other site.
    std::vector<std::pair<std::uint64_t, cplx>> terms;
    if(spec.sites.empty()) {
        terms = {{0, 1.0}};
    } else if(spec.sites.size() == 1) {
        const std::uint64_t a = std::uint64_t{1} << spec.sites[0];
        terms = {{0, spec.alpha}, {a, spec.beta}};
    } else {
        const std::uint64_t a = std::uint64_t{1} << spec.sites[0], c = std::uint64_t{1} << spec.sites[1];
        terms = {{0, 0.5 * spec.alpha}, {a, 0.5 * spec.beta}, {c, 0.5 * spec.gamma}, {a | c, 0.5 * spec.kappa}};
    }

    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
    for(auto [mask, amp] : terms) {
        if(amp == cplx{0.0}) continue;
        auto idx = basis->find(mask);
        if(!idx) throw CapacityError("prepare_initial: state exceeds the basis excitation cap");
        amps[static_cast<Eigen::Index>(*idx)] += amp;
    }
    return PureState::normalized(basis, std::move(amps));
}

PureState evolve(const PureState &state, const EigenDecomposition &eig, double t) {
    check_same_basis(state.basis(), eig.basis, "evolve");
    return PureState(state.basis(), from_modal(eig, to_modal(eig.eigenvectors, state.amplitudes()), t));
}

BranchEnsemble evolve(const BranchEnsemble &ensemble, const EigenDecomposition &eig, double t) {
    std::vector<Branch> out;
    out.reserve(ensemble.size());
    for(const auto &b : ensemble.branches()) out.push_back({b.weight, evolve(b.state, eig, t)});
    return BranchEnsemble(std::move(out));
}

BranchEnsemble inject_plus(const PureState &state, std::size_t site) {
    const auto &basis = *state.basis();
    if(site >= basis.n_sites()) throw ParameterError("inject_plus: site " + std::to_string(site) + " out of range");
    const std::uint64_t bit       = std::uint64_t{1} << site;
    const double        inv_sqrt2 = 1.0 / std::sqrt(2.0);

    std::vector<Branch> branches;
    for(std::uint64_t outcome : {std::uint64_t{0}, bit}) {
        double weight = 0.0;
        for(std::size_t i = 0; i < basis.size(); ++i)
            if((basis.state(i) & bit) == outcome) weight += std::norm(state[i]);
        if(weight < branch_cutoff) continue;

        const double     scale = 1.0 / std::sqrt(weight);
        Eigen::VectorXcd amps  = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
        for(std::size_t i = 0; i < basis.size(); ++i) {
            const std::uint64_t mask = basis.state(i);
            if((mask & bit) != outcome) continue;
            const cplx a = state[i] * scale;
            if(std::norm(a) == 0.0) continue;
            const auto lo = basis.find(mask & ~bit), hi = basis.find(mask | bit);
            if(!lo || !hi) {
                if(std::norm(a) > capacity_cutoff2) throw CapacityError("inject_plus: branch exceeds the basis excitation cap");
                continue;
            }
            amps[static_cast<Eigen::Index>(*lo)] += a * inv_sqrt2;
            amps[static_cast<Eigen::Index>(*hi)] += a * inv_sqrt2;
        }
        branches.push_back({weight, PureState::normalized(state.basis(), std::move(amps))});
    }
    // Renormalize weights so dropped slivers do not break the sum rule.
    double total = 0.0;
    for(const auto &b : branches) total += b.weight;
    for(auto &b : branches) b.weight /= total;
    return BranchEnsemble(std::move(branches));
}

BranchEnsemble inject_plus(const BranchEnsemble &ensemble, std::size_t site) {
    std::vector<Branch> out;
    for(const auto &b : ensemble.branches())
        for(auto &sub : inject_plus(b.state, site).branches()) out.push_back({b.weight * sub.weight, sub.state});
    return BranchEnsemble(std::move(out));
}

Trajectory::Trajectory(PureState start, EigenPtr eig) : start_(std::move(start)), eig_(std::move(eig)) {
    if(!eig_) throw ParameterError("Trajectory: null eigensystem");
    check_same_basis(start_.basis(), eig_->basis, "Trajectory");
    modal_ = to_modal(eig_->eigenvectors, start_.amplitudes());
}

PureState Trajectory::at(double t) const { return PureState(start_.basis(), from_modal(*eig_, modal_, t)); }

Trajectory requench(const PureState &state, EigenPtr new_eig) { return Trajectory(state, std::move(new_eig)); }

BranchEnsemble EnsembleTrajectory::at(double t) const {
    std::vector<Branch> out;
    out.reserve(branches.size());
    for(std::size_t i = 0; i < branches.size(); ++i) out.push_back({weights[i], branches[i].at(t)});
    return BranchEnsemble(std::move(out));
}

EnsembleTrajectory requench(const BranchEnsemble &ensemble, const EigenPtr &new_eig) {
    EnsembleTrajectory out;
    for(const auto &b : ensemble.branches()) {
        out.weights.push_back(b.weight);
        out.branches.emplace_back(b.state, new_eig);
    }
    return out;
}

} // namespace solitonchain

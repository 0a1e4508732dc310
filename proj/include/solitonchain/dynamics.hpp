#pragma once

#include "solitonchain/chain.hpp"

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <vector>

namespace solitonchain {

using cplx = std::complex<double>;

/// Ascending eigenvalues with orthonormal eigenvectors in the columns.
/// Eigenvectors built from a HamiltonianMatrix are supported on a single
/// excitation block.
struct EigenDecomposition {
    BasisPtr        basis; // null for raw matrices
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
};

using EigenPtr = std::shared_ptr<const EigenDecomposition>;

/// Diagonalizes each excitation block separately and merges the spectra.
EigenDecomposition diagonalize(const HamiltonianMatrix &h);

/// Dense symmetric eigenproblem on a raw matrix.
EigenDecomposition diagonalize(const Eigen::MatrixXd &symmetric);

/// Normalized amplitudes over a basis.
class PureState {
  public:
    /// Throws ParameterError when the dimension does not match or the norm is
    /// not 1 within 1e-10.
    PureState(BasisPtr basis, Eigen::VectorXcd amplitudes);

    /// Rescales to unit norm instead of rejecting.
    static PureState normalized(BasisPtr basis, Eigen::VectorXcd amplitudes);

    [[nodiscard]] const BasisPtr &basis() const { return basis_; }
    [[nodiscard]] const Eigen::VectorXcd &amplitudes() const { return amplitudes_; }
    [[nodiscard]] cplx operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

    /// Squared norm carried by the block with `k` excitations.
    [[nodiscard]] double block_weight(std::size_t k) const;

  private:
    PureState() = default;
    BasisPtr         basis_;
    Eigen::VectorXcd amplitudes_;
};

struct Branch {
    double    weight;
    PureState state;
};

/// Weighted pure states; weights positive and summing to 1.
class BranchEnsemble {
  public:
    explicit BranchEnsemble(std::vector<Branch> branches);
    explicit BranchEnsemble(PureState state);

    [[nodiscard]] const std::vector<Branch> &branches() const { return branches_; }
    [[nodiscard]] std::size_t size() const { return branches_.size(); }

  private:
    std::vector<Branch> branches_;
};

/// Product state (1/2)(alpha|00> + beta|10> + gamma|01> + kappa|11>) on the
/// two injection sites, vacuum elsewhere, then normalized. With a single
/// site the amplitudes used are (alpha, beta).
struct InitialStateSpec {
    std::vector<std::size_t> sites;
    cplx                     alpha{1.0}, beta{1.0}, gamma{1.0}, kappa{1.0};
};

PureState prepare_initial(const InitialStateSpec &spec, const BasisPtr &basis);

/// psi(t) = V exp(-i Lambda t) V^T psi(0).
PureState evolve(const PureState &state, const EigenDecomposition &eig, double t);

BranchEnsemble evolve(const BranchEnsemble &ensemble, const EigenDecomposition &eig, double t);

/// Reset channel: measure the site, discard the outcome and re-prepare it in
/// |+>. One branch per outcome with nonzero population (cutoff 1e-12).
BranchEnsemble inject_plus(const PureState &state, std::size_t site);

BranchEnsemble inject_plus(const BranchEnsemble &ensemble, std::size_t site);

/// A state expanded in an eigenbasis, for repeated evolution. Time is
/// measured from the moment the trajectory starts.
class Trajectory {
  public:
    Trajectory(PureState start, EigenPtr eig);

    [[nodiscard]] PureState at(double t) const;
    [[nodiscard]] const PureState &start() const { return start_; }
    [[nodiscard]] const EigenPtr &eigensystem() const { return eig_; }

  private:
    PureState        start_;
    EigenPtr         eig_;
    Eigen::VectorXcd modal_;
};

/// Sudden quench: the state is carried over unchanged and evolves under the
/// new Hamiltonian from here on.
Trajectory requench(const PureState &state, EigenPtr new_eig);

struct EnsembleTrajectory {
    std::vector<double>     weights;
    std::vector<Trajectory> branches;

    [[nodiscard]] BranchEnsemble at(double t) const;
};

EnsembleTrajectory requench(const BranchEnsemble &ensemble, const EigenPtr &new_eig);

} // namespace solitonchain

#pragma once

#include "solitonchain/dynamics.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace solitonchain {

/// Two-qubit density matrix over {|00>, |01>, |10>, |11>}, the first qubit
/// being the lower site index. Construction checks Hermiticity, unit trace
/// and positivity to 1e-10 and throws DomainError otherwise.
class TwoQubitDensity {
  public:
    using Factor = Eigen::Matrix<cplx, 4, Eigen::Dynamic>;

    explicit TwoQubitDensity(const Eigen::Matrix4cd &rho);
    /// rho = W W^dagger. Keeping the factor avoids square roots of tiny
    /// eigenvalues later on, so rank-deficient states stay accurate.
    static TwoQubitDensity from_factor(const Factor &w);

    [[nodiscard]] const Eigen::Matrix4cd &matrix() const { return rho_; }
    /// Some F with rho = F F^dagger.
    [[nodiscard]] const Eigen::Matrix4cd &factor() const { return factor_; }

  private:
    TwoQubitDensity() = default;
    void check() const;

    Eigen::Matrix4cd rho_;
    Eigen::Matrix4cd factor_;
};

/// Basis indices grouped by the occupation of every site except a pair.
/// Each group lists the basis index of local configurations 00, 01, 10, 11
/// (-1 when the configuration is outside the truncated basis).
class SitePairIndex {
  public:
    SitePairIndex(const Basis &basis, std::size_t site1, std::size_t site2);

    [[nodiscard]] Eigen::Matrix4cd accumulate(const Eigen::VectorXcd &amplitudes) const;
    /// One column per group; accumulate() is W W^dagger.
    [[nodiscard]] TwoQubitDensity::Factor factor(const Eigen::VectorXcd &amplitudes) const;
    [[nodiscard]] std::size_t first() const { return first_; }
    [[nodiscard]] std::size_t second() const { return second_; }
    [[nodiscard]] bool matches(const Basis &b) const { return b.n_sites() == n_sites_ && b.max_excitations() == max_excitations_; }

  private:
    std::size_t                           n_sites_, max_excitations_;
    std::size_t                           first_, second_;
    std::vector<std::array<long long, 4>> groups_;
};

TwoQubitDensity reduce_to_two_sites(const PureState &state, std::size_t site1, std::size_t site2);
TwoQubitDensity reduce_to_two_sites(const BranchEnsemble &ensemble, std::size_t site1, std::size_t site2);
TwoQubitDensity reduce_to_two_sites(const PureState &state, const SitePairIndex &pair);
TwoQubitDensity reduce_to_two_sites(const BranchEnsemble &ensemble, const SitePairIndex &pair);

/// Wootters concurrence in [0, 1].
double concurrence(const TwoQubitDensity &rho);

/// h(x) = -x log2 x - (1-x) log2 (1-x), with h(0) = h(1) = 0.
double binary_entropy(double x);

double eof_from_concurrence(double c);

/// Entanglement of formation in [0, 1].
double eof(const TwoQubitDensity &rho);

/// |<reference|state>|^2.
double fidelity(const PureState &reference, const PureState &state);

} // namespace solitonchain

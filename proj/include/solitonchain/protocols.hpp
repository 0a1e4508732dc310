#pragma once

#include "solitonchain/chain.hpp"
#include "solitonchain/dynamics.hpp"
#include "solitonchain/entanglement.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace solitonchain {

/// Sampled observables of one protocol run. fidelity_reference is empty when
/// the protocol has no reference state.
struct ProtocolTrace {
    std::vector<double> t;
    std::vector<double> fidelity_initial;
    std::vector<double> fidelity_reference;
    std::vector<double> eof;

    std::size_t                  pair_first  = 0;
    std::size_t                  pair_second = 0;
    std::optional<std::size_t>   quench_index; // first sample after a quench
    ChainSpec                    spec;
    double                       mirroring_time = 0.0;
    std::optional<std::uint64_t> seed;
};

/// {0, dt, 2dt, ...} up to and including t_max (relative slack 1e-12).
std::vector<double> time_grid(double t_max, double dt);

/// Smallest positive coupling of a clean chain.
double weak_coupling_of(const ChainSpec &clean);

/// Mirroring time of a clean two-valued chain. Uses the analytic trimer value
/// for the 7-site and storage layouts; for longer ABC chains, where no closed
/// form is available, pi over the smallest positive one-excitation energy.
double nominal_mirroring_time(const ChainSpec &clean);

/// Two |+> states on sites A and C of `spec`, evolved under its Hamiltonian.
class EntanglingRun {
  public:
    explicit EntanglingRun(const ChainSpec &spec);

    [[nodiscard]] PureState state_at(double t) const { return trajectory_.at(t); }
    [[nodiscard]] double    eof_at(double t) const;
    [[nodiscard]] double    fidelity_at(double t) const;
    [[nodiscard]] const PureState &initial() const { return trajectory_.start(); }
    [[nodiscard]] const EigenPtr  &eigensystem() const { return trajectory_.eigensystem(); }
    [[nodiscard]] const SitePairIndex &pair() const { return pair_; }

  private:
    BasisPtr      basis_;
    SitePairIndex pair_;
    Trajectory    trajectory_;
};

ProtocolTrace run_entangling(const ChainSpec &spec, double t_max, double dt, double mirroring_time);

enum class DelayedEnd { c, a };

struct AsyncPoint {
    double delay; // fraction of the mirroring time
    double eof;   // EoF(A, C) at the mirroring time
};

/// One end is injected at t = 0, the other at delay * t_M through the reset
/// channel; EoF(A, C) is read at t_M after the first injection.
std::vector<AsyncPoint> run_async_sweep(const ChainSpec &spec, const std::vector<double> &delays, double mirroring_time,
                                        DelayedEnd delayed = DelayedEnd::c);

/// Entangle until t_M, decouple site B, then follow the quenched state for
/// t_max_after. Samples before the quench use the grid {0, dt, ...} < t_M;
/// afterwards t_M + {0, dt, ...}. fidelity_reference is against the state at
/// the quench; eof is between A and C, the centres of the two halves.
ProtocolTrace run_storage(const ChainSpec &spec11, double t_max_after, double dt, double mirroring_time);

struct ModeReport {
    std::vector<double>              energies;    // ascending
    std::vector<std::vector<double>> occupations; // [mode][site]
    std::size_t                      zero_mode = 0;
    std::size_t                      centre    = 0;
};

/// One-excitation eigenmodes of a 5-site [big, weak, weak, big] chain.
ModeReport localized_mode_report(const ChainSpec &half_spec);

} // namespace solitonchain

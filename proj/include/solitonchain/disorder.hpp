#pragma once

#include "solitonchain/chain.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace solitonchain {

enum class DisorderKind { diagonal, offdiagonal, both };

std::string_view to_string(DisorderKind kind);

/// Accepts "diagonal", "offdiagonal", "both"; throws ParameterError otherwise.
DisorderKind parse_disorder_kind(std::string_view text);

struct DisorderConfig {
    DisorderKind        kind = DisorderKind::offdiagonal;
    std::vector<double> levels;             // values of E
    std::size_t         n_realizations = 200;
    double              window         = 500.0;
    double              dt             = 0.25;
    std::uint64_t       base_seed      = 20170401;
    unsigned            threads        = 1; // 0 = hardware concurrency

    // Derived from the clean chain when absent.
    std::optional<double> weak_coupling;
    std::optional<double> mirroring_time;

    void validate() const;
};

struct LevelStats {
    double      level   = 0.0;
    std::size_t count   = 0; // successful realizations
    std::size_t aborted = 0;
    double      mean    = 0.0;
    double      std     = 0.0; // sample standard deviation
    double      sem     = 0.0;
};

struct EnsembleStats {
    int                              scenario = 1;
    DisorderKind                     kind     = DisorderKind::offdiagonal;
    std::vector<LevelStats>          levels;
    std::vector<std::vector<double>> samples; // [level][realization], NaN when aborted
};

/// Mean, sample standard deviation and standard error of the finite entries,
/// summed in index order with Neumaier compensation.
LevelStats summarize(double level, const std::vector<double> &samples);

/// Disordered copy of `clean` for realization `realization`. Diagonal and
/// off-diagonal draws come from separate substreams of `base_seed`.
ChainSpec disordered_chain(const ChainSpec &clean, DisorderKind kind, double scale_E, double weak_coupling,
                           std::uint64_t base_seed, std::uint64_t realization);

/// EoF(A, C) at the clean-chain mirroring time, per level.
EnsembleStats run_scenario1(const ChainSpec &clean, const DisorderConfig &cfg);

/// Maximum EoF(A, C) over t in {0, dt, ..., window} plus the clean-chain
/// mirroring time when it lies inside the window.
EnsembleStats run_scenario2(const ChainSpec &clean, const DisorderConfig &cfg);

/// Both scenarios from one pass over the realizations.
std::pair<EnsembleStats, EnsembleStats> run_scenarios(const ChainSpec &clean, const DisorderConfig &cfg);

struct SpectrumStats {
    std::vector<double>      mean; // one entry per 1- and 2-excitation eigenvalue, ascending
    std::vector<double>      std;
    std::size_t              zero_count = 0; // indices with |mean| and std below 1e-10
    std::vector<std::size_t> realization_zero_counts;
    std::vector<double>      realization_asymmetry; // max |e_i + e_{n-1-i}| per realization
};

SpectrumStats spectrum_statistics(const ChainSpec &clean, DisorderKind kind, double scale_E, std::size_t n_realizations,
                                  std::uint64_t base_seed, unsigned threads = 1,
                                  std::optional<double> weak_coupling = std::nullopt);

/// Worker count for `requested`, where 0 means hardware concurrency.
unsigned resolve_threads(unsigned requested);

} // namespace solitonchain

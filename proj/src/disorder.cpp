#include "solitonchain/disorder.hpp"

#include "solitonchain/error.hpp"
#include "solitonchain/protocols.hpp"
#include "solitonchain/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

namespace solitonchain {

namespace {

constexpr double zero_energy_tolerance = 1e-10;
constexpr double max_abort_fraction    = 0.01;

// Runs body(i) for i in [0, n) on up to `threads` workers. Results must be
// written to slot i only, so the outcome is independent of scheduling.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &body) {
    const unsigned workers = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
    if(workers <= 1) {
        for(std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr       failure;
    std::mutex               failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for(unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for(std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch(...) {
                    std::lock_guard lock(failure_mutex);
                    if(!failure) failure = std::current_exception();
                }
            }
        });
    }
    for(auto &t : pool) t.join();
    if(failure) std::rethrow_exception(failure);
}

struct Neumaier {
    double sum = 0.0, c = 0.0;
    void   add(double x) {
        const double t = sum + x;
        c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    [[nodiscard]] double value() const { return sum + c; }
};

struct Derived {
    double weak;
    double t_m;
};

Derived derive(const ChainSpec &clean, const DisorderConfig &cfg) {
    return {cfg.weak_coupling ? *cfg.weak_coupling : weak_coupling_of(clean),
            cfg.mirroring_time ? *cfg.mirroring_time : nominal_mirroring_time(clean)};
}

void check_aborts(const LevelStats &s, std::size_t n) {
    if(static_cast<double>(s.aborted) > max_abort_fraction * static_cast<double>(n))
        throw NumericalError("disorder level E=" + std::to_string(s.level) + ": " + std::to_string(s.aborted) + " of " +
                             std::to_string(n) + " realizations failed");
}

} // namespace

std::string_view to_string(DisorderKind kind) {
    switch(kind) {
        case DisorderKind::diagonal: return "diagonal";
        case DisorderKind::offdiagonal: return "offdiagonal";
        case DisorderKind::both: return "both";
    }
    return "unknown";
}

DisorderKind parse_disorder_kind(std::string_view text) {
    if(text == "diagonal") return DisorderKind::diagonal;
    if(text == "offdiagonal") return DisorderKind::offdiagonal;
    if(text == "both") return DisorderKind::both;
    throw ParameterError("unknown disorder kind '" + std::string(text) + "'");
}

void DisorderConfig::validate() const {
    for(double e : levels)
        if(!std::isfinite(e) || e < 0.0) throw ParameterError("disorder levels must be >= 0");
    if(n_realizations < 1) throw ParameterError("n_realizations must be >= 1");
    if(!std::isfinite(dt) || !(dt > 0.0)) throw ParameterError("dt must be > 0");
    if(!std::isfinite(window) || !(window > 0.0)) throw ParameterError("window must be > 0");
    if(weak_coupling && !(*weak_coupling > 0.0)) throw ParameterError("weak_coupling must be > 0");
    if(mirroring_time && !(*mirroring_time > 0.0)) throw ParameterError("mirroring_time must be > 0");
}

unsigned resolve_threads(unsigned requested) {
    if(requested > 0) return requested;
    return std::max(1U, std::thread::hardware_concurrency());
}

LevelStats summarize(double level, const std::vector<double> &samples) {
    LevelStats s;
    s.level = level;
    Neumaier sum;
    for(double x : samples) {
        if(std::isfinite(x)) {
            sum.add(x);
            ++s.count;
        } else {
            ++s.aborted;
        }
    }
    if(s.count == 0) {
        s.mean = s.std = s.sem = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    s.mean = sum.value() / static_cast<double>(s.count);
    Neumaier dev;
    for(double x : samples)
        if(std::isfinite(x)) dev.add((x - s.mean) * (x - s.mean));
    s.std = s.count > 1 ? std::sqrt(dev.value() / static_cast<double>(s.count - 1)) : 0.0;
    s.sem = s.std / std::sqrt(static_cast<double>(s.count));
    return s;
}

ChainSpec disordered_chain(const ChainSpec &clean, DisorderKind kind, double scale_E, double weak_coupling,
                           std::uint64_t base_seed, std::uint64_t realization) {
    ChainSpec out = clean;
    if(kind == DisorderKind::diagonal || kind == DisorderKind::both) {
        Xoshiro256 rng(stream_seed(base_seed, realization, StreamTag::diagonal));
        out = apply_diagonal_disorder(out, scale_E, weak_coupling, rng);
    }
    if(kind == DisorderKind::offdiagonal || kind == DisorderKind::both) {
        Xoshiro256 rng(stream_seed(base_seed, realization, StreamTag::offdiagonal));
        out = apply_offdiagonal_disorder(out, scale_E, weak_coupling, rng);
    }
    return out;
}

namespace {

std::pair<EnsembleStats, EnsembleStats> run_impl(const ChainSpec &clean, const DisorderConfig &cfg, bool with_window) {
    cfg.validate();
    clean.validate();
    const Derived d = derive(clean, cfg);

    std::vector<double> grid;
    if(with_window) {
        grid = time_grid(cfg.window, cfg.dt);
        if(d.t_m <= cfg.window) grid.push_back(d.t_m);
    }

    const std::size_t n_levels = cfg.levels.size(), n = cfg.n_realizations;
    const double      nan      = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> at_tm(n_levels * n, nan), best(n_levels * n, nan);

    parallel_for(n_levels * n, cfg.threads, [&](std::size_t item) {
        const std::size_t level = item / n, r = item % n;
        try {
            const EntanglingRun run(disordered_chain(clean, cfg.kind, cfg.levels[level], d.weak, cfg.base_seed, r));
            at_tm[item] = run.eof_at(d.t_m);
            if(with_window) {
                double m = 0.0;
                for(double t : grid) m = std::max(m, run.eof_at(t));
                best[item] = m;
            }
        } catch(const NumericalError &) {
        } catch(const DomainError &) {
        }
    });

    EnsembleStats s1, s2;
    s1.scenario = 1;
    s2.scenario = 2;
    s1.kind = s2.kind = cfg.kind;
    for(std::size_t level = 0; level < n_levels; ++level) {
        const auto first = static_cast<std::ptrdiff_t>(level * n), last = static_cast<std::ptrdiff_t>((level + 1) * n);
        s1.samples.emplace_back(at_tm.begin() + first, at_tm.begin() + last);
        s1.levels.push_back(summarize(cfg.levels[level], s1.samples.back()));
        check_aborts(s1.levels.back(), n);
        if(with_window) {
            s2.samples.emplace_back(best.begin() + first, best.begin() + last);
            s2.levels.push_back(summarize(cfg.levels[level], s2.samples.back()));
            check_aborts(s2.levels.back(), n);
        }
    }
    return {std::move(s1), std::move(s2)};
}

} // namespace

EnsembleStats run_scenario1(const ChainSpec &clean, const DisorderConfig &cfg) { return run_impl(clean, cfg, false).first; }

EnsembleStats run_scenario2(const ChainSpec &clean, const DisorderConfig &cfg) { return run_impl(clean, cfg, true).second; }

std::pair<EnsembleStats, EnsembleStats> run_scenarios(const ChainSpec &clean, const DisorderConfig &cfg) {
    return run_impl(clean, cfg, true);
}

SpectrumStats spectrum_statistics(const ChainSpec &clean, DisorderKind kind, double scale_E, std::size_t n_realizations,
                                  std::uint64_t base_seed, unsigned threads, std::optional<double> weak_coupling) {
    clean.validate();
    if(n_realizations < 1) throw ParameterError("n_realizations must be >= 1");
    const double weak  = weak_coupling ? *weak_coupling : weak_coupling_of(clean);
    auto         basis = build_basis(clean.n_sites, 2);
    const std::size_t width = basis->size() - 1; // everything but the vacuum

    std::vector<std::vector<double>> spectra(n_realizations);
    parallel_for(n_realizations, threads, [&](std::size_t r) {
        const auto eig = diagonalize(build_hamiltonian(disordered_chain(clean, kind, scale_E, weak, base_seed, r), basis));
        std::vector<double> values;
        for(Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
            if(std::abs(eig.eigenvectors(0, i)) < 0.5) values.push_back(eig.eigenvalues[i]);
        std::sort(values.begin(), values.end());
        spectra[r] = std::move(values);
    });

    SpectrumStats out;
    out.mean.assign(width, 0.0);
    out.std.assign(width, 0.0);
    for(std::size_t i = 0; i < width; ++i) {
        std::vector<double> column(n_realizations);
        for(std::size_t r = 0; r < n_realizations; ++r) column[r] = spectra[r][i];
        const auto s = summarize(0.0, column);
        out.mean[i]  = s.mean;
        out.std[i]   = s.std;
        if(std::abs(s.mean) < zero_energy_tolerance && s.std < zero_energy_tolerance) ++out.zero_count;
    }
    for(const auto &values : spectra) {
        std::size_t zeros = 0;
        double      asym  = 0.0;
        for(std::size_t i = 0; i < values.size(); ++i) {
            if(std::abs(values[i]) < zero_energy_tolerance) ++zeros;
            asym = std::max(asym, std::abs(values[i] + values[values.size() - 1 - i]));
        }
        out.realization_zero_counts.push_back(zeros);
        out.realization_asymmetry.push_back(asym);
    }
    return out;
}

} // namespace solitonchain

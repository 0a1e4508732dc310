#include "solitonchain/protocols.hpp"

#include "solitonchain/analytic.hpp"
#include "solitonchain/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

namespace solitonchain {

namespace {

void check_step(double t_max, double dt) {
    if(!std::isfinite(dt) || !(dt > 0.0)) throw ParameterError("time step must be > 0");
    if(!std::isfinite(t_max) || t_max < 0.0) throw ParameterError("time span must be >= 0");
}

void check_mirroring_time(double t_m) {
    if(!std::isfinite(t_m) || !(t_m > 0.0)) throw ParameterError("mirroring time must be > 0");
}

double smallest_positive_energy(const ChainSpec &spec) {
    auto basis = build_basis(spec.n_sites, 1);
    auto eig   = diagonalize(build_hamiltonian(spec, basis));
    double best = std::numeric_limits<double>::infinity();
    for(Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
        if(eig.eigenvalues[i] > 1e-12) best = std::min(best, eig.eigenvalues[i]);
    if(!std::isfinite(best)) throw NumericalError("no positive one-excitation energy");
    return best;
}

} // namespace

std::vector<double> time_grid(double t_max, double dt) {
    check_step(t_max, dt);
    const auto          steps = static_cast<std::size_t>(std::floor(t_max / dt * (1.0 + 1e-12)));
    std::vector<double> grid(steps + 1);
    for(std::size_t k = 0; k <= steps; ++k) grid[k] = static_cast<double>(k) * dt;
    return grid;
}

double weak_coupling_of(const ChainSpec &clean) {
    clean.validate();
    double weak = std::numeric_limits<double>::infinity();
    for(double j : clean.couplings)
        if(j > 0.0) weak = std::min(weak, j);
    if(!std::isfinite(weak)) throw ParameterError("chain has no positive coupling");
    return weak;
}

double nominal_mirroring_time(const ChainSpec &clean) {
    clean.validate();
    std::set<double> values(clean.couplings.begin(), clean.couplings.end());
    if(values.size() == 2 && *values.begin() > 0.0) {
        const double weak = *values.begin(), strong = *values.rbegin();
        if(clean == build_abc_chain(0, weak, strong) || clean == build_storage_chain(weak, strong))
            return analytic::mirroring_time(analytic::effective_eta(strong, weak));
    }
    return std::numbers::pi / smallest_positive_energy(clean);
}

EntanglingRun::EntanglingRun(const ChainSpec &spec)
    : basis_(build_basis(spec.n_sites, 2)),
      pair_(*basis_, spec.site_a, spec.site_c),
      trajectory_(prepare_initial({{spec.site_a, spec.site_c}}, basis_),
                  std::make_shared<const EigenDecomposition>(diagonalize(build_hamiltonian(spec, basis_)))) {}

double EntanglingRun::eof_at(double t) const { return eof(reduce_to_two_sites(trajectory_.at(t), pair_)); }

double EntanglingRun::fidelity_at(double t) const { return fidelity(trajectory_.start(), trajectory_.at(t)); }

ProtocolTrace run_entangling(const ChainSpec &spec, double t_max, double dt, double mirroring_time) {
    check_mirroring_time(mirroring_time);
    const auto    grid = time_grid(t_max, dt);
    EntanglingRun run(spec);

    ProtocolTrace trace;
    trace.spec           = spec;
    trace.mirroring_time = mirroring_time;
    trace.pair_first     = run.pair().first();
    trace.pair_second    = run.pair().second();
    for(double t : grid) {
        const PureState psi = run.state_at(t);
        trace.t.push_back(t);
        trace.fidelity_initial.push_back(fidelity(run.initial(), psi));
        trace.eof.push_back(eof(reduce_to_two_sites(psi, run.pair())));
    }
    return trace;
}

std::vector<AsyncPoint> run_async_sweep(const ChainSpec &spec, const std::vector<double> &delays, double mirroring_time,
                                        DelayedEnd delayed) {
    check_mirroring_time(mirroring_time);
    for(double f : delays)
        if(!std::isfinite(f) || f < 0.0 || f > 0.5) throw ParameterError("async delay must be in [0, 0.5], got " + std::to_string(f));

    auto                basis = build_basis(spec.n_sites, 2);
    const auto          eig   = diagonalize(build_hamiltonian(spec, basis));
    const SitePairIndex pair(*basis, spec.site_a, spec.site_c);
    const std::size_t   early = delayed == DelayedEnd::c ? spec.site_a : spec.site_c;
    const std::size_t   late  = delayed == DelayedEnd::c ? spec.site_c : spec.site_a;
    const PureState     first = prepare_initial({{early}}, basis);

    std::vector<AsyncPoint> out;
    for(double f : delays) {
        const double         t_inject = f * mirroring_time;
        const BranchEnsemble injected = inject_plus(evolve(first, eig, t_inject), late);
        const BranchEnsemble final    = evolve(injected, eig, mirroring_time - t_inject);
        out.push_back({f, eof(reduce_to_two_sites(final, pair))});
    }
    return out;
}

ProtocolTrace run_storage(const ChainSpec &spec11, double t_max_after, double dt, double mirroring_time) {
    check_mirroring_time(mirroring_time);
    spec11.validate();
    if(!spec11.site_b) throw ParameterError("run_storage: chain has no middle defect to decouple");
    const auto    pre_grid  = time_grid(mirroring_time, dt);
    const auto    post_grid = time_grid(t_max_after, dt);
    EntanglingRun run(spec11);

    const PureState at_quench = run.state_at(mirroring_time);
    auto            basis     = at_quench.basis();
    auto            quenched  = std::make_shared<const EigenDecomposition>(diagonalize(build_hamiltonian(decouple_site(spec11, *spec11.site_b), basis)));
    const Trajectory after    = requench(at_quench, quenched);

    ProtocolTrace trace;
    trace.spec           = spec11;
    trace.mirroring_time = mirroring_time;
    trace.pair_first     = run.pair().first();
    trace.pair_second    = run.pair().second();
    auto record          = [&](double t, const PureState &psi) {
        trace.t.push_back(t);
        trace.fidelity_initial.push_back(fidelity(run.initial(), psi));
        trace.fidelity_reference.push_back(fidelity(at_quench, psi));
        trace.eof.push_back(eof(reduce_to_two_sites(psi, run.pair())));
    };
    for(double t : pre_grid)
        if(t < mirroring_time) record(t, run.state_at(t));
    trace.quench_index = trace.t.size();
    for(double t : post_grid) record(mirroring_time + t, after.at(t));
    return trace;
}

ModeReport localized_mode_report(const ChainSpec &half_spec) {
    half_spec.validate();
    const auto &j = half_spec.couplings;
    if(half_spec.n_sites != 5 || j[0] != j[3] || j[1] != j[2] || !(std::abs(j[0]) > std::abs(j[1])) || j[1] == 0.0)
        throw ParameterError("localized_mode_report: expected a 5-site [big, weak, weak, big] chain");

    auto basis = build_basis(5, 1);
    auto eig   = diagonalize(build_hamiltonian(half_spec, basis));
    auto [lo, hi] = basis->block(1);

    ModeReport report;
    report.centre   = 2;
    double best_abs = std::numeric_limits<double>::infinity();
    for(Eigen::Index m = 0; m < eig.eigenvalues.size(); ++m) {
        const Eigen::VectorXd v = eig.eigenvectors.col(m);
        if(v.segment(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(hi - lo)).squaredNorm() < 0.5) continue;
        std::vector<double> occ(5);
        for(std::size_t s = 0; s < 5; ++s) {
            const double amp = v[static_cast<Eigen::Index>(*basis->find(std::uint64_t{1} << s))];
            occ[s]           = amp * amp;
        }
        if(std::abs(eig.eigenvalues[m]) < best_abs) {
            best_abs         = std::abs(eig.eigenvalues[m]);
            report.zero_mode = report.energies.size();
        }
        report.energies.push_back(eig.eigenvalues[m]);
        report.occupations.push_back(std::move(occ));
    }
    return report;
}

} // namespace solitonchain

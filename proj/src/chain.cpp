#include "solitonchain/chain.hpp"

#include "solitonchain/error.hpp"
#include "solitonchain/rng.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace solitonchain {

namespace {

void check_dimerization(double delta, double big_delta) {
    if(!std::isfinite(delta) || !std::isfinite(big_delta) || !(delta > 0.0) || !(delta < big_delta))
        throw ParameterError("need 0 < delta < big_delta, got delta=" + std::to_string(delta) +
                             " big_delta=" + std::to_string(big_delta));
}

void check_scale(double scale_E, double weak_coupling) {
    if(!std::isfinite(scale_E) || scale_E < 0.0) throw ParameterError("disorder scale must be >= 0, got " + std::to_string(scale_E));
    if(!std::isfinite(weak_coupling) || !(weak_coupling > 0.0))
        throw ParameterError("weak coupling must be > 0, got " + std::to_string(weak_coupling));
}

} // namespace

void ChainSpec::validate() const {
    if(n_sites == 0) throw ParameterError("chain needs at least one site");
    if(n_sites > 63) throw ParameterError("chain longer than 63 sites is not supported");
    if(couplings.size() != n_sites - 1)
        throw ParameterError("couplings: expected " + std::to_string(n_sites - 1) + " entries, got " + std::to_string(couplings.size()));
    if(onsite.size() != n_sites)
        throw ParameterError("onsite: expected " + std::to_string(n_sites) + " entries, got " + std::to_string(onsite.size()));
    for(double j : couplings)
        if(!std::isfinite(j)) throw ParameterError("couplings: non-finite entry");
    for(double e : onsite)
        if(!std::isfinite(e)) throw ParameterError("onsite: non-finite entry");
    if(site_a >= n_sites || site_c >= n_sites) throw ParameterError("defect site out of range");
    if(site_b) {
        if(!(site_a < *site_b && *site_b < site_c)) throw ParameterError("defect sites must satisfy site_a < site_b < site_c");
    } else if(!(site_a < site_c)) {
        throw ParameterError("defect sites must satisfy site_a < site_c");
    }
}

ChainSpec build_abc_chain(std::size_t extension_m, double delta, double big_delta) {
    check_dimerization(delta, big_delta);
    // Left half from A to B: weak, then (strong, weak) once per dimer.
    std::vector<double> half{delta};
    for(std::size_t d = 0; d <= extension_m; ++d) {
        half.push_back(big_delta);
        half.push_back(delta);
    }
    ChainSpec spec;
    spec.couplings = half;
    spec.couplings.insert(spec.couplings.end(), half.rbegin(), half.rend());
    spec.n_sites = spec.couplings.size() + 1;
    spec.onsite.assign(spec.n_sites, 0.0);
    spec.site_a = 0;
    spec.site_b = half.size();
    spec.site_c = spec.n_sites - 1;
    return spec;
}

ChainSpec build_trimer_chain(double eta) {
    if(!std::isfinite(eta) || !(eta > 0.0)) throw ParameterError("trimer coupling must be > 0");
    ChainSpec spec;
    spec.n_sites   = 3;
    spec.couplings = {eta, eta};
    spec.onsite.assign(3, 0.0);
    spec.site_a = 0;
    spec.site_b = 1;
    spec.site_c = 2;
    return spec;
}

ChainSpec build_storage_chain(double delta, double big_delta) {
    check_dimerization(delta, big_delta);
    ChainSpec spec;
    spec.n_sites   = 11;
    spec.couplings = {big_delta, delta, delta, big_delta, delta, delta, big_delta, delta, delta, big_delta};
    spec.onsite.assign(spec.n_sites, 0.0);
    spec.site_a = 2;
    spec.site_b = 5;
    spec.site_c = 8;
    return spec;
}

ChainSpec decouple_site(const ChainSpec &spec, std::size_t site) {
    spec.validate();
    if(site >= spec.n_sites) throw ParameterError("decouple_site: site " + std::to_string(site) + " out of range");
    ChainSpec out = spec;
    if(site > 0) out.couplings[site - 1] = 0.0;
    if(site + 1 < spec.n_sites) out.couplings[site] = 0.0;
    return out;
}

ChainSpec sub_chain(const ChainSpec &spec, std::size_t first, std::size_t last) {
    spec.validate();
    if(first > last || last >= spec.n_sites) throw ParameterError("sub_chain: bad site range");
    ChainSpec out;
    out.n_sites = last - first + 1;
    out.couplings.assign(spec.couplings.begin() + static_cast<std::ptrdiff_t>(first),
                         spec.couplings.begin() + static_cast<std::ptrdiff_t>(last));
    out.onsite.assign(spec.onsite.begin() + static_cast<std::ptrdiff_t>(first),
                      spec.onsite.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    out.site_a = 0;
    out.site_c = out.n_sites - 1;
    if(out.n_sites >= 3) out.site_b = out.n_sites / 2;
    return out;
}

ChainSpec mirror(const ChainSpec &spec) {
    spec.validate();
    ChainSpec out = spec;
    const std::size_t last = spec.n_sites - 1;
    out.couplings.assign(spec.couplings.rbegin(), spec.couplings.rend());
    out.onsite.assign(spec.onsite.rbegin(), spec.onsite.rend());
    out.site_a = last - spec.site_c;
    out.site_c = last - spec.site_a;
    if(spec.site_b) out.site_b = last - *spec.site_b;
    return out;
}

ChainSpec apply_diagonal_disorder(const ChainSpec &spec, double scale_E, double weak_coupling, Xoshiro256 &rng) {
    spec.validate();
    check_scale(scale_E, weak_coupling);
    ChainSpec out = spec;
    for(std::size_t i = 0; i < out.n_sites; ++i) out.onsite[i] = scale_E * rng.uniform_centered() * weak_coupling;
    return out;
}

ChainSpec apply_offdiagonal_disorder(const ChainSpec &spec, double scale_E, double weak_coupling, Xoshiro256 &rng) {
    spec.validate();
    check_scale(scale_E, weak_coupling);
    ChainSpec out = spec;
    for(auto &j : out.couplings) j += scale_E * rng.uniform_centered() * weak_coupling;
    return out;
}

Basis::Basis(std::size_t n_sites, std::size_t max_excitations) : n_sites_(n_sites), max_excitations_(max_excitations) {
    if(n_sites == 0 || n_sites > 63) throw ParameterError("basis: n_sites must be in [1, 63]");
    if(max_excitations > n_sites) throw ParameterError("basis: max_excitations exceeds n_sites");

    for(std::size_t k = 0; k <= max_excitations; ++k) {
        block_start_.push_back(states_.size());
        // Lexicographic enumeration of k-subsets of {0..N-1}.
        std::vector<std::size_t> sites(k);
        for(std::size_t i = 0; i < k; ++i) sites[i] = i;
        while(true) {
            std::uint64_t mask = 0;
            for(auto s : sites) mask |= std::uint64_t{1} << s;
            states_.push_back(mask);
            std::size_t i = k;
            while(i > 0 && sites[i - 1] == n_sites - k + (i - 1)) --i;
            if(i == 0) break;
            ++sites[i - 1];
            for(std::size_t j = i; j < k; ++j) sites[j] = sites[j - 1] + 1;
        }
    }
    block_start_.push_back(states_.size());
    index_.reserve(states_.size());
    for(std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], i);
}

std::size_t Basis::excitations(std::size_t index) const { return static_cast<std::size_t>(std::popcount(states_.at(index))); }

std::optional<std::size_t> Basis::find(std::uint64_t mask) const {
    auto it = index_.find(mask);
    if(it == index_.end()) return std::nullopt;
    return it->second;
}

std::pair<std::size_t, std::size_t> Basis::block(std::size_t k) const {
    if(k > max_excitations_) throw ParameterError("basis: no block with " + std::to_string(k) + " excitations");
    return {block_start_[k], block_start_[k + 1]};
}

BasisPtr build_basis(std::size_t n_sites, std::size_t max_excitations) { return std::make_shared<const Basis>(n_sites, max_excitations); }

HamiltonianMatrix build_hamiltonian(const ChainSpec &spec, BasisPtr basis) {
    spec.validate();
    if(!basis) throw ParameterError("build_hamiltonian: null basis");
    if(basis->n_sites() != spec.n_sites)
        throw ParameterError("build_hamiltonian: basis has " + std::to_string(basis->n_sites()) + " sites, chain has " +
                             std::to_string(spec.n_sites));

    const auto dim = static_cast<Eigen::Index>(basis->size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for(std::size_t i = 0; i < basis->size(); ++i) {
        const std::uint64_t mask = basis->state(i);
        const auto          ii   = static_cast<Eigen::Index>(i);
        double              diag = 0.0;
        for(std::size_t s = 0; s < spec.n_sites; ++s)
            if(mask >> s & 1U) diag += spec.onsite[s];
        h(ii, ii) = diag;
        // Hop an excitation from site b to b+1; the reverse hop is the transpose.
        for(std::size_t b = 0; b + 1 < spec.n_sites; ++b) {
            const bool here = mask >> b & 1U, next = mask >> (b + 1) & 1U;
            if(!here || next) continue;
            const std::uint64_t target = mask ^ (std::uint64_t{1} << b) ^ (std::uint64_t{1} << (b + 1));
            const auto          j      = static_cast<Eigen::Index>(*basis->find(target));
            h(ii, j)                   = spec.couplings[b];
            h(j, ii)                   = spec.couplings[b];
        }
    }
    return {std::move(basis), std::move(h)};
}

} // namespace solitonchain

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

namespace solitonchain {

class Xoshiro256;

/// Parameters of an open XX chain: nearest-neighbour couplings and on-site
/// energies, in units of the strong coupling. Defect sites are 0-based.
struct ChainSpec {
    std::size_t                n_sites = 0;
    std::vector<double>        couplings; // bond i joins sites i and i+1
    std::vector<double>        onsite;
    std::size_t                site_a = 0;
    std::optional<std::size_t> site_b;
    std::size_t                site_c = 0;

    /// Throws ParameterError if lengths or defect indices are inconsistent.
    void validate() const;

    bool operator==(const ChainSpec &) const = default;
};

/// Dimerized chain with defects at both ends and in the middle. Each
/// extension step adds one dimer on either side of the middle defect, so
/// n_sites = 7 + 4 * extension_m.
ChainSpec build_abc_chain(std::size_t extension_m, double delta, double big_delta);

/// Three sites coupled uniformly by `eta`, defects at 0, 1, 2.
ChainSpec build_trimer_chain(double eta);

/// 11-site chain with a dimer at each edge, defects at 2, 5 and 8. Removing
/// the middle defect leaves two 5-site chains [big, weak, weak, big].
ChainSpec build_storage_chain(double delta, double big_delta);

/// Copy of `spec` with every bond touching `site` set to exactly zero.
ChainSpec decouple_site(const ChainSpec &spec, std::size_t site);

/// Sites [first, last] as a standalone chain. Its end sites become site_a and
/// site_c, and for three or more sites the middle one becomes site_b.
ChainSpec sub_chain(const ChainSpec &spec, std::size_t first, std::size_t last);

/// Relabel sites i -> N-1-i.
ChainSpec mirror(const ChainSpec &spec);

/// onsite_i = scale_E * d_i * weak_coupling with d_i uniform on [-1/2, 1/2],
/// drawn in ascending site order (exactly n_sites draws).
ChainSpec apply_diagonal_disorder(const ChainSpec &spec, double scale_E, double weak_coupling, Xoshiro256 &rng);

/// J_i += scale_E * d_i * weak_coupling on every bond, drawn in ascending bond
/// order (exactly n_sites-1 draws). Sign flips are kept.
ChainSpec apply_offdiagonal_disorder(const ChainSpec &spec, double scale_E, double weak_coupling, Xoshiro256 &rng);

/// Occupation-number basis truncated at `max_excitations`. States are ordered
/// by excitation count, then lexicographically by their sorted site tuples;
/// the vacuum is index 0. Bit i of a state mask is site i.
class Basis {
  public:
    Basis(std::size_t n_sites, std::size_t max_excitations);

    [[nodiscard]] std::size_t n_sites() const { return n_sites_; }
    [[nodiscard]] std::size_t max_excitations() const { return max_excitations_; }
    [[nodiscard]] std::size_t size() const { return states_.size(); }
    [[nodiscard]] std::uint64_t state(std::size_t index) const { return states_[index]; }
    [[nodiscard]] const std::vector<std::uint64_t> &states() const { return states_; }
    [[nodiscard]] std::size_t excitations(std::size_t index) const;

    /// Index of an occupation pattern, or nullopt when it is outside the basis.
    [[nodiscard]] std::optional<std::size_t> find(std::uint64_t mask) const;

    /// [begin, end) indices of the block with `k` excitations.
    [[nodiscard]] std::pair<std::size_t, std::size_t> block(std::size_t k) const;

    bool operator==(const Basis &o) const { return n_sites_ == o.n_sites_ && max_excitations_ == o.max_excitations_; }

  private:
    std::size_t                                  n_sites_;
    std::size_t                                  max_excitations_;
    std::vector<std::uint64_t>                   states_;
    std::vector<std::size_t>                     block_start_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

using BasisPtr = std::shared_ptr<const Basis>;

BasisPtr build_basis(std::size_t n_sites, std::size_t max_excitations = 2);

struct HamiltonianMatrix {
    BasisPtr        basis;
    Eigen::MatrixXd matrix;
};

HamiltonianMatrix build_hamiltonian(const ChainSpec &spec, BasisPtr basis);

} // namespace solitonchain

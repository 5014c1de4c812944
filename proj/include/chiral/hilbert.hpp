#pragma once

#include <cstdint>
#include <vector>

namespace chiral {

// Strictly increasing 1-based site labels of the excited atoms.
using ExcitationTuple = std::vector<int>;

// Ordered basis of the M-excitation subspace of an N-site chain. States are
// grouped into (N - M + 1) sectors by the leftmost excited site and ordered
// lexicographically within and across sectors, so sector k starts with
// (k, k+1, ..., k+M-1) and the whole basis ends with (N-M+1, ..., N).
struct ExcitationBasis {
    int n_sites = 0;
    int n_excitations = 0;
    std::vector<ExcitationTuple> states;
    std::vector<std::size_t> sector_offsets;  // start index of each sector

    std::size_t size() const { return states.size(); }
    std::size_t sector_of(std::size_t state_index) const;
};

struct HopClassification {
    enum class Kind { identical, single_hop, uncoupled };
    Kind kind = Kind::uncoupled;
    int raised = 0;   // excited in the destination state only (s1)
    int lowered = 0;  // excited in the source state only (s2)

    bool is_single_hop() const { return kind == Kind::single_hop; }
};

inline constexpr std::size_t kDefaultBasisCap = 50000;

// Exact binomial coefficient; throws std::overflow_error past 64 bits.
std::uint64_t binomial(int n, int k);

// True iff sites form a valid tuple for (n_sites, n_excitations).
bool tuple_valid(const ExcitationTuple& sites, int n_sites, int n_excitations);

ExcitationBasis enumerate_basis(int n_sites, int n_excitations,
                                std::size_t size_cap = kDefaultBasisCap);

// Position of the tuple in basis.states (0-based).
std::size_t index_of(const ExcitationBasis& basis, const ExcitationTuple& tuple);

// Compares two same-length tuples: equal, differing in exactly one site
// (a dipole hop from `lowered` in src to `raised` in dst), or farther apart.
HopClassification classify_pair(const ExcitationTuple& dst, const ExcitationTuple& src);

}  // namespace chiral

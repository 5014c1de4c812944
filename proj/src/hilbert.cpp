#include "chiral/hilbert.hpp"

#include <algorithm>
#include <sstream>

#include "chiral/errors.hpp"

namespace chiral {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 acc = 1;
    for (int i = 1; i <= k; ++i) {
        acc = acc * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (acc > static_cast<unsigned __int128>(UINT64_MAX))
            throw std::overflow_error("binomial coefficient exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(acc);
}

bool tuple_valid(const ExcitationTuple& sites, int n_sites, int n_excitations) {
    if (static_cast<int>(sites.size()) != n_excitations) return false;
    int prev = 0;
    for (int s : sites) {
        if (s <= prev || s > n_sites) return false;
        prev = s;
    }
    return true;
}

std::size_t ExcitationBasis::sector_of(std::size_t state_index) const {
    if (state_index >= states.size())
        throw ValidationError("state index out of range");
    // sectors are keyed by the leftmost excited site, 1-based
    return static_cast<std::size_t>(states[state_index].front() - 1);
}

ExcitationBasis enumerate_basis(int n_sites, int n_excitations, std::size_t size_cap) {
    if (n_sites < 1 || n_excitations < 1 || n_excitations > n_sites) {
        std::ostringstream msg;
        msg << "invalid basis request: N = " << n_sites << ", M = " << n_excitations
            << " (need 1 <= M <= N)";
        throw ValidationError(msg.str());
    }

    // Saturating size check before any allocation.
    long double approx = 1.0L;
    for (int i = 1; i <= n_excitations; ++i)
        approx = approx * static_cast<long double>(n_sites - n_excitations + i) / i;
    if (approx > static_cast<long double>(size_cap) + 0.5L) {
        std::ostringstream msg;
        msg << "basis size C(" << n_sites << "," << n_excitations << ") = " << approx
            << " exceeds the configured cap of " << size_cap << " states";
        throw CapacityError(msg.str());
    }

    const auto dim = static_cast<std::size_t>(binomial(n_sites, n_excitations));
    ExcitationBasis basis;
    basis.n_sites = n_sites;
    basis.n_excitations = n_excitations;
    basis.states.reserve(dim);
    basis.sector_offsets.reserve(static_cast<std::size_t>(n_sites - n_excitations + 1));

    // Odometer enumeration in lexicographic order: advance the rightmost
    // label that still has headroom, then reset everything to its right.
    ExcitationTuple tuple(static_cast<std::size_t>(n_excitations));
    for (int j = 0; j < n_excitations; ++j) tuple[static_cast<std::size_t>(j)] = j + 1;

    int current_sector_head = 0;
    while (true) {
        if (tuple.front() != current_sector_head) {
            basis.sector_offsets.push_back(basis.states.size());
            current_sector_head = tuple.front();
        }
        basis.states.push_back(tuple);

        int j = n_excitations - 1;
        while (j >= 0 && tuple[static_cast<std::size_t>(j)] == n_sites - n_excitations + 1 + j)
            --j;
        if (j < 0) break;
        ++tuple[static_cast<std::size_t>(j)];
        for (int i = j + 1; i < n_excitations; ++i)
            tuple[static_cast<std::size_t>(i)] = tuple[static_cast<std::size_t>(i - 1)] + 1;
    }

    if (basis.states.size() != dim)
        throw NumericError("basis enumeration produced an unexpected state count");
    return basis;
}

std::size_t index_of(const ExcitationBasis& basis, const ExcitationTuple& tuple) {
    if (!tuple_valid(tuple, basis.n_sites, basis.n_excitations)) {
        std::ostringstream msg;
        msg << "malformed excitation tuple for N = " << basis.n_sites
            << ", M = " << basis.n_excitations;
        throw ValidationError(msg.str());
    }
    auto it = std::lower_bound(basis.states.begin(), basis.states.end(), tuple);
    if (it == basis.states.end() || *it != tuple)
        throw NumericError("tuple not present in basis despite passing validation");
    return static_cast<std::size_t>(it - basis.states.begin());
}

HopClassification classify_pair(const ExcitationTuple& dst, const ExcitationTuple& src) {
    if (dst.size() != src.size())
        throw ValidationError("cannot classify tuples with different excitation numbers");
    if (dst == src) return {HopClassification::Kind::identical, 0, 0};

    // Sorted-set difference; a dipole hop leaves exactly one site on each side.
    int only_dst = 0, only_src = 0, n_dst = 0, n_src = 0;
    std::size_t i = 0, j = 0;
    while (i < dst.size() && j < src.size()) {
        if (dst[i] == src[j]) {
            ++i, ++j;
        } else if (dst[i] < src[j]) {
            only_dst = dst[i++];
            if (++n_dst > 1) return {HopClassification::Kind::uncoupled, 0, 0};
        } else {
            only_src = src[j++];
            if (++n_src > 1) return {HopClassification::Kind::uncoupled, 0, 0};
        }
    }
    while (i < dst.size()) {
        only_dst = dst[i++];
        if (++n_dst > 1) return {HopClassification::Kind::uncoupled, 0, 0};
    }
    while (j < src.size()) {
        only_src = src[j++];
        if (++n_src > 1) return {HopClassification::Kind::uncoupled, 0, 0};
    }
    return {HopClassification::Kind::single_hop, only_dst, only_src};
}

}  // namespace chiral

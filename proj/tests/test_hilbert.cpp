#include <doctest.h>

#include "chiral/errors.hpp"
#include "chiral/hilbert.hpp"
#include "oracle_helpers.hpp"

using namespace chiral;

TEST_CASE("five-site double-excitation basis matches the reference ordering") {
    const auto basis = enumerate_basis(5, 2);
    CHECK(basis.size() == binomial(5, 2));
    CHECK(basis.size() == 10);

    // Printed ordering: sector 1 runs (1,2),(1,3),(1,4),(1,5), then (2,3), and
    // the last sector holds only (4,5).
    CHECK(basis.states.front() == ExcitationTuple{1, 2});
    CHECK(basis.states[1] == ExcitationTuple{1, 3});
    CHECK(basis.states[2] == ExcitationTuple{1, 4});
    CHECK(basis.states[3] == ExcitationTuple{1, 5});
    CHECK(basis.states[4] == ExcitationTuple{2, 3});
    CHECK(basis.states.back() == ExcitationTuple{4, 5});

    REQUIRE(basis.sector_offsets.size() == 4);
    CHECK(basis.sector_offsets == std::vector<std::size_t>{0, 4, 7, 9});
}

TEST_CASE("single-excitation basis is the site list") {
    const auto basis = enumerate_basis(4, 1);
    REQUIRE(basis.size() == 4);
    for (int m = 1; m <= 4; ++m) CHECK(basis.states[m - 1] == ExcitationTuple{m});
    CHECK(basis.sector_offsets == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("wide pair basis has the forced sector populations") {
    const auto basis = enumerate_basis(40, 2);
    CHECK(basis.size() == 780);
    REQUIRE(basis.sector_offsets.size() == 39);
    for (std::size_t k = 0; k < basis.sector_offsets.size(); ++k) {
        const std::size_t end =
            k + 1 < basis.sector_offsets.size() ? basis.sector_offsets[k + 1] : basis.size();
        CHECK(end - basis.sector_offsets[k] == 40 - (k + 1));
        CHECK(basis.states[basis.sector_offsets[k]].front() == static_cast<int>(k + 1));
    }

    const auto reference = testref::brute_force_tuples(20, 2);
    const auto small = enumerate_basis(20, 2);
    REQUIRE(small.size() == reference.size());
    for (std::size_t p = 0; p < reference.size(); ++p) CHECK(small.states[p] == reference[p]);
}

TEST_CASE("enumeration equals brute force for all small (N, M)") {
    for (int n = 1; n <= 12; ++n)
        for (int m = 1; m <= std::min(n, 4); ++m) {
            CAPTURE(n);
            CAPTURE(m);
            const auto basis = enumerate_basis(n, m);
            const auto reference = testref::brute_force_tuples(n, m);
            REQUIRE(basis.size() == reference.size());
            REQUIRE(basis.size() == binomial(n, m));
            bool equal = true;
            for (std::size_t p = 0; p < reference.size(); ++p)
                equal &= basis.states[p] == reference[p];
            CHECK(equal);

            std::size_t total = 0;
            for (std::size_t k = 0; k < basis.sector_offsets.size(); ++k) {
                const std::size_t end = k + 1 < basis.sector_offsets.size()
                                            ? basis.sector_offsets[k + 1]
                                            : basis.size();
                total += end - basis.sector_offsets[k];
            }
            CHECK(total == basis.size());
        }
}

TEST_CASE("index_of inverts enumeration") {
    const auto basis = enumerate_basis(5, 2);
    CHECK(index_of(basis, {1, 2}) == 0);
    CHECK(index_of(basis, {4, 5}) == basis.size() - 1);
    for (std::size_t p = 0; p < basis.size(); ++p) CHECK(index_of(basis, basis.states[p]) == p);

    CHECK_THROWS_AS(index_of(basis, {2, 1}), ValidationError);
    CHECK_THROWS_AS(index_of(basis, {1, 6}), ValidationError);
    CHECK_THROWS_AS(index_of(basis, {1, 2, 3}), ValidationError);
    CHECK_THROWS_AS(index_of(basis, {1, 1}), ValidationError);
}

TEST_CASE("pair classification follows the sorted-set difference") {
    const auto hop = classify_pair({1, 2}, {1, 3});
    REQUIRE(hop.kind == HopClassification::Kind::single_hop);
    CHECK(hop.raised == 2);
    CHECK(hop.lowered == 3);

    CHECK(classify_pair({1, 2}, {3, 4}).kind == HopClassification::Kind::uncoupled);
    CHECK(classify_pair({1, 3}, {2, 4}).kind == HopClassification::Kind::uncoupled);
    CHECK(classify_pair({2, 5}, {2, 5}).kind == HopClassification::Kind::identical);
    CHECK_THROWS_AS(classify_pair({1, 2}, {1, 2, 3}), ValidationError);
}

TEST_CASE("classification is symmetric up to swapping the sorted pair") {
    const auto basis = enumerate_basis(7, 3);
    for (std::size_t p = 0; p < basis.size(); ++p)
        for (std::size_t q = 0; q < basis.size(); ++q) {
            const auto fwd = classify_pair(basis.states[p], basis.states[q]);
            const auto rev = classify_pair(basis.states[q], basis.states[p]);
            CHECK(fwd.kind == rev.kind);
            if (fwd.is_single_hop()) {
                CHECK(fwd.raised == rev.lowered);
                CHECK(fwd.lowered == rev.raised);
            }
        }
}

TEST_CASE("every state has M (N - M) single-hop partners") {
    for (int n = 2; n <= 8; ++n)
        for (int m = 1; m <= std::min(n, 4); ++m) {
            const auto basis = enumerate_basis(n, m);
            for (std::size_t p = 0; p < basis.size(); ++p) {
                int partners = 0;
                for (std::size_t q = 0; q < basis.size(); ++q)
                    if (p != q && classify_pair(basis.states[p], basis.states[q]).is_single_hop())
                        ++partners;
                CHECK(partners == m * (n - m));
            }
        }
}

TEST_CASE("basis request validation") {
    CHECK_THROWS_AS(enumerate_basis(0, 1), ValidationError);
    CHECK_THROWS_AS(enumerate_basis(3, 4), ValidationError);
    CHECK_THROWS_AS(enumerate_basis(5, -1), ValidationError);
    CHECK_THROWS_AS(enumerate_basis(40, 4), CapacityError);  // C(40,4) = 91390 > cap
    CHECK_NOTHROW(enumerate_basis(40, 3));                   // 9880 under the default cap

    try {
        enumerate_basis(40, 4);
        FAIL("expected a capacity error");
    } catch (const CapacityError& err) {
        CHECK(std::string(err.what()).find("C(40,4)") != std::string::npos);
    }
}

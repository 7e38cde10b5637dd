#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "braidlab/smith.hpp"

using namespace braidlab;

static IntMat imat(int rows, int cols, std::initializer_list<long> vals) {
    IntMat m(rows, cols);
    auto it = vals.begin();
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = *it++;
    return m;
}

static void check_transforms(const IntMat& a, const SmithResult& r) {
    IntMat prod = r.u * a * r.v;
    CHECK(prod == r.d);
    CHECK(abs(r.u.det()) == 1);
    CHECK(abs(r.v.det()) == 1);
    for (size_t i = 0; i + 1 < r.invariant_factors.size(); ++i)
        CHECK(r.invariant_factors[i + 1] % r.invariant_factors[i] == 0);
}

TEST_CASE("smith of diag(4,6)") {
    // oracle: gcd of entries is 2, and the product of the invariant
    // factors equals |det| = 24, so the factors are (2, 12)
    IntMat a = imat(2, 2, {4, 0, 0, 6});
    auto r = smith_nf(a);
    REQUIRE(r.invariant_factors.size() == 2);
    CHECK(r.invariant_factors[0] == 2);
    CHECK(r.invariant_factors[1] == 12);
    check_transforms(a, r);
}

TEST_CASE("smith of [[2,4],[6,8]]") {
    // oracle: gcd 2 and |det| = |16 - 24| = 8 force (2, 4)
    IntMat a = imat(2, 2, {2, 4, 6, 8});
    CHECK(abs(a.det()) == 8);
    auto r = smith_nf(a);
    REQUIRE(r.invariant_factors.size() == 2);
    CHECK(r.invariant_factors[0] == 2);
    CHECK(r.invariant_factors[1] == 4);
    check_transforms(a, r);
}

TEST_CASE("smith of identity") {
    IntMat a = IntMat::identity(2);
    auto r = smith_nf(a);
    REQUIRE(r.invariant_factors.size() == 2);
    CHECK(r.invariant_factors[0] == 1);
    CHECK(r.invariant_factors[1] == 1);
    check_transforms(a, r);
}

TEST_CASE("smith handles rectangular and singular input") {
    IntMat a = imat(2, 3, {2, 4, 6, 4, 8, 12});
    auto r = smith_nf(a);
    REQUIRE(r.invariant_factors.size() == 1);
    CHECK(r.invariant_factors[0] == 2);
    check_transforms(a, r);
}

TEST_CASE("random smith transform identity") {
    std::mt19937 rng(424242);
    std::uniform_int_distribution<long> c(-9, 9);
    for (int trial = 0; trial < 40; ++trial) {
        int m = 1 + trial % 4, n = 1 + (trial / 2) % 4;
        IntMat a(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) a.at(i, j) = c(rng);
        auto r = smith_nf(a);
        check_transforms(a, r);
        for (const auto& f : r.invariant_factors) CHECK(f > 0);
    }
}

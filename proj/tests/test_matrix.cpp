#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "braidlab/matrix.hpp"

using namespace braidlab;

static Mat mat2(long a, long b, long c, long d) {
    Mat m(2, 2);
    m.at(0, 0) = Scalar(a);
    m.at(0, 1) = Scalar(b);
    m.at(1, 0) = Scalar(c);
    m.at(1, 1) = Scalar(d);
    return m;
}

TEST_CASE("kernel of a rank-one matrix") {
    Mat m = mat2(1, 2, 2, 4);
    auto k = m.kernel();
    REQUIRE(k.size() == 1);
    // span{(-2, 1)}
    CHECK(k[0][0] / k[0][1] == Scalar(-2));
    CHECK(m.apply(k[0]) == Vec{Scalar(), Scalar()});
}

TEST_CASE("rank of identity") {
    CHECK(Mat::identity(3).rank() == 3);
}

TEST_CASE("solve 2x = 1") {
    Mat m(1, 1);
    m.at(0, 0) = Scalar(2);
    auto x = m.solve(Vec{Scalar(1L)});
    REQUIRE(x);
    CHECK((*x)[0] == Scalar(1, 2));
}

TEST_CASE("inconsistent system reports no solution") {
    Mat m(2, 1);
    m.at(0, 0) = Scalar(1L);
    m.at(1, 0) = Scalar(1L);
    CHECK_FALSE(m.solve(Vec{Scalar(1L), Scalar(2)}).has_value());
}

TEST_CASE("inverse and determinant") {
    Mat m = mat2(1, 1, 0, 1);
    auto inv = m.inverse();
    REQUIRE(inv);
    CHECK(*inv * m == Mat::identity(2));
    CHECK(m.det() == Scalar(1L));
    CHECK(mat2(1, 2, 2, 4).det() == Scalar());
    CHECK_FALSE(mat2(1, 2, 2, 4).inverse().has_value());
}

TEST_CASE("kronecker product shape and content") {
    Mat a = mat2(1, 0, 0, 2), b = mat2(0, 1, 1, 0);
    Mat k = a.kron(b);
    CHECK(k.rows() == 4);
    CHECK(k.at(0, 1) == Scalar(1L));
    CHECK(k.at(2, 3) == Scalar(2));
    CHECK(k.at(0, 0) == Scalar());
}

TEST_CASE("random solve round trip") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> c(-5, 5);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 1 + static_cast<int>(trial % 5);
        Mat a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a.at(i, j) = Scalar(c(rng));
        Vec x(static_cast<size_t>(n));
        for (auto& e : x) e = Scalar(c(rng));
        Vec b = a.apply(x);
        auto sol = a.solve(b);
        REQUIRE(sol);
        CHECK(a.apply(*sol) == b);
        // kernel vectors really annihilate
        for (const auto& k : a.kernel()) CHECK(a.apply(k) == Vec(static_cast<size_t>(n)));
    }
}

TEST_CASE("subspace operations") {
    Vec e1{Scalar(1L), Scalar(), Scalar()};
    Vec e2{Scalar(), Scalar(1L), Scalar()};
    Vec e12{Scalar(1L), Scalar(1L), Scalar()};
    auto s1 = rref_basis({e1, e12});
    CHECK(subspace_dim(s1) == 2);
    CHECK(in_span(s1, e2));
    auto s2 = rref_basis({e12});
    auto inter = subspace_intersect(s1, s2, 3);
    REQUIRE(subspace_dim(inter) == 1);
    CHECK(in_span(s2, inter[0]));
    CHECK(subspace_dim(subspace_sum(s1, s2)) == 2);
}

TEST_CASE("sparse echelon kernel tracking") {
    // rows: r0 = (1,1,0), r1 = (0,1,1), r2 = r0 + r1
    SparseEchelon ech(3);
    auto row = [](std::initializer_list<std::pair<int, long>> es, int aug) {
        SparseVec v;
        for (auto [i, c] : es) v[i] = Scalar(c);
        v[3 + aug] = Scalar(1L);
        return v;
    };
    CHECK(ech.insert(row({{0, 1}, {1, 1}}, 0)));
    CHECK(ech.insert(row({{1, 1}, {2, 1}}, 1)));
    CHECK_FALSE(ech.insert(row({{0, 1}, {1, 2}, {2, 1}}, 2)));
    REQUIRE(ech.null_combos().size() == 1);
    // the dependency is r2 - r1 - r0 = 0
    const SparseVec& combo = ech.null_combos()[0];
    CHECK(combo.at(5) == combo.at(5));
    Scalar c2 = combo.at(5);
    CHECK(combo.at(3) / c2 == Scalar(-1));
    CHECK(combo.at(4) / c2 == Scalar(-1));
}

TEST_CASE("sparse matrix agrees with dense") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<long> c(-3, 3);
    Mat a(4, 3), b(3, 5);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j) a.at(i, j) = Scalar(c(rng));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 5; ++j) b.at(i, j) = Scalar(c(rng));
    CHECK((SparseMat::from_dense(a) * SparseMat::from_dense(b)).to_dense() == a * b);
    CHECK(SparseMat::from_dense(a).kron(SparseMat::from_dense(b)).to_dense() == a.kron(b));
}

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "braidlab/frt.hpp"
#include "braidlab/triangular.hpp"

using namespace braidlab;
using namespace braidlab::frt;

static BraidedVectorSpace scalar_braiding(const Scalar& q, Field field = Field::Q) {
    SparseMat t(1, 1);
    t.set(0, 0, q);
    return make_braiding(1, field, std::move(t));
}

static BraidedVectorSpace scaled_flip(int n, const Scalar& q, Field field = Field::Q) {
    SparseMat t(n * n, n * n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) t.set(pair_index(j, i, n), pair_index(i, j, n), q);
    return make_braiding(n, field, std::move(t));
}

// the quantum-sl2 L(1) braiding over Q(v), entered directly
static BraidedVectorSpace uq_l1_braiding() {
    Scalar v = Scalar::v();
    SparseMat t(4, 4);
    t.set(pair_index(1, 1, 2), pair_index(1, 1, 2), v);
    t.set(pair_index(2, 1, 2), pair_index(1, 2, 2), v.inverse());
    t.set(pair_index(1, 2, 2), pair_index(2, 1, 2), v.inverse());
    t.set(pair_index(2, 1, 2), pair_index(2, 1, 2), v - v.pow(-3));
    t.set(pair_index(2, 2, 2), pair_index(2, 2, 2), v);
    return make_braiding(2, Field::Qv, std::move(t));
}

TEST_CASE("rform on generators") {
    SECTION("flip: r(t_ij (x) t_kl) = [i==j][k==l]") {
        auto rf = rform_generators(flip_braiding(2));
        for (int i = 1; i <= 2; ++i)
            for (int j = 1; j <= 2; ++j)
                for (int k = 1; k <= 2; ++k)
                    for (int l = 1; l <= 2; ++l)
                        CHECK(rf.gen.at(gen_index(i, j, 2), gen_index(k, l, 2)) ==
                              ((i == j && k == l) ? Scalar(1L) : Scalar()));
    }
    SECTION("q tau scales the flip values") {
        auto rf = rform_generators(scaled_flip(2, Scalar(5)));
        for (int i = 1; i <= 2; ++i)
            for (int k = 1; k <= 2; ++k)
                CHECK(rf.gen.at(gen_index(i, i, 2), gen_index(k, k, 2)) == Scalar(5));
    }
    SECTION("n=1: r(t (x) t) = q") {
        auto rf = rform_generators(scalar_braiding(Scalar(7)));
        CHECK(rf.gen.at(0, 0) == Scalar(7));
    }
}

TEST_CASE("rtt relation space") {
    SECTION("flip n=2: commutators, dimension 6") {
        auto rs = rtt_relations(flip_braiding(2));
        CHECK(rs.dim == 6);
    }
    SECTION("q tau has the same relation space as the flip") {
        auto r1 = rtt_relations(flip_braiding(2));
        auto r2 = rtt_relations(scaled_flip(2, Scalar(2)));
        REQUIRE(r1.dim == r2.dim);
        CHECK(r1.basis == r2.basis);
    }
    SECTION("n=1: no relations") {
        CHECK(rtt_relations(scalar_braiding(Scalar(3))).dim == 0);
    }
}

TEST_CASE("graded truncation dimensions") {
    SECTION("flip n=2, D=2: dims (1,4,10)") {
        Truncation t(flip_braiding(2), 2);
        CHECK(t.dims() == std::vector<int>{1, 4, 10});
    }
    SECTION("2 tau n=2, D=2: same dims") {
        Truncation t(scaled_flip(2, Scalar(2)), 2);
        CHECK(t.dims() == std::vector<int>{1, 4, 10});
    }
    SECTION("n=1, D=3: free on one generator") {
        Truncation t(scalar_braiding(Scalar(5)), 3);
        CHECK(t.dims() == std::vector<int>{1, 1, 1, 1});
    }
    SECTION("dimension formula dim A_d = n^2d - dim W_d holds by construction") {
        Truncation t(flip_braiding(2), 3);
        CHECK(t.dims() == std::vector<int>{1, 4, 10, 20}); // commutative count C(d+3,3)
    }
    SECTION("resource cap") {
        CHECK_THROWS_AS(Truncation(flip_braiding(3), 4, 100), resource_error);
    }
}

TEST_CASE("extend_rform recursion") {
    SECTION("flip: r(t_pq (x) t_ab t_cd) = [p==q][a==b][c==d]") {
        Truncation t(flip_braiding(2), 2);
        for (int p = 1; p <= 2; ++p)
            for (int qi = 1; qi <= 2; ++qi)
                for (int a = 1; a <= 2; ++a)
                    for (int bb = 1; bb <= 2; ++bb)
                        for (int c = 1; c <= 2; ++c)
                            for (int d = 1; d <= 2; ++d) {
                                long rank = mono_rank({gen_index(a, bb, 2), gen_index(c, d, 2)}, 2);
                                Scalar got = t.rform_second(gen_index(p, qi, 2), 2, rank);
                                Scalar expect = (p == qi && a == bb && c == d) ? Scalar(1L) : Scalar();
                                CHECK(got == expect);
                            }
    }
    SECTION("r(t_ij (x) 1) = delta_ij") {
        Truncation t(jordan_braiding(Scalar(1L)), 1);
        CHECK(t.rform_second_global(gen_index(1, 1, 2), 0).is_one());
        CHECK(t.rform_second_global(gen_index(1, 2, 2), 0).is_zero());
    }
    SECTION("n=1 c=(q): r(t^a (x) t^b) = q^(ab)") {
        Scalar q(3);
        Truncation t(scalar_braiding(q), 3);
        for (int a = 0; a <= 3; ++a)
            for (int b = 0; b <= 3; ++b)
                CHECK(t.rform_pair(a, 0, b, 0) == q.pow(static_cast<long>(a) * b));
        // the slot-explicit wrapper agrees in both slots
        CHECK(extend_rform(t, 2, 0, 3, 0, true) == q.pow(6));
        CHECK(extend_rform(t, 2, 0, 3, 0, false) == q.pow(6));
    }
}

TEST_CASE("r-form vanishes on the relation space in both slots (degree 2)") {
    std::vector<BraidedVectorSpace> cases{flip_braiding(2), scaled_flip(2, Scalar(2)),
                                          jordan_braiding(Scalar(1L)), uq_l1_braiding()};
    for (const auto& b : cases) {
        int n = b.dim;
        Truncation t(b, 2);
        for (const auto& rel : t.relations().basis)
            for (int g = 0; g < n * n; ++g) {
                Scalar second, first;
                for (const auto& [c, v] : rel) {
                    second += v * t.rform_second(g, 2, c);
                    first += v * t.rform_first(2, c, g);
                }
                CHECK(second.is_zero());
                CHECK(first.is_zero());
            }
    }
}

TEST_CASE("convolution invertibility on generators") {
    std::vector<BraidedVectorSpace> cases{flip_braiding(2), jordan_braiding(Scalar(2)),
                                          uq_l1_braiding()};
    for (const auto& b : cases) {
        int n = b.dim;
        auto rf = rform_generators(b);
        // T_{(i,k),(j,l)} = r(t_ij (x) t_kl) must be invertible, and its
        // inverse is the convolution inverse on generators
        Mat t(n * n, n * n);
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
                for (int k = 1; k <= n; ++k)
                    for (int l = 1; l <= n; ++l)
                        t.at(pair_index(i, k, n), pair_index(j, l, n)) =
                            rf.gen.at(gen_index(i, j, n), gen_index(k, l, n));
        auto tinv = t.inverse();
        REQUIRE(tinv);
        CHECK(t * *tinv == Mat::identity(n * n));
    }
}

TEST_CASE("radical worked examples") {
    SECTION("n=1, c=(1), D=1: J = span{t-1}, quotient dims (1,0)") {
        auto rad = radical_truncation(scalar_braiding(Scalar(1L)), 1);
        REQUIRE(rad.basis.size() == 1);
        // the single row is a multiple of t - 1
        const SparseVec& row = rad.basis[0];
        REQUIRE(row.size() == 2);
        CHECK(row.at(0) == -row.at(1));
        CHECK(rad.filtered_dims == std::vector<int>{0, 1});
        CHECK(rad.quotient_graded_dims == std::vector<int>{1, 0});
    }
    SECTION("n=1, c=(2), D=1: J = 0") {
        auto rad = radical_truncation(scalar_braiding(Scalar(2)), 1);
        CHECK(rad.basis.empty());
        CHECK(rad.quotient_graded_dims == std::vector<int>{1, 1});
    }
    SECTION("c = 2 tau, n=2, D=1: J1 = span{t12, t21, t11 - t22}") {
        auto b = scaled_flip(2, Scalar(2));
        Truncation t(b, 1);
        auto rad = radical_of(t);
        REQUIRE(rad.basis.size() == 3);
        CHECK(rad.filtered_dims == std::vector<int>{0, 3});
        CHECK(rad.quotient_graded_dims == std::vector<int>{1, 1});
        // membership checks against the stated span
        auto in_j = [&](std::initializer_list<std::pair<int, long>> coords) {
            SparseVec x;
            for (auto [g, c] : coords) x[t.generator_global(g)] = Scalar(c);
            return reduce_modulo(rad.basis, x).empty();
        };
        CHECK(in_j({{gen_index(1, 2, 2), 1}}));
        CHECK(in_j({{gen_index(2, 1, 2), 1}}));
        CHECK(in_j({{gen_index(1, 1, 2), 1}, {gen_index(2, 2, 2), -1}}));
        CHECK_FALSE(in_j({{gen_index(1, 1, 2), 1}}));
    }
}

TEST_CASE("radical is a coideal, verified post hoc") {
    std::vector<BraidedVectorSpace> cases{scalar_braiding(Scalar(1L)), scaled_flip(2, Scalar(2)),
                                          jordan_braiding(Scalar(1L)), uq_l1_braiding()};
    for (const auto& b : cases) {
        Truncation t(b, 2);
        auto rad = radical_of(t);
        auto delta = [&t](int i) -> const std::map<std::pair<int, int>, Scalar>& {
            return t.delta_global(i);
        };
        auto counit = [&t](int i) { return t.counit_global(i); };
        CHECK(verify_coideal(t.total_dim(), delta, counit, rad.basis));
    }
}

TEST_CASE("jordan reduced report at D=1") {
    for (long lam : {1L, 2L}) {
        auto b = jordan_braiding(Scalar(lam));
        auto rep = reduced_report(b, 1);
        CHECK(rep.radical_filtered == std::vector<int>{0, 3});
        // single grouplike image acting by the jordan matrix
        CHECK(rep.grouplike_images.size() == 1);
        CHECK(rep.grouplike_generators ==
              std::vector<int>{gen_index(1, 1, 2), gen_index(2, 2, 2)});
        REQUIRE(rep.grouplike_actions.size() == 1);
        Mat g(2, 2);
        g.at(0, 0) = Scalar(lam);
        g.at(0, 1) = Scalar(1L);
        g.at(1, 1) = Scalar(lam);
        CHECK(rep.grouplike_actions[0] == g);
        CHECK_FALSE(rep.diagonal_action);
        CHECK(rep.reconstruction_ok);
        CHECK(rep.m_reduced);
    }
}

TEST_CASE("uq L(1) reduced report") {
    auto b = uq_l1_braiding();
    SECTION("D=1: J1 = span{t12} in the (v0, v1) basis") {
        Truncation t(b, 1);
        auto rad = radical_of(t);
        REQUIRE(rad.basis.size() == 1);
        CHECK(rad.basis[0].size() == 1);
        CHECK(rad.basis[0].count(t.generator_global(gen_index(1, 2, 2))) == 1);
        auto rep = reduced_report(b, 1);
        CHECK(rep.vanishing_generators == std::vector<int>{gen_index(1, 2, 2)});
        CHECK(rep.grouplike_generators ==
              std::vector<int>{gen_index(1, 1, 2), gen_index(2, 2, 2)});
        CHECK(rep.grouplike_images.size() == 2);
        REQUIRE(rep.skew_primitives.size() == 1);
        CHECK(rep.skew_primitives[0].generator == gen_index(2, 1, 2));
        CHECK(rep.skew_primitives[0].grouplike_g == gen_index(1, 1, 2));
        CHECK(rep.skew_primitives[0].grouplike_h == gen_index(2, 2, 2));
        CHECK(rep.diagonal_action);
        CHECK(rep.reconstruction_ok);
        CHECK(rep.m_reduced);
    }
    SECTION("D=2: t11 t22 = 1 and the grouplikes commute in the quotient") {
        Truncation t(b, 2);
        auto rad = radical_of(t);
        // t11*t22 - 1 lies in the radical
        SparseVec elt;
        SparseVec nf = t.normal_form(2, mono_rank({gen_index(1, 1, 2), gen_index(2, 2, 2)}, 2));
        for (const auto& [p, v] : nf) sparse_add_to(elt, t.global_index(2, p), v);
        sparse_add_to(elt, 0, Scalar(-1));
        CHECK(reduce_modulo(rad.basis, elt).empty());
        auto rep = reduced_report(b, 2);
        CHECK(rep.grouplike_commutators_vanish);
        CHECK(rep.diagonal_action);
        CHECK(rep.reconstruction_ok);
    }
}

TEST_CASE("right-triangular inputs: proof-pattern indicators in the quotient") {
    // work in the certificate-ordered coordinates, where the indicators read
    // off directly: images of t_ij with j < i vanish, diagonal images are
    // grouplike, and their degree-2 commutators vanish
    std::mt19937 rng(17);
    std::uniform_int_distribution<long> nz(1, 3);
    for (int trial = 0; trial < 3; ++trial) {
        int n = 2 + trial;
        std::vector<std::vector<Scalar>> q(static_cast<size_t>(n),
                                           std::vector<Scalar>(static_cast<size_t>(n)));
        for (auto& row : q)
            for (auto& e : row) e = Scalar(nz(rng));
        auto b = diagonal_braiding(q, Field::Q);
        auto det = detect_triangular(b, Side::Right);
        REQUIRE(det.cert);
        // conjugate into the certificate basis
        Mat p = Mat::from_columns(det.cert->basis);
        Mat pk = p.kron(p);
        Mat conj = *pk.inverse() * b.table.to_dense() * pk;
        auto bc = make_braiding(n, Field::Q, SparseMat::from_dense(conj));
        auto rep = reduced_report(bc, 2);
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j < i; ++j) {
                bool vanishes = std::count(rep.vanishing_generators.begin(),
                                           rep.vanishing_generators.end(),
                                           gen_index(i, j, n)) > 0;
                CHECK(vanishes);
            }
        for (int i = 1; i <= n; ++i)
            CHECK(std::count(rep.grouplike_generators.begin(), rep.grouplike_generators.end(),
                             gen_index(i, i, n)) == 1);
        CHECK(rep.grouplike_commutators_vanish);
        CHECK(rep.diagonal_action);
        CHECK(rep.reconstruction_ok);
    }
}

TEST_CASE("truncation consistency: J_{<=D} = J_{<=D+1} intersect A_{<=D}") {
    std::vector<BraidedVectorSpace> cases{scalar_braiding(Scalar(1L)), scalar_braiding(Scalar(2)),
                                          scaled_flip(2, Scalar(2)), jordan_braiding(Scalar(1L)),
                                          uq_l1_braiding()};
    for (const auto& b : cases) {
        for (int d = 1; d <= 2; ++d) {
            Truncation td(b, d);
            Truncation td1(b, d + 1);
            auto radd = radical_of(td);
            auto radd1 = radical_of(td1);
            // restrict the D+1 radical to A_{<=D}: combinations with no tail
            int md = td.total_dim();
            SparseEchelon tail(td1.total_dim());
            int aug = 0;
            for (const auto& w : radd1.basis) {
                SparseVec tail_part;
                for (const auto& [c, v] : w)
                    if (c >= md) tail_part[c] = v;
                tail_part[td1.total_dim() + aug] = Scalar(1L);
                tail.insert(std::move(tail_part));
                ++aug;
            }
            SparseEchelon restricted(md);
            for (const auto& combo : tail.null_combos()) {
                SparseVec vec;
                for (const auto& [a, coef] : combo)
                    sparse_axpy(vec, coef, radd1.basis[static_cast<size_t>(a - td1.total_dim())]);
                restricted.insert(std::move(vec));
            }
            restricted.make_reduced();
            std::vector<SparseVec> restricted_rows;
            for (const auto& [p, row] : restricted.rows()) restricted_rows.push_back(row);
            CHECK(restricted_rows == radd.basis);
        }
    }
}

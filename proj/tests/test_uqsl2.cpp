#include <catch2/catch_amalgamated.hpp>

#include "braidlab/eigen.hpp"
#include "braidlab/uqsl2.hpp"

using namespace braidlab;
using namespace braidlab::uq;

TEST_CASE("quantum integers") {
    Scalar v = Scalar::v();
    CHECK(quantum_integer(1).is_one());
    CHECK(quantum_integer(2) == v.pow(2) + v.pow(-2));
    CHECK(quantum_integer(3) == v.pow(4) + Scalar(1L) + v.pow(-4));
}

TEST_CASE("build_simple_module") {
    SECTION("n=0 is trivial") {
        auto m = build_simple_module(0);
        CHECK(m.dim() == 1);
        CHECK(m.e.is_zero());
        CHECK(m.f.is_zero());
        CHECK(m.k.at(0, 0).is_one());
    }
    SECTION("n=1 matches the stated matrices") {
        auto m = build_simple_module(1);
        Scalar v = Scalar::v();
        CHECK(m.e.at(0, 1).is_one());
        CHECK(m.e.at(1, 0).is_zero());
        CHECK(m.f.at(1, 0).is_one());
        CHECK(m.k.at(0, 0) == v.pow(2));
        CHECK(m.k.at(1, 1) == v.pow(-2));
    }
    SECTION("n=2 quantum-integer entries") {
        auto m = build_simple_module(2);
        CHECK(m.f.at(1, 0).is_one());
        CHECK(m.f.at(2, 1) == quantum_integer(2));
        CHECK(m.weights == std::vector<long>{2, 0, -2});
    }
}

TEST_CASE("validate_uq_module") {
    for (int n : {0, 1, 2, 3}) CHECK(validate_uq_module(build_simple_module(n)).valid);
    SECTION("swapping E and F breaks the commutator relation") {
        auto m = build_simple_module(2);
        std::swap(m.e, m.f);
        auto v = validate_uq_module(m);
        CHECK_FALSE(v.valid);
        CHECK(v.failing_relation.find("E F - F E") != std::string::npos);
    }
}

TEST_CASE("theta_matrix") {
    SECTION("n=0: identity") {
        CHECK(theta_matrix(build_simple_module(0)) == Mat::identity(1));
    }
    SECTION("n=1: 1 + (q - q^-1) F (x) E") {
        auto m = build_simple_module(1);
        Scalar q = Scalar::v() * Scalar::v();
        Mat expect = Mat::identity(4) + m.f.kron(m.e) * (q - q.inverse());
        CHECK(theta_matrix(m) == expect);
    }
    SECTION("nilpotency bookkeeping: Theta fixes v1 (x) v0") {
        auto m = build_simple_module(1);
        Mat th = theta_matrix(m);
        Vec x(4);
        x[pair_index(2, 1, 2)] = Scalar(1L); // v1 (x) v0
        CHECK(th.apply(x) == x);
    }
}

TEST_CASE("build_cf_braiding: the L(1) table") {
    auto m = build_simple_module(1);
    auto b = build_cf_braiding(m);
    Scalar v = Scalar::v();
    // c(v0 (x) v0) = v v0 (x) v0
    CHECK(b.coeff(1, 1, 1, 1) == v);
    // c(v0 (x) v1) = v^-1 v1 (x) v0
    CHECK(b.coeff(2, 1, 1, 2) == v.inverse());
    // c(v1 (x) v0) = v^-1 v0 (x) v1 + (v - v^-3) v1 (x) v0
    CHECK(b.coeff(1, 2, 2, 1) == v.inverse());
    CHECK(b.coeff(2, 1, 2, 1) == v - v.pow(-3));
    // c(v1 (x) v1) = v v1 (x) v1
    CHECK(b.coeff(2, 2, 2, 2) == v);
    CHECK(b.table.nonzeros() == 5);
    CHECK(b.field == Field::Qv);
}

TEST_CASE("L(0) braiding is the scalar 1") {
    auto b = build_cf_braiding(build_simple_module(0));
    CHECK(b.dim == 1);
    CHECK(b.coeff(1, 1, 1, 1).is_one());
}

TEST_CASE("braidings pass the braid equation and rigidity") {
    for (int n : {1, 2, 3}) {
        auto b = build_cf_braiding(build_simple_module(n));
        CHECK(check_braid_equation(b).pass);
        CHECK(check_rigidity(b));
    }
}

TEST_CASE("L(1) braiding eigenvalues are v and -v^-3") {
    auto b = build_cf_braiding(build_simple_module(1));
    auto rep = eigen(b.table.to_dense(), Field::Qv);
    REQUIRE(rep.split);
    Scalar v = Scalar::v();
    REQUIRE(rep.pairs.size() == 2);
    for (const auto& p : rep.pairs) {
        if (p.value == v) CHECK(p.algebraic_multiplicity == 3);
        else {
            CHECK(p.value == -v.pow(-3));
            CHECK(p.algebraic_multiplicity == 1);
        }
    }
}

TEST_CASE("weight grading of the braiding support") {
    for (int n : {1, 2}) {
        auto m = build_simple_module(n);
        CHECK(check_weight_grading(m, build_cf_braiding(m)));
    }
}

TEST_CASE("right-triangularity with weight-ordered basis") {
    for (int n : {1, 2}) {
        auto b = build_cf_braiding(build_simple_module(n));
        auto det = detect_triangular(b, Side::Right);
        REQUIRE(det.cert);
        CHECK(certificate_matches(*det.cert, b));
    }
}

TEST_CASE("uq_report n=1, D=2") {
    auto rep = uq_report(build_simple_module(1), 2);
    CHECK(rep.weights_w == std::vector<long>{1, -1});
    CHECK(rep.p_nonempty);
    CHECK(rep.predicted_free_rank == 1);
    CHECK(rep.predicted_invariant_factors.empty());
    CHECK(rep.predicted_grouplikes == 2);
    CHECK(rep.predicted_skew_primitives == 1);
    // radical degree-1 part is one-dimensional (span{t12})
    CHECK(rep.reduced.radical_filtered[1] == 1);
    CHECK(rep.reduced.grouplike_images.size() == 2);
    REQUIRE(rep.reduced.skew_primitives.size() == 1);
    CHECK(rep.reduced.skew_primitives[0].generator == frt::gen_index(2, 1, 2));
    CHECK(rep.grouplike_count_matches);
    CHECK(rep.upper_images_vanish);
    CHECK(rep.lower_diagonal_skew);
    CHECK(rep.relations_match); // t11 t22 = 1 visible at degree 2 matches Z
    CHECK(rep.right_triangular);
    CHECK(rep.reduced.diagonal_action);
    CHECK(rep.reduced.reconstruction_ok);
    CHECK(rep.reduced.m_reduced);
    CHECK(rep.weight_grading_ok);
}

TEST_CASE("uq_report n=0 is trivial") {
    auto rep = uq_report(build_simple_module(0), 2);
    CHECK(rep.weights_w == std::vector<long>{0});
    CHECK_FALSE(rep.p_nonempty);
    CHECK(rep.predicted_skew_primitives == 0);
    CHECK(rep.reduced.skew_primitives.empty());
    // quotient is the ground field in every degree
    for (size_t d = 1; d < rep.reduced.quotient_graded.size(); ++d)
        CHECK(rep.reduced.quotient_graded[d] == 0);
    CHECK(rep.relations_match);
}

TEST_CASE("uq_report n=2, D=1: three grouplikes, first lower diagonal skew") {
    auto rep = uq_report(build_simple_module(2), 1);
    CHECK(rep.weights_w == std::vector<long>{2, 0, -2});
    CHECK(rep.predicted_grouplikes == 3);
    CHECK(rep.reduced.grouplike_images.size() == 3);
    CHECK(rep.upper_images_vanish);
    CHECK(rep.lower_diagonal_skew);
    CHECK(rep.right_triangular);
    CHECK(rep.reduced.diagonal_action);
    CHECK(rep.reduced.reconstruction_ok);
    CHECK(rep.relations_match);
}

#pragma once

#include <string>
#include <vector>

#include "braidlab/braiding.hpp"
#include "braidlab/frt.hpp"
#include "braidlab/grouptype.hpp"
#include "braidlab/triangular.hpp"

namespace braidlab {
namespace uq {

// quantum integer [m]_q with q = v^2, as an element of Q(v)
inline Scalar quantum_integer(long m) {
    Scalar v = Scalar::v();
    Scalar q = v * v;
    if (m == 0) return Scalar();
    Scalar num = q.pow(m) - q.pow(-m);
    Scalar den = q - q.inverse();
    return num / den;
}

inline Scalar quantum_factorial(long m) {
    Scalar acc(1L);
    for (long k = 1; k <= m; ++k) acc *= quantum_integer(k);
    return acc;
}

// The simple U_q(sl2)-module L(n) over Q(v), q = v^2, with basis v_0..v_n,
// weight of v_i equal to n - 2i:
//   K v_i = q^(n-2i) v_i,  F v_i = [i+1] v_{i+1},  E v_i = [n-i+1] v_{i-1}
struct UqModule {
    int highest_weight = 0;
    Mat e, f, k;
    std::vector<long> weights;

    int dim() const { return highest_weight + 1; }
};

inline UqModule build_simple_module(int n) {
    if (n < 0) throw input_error("highest weight must be nonnegative");
    UqModule m;
    m.highest_weight = n;
    int d = n + 1;
    m.e = Mat(d, d);
    m.f = Mat(d, d);
    m.k = Mat(d, d);
    Scalar q = Scalar::v() * Scalar::v();
    for (int i = 0; i <= n; ++i) {
        m.weights.push_back(n - 2 * i);
        m.k.at(i, i) = q.pow(n - 2 * i);
        if (i + 1 <= n) m.f.at(i + 1, i) = quantum_integer(i + 1);
        if (i - 1 >= 0) m.e.at(i - 1, i) = quantum_integer(n - i + 1);
    }
    return m;
}

struct UqVerdict {
    bool valid = true;
    std::string failing_relation;
};

inline UqVerdict validate_uq_module(const UqModule& m) {
    UqVerdict v;
    auto fail = [&v](const std::string& rel) {
        v.valid = false;
        v.failing_relation = rel;
        return v;
    };
    Scalar q = Scalar::v() * Scalar::v();
    auto kinv = m.k.inverse();
    if (!kinv) return fail("K invertible");
    Mat lhs = m.e * m.f - m.f * m.e;
    Mat rhs = (m.k - *kinv) * (q - q.inverse()).inverse();
    if (lhs != rhs) return fail("E F - F E = (K - K^-1)/(q - q^-1)");
    if (m.k * m.e * *kinv != m.e * q.pow(2)) return fail("K E K^-1 = q^2 E");
    if (m.k * m.f * *kinv != m.f * q.pow(-2)) return fail("K F K^-1 = q^-2 F");
    // nilpotency of index <= n+1
    int d = m.dim();
    Mat ep = Mat::identity(d), fp = Mat::identity(d);
    for (int s = 0; s < d; ++s) {
        ep = ep * m.e;
        fp = fp * m.f;
    }
    if (!ep.is_zero()) return fail("E nilpotent of index <= n+1");
    if (!fp.is_zero()) return fail("F nilpotent of index <= n+1");
    return v;
}

// truncated quasi-R-matrix on M (x) M:
//   Theta = sum_k c_k F^k (x) E^k,  c_k = q^(k(k-1)/2) (q - q^-1)^k / [k]!
// the sum is finite by nilpotency
inline Mat theta_matrix(const UqModule& m) {
    Scalar q = Scalar::v() * Scalar::v();
    int d = m.dim();
    Mat theta(d * d, d * d);
    Mat fp = Mat::identity(d), ep = Mat::identity(d);
    for (int k = 0; k <= m.highest_weight; ++k) {
        if (k > 0) {
            fp = fp * m.f;
            ep = ep * m.e;
        }
        Scalar ck = q.pow(static_cast<long>(k) * (k - 1) / 2) * (q - q.inverse()).pow(k) /
                    quantum_factorial(k);
        theta = theta + fp.kron(ep) * ck;
    }
    return theta;
}

// the commutation factor f(lambda, mu) = v^(lambda mu) on integer weights
inline Scalar commutation_factor(long lambda, long mu) {
    return Scalar::v().pow(lambda * mu);
}

// braiding c^f(x (x) y) = Theta (f(wt x, wt y) y (x) x) on weight vectors;
// the braid equation is a hard postcondition guarding the conventions
inline BraidedVectorSpace build_cf_braiding(const UqModule& m) {
    auto check = validate_uq_module(m);
    if (!check.valid) throw input_error("invalid module: " + check.failing_relation);
    int d = m.dim();
    Mat table(d * d, d * d);
    Mat theta = theta_matrix(m);
    for (int i = 1; i <= d; ++i)
        for (int j = 1; j <= d; ++j) {
            Scalar fij = commutation_factor(m.weights[static_cast<size_t>(i - 1)],
                                            m.weights[static_cast<size_t>(j - 1)]);
            int flipped = pair_index(j, i, d);
            int col = pair_index(i, j, d);
            for (int row = 0; row < d * d; ++row) {
                Scalar v = theta.at(row, flipped) * fij;
                if (!v.is_zero()) table.at(row, col) = v;
            }
        }
    auto b = make_braiding(d, Field::Qv, SparseMat::from_dense(table));
    if (!check_braid_equation(b).pass)
        throw input_error("quasi-R-matrix conventions produced a non-braiding; aborting");
    return b;
}

// --------------------------------------------------------------------------
// the section-6 cross-check report

struct UqReport {
    std::vector<long> weights_w;          // W, descending
    bool p_nonempty = false;              // P = {alpha} iff E M != 0
    std::vector<mpz_class> predicted_invariant_factors; // of G~/N
    int predicted_free_rank = 0;
    int predicted_grouplikes = 0;
    int predicted_skew_primitives = 0;

    frt::ReducedReport reduced;
    bool grouplike_count_matches = false;
    bool upper_images_vanish = false;     // t_ij with j > i die in the quotient
    bool lower_diagonal_skew = false;     // t_{i+1,i} images are skew-primitive
    bool relations_match = false;         // vs the predicted group, degree <= D
    bool right_triangular = false;        // detection succeeds
    bool weight_grading_ok = false;       // c^f respects the weight supports
};

// exact support check: c^f maps M_l (x) M_m into
// sum_{k>=0} M_{m-2k} (x) M_{l+2k}
inline bool check_weight_grading(const UqModule& m, const BraidedVectorSpace& b) {
    int d = m.dim();
    for (int i = 1; i <= d; ++i)
        for (int j = 1; j <= d; ++j)
            for (int a = 1; a <= d; ++a)
                for (int bb = 1; bb <= d; ++bb) {
                    if (b.coeff(a, bb, i, j).is_zero()) continue;
                    long li = m.weights[static_cast<size_t>(i - 1)];
                    long lj = m.weights[static_cast<size_t>(j - 1)];
                    long la = m.weights[static_cast<size_t>(a - 1)];
                    long lb = m.weights[static_cast<size_t>(bb - 1)];
                    long k2 = lj - la; // = 2k
                    if (k2 < 0 || k2 % 2 != 0) return false;
                    if (lb != li + k2) return false;
                }
    return true;
}

inline UqReport uq_report(const UqModule& m, int degree, long cap = 4096) {
    UqReport rep;
    for (long w : m.weights) {
        bool seen = false;
        for (long x : rep.weights_w) seen = seen || x == w;
        if (!seen) rep.weights_w.push_back(w);
    }
    rep.p_nonempty = !m.e.is_zero();

    // predicted G~/N: free group on the L_lambda modulo the kernel of the
    // exponent action x -> sum_lambda x_lambda lambda mu on each M_mu
    int s = static_cast<int>(rep.weights_w.size());
    {
        IntMat cond(s, s);
        for (int r = 0; r < s; ++r)
            for (int c = 0; c < s; ++c)
                cond.at(r, c) = rep.weights_w[static_cast<size_t>(r)] *
                                rep.weights_w[static_cast<size_t>(c)];
        IntMat ker = integer_kernel(cond);
        AbelianQuotient pred = present_quotient(s, ker);
        rep.predicted_invariant_factors = pred.invariant_factors;
        for (const auto& o : pred.orders) rep.predicted_free_rank += o == 0;
        rep.predicted_grouplikes = s;
        rep.predicted_skew_primitives = rep.p_nonempty ? 1 : 0;

        auto b = build_cf_braiding(m);
        rep.weight_grading_ok = check_weight_grading(m, b);
        frt::Truncation t(b, degree, cap);
        auto rad = frt::radical_of(t);
        rep.reduced = frt::reduced_report_from(t, rad);

        int d = m.dim();
        rep.grouplike_count_matches =
            static_cast<int>(rep.reduced.grouplike_images.size()) == s;
        rep.upper_images_vanish = true;
        for (int i = 1; i <= d; ++i)
            for (int j = i + 1; j <= d; ++j) {
                bool vanishes = std::count(rep.reduced.vanishing_generators.begin(),
                                           rep.reduced.vanishing_generators.end(),
                                           frt::gen_index(i, j, d)) > 0;
                rep.upper_images_vanish = rep.upper_images_vanish && vanishes;
            }
        rep.lower_diagonal_skew = true;
        if (rep.p_nonempty)
            for (int i = 1; i < d; ++i) {
                bool skew = false;
                for (const auto& sp : rep.reduced.skew_primitives)
                    skew = skew || sp.generator == frt::gen_index(i + 1, i, d);
                rep.lower_diagonal_skew = rep.lower_diagonal_skew && skew;
            }

        // relations of the grouplike images vs the predicted group: t_ii is
        // the image of L_{weight(i)}
        grouptype::Group pgrp;
        pgrp.kind = grouptype::Group::Kind::FgAbelian;
        for (const auto& o : pred.orders) pgrp.orders.push_back(o.get_si());
        std::vector<grouptype::Group::Elt> gen_elts;
        for (int i = 0; i < d; ++i) {
            int widx = 0;
            for (int c = 0; c < s; ++c)
                if (rep.weights_w[static_cast<size_t>(c)] == m.weights[static_cast<size_t>(i)])
                    widx = c;
            grouptype::Group::Elt e(static_cast<size_t>(s), 0);
            for (int r = 0; r < s; ++r) e[static_cast<size_t>(r)] = pred.u.at(r, widx).get_si();
            gen_elts.push_back(pgrp.reduce(e));
        }
        rep.relations_match = grouptype::grouplike_relations_match(t, rad.basis, pgrp, gen_elts);

        auto det = detect_triangular(b, Side::Right);
        rep.right_triangular = det.cert.has_value();
    }
    return rep;
}

} // namespace uq
} // namespace braidlab

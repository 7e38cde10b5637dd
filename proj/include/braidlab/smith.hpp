#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <vector>

namespace braidlab {

// Dense integer matrix, just enough for Smith normal form work.
class IntMat {
public:
    IntMat() : rows_(0), cols_(0) {}
    IntMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static IntMat identity(int n) {
        IntMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    mpz_class& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const mpz_class& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    bool operator==(const IntMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    IntMat operator*(const IntMat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("IntMat product shape mismatch");
        IntMat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                if (at(i, k) == 0) continue;
                for (int j = 0; j < o.cols_; ++j) r.at(i, j) += at(i, k) * o.at(k, j);
            }
        return r;
    }

    mpz_class det() const {
        if (rows_ != cols_) throw std::invalid_argument("det of non-square IntMat");
        // fraction-free Bareiss
        IntMat m = *this;
        mpz_class prev = 1;
        int sign = 1;
        for (int k = 0; k < rows_ - 1; ++k) {
            if (m.at(k, k) == 0) {
                int sel = -1;
                for (int i = k + 1; i < rows_; ++i)
                    if (m.at(i, k) != 0) {
                        sel = i;
                        break;
                    }
                if (sel < 0) return 0;
                for (int j = 0; j < cols_; ++j) std::swap(m.at(k, j), m.at(sel, j));
                sign = -sign;
            }
            for (int i = k + 1; i < rows_; ++i)
                for (int j = k + 1; j < cols_; ++j) {
                    mpz_class num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                    mpz_class q, r;
                    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
                    m.at(i, j) = q;
                }
            for (int i = k + 1; i < rows_; ++i) m.at(i, k) = 0;
            prev = m.at(k, k);
        }
        return sign * m.at(rows_ - 1, cols_ - 1);
    }

private:
    int rows_, cols_;
    std::vector<mpz_class> a_;
};

struct SmithResult {
    std::vector<mpz_class> invariant_factors; // d1 | d2 | ... (nonzero ones)
    IntMat d;                                 // full diagonal form, U*A*V
    IntMat u, v;                              // unimodular transforms
};

// Smith normal form with transform tracking: u*a*v = d, d diagonal with
// d1 | d2 | ..., det(u), det(v) in {+1,-1}.
inline SmithResult smith_nf(const IntMat& a) {
    int m = a.rows(), n = a.cols();
    SmithResult res;
    res.d = a;
    res.u = IntMat::identity(m);
    res.v = IntMat::identity(n);
    IntMat& d = res.d;
    IntMat& u = res.u;
    IntMat& v = res.v;

    auto swap_rows = [&](int i, int j) {
        if (i == j) return;
        for (int c = 0; c < n; ++c) std::swap(d.at(i, c), d.at(j, c));
        for (int c = 0; c < m; ++c) std::swap(u.at(i, c), u.at(j, c));
    };
    auto swap_cols = [&](int i, int j) {
        if (i == j) return;
        for (int r = 0; r < m; ++r) std::swap(d.at(r, i), d.at(r, j));
        for (int r = 0; r < n; ++r) std::swap(v.at(r, i), v.at(r, j));
    };
    auto add_row = [&](int dst, int src, const mpz_class& f) {
        for (int c = 0; c < n; ++c) d.at(dst, c) += f * d.at(src, c);
        for (int c = 0; c < m; ++c) u.at(dst, c) += f * u.at(src, c);
    };
    auto add_col = [&](int dst, int src, const mpz_class& f) {
        for (int r = 0; r < m; ++r) d.at(r, dst) += f * d.at(r, src);
        for (int r = 0; r < n; ++r) v.at(r, dst) += f * v.at(r, src);
    };
    auto negate_row = [&](int i) {
        for (int c = 0; c < n; ++c) d.at(i, c) = -d.at(i, c);
        for (int c = 0; c < m; ++c) u.at(i, c) = -u.at(i, c);
    };

    int t = 0;
    while (t < m && t < n) {
        // find a nonzero pivot with minimal absolute value
        int pi = -1, pj = -1;
        mpz_class best;
        for (int i = t; i < m; ++i)
            for (int j = t; j < n; ++j)
                if (d.at(i, j) != 0) {
                    mpz_class av = abs(d.at(i, j));
                    if (pi < 0 || av < best) {
                        best = av;
                        pi = i;
                        pj = j;
                    }
                }
        if (pi < 0) break;
        swap_rows(t, pi);
        swap_cols(t, pj);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (int i = t + 1; i < m; ++i) {
                if (d.at(i, t) == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), d.at(i, t).get_mpz_t(), d.at(t, t).get_mpz_t());
                add_row(i, t, -q);
                if (d.at(i, t) != 0) {
                    swap_rows(t, i);
                    clean = false;
                }
            }
            for (int j = t + 1; j < n; ++j) {
                if (d.at(t, j) == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), d.at(t, j).get_mpz_t(), d.at(t, t).get_mpz_t());
                add_col(j, t, -q);
                if (d.at(t, j) != 0) {
                    swap_cols(t, j);
                    clean = false;
                }
            }
        }
        if (d.at(t, t) < 0) negate_row(t);
        // enforce divisibility d_t | d_ij for the remaining block
        bool redo = false;
        for (int i = t + 1; i < m && !redo; ++i)
            for (int j = t + 1; j < n && !redo; ++j)
                if (d.at(i, j) % d.at(t, t) != 0) {
                    add_row(t, i, 1);
                    redo = true;
                }
        if (redo) continue;
        ++t;
    }
    for (int i = 0; i < std::min(m, n); ++i)
        if (d.at(i, i) != 0) res.invariant_factors.push_back(d.at(i, i));
    return res;
}

// basis of { x : A x = 0 } over Z, as matrix columns
inline IntMat integer_kernel(const IntMat& a) {
    auto s = smith_nf(a);
    int rank = static_cast<int>(s.invariant_factors.size());
    int n = a.cols();
    IntMat k(n, n - rank);
    for (int j = rank; j < n; ++j)
        for (int i = 0; i < n; ++i) k.at(i, j - rank) = s.v.at(i, j);
    return k;
}

// Z^s modulo the column span of `relations`, presented by invariant factors
// (1-entries dropped, 0 meaning a free summand) together with the
// unimodular coordinate change: x mod relations corresponds to u*x in the
// presented coordinates
struct AbelianQuotient {
    std::vector<mpz_class> orders; // one per presented generator; 0 = free
    IntMat u, uinv;                // new = u * old
    std::vector<mpz_class> invariant_factors; // torsion factors > 1
};

inline AbelianQuotient present_quotient(int s, const IntMat& relations) {
    IntMat r = relations;
    if (r.rows() != s) throw std::invalid_argument("relation matrix shape");
    if (r.cols() == 0) r = IntMat(s, 1); // the zero column
    auto sm = smith_nf(r);
    AbelianQuotient q;
    q.u = sm.u;
    // u is unimodular: smith_nf(u) gives U2 u V2 = I, so u^{-1} = V2 U2
    auto si = smith_nf(sm.u);
    q.uinv = si.v * si.u;
    int rank = static_cast<int>(sm.invariant_factors.size());
    for (int i = 0; i < s; ++i) {
        mpz_class d = i < rank ? sm.invariant_factors[static_cast<size_t>(i)] : mpz_class(0);
        q.orders.push_back(d);
        if (d > 1) q.invariant_factors.push_back(d);
    }
    return q;
}

} // namespace braidlab

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "braidlab/braiding.hpp"
#include "braidlab/eigen.hpp"
#include "braidlab/matrix.hpp"

namespace braidlab {

struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace frt {

// generator index of t_{ij}, 1-based legs
inline int gen_index(int i, int j, int n) { return pair_index(i, j, n); }
inline std::pair<int, int> gen_legs(int g, int n) { return index_pair(g, n); }

// rank of a degree-d monomial given most-significant-first generator digits
inline long mono_rank(const std::vector<int>& digits, int n) {
    long r = 0;
    for (int g : digits) r = r * (n * n) + g;
    return r;
}
inline std::vector<int> mono_digits(long rank, int d, int n) {
    std::vector<int> out(static_cast<size_t>(d));
    for (int t = d - 1; t >= 0; --t) {
        out[static_cast<size_t>(t)] = static_cast<int>(rank % (n * n));
        rank /= n * n;
    }
    return out;
}

// r-form on generators: r(t_ij (x) t_kl) equals the coefficient of
// m_j (x) m_l in c(m_k (x) m_i)
struct RForm {
    int n = 0;
    Mat gen; // gen(gen_index(i,j), gen_index(k,l)) = r(t_ij (x) t_kl)
};

inline RForm rform_generators(const BraidedVectorSpace& b) {
    RForm rf;
    rf.n = b.dim;
    int n = b.dim;
    rf.gen = Mat(n * n, n * n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k)
                for (int l = 1; l <= n; ++l)
                    rf.gen.at(gen_index(i, j, n), gen_index(k, l, n)) = b.coeff(j, l, k, i);
    return rf;
}

struct RelationSpace {
    int n = 0;
    int dim = 0;
    std::vector<SparseVec> basis; // RREF rows over degree-2 monomial ranks
};

// quadratic RTT relation space: for all i,j,k,l
//   sum_{p,q} c^{pq}_{ij} t_pk (x) t_ql - sum_{p,q} c^{kl}_{pq} t_ip (x) t_jq
inline RelationSpace rtt_relations(const BraidedVectorSpace& b) {
    int n = b.dim;
    SparseEchelon ech(n * n * n * n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k)
                for (int l = 1; l <= n; ++l) {
                    SparseVec row;
                    for (int p = 1; p <= n; ++p)
                        for (int q = 1; q <= n; ++q) {
                            Scalar c1 = b.coeff(p, q, i, j);
                            if (!c1.is_zero())
                                sparse_add_to(row,
                                              mono_rank({gen_index(p, k, n), gen_index(q, l, n)}, n),
                                              c1);
                            Scalar c2 = b.coeff(k, l, p, q);
                            if (!c2.is_zero())
                                sparse_add_to(row,
                                              mono_rank({gen_index(i, p, n), gen_index(j, q, n)}, n),
                                              -c2);
                        }
                    ech.insert(std::move(row));
                }
    ech.make_reduced();
    RelationSpace rs;
    rs.n = n;
    rs.dim = ech.rank();
    for (const auto& [piv, row] : ech.rows()) rs.basis.push_back(row);
    return rs;
}

// --------------------------------------------------------------------------
// The degree-truncated FRT bialgebra A(c)_{<=D}: per-degree monomial bases
// of the quadratic algebra, normal forms, comultiplication, counit, and the
// recursively extended r-form.
class Truncation {
public:
    Truncation(const BraidedVectorSpace& b, int degree, long cap = 4096)
        : b_(b), n_(b.dim), deg_(degree), rform_(rform_generators(b)) {
        if (degree < 1) throw input_error("degree must be >= 1");
        long size = 1;
        for (int d = 0; d < degree; ++d) {
            size *= static_cast<long>(n_) * n_;
            if (size > cap)
                throw resource_error("n^(2D) exceeds the configured resource cap");
        }
        relations_ = rtt_relations(b);
        build();
    }
    // the truncation keeps a reference to the braiding
    Truncation(BraidedVectorSpace&&, int, long = 4096) = delete;

    int dim_at(int d) const { return static_cast<int>(basis_[static_cast<size_t>(d)].size()); }
    int degree_bound() const { return deg_; }
    int n() const { return n_; }
    Field field() const { return b_.field; }
    const BraidedVectorSpace& braiding() const { return b_; }
    const RForm& rform() const { return rform_; }
    const RelationSpace& relations() const { return relations_; }

    std::vector<int> dims() const {
        std::vector<int> out;
        for (int d = 0; d <= deg_; ++d) out.push_back(dim_at(d));
        return out;
    }

    // global indexing of the filtered basis of A_{<=D}
    int total_dim() const { return offsets_.back(); }
    int global_index(int d, int pos) const { return offsets_[static_cast<size_t>(d)] + pos; }
    std::pair<int, int> degree_pos(int idx) const {
        int d = 0;
        while (idx >= offsets_[static_cast<size_t>(d + 1)]) ++d;
        return {d, idx - offsets_[static_cast<size_t>(d)]};
    }
    long basis_monomial(int d, int pos) const {
        return basis_[static_cast<size_t>(d)][static_cast<size_t>(pos)];
    }
    // degree-1 monomials carry no relations; generator g sits at position g
    int generator_global(int g) const { return global_index(1, g); }

    // normal form of an arbitrary degree-d monomial: positions within the
    // degree-d basis
    const SparseVec& normal_form(int d, long rank) const {
        auto& memo = nf_memo_[static_cast<size_t>(d)];
        auto it = memo.find(rank);
        if (it != memo.end()) return it->second;
        SparseVec nf;
        auto pit = pivot_row_[static_cast<size_t>(d)].find(rank);
        if (pit == pivot_row_[static_cast<size_t>(d)].end()) {
            nf[basis_pos_[static_cast<size_t>(d)].at(rank)] = Scalar(1L);
        } else {
            for (const auto& [col, val] : *pit->second) {
                if (col == rank) continue;
                nf[basis_pos_[static_cast<size_t>(d)].at(col)] = -val;
            }
        }
        return memo.emplace(rank, std::move(nf)).first->second;
    }

    // product of two basis elements, as a normal form at degree d1+d2
    SparseVec multiply(int d1, const SparseVec& a, int d2, const SparseVec& bvec) const {
        SparseVec out;
        for (const auto& [pa, va] : a)
            for (const auto& [pb, vb] : bvec) {
                long ra = basis_monomial(d1, pa);
                long rb = basis_monomial(d2, pb);
                long rank = ra;
                for (int t = 0; t < d2; ++t) rank *= static_cast<long>(n_) * n_;
                rank += rb;
                const SparseVec& nf = normal_form(d1 + d2, rank);
                for (const auto& [pc, vc] : nf) sparse_add_to(out, pc, va * vb * vc);
            }
        return out;
    }

    Scalar counit_monomial(int d, long rank) const {
        for (int g : mono_digits(rank, d, n_)) {
            auto [i, j] = gen_legs(g, n_);
            if (i != j) return Scalar();
        }
        return Scalar(1L);
    }

    Scalar counit_global(int idx) const {
        if (idx == 0) return Scalar(1L);
        auto [d, pos] = degree_pos(idx);
        return counit_monomial(d, basis_monomial(d, pos));
    }

    // comultiplication of a global basis element, as a sparse tensor over
    // pairs of global indices
    const std::map<std::pair<int, int>, Scalar>& delta_global(int idx) const {
        auto it = delta_memo_.find(idx);
        if (it != delta_memo_.end()) return it->second;
        std::map<std::pair<int, int>, Scalar> out;
        if (idx == 0) {
            out[{0, 0}] = Scalar(1L);
        } else {
            auto [d, pos] = degree_pos(idx);
            long rank = basis_monomial(d, pos);
            auto digits = mono_digits(rank, d, n_);
            std::vector<int> middle(static_cast<size_t>(d), 1);
            while (true) {
                std::vector<int> left(static_cast<size_t>(d)), right(static_cast<size_t>(d));
                for (int t = 0; t < d; ++t) {
                    auto [i, j] = gen_legs(digits[static_cast<size_t>(t)], n_);
                    int l = middle[static_cast<size_t>(t)];
                    left[static_cast<size_t>(t)] = gen_index(i, l, n_);
                    right[static_cast<size_t>(t)] = gen_index(l, j, n_);
                }
                const SparseVec& nfl = normal_form(d, mono_rank(left, n_));
                if (!nfl.empty()) {
                    const SparseVec& nfr = normal_form(d, mono_rank(right, n_));
                    for (const auto& [pa, va] : nfl)
                        for (const auto& [pb, vb] : nfr) {
                            Scalar v = va * vb;
                            if (v.is_zero()) continue;
                            auto key = std::make_pair(global_index(d, pa), global_index(d, pb));
                            auto at = out.find(key);
                            if (at == out.end())
                                out.emplace(key, v);
                            else {
                                at->second += v;
                                if (at->second.is_zero()) out.erase(at);
                            }
                        }
                }
                // advance the middle-index vector
                int t = d - 1;
                while (t >= 0 && middle[static_cast<size_t>(t)] == n_) {
                    middle[static_cast<size_t>(t)] = 1;
                    --t;
                }
                if (t < 0) break;
                ++middle[static_cast<size_t>(t)];
            }
        }
        return delta_memo_.emplace(idx, std::move(out)).first->second;
    }

    // r(t_g (x) w) for a raw degree-d monomial w, by the law
    // r(t_ij (x) b c) = sum_p r(t_pj (x) b) r(t_ip (x) c)
    Scalar rform_second(int g, int d, long rank) const {
        auto [i, j] = gen_legs(g, n_);
        if (d == 0) return i == j ? Scalar(1L) : Scalar();
        auto key = std::make_tuple(g, d, rank);
        auto it = rsecond_memo_.find(key);
        if (it != rsecond_memo_.end()) return it->second;
        long tail_size = 1;
        for (int t = 0; t < d - 1; ++t) tail_size *= static_cast<long>(n_) * n_;
        int head = static_cast<int>(rank / tail_size);
        long tail = rank % tail_size;
        Scalar acc;
        for (int p = 1; p <= n_; ++p) {
            Scalar r1 = rform_.gen.at(gen_index(p, j, n_), head);
            if (r1.is_zero()) continue;
            acc += r1 * rform_second(gen_index(i, p, n_), d - 1, tail);
        }
        rsecond_memo_.emplace(key, acc);
        return acc;
    }

    Scalar rform_second_global(int g, int idx) const {
        if (idx == 0) {
            auto [i, j] = gen_legs(g, n_);
            return i == j ? Scalar(1L) : Scalar();
        }
        auto [d, pos] = degree_pos(idx);
        return rform_second(g, d, basis_monomial(d, pos));
    }

    // r(w (x) t_g) for a raw degree-d monomial w, by the law
    // r(a b (x) t_kl) = sum_p r(a (x) t_kp) r(b (x) t_pl)
    Scalar rform_first(int d, long rank, int g) const {
        auto [k, l] = gen_legs(g, n_);
        if (d == 0) return k == l ? Scalar(1L) : Scalar();
        long tail_size = 1;
        for (int t = 0; t < d - 1; ++t) tail_size *= static_cast<long>(n_) * n_;
        int head = static_cast<int>(rank / tail_size);
        long tail = rank % tail_size;
        Scalar acc;
        for (int p = 1; p <= n_; ++p) {
            Scalar r1 = rform_.gen.at(head, gen_index(k, p, n_));
            if (r1.is_zero()) continue;
            acc += r1 * rform_first(d - 1, tail, gen_index(p, l, n_));
        }
        return acc;
    }

    // fully general r(x (x) w) on raw monomials
    Scalar rform_pair(int d1, long rank1, int d2, long rank2) const {
        if (d1 == 0) return counit_monomial(d2, rank2);
        if (d2 == 0) return counit_monomial(d1, rank1);
        if (d1 == 1) return rform_second(static_cast<int>(rank1), d2, rank2);
        // peel the first generator of the first slot and split the second
        long tail_size = 1;
        for (int t = 0; t < d1 - 1; ++t) tail_size *= static_cast<long>(n_) * n_;
        int head = static_cast<int>(rank1 / tail_size);
        long tail = rank1 % tail_size;
        // Delta(w) = sum over middle vectors
        auto digits = mono_digits(rank2, d2, n_);
        std::vector<int> middle(static_cast<size_t>(d2), 1);
        Scalar acc;
        while (true) {
            std::vector<int> left(static_cast<size_t>(d2)), right(static_cast<size_t>(d2));
            for (int t = 0; t < d2; ++t) {
                auto [i, j] = gen_legs(digits[static_cast<size_t>(t)], n_);
                int l = middle[static_cast<size_t>(t)];
                left[static_cast<size_t>(t)] = gen_index(i, l, n_);
                right[static_cast<size_t>(t)] = gen_index(l, j, n_);
            }
            Scalar r1 = rform_second(head, d2, mono_rank(left, n_));
            if (!r1.is_zero()) acc += r1 * rform_pair(d1 - 1, tail, d2, mono_rank(right, n_));
            int t = d2 - 1;
            while (t >= 0 && middle[static_cast<size_t>(t)] == n_) {
                middle[static_cast<size_t>(t)] = 1;
                --t;
            }
            if (t < 0) break;
            ++middle[static_cast<size_t>(t)];
        }
        return acc;
    }

private:
    void build() {
        offsets_ = {0, 1};
        basis_.assign(static_cast<size_t>(deg_) + 1, {});
        basis_pos_.assign(static_cast<size_t>(deg_) + 1, {});
        pivot_row_.assign(static_cast<size_t>(deg_) + 1, {});
        nf_memo_.assign(static_cast<size_t>(deg_) + 1, {});
        relation_rows_.assign(static_cast<size_t>(deg_) + 1, {});

        basis_[0] = {0};
        basis_pos_[0][0] = 0;

        long count = static_cast<long>(n_) * n_;
        basis_[1].reserve(static_cast<size_t>(count));
        for (long r = 0; r < count; ++r) {
            basis_pos_[1][r] = static_cast<int>(basis_[1].size());
            basis_[1].push_back(r);
        }
        offsets_.push_back(offsets_.back() + static_cast<int>(count));

        long degree_size = count;
        for (int d = 2; d <= deg_; ++d) {
            degree_size *= count;
            SparseEchelon ech(static_cast<int>(degree_size));
            // span^{(x)i} (x) R (x) span^{(x)(d-2-i)}
            for (int i = 0; i <= d - 2; ++i) {
                long prefixes = 1, suffixes = 1;
                for (int t = 0; t < i; ++t) prefixes *= count;
                for (int t = 0; t < d - 2 - i; ++t) suffixes *= count;
                for (long p = 0; p < prefixes; ++p)
                    for (const auto& rel : relations_.basis)
                        for (long s = 0; s < suffixes; ++s) {
                            SparseVec row;
                            for (const auto& [c, v] : rel) {
                                long rank = (p * count * count + c) * suffixes + s;
                                row[static_cast<int>(rank)] = v;
                            }
                            ech.insert(std::move(row));
                        }
            }
            ech.make_reduced();
            for (const auto& [piv, row] : ech.rows())
                relation_rows_[static_cast<size_t>(d)].push_back(row);
            for (const auto& row : relation_rows_[static_cast<size_t>(d)])
                pivot_row_[static_cast<size_t>(d)][row.begin()->first] = &row;
            for (long r = 0; r < degree_size; ++r) {
                if (pivot_row_[static_cast<size_t>(d)].count(r)) continue;
                basis_pos_[static_cast<size_t>(d)][r] =
                    static_cast<int>(basis_[static_cast<size_t>(d)].size());
                basis_[static_cast<size_t>(d)].push_back(r);
            }
            offsets_.push_back(offsets_.back() +
                               static_cast<int>(basis_[static_cast<size_t>(d)].size()));
        }
    }

    const BraidedVectorSpace& b_;
    int n_, deg_;
    RForm rform_;
    RelationSpace relations_;
    std::vector<std::vector<long>> basis_;            // per degree: monomial ranks
    std::vector<std::map<long, int>> basis_pos_;      // rank -> local position
    std::vector<std::vector<SparseVec>> relation_rows_;
    std::vector<std::map<long, const SparseVec*>> pivot_row_;
    std::vector<int> offsets_;
    mutable std::vector<std::map<long, SparseVec>> nf_memo_;
    mutable std::map<int, std::map<std::pair<int, int>, Scalar>> delta_memo_;
    mutable std::map<std::tuple<int, int, long>, Scalar> rsecond_memo_;
};

// spec surface: recursive r-form extension with an explicit slot choice;
// x is a raw monomial (degree, rank), h a raw monomial of the truncation
inline Scalar extend_rform(const Truncation& t, int xdeg, long xrank, int hdeg, long hrank,
                           bool x_in_first_slot) {
    if (x_in_first_slot) return t.rform_pair(xdeg, xrank, hdeg, hrank);
    return t.rform_pair(hdeg, hrank, xdeg, xrank);
}

// --------------------------------------------------------------------------
// largest coideal inside a prescribed annihilator subspace, by the fixpoint
// J^0 = W, J^{k+1} = { h in J^k : Delta h in J^k (x) A + A (x) J^k }

struct CoidealResult {
    std::vector<SparseVec> basis;   // RREF rows over the ambient basis
    int iterations = 0;
};

namespace detail {

struct QuotientProjector {
    int dim;
    std::map<int, const SparseVec*> pivot_rows;

    // sparse projection of e_i onto the complement coordinates
    SparseVec project_unit(int i) const {
        SparseVec out;
        auto it = pivot_rows.find(i);
        if (it == pivot_rows.end()) {
            out[i] = Scalar(1L);
            return out;
        }
        for (const auto& [c, v] : *it->second) {
            if (c == i) continue;
            // RREF rows may still reference other pivots only transiently;
            // rows are fully reduced, so c is a free coordinate here
            out[c] = -v;
        }
        return out;
    }
};

} // namespace detail

inline CoidealResult largest_coideal(
    int dim, const std::function<const std::map<std::pair<int, int>, Scalar>&(int)>& delta,
    const std::vector<Vec>& condition_rows) {
    // W = kernel of the stacked condition rows
    Mat cond(static_cast<int>(condition_rows.size()), dim);
    for (size_t r = 0; r < condition_rows.size(); ++r)
        for (int c = 0; c < dim; ++c) cond.at(static_cast<int>(r), c) = condition_rows[r][static_cast<size_t>(c)];
    std::vector<SparseVec> current;
    {
        SparseEchelon ech(dim);
        for (const auto& k : cond.kernel()) {
            SparseVec row;
            for (int c = 0; c < dim; ++c)
                if (!k[static_cast<size_t>(c)].is_zero()) row[c] = k[static_cast<size_t>(c)];
            ech.insert(std::move(row));
        }
        ech.make_reduced();
        for (const auto& [p, row] : ech.rows()) current.push_back(row);
    }

    CoidealResult res;
    while (true) {
        ++res.iterations;
        if (current.empty()) break;
        detail::QuotientProjector proj{dim, {}};
        for (const auto& row : current) proj.pivot_rows[row.begin()->first] = &row;
        // cache (pi (x) pi) Delta(e_i) for the basis elements that occur
        std::map<int, std::map<std::pair<int, int>, Scalar>> pidelta;
        auto pidelta_of = [&](int i) -> const std::map<std::pair<int, int>, Scalar>& {
            auto it = pidelta.find(i);
            if (it != pidelta.end()) return it->second;
            std::map<std::pair<int, int>, Scalar> out;
            for (const auto& [ab, v] : delta(i)) {
                SparseVec pa = proj.project_unit(ab.first);
                if (pa.empty()) continue;
                SparseVec pb = proj.project_unit(ab.second);
                if (pb.empty()) continue;
                for (const auto& [a2, va] : pa)
                    for (const auto& [b2, vb] : pb) {
                        auto key = std::make_pair(a2, b2);
                        Scalar add = v * va * vb;
                        auto at = out.find(key);
                        if (at == out.end())
                            out.emplace(key, add);
                        else {
                            at->second += add;
                            if (at->second.is_zero()) out.erase(at);
                        }
                    }
            }
            return pidelta.emplace(i, std::move(out)).first->second;
        };

        // kernel of w -> (pi (x) pi) Delta(w) over the current space
        SparseEchelon ech(dim * dim);
        int aug = 0;
        for (const auto& w : current) {
            SparseVec flat;
            for (const auto& [i, wi] : w)
                for (const auto& [ab, v] : pidelta_of(i))
                    sparse_add_to(flat, ab.first * dim + ab.second, wi * v);
            flat[dim * dim + aug] = Scalar(1L);
            ech.insert(std::move(flat));
            ++aug;
        }
        std::vector<SparseVec> next;
        {
            SparseEchelon reduced(dim);
            for (const auto& combo : ech.null_combos()) {
                SparseVec vec;
                for (const auto& [a, coef] : combo) {
                    int idx = a - dim * dim;
                    sparse_axpy(vec, coef, current[static_cast<size_t>(idx)]);
                }
                reduced.insert(std::move(vec));
            }
            reduced.make_reduced();
            for (const auto& [p, row] : reduced.rows()) next.push_back(row);
        }
        if (next.size() == current.size()) break;
        current = std::move(next);
    }
    res.basis = std::move(current);
    return res;
}

// post-hoc containment check: Delta(J) inside J (x) A + A (x) J and eps(J)=0
inline bool verify_coideal(
    int dim, const std::function<const std::map<std::pair<int, int>, Scalar>&(int)>& delta,
    const std::function<Scalar(int)>& counit, const std::vector<SparseVec>& jbasis) {
    detail::QuotientProjector proj{dim, {}};
    for (const auto& row : jbasis) proj.pivot_rows[row.begin()->first] = &row;
    for (const auto& w : jbasis) {
        Scalar eps;
        for (const auto& [i, wi] : w) eps += wi * counit(i);
        if (!eps.is_zero()) return false;
        std::map<std::pair<int, int>, Scalar> img;
        for (const auto& [i, wi] : w)
            for (const auto& [ab, v] : delta(i)) {
                for (const auto& [a2, va] : proj.project_unit(ab.first))
                    for (const auto& [b2, vb] : proj.project_unit(ab.second)) {
                        auto key = std::make_pair(a2, b2);
                        Scalar add = wi * v * va * vb;
                        auto at = img.find(key);
                        if (at == img.end())
                            img.emplace(key, add);
                        else {
                            at->second += add;
                            if (at->second.is_zero()) img.erase(at);
                        }
                    }
            }
        if (!img.empty()) return false;
    }
    return true;
}

// --------------------------------------------------------------------------
// radical truncation

struct RadicalTruncation {
    std::vector<SparseVec> basis;    // RREF rows over the global filtered basis
    std::vector<int> filtered_dims;  // dim (J intersect A_{<=d}) for d = 0..D
    std::vector<int> quotient_graded_dims; // dims of the associated graded quotient
};

inline RadicalTruncation radical_of(const Truncation& t) {
    int m = t.total_dim();
    std::vector<Vec> conds;
    {
        Vec eps(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) eps[static_cast<size_t>(i)] = t.counit_global(i);
        conds.push_back(std::move(eps));
    }
    int n = t.n();
    for (int g = 0; g < n * n; ++g) {
        Vec row(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) row[static_cast<size_t>(i)] = t.rform_second_global(g, i);
        conds.push_back(std::move(row));
    }
    auto delta = [&t](int i) -> const std::map<std::pair<int, int>, Scalar>& {
        return t.delta_global(i);
    };
    CoidealResult cr = largest_coideal(m, delta, conds);

    RadicalTruncation out;
    out.basis = std::move(cr.basis);
    // filtered dimensions: J is RREF'd over a degree-ordered basis, so the
    // rows supported inside A_{<=d} are exactly those counted by their
    // largest occupied index
    for (int d = 0; d <= t.degree_bound(); ++d) {
        int bound = t.global_index(d, t.dim_at(d) - 1);
        // dim(J intersect A_{<=d}): combinations of J rows whose coordinates
        // beyond A_{<=d} cancel, via kernel of the tail projection
        SparseEchelon tail(m);
        int aug = 0;
        for (const auto& w : out.basis) {
            SparseVec tail_part;
            for (const auto& [c, v] : w)
                if (c > bound) tail_part[c] = v;
            tail_part[m + aug] = Scalar(1L);
            tail.insert(std::move(tail_part));
            ++aug;
        }
        int dim_d = 0;
        for (const auto& combo : tail.null_combos()) {
            (void)combo;
            ++dim_d;
        }
        out.filtered_dims.push_back(dim_d);
    }
    for (int d = 0; d <= t.degree_bound(); ++d) {
        int a_filtered = 0;
        for (int e = 0; e <= d; ++e) a_filtered += t.dim_at(e);
        int prev_a = a_filtered - t.dim_at(d);
        int q_d = (a_filtered - out.filtered_dims[static_cast<size_t>(d)]) -
                  (d == 0 ? 0 : prev_a - out.filtered_dims[static_cast<size_t>(d - 1)]);
        out.quotient_graded_dims.push_back(q_d);
    }
    return out;
}

inline RadicalTruncation radical_truncation(const BraidedVectorSpace& b, int degree,
                                            long cap = 4096) {
    Truncation t(b, degree, cap);
    return radical_of(t);
}

// --------------------------------------------------------------------------
// reduced quotient report

struct SkewPrimitive {
    int generator = 0;      // generator index of the skew-primitive image
    int grouplike_g = 0;    // Delta x = x (x) g + h (x) x
    int grouplike_h = 0;
};

struct ReducedReport {
    std::vector<int> a_dims;              // graded dims of A(c)
    std::vector<int> radical_filtered;    // dim J_{<=d}
    std::vector<int> quotient_graded;     // graded dims of the quotient
    std::vector<int> vanishing_generators;
    std::vector<int> grouplike_generators;
    std::vector<SparseVec> grouplike_images; // distinct images, one per class
    std::vector<SkewPrimitive> skew_primitives;
    bool grouplike_commutators_vanish = true; // in degree 2, when D >= 2
    std::vector<Mat> grouplike_actions;       // one per distinct image
    bool diagonal_action = false;
    bool m_reduced = true;
    bool reconstruction_ok = false;
};

namespace detail {

struct QuotientData {
    int m = 0;
    std::vector<int> free_cols;       // quotient coordinates (global indices)
    std::map<int, int> col_pos;
    QuotientProjector proj;

    SparseVec project(const SparseVec& x) const {
        SparseVec out;
        for (const auto& [i, v] : x) sparse_axpy(out, v, proj.project_unit(i));
        return out;
    }
};

inline QuotientData make_quotient(int m, const std::vector<SparseVec>& jbasis) {
    QuotientData q;
    q.m = m;
    for (const auto& row : jbasis) q.proj.pivot_rows[row.begin()->first] = &row;
    for (int i = 0; i < m; ++i)
        if (!q.proj.pivot_rows.count(i)) {
            q.col_pos[i] = static_cast<int>(q.free_cols.size());
            q.free_cols.push_back(i);
        }
    q.proj.dim = m;
    return q;
}

} // namespace detail

inline ReducedReport reduced_report_from(const Truncation& t, const RadicalTruncation& rad) {
    const BraidedVectorSpace& b = t.braiding();
    int degree = t.degree_bound();
    int n = b.dim;
    int m = t.total_dim();
    ReducedReport rep;
    rep.a_dims = t.dims();

    auto delta = [&t](int i) -> const std::map<std::pair<int, int>, Scalar>& {
        return t.delta_global(i);
    };

    rep.radical_filtered = rad.filtered_dims;
    rep.quotient_graded = rad.quotient_graded_dims;

    auto q = detail::make_quotient(m, rad.basis);

    // (a) generator images that vanish
    std::vector<SparseVec> gen_images(static_cast<size_t>(n * n));
    for (int g = 0; g < n * n; ++g) {
        SparseVec unit;
        unit[t.generator_global(g)] = Scalar(1L);
        gen_images[static_cast<size_t>(g)] = q.project(unit);
        if (gen_images[static_cast<size_t>(g)].empty()) rep.vanishing_generators.push_back(g);
    }

    // quotient comultiplication of a projected element
    auto delta_bar = [&](const SparseVec& xbar) {
        std::map<std::pair<int, int>, Scalar> out;
        for (const auto& [i, v] : xbar)
            for (const auto& [ab, w] : delta(i)) {
                SparseVec pa = q.proj.project_unit(ab.first);
                if (pa.empty()) continue;
                SparseVec pb = q.proj.project_unit(ab.second);
                for (const auto& [a2, va] : pa)
                    for (const auto& [b2, vb] : pb) {
                        auto key = std::make_pair(a2, b2);
                        Scalar add = v * w * va * vb;
                        auto at = out.find(key);
                        if (at == out.end())
                            out.emplace(key, add);
                        else {
                            at->second += add;
                            if (at->second.is_zero()) out.erase(at);
                        }
                    }
            }
        return out;
    };
    auto tensor_of = [](const SparseVec& x, const SparseVec& y) {
        std::map<std::pair<int, int>, Scalar> out;
        for (const auto& [a, va] : x)
            for (const auto& [bb, vb] : y) out[{a, bb}] = va * vb;
        return out;
    };
    auto add_into = [](std::map<std::pair<int, int>, Scalar>& acc,
                       const std::map<std::pair<int, int>, Scalar>& x) {
        for (const auto& [k, v] : x) {
            auto at = acc.find(k);
            if (at == acc.end())
                acc.emplace(k, v);
            else {
                at->second += v;
                if (at->second.is_zero()) acc.erase(at);
            }
        }
    };

    // (b) grouplike generator images; several generators may share one image
    for (int g = 0; g < n * n; ++g) {
        const SparseVec& img = gen_images[static_cast<size_t>(g)];
        if (img.empty()) continue;
        Scalar eps;
        for (const auto& [i, v] : img) eps += v * t.counit_global(i);
        if (!eps.is_one()) continue;
        if (delta_bar(img) == tensor_of(img, img)) {
            rep.grouplike_generators.push_back(g);
            bool seen = false;
            for (const auto& other : rep.grouplike_images) seen = seen || other == img;
            if (!seen) rep.grouplike_images.push_back(img);
        }
    }

    // (c) skew-primitive generator images among the non-grouplike survivors
    for (int g = 0; g < n * n; ++g) {
        const SparseVec& img = gen_images[static_cast<size_t>(g)];
        if (img.empty()) continue;
        if (std::count(rep.grouplike_generators.begin(), rep.grouplike_generators.end(), g))
            continue;
        auto dx = delta_bar(img);
        bool found = false;
        for (int gg : rep.grouplike_generators) {
            for (int hh : rep.grouplike_generators) {
                auto expect = tensor_of(img, gen_images[static_cast<size_t>(gg)]);
                add_into(expect, tensor_of(gen_images[static_cast<size_t>(hh)], img));
                if (dx == expect) {
                    rep.skew_primitives.push_back({g, gg, hh});
                    found = true;
                    break;
                }
            }
            if (found) break;
        }
    }

    // (d) commutators of grouplikes vanish in degree 2
    if (degree >= 2) {
        for (size_t a = 0; a < rep.grouplike_generators.size(); ++a)
            for (size_t bidx = a + 1; bidx < rep.grouplike_generators.size(); ++bidx) {
                int g1 = rep.grouplike_generators[a], g2 = rep.grouplike_generators[bidx];
                SparseVec nf1 = t.normal_form(2, mono_rank({g1, g2}, n));
                SparseVec nf2 = t.normal_form(2, mono_rank({g2, g1}, n));
                SparseVec comm;
                for (const auto& [p, v] : nf1) sparse_add_to(comm, t.global_index(2, p), v);
                for (const auto& [p, v] : nf2) sparse_add_to(comm, t.global_index(2, p), -v);
                if (!q.project(comm).empty()) rep.grouplike_commutators_vanish = false;
            }
    }

    // (e) grouplike actions on M, and simultaneous diagonalizability
    auto action_of = [&](const SparseVec& img) {
        // lift: quotient coordinates are global basis elements themselves
        Mat rho(n, n);
        for (int i = 1; i <= n; ++i)
            for (int l = 1; l <= n; ++l) {
                Scalar v;
                for (const auto& [idx, c] : img)
                    v += c * t.rform_second_global(gen_index(i, l, n), idx);
                rho.at(l - 1, i - 1) = v;
            }
        return rho;
    };
    for (const auto& img : rep.grouplike_images) rep.grouplike_actions.push_back(action_of(img));
    rep.diagonal_action = simuldiag(rep.grouplike_actions, b.field).ok;

    // (f) M-reducedness of the quotient: the largest coideal of the quotient
    // annihilating M is zero
    {
        int mq = static_cast<int>(q.free_cols.size());
        // quotient Delta in quotient coordinates
        std::map<int, std::map<std::pair<int, int>, Scalar>> qdelta;
        for (int c = 0; c < mq; ++c) {
            SparseVec unit;
            unit[q.free_cols[static_cast<size_t>(c)]] = Scalar(1L);
            std::map<std::pair<int, int>, Scalar> dd;
            for (const auto& [ab, v] : delta_bar(unit)) {
                dd[{q.col_pos.at(ab.first), q.col_pos.at(ab.second)}] = v;
            }
            qdelta[c] = std::move(dd);
        }
        std::vector<Vec> conds;
        {
            Vec eps(static_cast<size_t>(mq));
            for (int c = 0; c < mq; ++c)
                eps[static_cast<size_t>(c)] = t.counit_global(q.free_cols[static_cast<size_t>(c)]);
            conds.push_back(std::move(eps));
        }
        for (int g = 0; g < n * n; ++g) {
            Vec row(static_cast<size_t>(mq));
            for (int c = 0; c < mq; ++c)
                row[static_cast<size_t>(c)] =
                    t.rform_second_global(g, q.free_cols[static_cast<size_t>(c)]);
            conds.push_back(std::move(row));
        }
        auto qdelta_fn = [&qdelta](int i) -> const std::map<std::pair<int, int>, Scalar>& {
            return qdelta.at(i);
        };
        auto cr = largest_coideal(mq, qdelta_fn, conds);
        rep.m_reduced = cr.basis.empty();
    }

    // (g) braiding reconstruction from the quotient coaction and action:
    // coefficient of m_k (x) m_l in c(m_i (x) m_j) equals
    // r(t_jk (x) lift of the image of t_il)
    {
        rep.reconstruction_ok = true;
        for (int i = 1; i <= n && rep.reconstruction_ok; ++i)
            for (int j = 1; j <= n && rep.reconstruction_ok; ++j)
                for (int k = 1; k <= n && rep.reconstruction_ok; ++k)
                    for (int l = 1; l <= n; ++l) {
                        const SparseVec& img = gen_images[static_cast<size_t>(gen_index(i, l, n))];
                        Scalar v;
                        for (const auto& [idx, c] : img)
                            v += c * t.rform_second_global(gen_index(j, k, n), idx);
                        if (v != b.coeff(k, l, i, j)) {
                            rep.reconstruction_ok = false;
                            break;
                        }
                    }
    }
    return rep;
}

inline ReducedReport reduced_report(const BraidedVectorSpace& b, int degree, long cap = 4096) {
    Truncation t(b, degree, cap);
    RadicalTruncation rad = radical_of(t);
    return reduced_report_from(t, rad);
}

} // namespace frt
} // namespace braidlab

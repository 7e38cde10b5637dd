#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "braidlab/matrix.hpp"
#include "braidlab/scalar.hpp"

namespace braidlab {

struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Composite index convention shared by all modules: the pair (i,j) of
// 1-based leg indices maps to (i-1)*n + j, zero-based, row-major.
inline int pair_index(int i, int j, int n) { return (i - 1) * n + (j - 1); }
inline std::pair<int, int> index_pair(int idx, int n) { return {idx / n + 1, idx % n + 1}; }

// Braided vector space: dimension n and the n^2 x n^2 table of c, with
// c(e_i (x) e_j) = sum_{k,l} C[(k,l),(i,j)] e_k (x) e_l. Columns are input
// pairs, rows output pairs. The table is invertible by construction; the
// braid equation is checked on demand.
struct BraidedVectorSpace {
    int dim = 0;
    Field field = Field::Q;
    std::vector<std::string> basis;
    SparseMat table;

    Scalar coeff(int k, int l, int i, int j) const {
        return table.get(pair_index(k, l, dim), pair_index(i, j, dim));
    }
};

inline std::vector<std::string> default_basis(int n) {
    std::vector<std::string> b;
    for (int i = 1; i <= n; ++i) b.push_back("m" + std::to_string(i));
    return b;
}

inline BraidedVectorSpace make_braiding(int dim, Field field, SparseMat table,
                                        std::vector<std::string> basis = {}) {
    BraidedVectorSpace b;
    b.dim = dim;
    b.field = field;
    b.basis = basis.empty() ? default_basis(dim) : std::move(basis);
    if (static_cast<int>(b.basis.size()) != dim) throw input_error("basis size mismatch");
    if (table.rows() != dim * dim || table.cols() != dim * dim)
        throw input_error("coefficient table must be n^2 x n^2");
    b.table = std::move(table);
    if (!b.table.to_dense().inverse()) throw input_error("coefficient matrix is singular");
    return b;
}

// the flip braiding tau
inline BraidedVectorSpace flip_braiding(int n, Field field = Field::Q) {
    SparseMat t(n * n, n * n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) t.set(pair_index(j, i, n), pair_index(i, j, n), Scalar(1L));
    return make_braiding(n, field, std::move(t));
}

// diagonal braiding c(e_i (x) e_j) = q[i][j] e_j (x) e_i (0-based q table)
inline BraidedVectorSpace diagonal_braiding(const std::vector<std::vector<Scalar>>& q,
                                            Field field) {
    int n = static_cast<int>(q.size());
    SparseMat t(n * n, n * n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            t.set(pair_index(j, i, n), pair_index(i, j, n),
                  q[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)]);
    return make_braiding(n, field, std::move(t));
}

// braiding of a module-with-flat-coaction: c(m (x) n) = (g n) (x) m
inline BraidedVectorSpace operator_flip_braiding(const Mat& g, Field field) {
    int n = g.rows();
    SparseMat t(n * n, n * n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k) {
                const Scalar& v = g.at(k - 1, j - 1);
                if (!v.is_zero()) t.set(pair_index(k, i, n), pair_index(i, j, n), v);
            }
    return make_braiding(n, field, std::move(t));
}

// Cor 5.9 example: the Jordan-block braiding on k^2
inline BraidedVectorSpace jordan_braiding(const Scalar& lambda, Field field = Field::Q) {
    Mat g(2, 2);
    g.at(0, 0) = lambda;
    g.at(0, 1) = Scalar(1L);
    g.at(1, 1) = lambda;
    return operator_flip_braiding(g, field);
}

// --------------------------------------------------------------------------
// file format

inline BraidedVectorSpace load_braiding(const nlohmann::json& doc) {
    if (!doc.is_object()) throw input_error("braiding document must be a JSON object");
    if (!doc.contains("field") || !doc.contains("dim") || !doc.contains("entries"))
        throw input_error("braiding document needs field, dim and entries");
    auto f = field_from_name(doc.at("field").get<std::string>());
    if (!f) throw input_error("unknown field tag");
    int n = doc.at("dim").get<int>();
    if (n < 1) throw input_error("dim must be positive");
    std::vector<std::string> basis;
    if (doc.contains("basis")) basis = doc.at("basis").get<std::vector<std::string>>();
    SparseMat t(n * n, n * n);
    for (const auto& e : doc.at("entries")) {
        int k = e.at("k").get<int>(), l = e.at("l").get<int>();
        int i = e.at("i").get<int>(), j = e.at("j").get<int>();
        for (int idx : {k, l, i, j})
            if (idx < 1 || idx > n) throw input_error("entry index out of range");
        Scalar c = parse_scalar(e.at("c").get<std::string>(), *f);
        t.set(pair_index(k, l, n), pair_index(i, j, n), c);
    }
    return make_braiding(n, *f, std::move(t), std::move(basis));
}

inline nlohmann::json save_braiding(const BraidedVectorSpace& b) {
    nlohmann::json entries = nlohmann::json::array();
    // entries sorted by (i,j,k,l)
    for (int i = 1; i <= b.dim; ++i)
        for (int j = 1; j <= b.dim; ++j)
            for (int k = 1; k <= b.dim; ++k)
                for (int l = 1; l <= b.dim; ++l) {
                    Scalar c = b.coeff(k, l, i, j);
                    if (c.is_zero()) continue;
                    entries.push_back({{"k", k}, {"l", l}, {"i", i}, {"j", j},
                                       {"c", c.to_string()}});
                }
    return nlohmann::json{{"field", field_name(b.field)},
                          {"dim", b.dim},
                          {"basis", b.basis},
                          {"entries", entries}};
}

// --------------------------------------------------------------------------
// operator plumbing on triple tensors

// embeds an n^2 x n^2 operator into slots (1,2) or (2,3) of M^(x)3
inline SparseMat embed_12(const SparseMat& op, int n) {
    return op.kron(SparseMat::identity(n));
}
inline SparseMat embed_23(const SparseMat& op, int n) {
    return SparseMat::identity(n).kron(op);
}
// slot (1,3): conjugate the (2,3) embedding by the (1,2) flip
inline SparseMat embed_13(const SparseMat& op, int n) {
    SparseMat t12(n * n, n * n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) t12.set(pair_index(j, i, n), pair_index(i, j, n), Scalar(1L));
    SparseMat flip12 = embed_12(t12, n);
    return flip12 * embed_23(op, n) * flip12;
}

struct BraidVerdict {
    bool pass = false;
    // when failing: 1-based output triple (a,b,c) and input triple (i,j,k)
    // of the lexicographically first differing matrix entry
    std::array<int, 3> out{}, in{};
};

inline BraidVerdict check_braid_equation(const BraidedVectorSpace& b) {
    int n = b.dim;
    SparseMat c12 = embed_12(b.table, n);
    SparseMat c23 = embed_23(b.table, n);
    SparseMat lhs = c23 * c12 * c23;
    SparseMat rhs = c12 * c23 * c12;
    BraidVerdict v;
    if (lhs == rhs) {
        v.pass = true;
        return v;
    }
    SparseMat diff = lhs - rhs;
    auto dec = [n](int idx) {
        int a = idx / (n * n) + 1;
        int rest = idx % (n * n);
        return std::array<int, 3>{a, rest / n + 1, rest % n + 1};
    };
    for (int r = 0; r < diff.rows(); ++r) {
        if (diff.row(r).empty()) continue;
        v.out = dec(r);
        v.in = dec(diff.row(r).begin()->first);
        break;
    }
    return v;
}

enum class YbeDirection { RtoC, CtoR };

struct YbeResult {
    SparseMat op;           // converted operator
    bool target_holds = false; // braid equation (RtoC) or QYBE (CtoR)
};

// R and c = R tau determine each other; tau is involutive so both
// directions compose with the flip on the input side
inline YbeResult ybe_convert(const SparseMat& op, int n, YbeDirection dir, Field field) {
    if (op.rows() != n * n || op.cols() != n * n) throw input_error("operator must be n^2 x n^2");
    if (!op.to_dense().inverse()) throw input_error("singular operator");
    SparseMat tau(n * n, n * n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) tau.set(pair_index(j, i, n), pair_index(i, j, n), Scalar(1L));
    YbeResult res;
    res.op = op * tau;
    if (dir == YbeDirection::RtoC) {
        BraidedVectorSpace b = make_braiding(n, field, res.op);
        res.target_holds = check_braid_equation(b).pass;
    } else {
        // quantum Yang-Baxter: R12 R13 R23 = R23 R13 R12
        const SparseMat& r = res.op;
        SparseMat lhs = embed_12(r, n) * embed_13(r, n) * embed_23(r, n);
        SparseMat rhs = embed_23(r, n) * embed_13(r, n) * embed_12(r, n);
        res.target_holds = lhs == rhs;
    }
    return res;
}

enum class BraidTransform { Inverse, FlipConjugate };

inline BraidedVectorSpace transform_braiding(const BraidedVectorSpace& b, BraidTransform which) {
    int n = b.dim;
    if (which == BraidTransform::Inverse) {
        auto inv = b.table.to_dense().inverse();
        if (!inv) throw input_error("braiding table is singular");
        return make_braiding(n, b.field, SparseMat::from_dense(*inv), b.basis);
    }
    // tau c tau: C'[(k,l),(i,j)] = C[(l,k),(j,i)]
    SparseMat t(n * n, n * n);
    for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l)
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j) {
                    Scalar v = b.coeff(l, k, j, i);
                    if (!v.is_zero()) t.set(pair_index(k, l, n), pair_index(i, j, n), v);
                }
    return make_braiding(n, b.field, std::move(t), b.basis);
}

// --------------------------------------------------------------------------
// rigidity

// c_flat = (ev (x) id)(id (x) c (x) id)(id (x) db) on M* (x) M, with
// M* (x) M indexed by (dual-index, index) pairs and the image M (x) M* by
// (index, dual-index) pairs:
//   c_flat(phi^a (x) e_j) = sum_{l,i} C[(a,l),(j,i)] e_l (x) phi^i
inline SparseMat compute_c_flat(const BraidedVectorSpace& b) {
    int n = b.dim;
    SparseMat f(n * n, n * n);
    for (int a = 1; a <= n; ++a)
        for (int j = 1; j <= n; ++j)
            for (int l = 1; l <= n; ++l)
                for (int i = 1; i <= n; ++i) {
                    Scalar v = b.coeff(a, l, j, i);
                    if (!v.is_zero()) f.set(pair_index(l, i, n), pair_index(a, j, n), v);
                }
    return f;
}

inline bool check_rigidity(const BraidedVectorSpace& b) {
    return compute_c_flat(b).to_dense().inverse().has_value();
}

struct FlagCompat {
    bool premise = false;    // c(N (x) M) inside M (x) N
    bool conclusion = false; // c_flat(M* (x) N) inside N (x) M*
};

// Lemma: the premise forces the conclusion; both sides decided exactly
inline FlagCompat check_flag_compat(const BraidedVectorSpace& b, const std::vector<Vec>& nbasis) {
    int n = b.dim;
    auto nspan = rref_basis(nbasis);
    FlagCompat out;

    // premise: for u in N, y basis: second legs of c(u (x) e_y) lie in N
    out.premise = true;
    for (const auto& u : nspan) {
        for (int y = 1; y <= n && out.premise; ++y) {
            // image = sum_i u_i c(e_i (x) e_y)
            SparseVec img;
            for (int i = 1; i <= n; ++i) {
                if (u[static_cast<size_t>(i - 1)].is_zero()) continue;
                for (int k = 1; k <= n; ++k)
                    for (int l = 1; l <= n; ++l)
                        sparse_add_to(img, pair_index(k, l, n),
                                      u[static_cast<size_t>(i - 1)] * b.coeff(k, l, i, y));
            }
            // row k of the reshaped image must lie in N
            for (int k = 1; k <= n && out.premise; ++k) {
                Vec rowv(static_cast<size_t>(n));
                for (int l = 1; l <= n; ++l) {
                    auto it = img.find(pair_index(k, l, n));
                    if (it != img.end()) rowv[static_cast<size_t>(l - 1)] = it->second;
                }
                if (!in_span(nspan, rowv)) out.premise = false;
            }
        }
    }

    // conclusion: first legs of c_flat(phi^a (x) u) lie in N
    SparseMat cf = compute_c_flat(b);
    out.conclusion = true;
    for (const auto& u : nspan) {
        for (int a = 1; a <= n && out.conclusion; ++a) {
            SparseVec img;
            for (int j = 1; j <= n; ++j) {
                if (u[static_cast<size_t>(j - 1)].is_zero()) continue;
                int col = pair_index(a, j, n);
                for (int r = 0; r < cf.rows(); ++r) {
                    Scalar v = cf.get(r, col);
                    if (!v.is_zero()) sparse_add_to(img, r, u[static_cast<size_t>(j - 1)] * v);
                }
            }
            // image indexed by (l, i): the l-vector for each fixed i must lie in N
            for (int i = 1; i <= n && out.conclusion; ++i) {
                Vec lv(static_cast<size_t>(n));
                for (int l = 1; l <= n; ++l) {
                    auto it = img.find(pair_index(l, i, n));
                    if (it != img.end()) lv[static_cast<size_t>(l - 1)] = it->second;
                }
                if (!in_span(nspan, lv)) out.conclusion = false;
            }
        }
    }
    return out;
}

} // namespace braidlab

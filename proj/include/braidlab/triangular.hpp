#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "braidlab/braiding.hpp"
#include "braidlab/eigen.hpp"
#include "braidlab/matrix.hpp"

namespace braidlab {

enum class Side { Left, Right };

inline std::string side_name(Side s) { return s == Side::Left ? "left" : "right"; }

// Witness for Def 5.1 with respect to the ordered basis x_1 < ... < x_n
// (input coordinates). For side=right
//   c(x_i (x) x_j) = beta[i][j] x_j (x) x_i + sum_{z>i} w[{i,j}][z] (x) x_z
// and mirrored on the first leg for side=left. Residual vectors are stored
// in input coordinates; indices here are 1-based order positions.
struct TriangularityCertificate {
    Side side = Side::Right;
    std::vector<Vec> basis;                         // ordered basis vectors
    std::vector<std::vector<Scalar>> leading;       // [i-1][j-1], all nonzero
    std::map<std::pair<int, int>, std::map<int, Vec>> residuals;

    int dim() const { return static_cast<int>(basis.size()); }
};

// rebuilds the braiding table a certificate claims, in input coordinates
inline SparseMat rebuild_from_certificate(const TriangularityCertificate& cert) {
    int n = cert.dim();
    // images of x_i (x) x_j in input coordinates
    Mat images(n * n, n * n);
    auto put_tensor = [&](int col, const Vec& a, const Vec& b, const Scalar& f) {
        for (int k = 1; k <= n; ++k)
            for (int l = 1; l <= n; ++l) {
                Scalar v = f * a[static_cast<size_t>(k - 1)] * b[static_cast<size_t>(l - 1)];
                if (!v.is_zero()) images.at(pair_index(k, l, n), col) += v;
            }
    };
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            int col = pair_index(i, j, n);
            put_tensor(col, cert.basis[static_cast<size_t>(j - 1)],
                       cert.basis[static_cast<size_t>(i - 1)],
                       cert.leading[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)]);
            auto it = cert.residuals.find({i, j});
            if (it != cert.residuals.end())
                for (const auto& [z, w] : it->second) {
                    if (cert.side == Side::Right)
                        put_tensor(col, w, cert.basis[static_cast<size_t>(z - 1)], Scalar(1L));
                    else
                        put_tensor(col, cert.basis[static_cast<size_t>(z - 1)], w, Scalar(1L));
                }
        }
    // change of basis: columns above are images of P-basis pairs
    Mat p = Mat::from_columns(cert.basis);
    Mat pk = p.kron(p);
    auto pkinv = pk.inverse();
    if (!pkinv) throw input_error("degenerate certificate basis");
    return SparseMat::from_dense(images * *pkinv);
}

inline bool certificate_matches(const TriangularityCertificate& cert,
                                const BraidedVectorSpace& b) {
    return rebuild_from_certificate(cert) == b.table;
}

struct TriCheckResult {
    std::optional<TriangularityCertificate> cert;
    std::array<int, 3> violation{0, 0, 0}; // first violated (x,y,z), 1-based positions
};

// decides Def 5.1 for a given ordered basis
inline TriCheckResult check_triangular(const BraidedVectorSpace& b, const std::vector<Vec>& basis,
                                       Side side) {
    int n = b.dim;
    if (static_cast<int>(basis.size()) != n) throw input_error("ordered basis size mismatch");
    Mat p = Mat::from_columns(basis);
    auto pinv = p.inverse();
    if (!pinv) throw input_error("degenerate basis");
    Mat pk = p.kron(p);
    Mat pkinv = pinv->kron(*pinv);
    Mat ct = pkinv * b.table.to_dense() * pk; // table in the candidate basis

    TriCheckResult res;
    TriangularityCertificate cert;
    cert.side = side;
    cert.basis = basis;
    cert.leading.assign(static_cast<size_t>(n), std::vector<Scalar>(static_cast<size_t>(n)));

    for (int x = 1; x <= n; ++x)
        for (int y = 1; y <= n; ++y) {
            int col = pair_index(x, y, n);
            int bound = side == Side::Right ? x : y;
            for (int z = 1; z <= bound; ++z) {
                for (int k = 1; k <= n; ++k) {
                    int row = side == Side::Right ? pair_index(k, z, n) : pair_index(z, k, n);
                    Scalar v = ct.at(row, col);
                    bool ok;
                    if (z < bound)
                        ok = v.is_zero();
                    else if (side == Side::Right)
                        ok = (k == y) ? !v.is_zero() : v.is_zero();
                    else
                        ok = (k == x) ? !v.is_zero() : v.is_zero();
                    if (!ok) {
                        res.violation = {x, y, z};
                        return res;
                    }
                }
            }
            // the leading term sits at row (y,x) for both sides
            cert.leading[static_cast<size_t>(x - 1)][static_cast<size_t>(y - 1)] =
                ct.at(pair_index(y, x, n), col);
            // residuals for z above the bound, mapped back to input coordinates
            for (int z = bound + 1; z <= n; ++z) {
                Vec w(static_cast<size_t>(n));
                bool nonzero = false;
                for (int k = 1; k <= n; ++k) {
                    int row = side == Side::Right ? pair_index(k, z, n) : pair_index(z, k, n);
                    Scalar v = ct.at(row, col);
                    if (!v.is_zero()) nonzero = true;
                    w[static_cast<size_t>(k - 1)] = v;
                }
                if (nonzero) {
                    Vec winput = p.apply(w);
                    cert.residuals[{x, y}][z] = std::move(winput);
                }
            }
        }
    res.cert = std::move(cert);
    return res;
}

// --------------------------------------------------------------------------
// the operator family R_{v,phi}(m) = (phi (x) id) c(m (x) v)

inline std::vector<Mat> braiding_operators(const BraidedVectorSpace& b) {
    int n = b.dim;
    std::vector<Mat> ops;
    for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) {
            Mat r(n, n);
            for (int i = 1; i <= n; ++i)
                for (int l = 1; l <= n; ++l) r.at(l - 1, i - 1) = b.coeff(k, l, i, j);
            ops.push_back(std::move(r));
        }
    return ops;
}

struct Flag {
    std::vector<std::vector<Vec>> pieces; // F_1 ... F_n, RREF bases, dims 1..n
    bool arbitrary_line_choice = false;   // some line was picked inside a
                                          // simultaneous eigenspace of dim > 1
};

struct FlagSearch {
    std::vector<Flag> flags;
    bool truncated = false;
    bool nonsplit = false;
};

namespace detail {

// operator induced on the complement coordinates of an RREF subspace
struct QuotientView {
    std::vector<int> complement_cols;       // standard coordinates surviving
    std::vector<Vec> subspace;              // RREF basis of the modded-out piece
    int ambient = 0;

    Vec project(const Vec& x) const {
        // reduce modulo the subspace, then read complement coordinates
        Vec rem = x;
        for (const auto& row : subspace) {
            int pcol = -1;
            for (size_t j = 0; j < row.size(); ++j)
                if (!row[j].is_zero()) {
                    pcol = static_cast<int>(j);
                    break;
                }
            Scalar f = rem[static_cast<size_t>(pcol)];
            if (!f.is_zero())
                for (size_t j = 0; j < rem.size(); ++j) rem[j] -= f * row[j];
        }
        Vec q(complement_cols.size());
        for (size_t j = 0; j < complement_cols.size(); ++j)
            q[j] = rem[static_cast<size_t>(complement_cols[j])];
        return q;
    }
    Vec lift(const Vec& q) const {
        Vec x(static_cast<size_t>(ambient));
        for (size_t j = 0; j < complement_cols.size(); ++j)
            x[static_cast<size_t>(complement_cols[j])] = q[j];
        return x;
    }
};

inline QuotientView quotient_view(const std::vector<Vec>& rref_sub, int ambient) {
    QuotientView v;
    v.ambient = ambient;
    v.subspace = rref_sub;
    std::vector<bool> piv(static_cast<size_t>(ambient), false);
    for (const auto& row : rref_sub)
        for (size_t j = 0; j < row.size(); ++j)
            if (!row[j].is_zero()) {
                piv[j] = true;
                break;
            }
    for (int j = 0; j < ambient; ++j)
        if (!piv[static_cast<size_t>(j)]) v.complement_cols.push_back(j);
    return v;
}

inline Mat induced_operator(const Mat& op, const QuotientView& qv) {
    int q = static_cast<int>(qv.complement_cols.size());
    Mat out(q, q);
    for (int j = 0; j < q; ++j) {
        Vec e(static_cast<size_t>(qv.ambient));
        e[static_cast<size_t>(qv.complement_cols[static_cast<size_t>(j)])] = Scalar(1L);
        Vec img = qv.project(op.apply(e));
        for (int i = 0; i < q; ++i) out.at(i, j) = img[static_cast<size_t>(i)];
    }
    return out;
}

struct FlagSearcher {
    const std::vector<Mat>& ops;
    Field field;
    int n;
    long branch_limit;
    long budget;
    bool truncated = false;
    bool nonsplit = false;
    std::map<std::string, std::vector<Flag>> memo;

    // completes the flag above the invariant subspace `base` (RREF, dim t)
    std::vector<Flag> complete(const std::vector<Vec>& base) {
        int t = static_cast<int>(base.size());
        if (t == n) {
            Flag f;
            return {f};
        }
        std::string key = subspace_signature(base);
        auto hit = memo.find(key);
        if (hit != memo.end()) return hit->second;

        QuotientView qv = quotient_view(base, n);
        std::vector<Mat> induced;
        for (const auto& op : ops) induced.push_back(induced_operator(op, qv));
        int q = n - t;

        // enumerate simultaneous eigenspaces of the induced family
        struct State {
            std::vector<Vec> space; // RREF basis in quotient coordinates
        };
        std::vector<State> states;
        {
            State whole;
            Mat id = Mat::identity(q);
            for (int i = 0; i < q; ++i) whole.space.push_back(id.row(i));
            states.push_back(std::move(whole));
        }
        for (const auto& op : induced) {
            UPoly cp = char_poly(op);
            RootList rl = field_roots(cp, field);
            if (!rl.split) nonsplit = true;
            std::vector<State> next;
            for (auto& st : states) {
                for (const auto& [val, mult] : rl.roots) {
                    Mat shifted = op;
                    for (int i = 0; i < q; ++i) shifted.at(i, i) -= val;
                    auto espace = rref_basis(shifted.kernel());
                    auto inter = subspace_intersect(st.space, espace, q);
                    if (inter.empty()) continue;
                    next.push_back({std::move(inter)});
                }
            }
            states = std::move(next);
            if (states.empty()) break;
        }

        bool was_truncated = false;
        std::vector<Flag> results;
        std::vector<std::string> seen;
        for (const auto& st : states) {
            if (--budget < 0) {
                truncated = true;
                was_truncated = true;
                break;
            }
            // all operators act as scalars on st.space; the line is chosen
            // deterministically as its first reduced basis vector
            bool arbitrary = st.space.size() > 1;
            Vec line = qv.lift(st.space[0]);
            auto bigger = subspace_sum(base, {line});
            if (static_cast<int>(bigger.size()) != t + 1) continue;
            std::string sig = subspace_signature(bigger);
            bool dup = false;
            for (const auto& s : seen) dup = dup || s == sig;
            if (dup) continue;
            seen.push_back(sig);
            for (Flag completion : complete(bigger)) {
                Flag f;
                f.arbitrary_line_choice = arbitrary || completion.arbitrary_line_choice;
                f.pieces.push_back(bigger);
                f.pieces.insert(f.pieces.end(), completion.pieces.begin(),
                                completion.pieces.end());
                results.push_back(std::move(f));
            }
        }
        if (!was_truncated && !truncated) memo.emplace(std::move(key), results);
        return results;
    }
};

} // namespace detail

// Enumerates complete flags with c(F_i (x) M) inside M (x) F_i, equivalently
// flags of simultaneously invariant subspaces of the R_{v,phi} family, by
// branching over common eigenvectors and recursing on the quotient.
inline FlagSearch find_invariant_flags(const BraidedVectorSpace& b, long branch_limit = 1024) {
    auto ops = braiding_operators(b);
    detail::FlagSearcher searcher{ops, b.field, b.dim, branch_limit, branch_limit, false, false, {}};
    FlagSearch out;
    out.flags = searcher.complete({});
    out.truncated = searcher.truncated;
    out.nonsplit = searcher.nonsplit;
    return out;
}

// independent containment check used by tests and post-hoc verification
inline bool flag_is_invariant(const BraidedVectorSpace& b, const Flag& flag) {
    for (const auto& piece : flag.pieces) {
        // c(F (x) M) inside M (x) F, checked by rank: stack second legs
        int n = b.dim;
        for (const auto& u : piece)
            for (int y = 1; y <= n; ++y) {
                // rows of the reshaped image must lie in span(piece)... second leg
                std::vector<Vec> rows;
                for (int k = 1; k <= n; ++k) rows.push_back(Vec(static_cast<size_t>(n)));
                for (int i = 1; i <= n; ++i) {
                    if (u[static_cast<size_t>(i - 1)].is_zero()) continue;
                    for (int k = 1; k <= n; ++k)
                        for (int l = 1; l <= n; ++l)
                            rows[static_cast<size_t>(k - 1)][static_cast<size_t>(l - 1)] +=
                                u[static_cast<size_t>(i - 1)] * b.coeff(k, l, i, y);
                }
                auto span = rref_basis(piece);
                for (const auto& row : rows) {
                    auto bigger = subspace_sum(span, {row});
                    if (bigger.size() != span.size()) return false;
                }
            }
    }
    return true;
}

// line operators L_i with c(x (x) y) = L_i(y) (x) x modulo M (x) F_{r-i},
// where x lifts the 1-dimensional quotient F_{r+1-i}/F_{r-i}
inline std::vector<Mat> line_operators(const BraidedVectorSpace& b, const Flag& flag) {
    int n = b.dim;
    if (static_cast<int>(flag.pieces.size()) != n) throw input_error("incomplete flag");
    if (!flag_is_invariant(b, flag)) throw input_error("flag is not c-invariant");

    auto image_alpha = [&](const Vec& x, const std::vector<Vec>& smaller, int i) {
        // component of c(x (x) e_j) along the class of x in M / smaller
        Mat li(n, n);
        // basis for solving w = f + alpha x with f in smaller
        Mat solver(n, static_cast<int>(smaller.size()) + 1);
        for (size_t s = 0; s < smaller.size(); ++s)
            for (int r = 0; r < n; ++r) solver.at(r, static_cast<int>(s)) = smaller[s][static_cast<size_t>(r)];
        for (int r = 0; r < n; ++r) solver.at(r, static_cast<int>(smaller.size())) = x[static_cast<size_t>(r)];
        for (int j = 1; j <= n; ++j) {
            // c(x (x) e_j), second legs per first index k
            for (int k = 1; k <= n; ++k) {
                Vec w(static_cast<size_t>(n));
                for (int a = 1; a <= n; ++a) {
                    if (x[static_cast<size_t>(a - 1)].is_zero()) continue;
                    for (int l = 1; l <= n; ++l)
                        w[static_cast<size_t>(l - 1)] += x[static_cast<size_t>(a - 1)] * b.coeff(k, l, a, j);
                }
                auto sol = solver.solve(w);
                if (!sol) throw input_error("flag invariance violated in line operator");
                li.at(k - 1, j - 1) = (*sol)[smaller.size()];
            }
        }
        (void)i;
        return li;
    };

    std::vector<Mat> ls;
    for (int i = 1; i <= n; ++i) {
        const auto& upper = flag.pieces[static_cast<size_t>(n - i)];     // F_{r+1-i}
        std::vector<Vec> smaller;
        if (n - i - 1 >= 0) smaller = flag.pieces[static_cast<size_t>(n - i - 1)]; // F_{r-i}
        // lift: first basis vector of upper outside smaller
        Vec x;
        for (const auto& cand : upper)
            if (!in_span(rref_basis(smaller), cand)) {
                x = cand;
                break;
            }
        if (x.empty()) throw input_error("flag has no strict inclusion");
        Mat li = image_alpha(x, smaller, i);
        // well-definedness: an alternative lift gives the same operator
        if (!smaller.empty()) {
            Vec x2 = x;
            for (size_t r = 0; r < x2.size(); ++r) x2[r] += smaller[0][r];
            if (image_alpha(x2, smaller, i) != li)
                throw input_error("line operator depends on the lift");
        }
        ls.push_back(std::move(li));
    }
    return ls;
}

// --------------------------------------------------------------------------
// detection

enum class TriFail {
    None,
    NoInvariantFlag,
    DefectiveLineOperator,
    NonCommutingLineOperators,
    ZeroEigenvalue,
    FlagIncompatibleEigenspaces,
    SearchTruncated,
    NonSplitSpectrum,
};

inline std::string tri_fail_name(TriFail f) {
    switch (f) {
        case TriFail::None: return "none";
        case TriFail::NoInvariantFlag: return "no invariant flag";
        case TriFail::DefectiveLineOperator: return "defective line operator";
        case TriFail::NonCommutingLineOperators: return "non-commuting line operators";
        case TriFail::ZeroEigenvalue: return "zero eigenvalue";
        case TriFail::FlagIncompatibleEigenspaces: return "flag-incompatible eigenspaces";
        case TriFail::SearchTruncated: return "search truncated";
        case TriFail::NonSplitSpectrum: return "non-split spectrum";
    }
    return "?";
}

struct DetectResult {
    std::optional<TriangularityCertificate> cert;
    TriFail fail = TriFail::None;
    bool indeterminate = false; // refutation is not certified
};

namespace detail {

// attempts to build a right certificate from one invariant flag
inline std::optional<TriangularityCertificate> right_certificate_from_flag(
    const BraidedVectorSpace& b, const Flag& flag, TriFail& why) {
    int n = b.dim;
    std::vector<Mat> ls;
    ls = line_operators(b, flag);
    for (size_t i = 0; i < ls.size(); ++i)
        for (size_t j = i + 1; j < ls.size(); ++j)
            if (ls[i] * ls[j] != ls[j] * ls[i]) {
                why = TriFail::NonCommutingLineOperators;
                return std::nullopt;
            }
    auto sd = simuldiag(ls, b.field);
    if (!sd.ok) {
        switch (sd.fail) {
            case SimulFail::Defective: why = TriFail::DefectiveLineOperator; break;
            case SimulFail::NonSplit: why = TriFail::NonSplitSpectrum; break;
            default: why = TriFail::NonCommutingLineOperators; break;
        }
        return std::nullopt;
    }
    for (const auto& blk : sd.blocks)
        for (const auto& v : blk.values)
            if (v.is_zero()) {
                why = TriFail::ZeroEigenvalue;
                return std::nullopt;
            }
    // flag compatibility: F_j = sum of (F_j intersect U_a)
    for (int j = 1; j <= n; ++j) {
        const auto& fj = flag.pieces[static_cast<size_t>(j - 1)];
        int total = 0;
        for (const auto& blk : sd.blocks)
            total += static_cast<int>(subspace_intersect(fj, blk.basis, n).size());
        if (total != j) {
            why = TriFail::FlagIncompatibleEigenspaces;
            return std::nullopt;
        }
    }
    // assemble the ordered basis: position n+1-t is a common eigenvector in
    // F_t outside F_{t-1}
    std::vector<Vec> ordered(static_cast<size_t>(n));
    for (int t = 1; t <= n; ++t) {
        std::vector<Vec> prev;
        if (t >= 2) prev = flag.pieces[static_cast<size_t>(t - 2)];
        Vec pick;
        for (const auto& blk : sd.blocks) {
            auto inter = subspace_intersect(flag.pieces[static_cast<size_t>(t - 1)], blk.basis, n);
            for (const auto& cand : inter)
                if (!in_span(rref_basis(prev), cand)) {
                    pick = cand;
                    break;
                }
            if (!pick.empty()) break;
        }
        if (pick.empty()) {
            why = TriFail::FlagIncompatibleEigenspaces;
            return std::nullopt;
        }
        ordered[static_cast<size_t>(n - t)] = std::move(pick);
    }
    auto check = check_triangular(b, ordered, Side::Right);
    if (!check.cert) {
        why = TriFail::FlagIncompatibleEigenspaces;
        return std::nullopt;
    }
    return check.cert;
}

inline std::vector<int> basis_pivot_sequence(const std::vector<Vec>& basis) {
    std::vector<int> seq;
    for (const auto& v : basis) {
        int p = static_cast<int>(v.size());
        for (size_t j = 0; j < v.size(); ++j)
            if (!v[j].is_zero()) {
                p = static_cast<int>(j);
                break;
            }
        seq.push_back(p);
    }
    return seq;
}

} // namespace detail

inline DetectResult detect_triangular(const BraidedVectorSpace& b, Side side,
                                      long branch_limit = 1024);

namespace detail {

inline DetectResult detect_right(const BraidedVectorSpace& b, long branch_limit) {
    DetectResult out;
    FlagSearch fs = find_invariant_flags(b, branch_limit);
    if (fs.flags.empty()) {
        if (fs.truncated)
            out.fail = TriFail::SearchTruncated;
        else if (fs.nonsplit)
            out.fail = TriFail::NonSplitSpectrum;
        else
            out.fail = TriFail::NoInvariantFlag;
        out.indeterminate = fs.truncated || fs.nonsplit;
        return out;
    }
    TriFail first_fail = TriFail::None;
    std::optional<TriangularityCertificate> best;
    std::vector<int> best_seq;
    for (const auto& flag : fs.flags) {
        TriFail why = TriFail::None;
        auto cert = right_certificate_from_flag(b, flag, why);
        if (cert) {
            auto seq = basis_pivot_sequence(cert->basis);
            if (!best || seq < best_seq) {
                best = std::move(cert);
                best_seq = std::move(seq);
            }
        } else if (first_fail == TriFail::None) {
            first_fail = why;
        }
    }
    if (best) {
        out.cert = std::move(best);
        return out;
    }
    out.fail = first_fail == TriFail::None ? TriFail::NoInvariantFlag : first_fail;
    out.indeterminate = fs.truncated || fs.nonsplit;
    return out;
}

} // namespace detail

// side=left runs the right detection on tau c tau and transports the
// certificate back: gamma_{x,y} = beta_{y,x}, v_{x,y,z} = w_{y,x,z}, with
// the same ordered basis
inline DetectResult detect_triangular(const BraidedVectorSpace& b, Side side, long branch_limit) {
    if (side == Side::Right) return detail::detect_right(b, branch_limit);
    auto conj = transform_braiding(b, BraidTransform::FlipConjugate);
    DetectResult res = detail::detect_right(conj, branch_limit);
    if (!res.cert) return res;
    TriangularityCertificate left;
    left.side = Side::Left;
    left.basis = res.cert->basis;
    int n = left.dim();
    left.leading.assign(static_cast<size_t>(n), std::vector<Scalar>(static_cast<size_t>(n)));
    for (int x = 1; x <= n; ++x)
        for (int y = 1; y <= n; ++y)
            left.leading[static_cast<size_t>(x - 1)][static_cast<size_t>(y - 1)] =
                res.cert->leading[static_cast<size_t>(y - 1)][static_cast<size_t>(x - 1)];
    for (const auto& [xy, zs] : res.cert->residuals) {
        auto [x, y] = xy;
        for (const auto& [z, w] : zs) left.residuals[{y, x}][z] = w;
    }
    res.cert = std::move(left);
    return res;
}

// --------------------------------------------------------------------------
// diagonal type

enum class DiagFail {
    None,
    NonCommuting,
    Defective,
    NonSplit,
    NotFactorizable,
    IncompatibleRefinement,
};

inline std::string diag_fail_name(DiagFail f) {
    switch (f) {
        case DiagFail::None: return "none";
        case DiagFail::NonCommuting: return "non-commuting pair";
        case DiagFail::Defective: return "defective matrix";
        case DiagFail::NonSplit: return "non-split spectrum";
        case DiagFail::NotFactorizable: return "braiding does not factor over eigenspaces";
        case DiagFail::IncompatibleRefinement: return "flag-incompatible eigenspaces";
    }
    return "?";
}

struct DiagonalResult {
    bool ok = false;
    DiagFail fail = DiagFail::None;
    bool indeterminate = false;
    std::vector<Vec> basis;                  // diagonalizing basis
    std::vector<std::vector<Scalar>> qtable; // q[x][y] with c(x (x) y) = q y (x) x
};

inline DiagonalResult detect_diagonal(const BraidedVectorSpace& b) {
    int n = b.dim;
    DiagonalResult out;
    auto ops = braiding_operators(b);
    auto sd = simuldiag(ops, b.field);
    if (!sd.ok) {
        switch (sd.fail) {
            case SimulFail::NonCommutingPair: out.fail = DiagFail::NonCommuting; break;
            case SimulFail::Defective: out.fail = DiagFail::Defective; break;
            case SimulFail::NonSplit:
                out.fail = DiagFail::NonSplit;
                out.indeterminate = true;
                break;
            default: out.fail = DiagFail::NonCommuting; break;
        }
        return out;
    }
    // on each common eigenspace U_a the braiding factors through a single
    // operator Y_a with c(u (x) w) = Y_a(w) (x) u
    std::vector<Mat> ys;
    for (const auto& blk : sd.blocks) {
        const Vec& u = blk.basis[0];
        int anchor = -1;
        for (size_t r = 0; r < u.size(); ++r)
            if (!u[r].is_zero()) {
                anchor = static_cast<int>(r);
                break;
            }
        Mat y(n, n);
        for (int j = 1; j <= n; ++j) {
            // W[k][l] = coefficient of e_k (x) e_l in c(u (x) e_j)
            Mat w(n, n);
            for (int i = 1; i <= n; ++i) {
                if (u[static_cast<size_t>(i - 1)].is_zero()) continue;
                for (int k = 1; k <= n; ++k)
                    for (int l = 1; l <= n; ++l)
                        w.at(k - 1, l - 1) += u[static_cast<size_t>(i - 1)] * b.coeff(k, l, i, j);
            }
            Scalar inv = u[static_cast<size_t>(anchor)].inverse();
            for (int k = 0; k < n; ++k) y.at(k, j - 1) = w.at(k, anchor) * inv;
        }
        // well-definedness: c(u' (x) w) = Y_a(w) (x) u' for every basis u'
        for (const auto& up : blk.basis)
            for (int j = 1; j <= n; ++j) {
                for (int k = 1; k <= n; ++k)
                    for (int l = 1; l <= n; ++l) {
                        Scalar expect = y.at(k - 1, j - 1) * up[static_cast<size_t>(l - 1)];
                        Scalar got;
                        for (int i = 1; i <= n; ++i)
                            got += up[static_cast<size_t>(i - 1)] * b.coeff(k, l, i, j);
                        if (got != expect) {
                            out.fail = DiagFail::NotFactorizable;
                            return out;
                        }
                    }
            }
        ys.push_back(std::move(y));
    }
    auto sdy = simuldiag(ys, b.field);
    if (!sdy.ok) {
        switch (sdy.fail) {
            case SimulFail::NonCommutingPair: out.fail = DiagFail::NonCommuting; break;
            case SimulFail::Defective: out.fail = DiagFail::Defective; break;
            case SimulFail::NonSplit:
                out.fail = DiagFail::NonSplit;
                out.indeterminate = true;
                break;
            default: out.fail = DiagFail::NonCommuting; break;
        }
        return out;
    }
    // common eigenbasis refining the U_a decomposition
    std::vector<Vec> basis;
    std::vector<int> block_of; // index into sd.blocks per basis vector
    std::vector<int> yblock_of;
    for (size_t a = 0; a < sd.blocks.size(); ++a) {
        for (size_t vb = 0; vb < sdy.blocks.size(); ++vb) {
            auto inter = subspace_intersect(sd.blocks[a].basis, sdy.blocks[vb].basis, n);
            for (auto& x : inter) {
                basis.push_back(x);
                block_of.push_back(static_cast<int>(a));
                yblock_of.push_back(static_cast<int>(vb));
            }
        }
    }
    if (static_cast<int>(basis.size()) != n) {
        out.fail = DiagFail::IncompatibleRefinement;
        return out;
    }
    // q_{x,y} = eigenvalue of Y_{a(x)} on the Y-block of y
    std::vector<std::vector<Scalar>> q(static_cast<size_t>(n),
                                       std::vector<Scalar>(static_cast<size_t>(n)));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            q[static_cast<size_t>(x)][static_cast<size_t>(y)] =
                sdy.blocks[static_cast<size_t>(yblock_of[static_cast<size_t>(y)])]
                    .values[static_cast<size_t>(block_of[static_cast<size_t>(x)])];
    // final exact verification: c(x (x) y) = q_{x,y} y (x) x
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            for (int k = 1; k <= n; ++k)
                for (int l = 1; l <= n; ++l) {
                    Scalar got;
                    for (int i = 1; i <= n; ++i)
                        for (int j = 1; j <= n; ++j) {
                            Scalar f = basis[static_cast<size_t>(x)][static_cast<size_t>(i - 1)] *
                                       basis[static_cast<size_t>(y)][static_cast<size_t>(j - 1)];
                            if (!f.is_zero()) got += f * b.coeff(k, l, i, j);
                        }
                    Scalar expect = q[static_cast<size_t>(x)][static_cast<size_t>(y)] *
                                    basis[static_cast<size_t>(y)][static_cast<size_t>(k - 1)] *
                                    basis[static_cast<size_t>(x)][static_cast<size_t>(l - 1)];
                    if (got != expect) {
                        out.fail = DiagFail::NotFactorizable;
                        return out;
                    }
                }
        }
    out.ok = true;
    out.basis = std::move(basis);
    out.qtable = std::move(q);
    return out;
}

} // namespace braidlab

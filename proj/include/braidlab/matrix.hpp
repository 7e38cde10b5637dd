#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "braidlab/scalar.hpp"

namespace braidlab {

using Vec = std::vector<Scalar>;

// Dense matrix over the exact field. Row-major, value semantics.
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
    }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = Scalar(1L);
        return m;
    }
    static Mat from_rows(const std::vector<Vec>& rows) {
        if (rows.empty()) return Mat(0, 0);
        Mat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
        for (int i = 0; i < m.rows(); ++i) {
            if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != m.cols())
                throw std::invalid_argument("ragged rows");
            for (int j = 0; j < m.cols(); ++j) m.at(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
        return m;
    }
    static Mat from_columns(const std::vector<Vec>& cols) {
        if (cols.empty()) return Mat(0, 0);
        Mat m(static_cast<int>(cols[0].size()), static_cast<int>(cols.size()));
        for (int j = 0; j < m.cols(); ++j)
            for (int i = 0; i < m.rows(); ++i) m.at(i, j) = cols[static_cast<size_t>(j)][static_cast<size_t>(i)];
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Scalar& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Scalar& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    Vec row(int i) const {
        Vec r(static_cast<size_t>(cols_));
        for (int j = 0; j < cols_; ++j) r[static_cast<size_t>(j)] = at(i, j);
        return r;
    }
    Vec column(int j) const {
        Vec c(static_cast<size_t>(rows_));
        for (int i = 0; i < rows_; ++i) c[static_cast<size_t>(i)] = at(i, j);
        return c;
    }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!x.is_zero()) return false;
        return true;
    }

    Mat operator+(const Mat& o) const {
        check_same_shape(o);
        Mat r = *this;
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
        return r;
    }
    Mat operator-(const Mat& o) const {
        check_same_shape(o);
        Mat r = *this;
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
        return r;
    }
    Mat operator-() const {
        Mat r = *this;
        for (auto& x : r.a_) x = -x;
        return r;
    }
    Mat operator*(const Scalar& s) const {
        Mat r = *this;
        for (auto& x : r.a_) x *= s;
        return r;
    }
    Mat operator*(const Mat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
        Mat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Scalar& x = at(i, k);
                if (x.is_zero()) continue;
                for (int j = 0; j < o.cols_; ++j) {
                    const Scalar& y = o.at(k, j);
                    if (!y.is_zero()) r.at(i, j) += x * y;
                }
            }
        return r;
    }
    Vec apply(const Vec& x) const {
        if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("apply shape mismatch");
        Vec r(static_cast<size_t>(rows_));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero()) r[static_cast<size_t>(i)] += at(i, j) * x[static_cast<size_t>(j)];
        return r;
    }

    Mat transposed() const {
        Mat r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    Mat kron(const Mat& o) const {
        Mat r(rows_ * o.rows_, cols_ * o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) {
                if (at(i, j).is_zero()) continue;
                for (int p = 0; p < o.rows_; ++p)
                    for (int q = 0; q < o.cols_; ++q)
                        r.at(i * o.rows_ + p, j * o.cols_ + q) = at(i, j) * o.at(p, q);
            }
        return r;
    }

    Scalar trace() const {
        Scalar t;
        for (int i = 0; i < std::min(rows_, cols_); ++i) t += at(i, i);
        return t;
    }

    // in-place reduced row echelon form; returns pivot column list
    std::vector<int> rref() {
        std::vector<int> pivots;
        int r = 0;
        for (int c = 0; c < cols_ && r < rows_; ++c) {
            int sel = -1;
            for (int i = r; i < rows_; ++i)
                if (!at(i, c).is_zero()) {
                    sel = i;
                    break;
                }
            if (sel < 0) continue;
            swap_rows(sel, r);
            Scalar inv = at(r, c).inverse();
            for (int j = c; j < cols_; ++j) at(r, j) *= inv;
            for (int i = 0; i < rows_; ++i) {
                if (i == r || at(i, c).is_zero()) continue;
                Scalar f = at(i, c);
                for (int j = c; j < cols_; ++j) at(i, j) -= f * at(r, j);
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    int rank() const {
        Mat m = *this;
        return static_cast<int>(m.rref().size());
    }

    Scalar det() const {
        if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
        Mat m = *this;
        Scalar d(1L);
        for (int c = 0; c < cols_; ++c) {
            int sel = -1;
            for (int i = c; i < rows_; ++i)
                if (!m.at(i, c).is_zero()) {
                    sel = i;
                    break;
                }
            if (sel < 0) return Scalar();
            if (sel != c) {
                m.swap_rows(sel, c);
                d = -d;
            }
            d *= m.at(c, c);
            Scalar inv = m.at(c, c).inverse();
            for (int i = c + 1; i < rows_; ++i) {
                if (m.at(i, c).is_zero()) continue;
                Scalar f = m.at(i, c) * inv;
                for (int j = c; j < cols_; ++j) m.at(i, j) -= f * m.at(c, j);
            }
        }
        return d;
    }

    std::optional<Mat> inverse() const {
        if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
        Mat aug(rows_, 2 * cols_);
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_ + i) = Scalar(1L);
        }
        auto piv = aug.rref();
        if (static_cast<int>(piv.size()) != rows_ || piv.back() >= cols_) return std::nullopt;
        Mat inv(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
        return inv;
    }

    // basis of { x : A x = 0 }
    std::vector<Vec> kernel() const {
        Mat m = *this;
        auto pivots = m.rref();
        std::vector<bool> is_piv(static_cast<size_t>(cols_), false);
        for (int c : pivots) is_piv[static_cast<size_t>(c)] = true;
        std::vector<Vec> basis;
        for (int freec = 0; freec < cols_; ++freec) {
            if (is_piv[static_cast<size_t>(freec)]) continue;
            Vec x(static_cast<size_t>(cols_));
            x[static_cast<size_t>(freec)] = Scalar(1L);
            for (size_t r = 0; r < pivots.size(); ++r)
                x[static_cast<size_t>(pivots[r])] = -m.at(static_cast<int>(r), freec);
            basis.push_back(std::move(x));
        }
        return basis;
    }

    // solves A x = b; nullopt when inconsistent
    std::optional<Vec> solve(const Vec& b) const {
        if (static_cast<int>(b.size()) != rows_) throw std::invalid_argument("rhs size mismatch");
        Mat aug(rows_, cols_ + 1);
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_) = b[static_cast<size_t>(i)];
        }
        auto piv = aug.rref();
        if (!piv.empty() && piv.back() == cols_) return std::nullopt;
        Vec x(static_cast<size_t>(cols_));
        for (size_t r = 0; r < piv.size(); ++r) x[static_cast<size_t>(piv[r])] = aug.at(static_cast<int>(r), cols_);
        return x;
    }

    std::string to_string() const {
        std::string out = "[";
        for (int i = 0; i < rows_; ++i) {
            out += i ? "; " : "";
            for (int j = 0; j < cols_; ++j) out += (j ? ", " : "") + at(i, j).to_string();
        }
        return out + "]";
    }

private:
    void check_same_shape(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch");
    }
    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
    }

    int rows_, cols_;
    std::vector<Scalar> a_;
};

// ---------------------------------------------------------------------------
// row-space (subspace) helpers; a subspace is a canonical RREF basis

inline std::vector<Vec> rref_basis(std::vector<Vec> rows) {
    if (rows.empty()) return {};
    Mat m = Mat::from_rows(rows);
    auto piv = m.rref();
    std::vector<Vec> out;
    for (size_t r = 0; r < piv.size(); ++r) out.push_back(m.row(static_cast<int>(r)));
    return out;
}

inline int subspace_dim(const std::vector<Vec>& basis) { return static_cast<int>(basis.size()); }

// coordinates of x in the span of an RREF basis, if any
inline std::optional<Vec> span_coords(const std::vector<Vec>& rref, const Vec& x) {
    Vec rem = x;
    Vec coords(rref.size());
    for (size_t r = 0; r < rref.size(); ++r) {
        int p = -1;
        for (size_t j = 0; j < rref[r].size(); ++j)
            if (!rref[r][j].is_zero()) {
                p = static_cast<int>(j);
                break;
            }
        if (p < 0) continue;
        Scalar f = rem[static_cast<size_t>(p)] / rref[r][static_cast<size_t>(p)];
        if (!f.is_zero())
            for (size_t j = 0; j < rem.size(); ++j) rem[j] -= f * rref[r][j];
        coords[r] = f;
    }
    for (const auto& c : rem)
        if (!c.is_zero()) return std::nullopt;
    return coords;
}

inline bool in_span(const std::vector<Vec>& rref, const Vec& x) {
    return span_coords(rref, x).has_value();
}

inline std::vector<Vec> subspace_sum(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    std::vector<Vec> all = a;
    all.insert(all.end(), b.begin(), b.end());
    return rref_basis(std::move(all));
}

// intersection of two row spaces over the ambient dimension n
inline std::vector<Vec> subspace_intersect(const std::vector<Vec>& a, const std::vector<Vec>& b,
                                           int n) {
    if (a.empty() || b.empty()) return {};
    // solve sum_i s_i a_i - sum_j t_j b_j = 0
    Mat m(n, static_cast<int>(a.size() + b.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (int r = 0; r < n; ++r) m.at(r, static_cast<int>(i)) = a[i][static_cast<size_t>(r)];
    for (size_t j = 0; j < b.size(); ++j)
        for (int r = 0; r < n; ++r) m.at(r, static_cast<int>(a.size() + j)) = -b[j][static_cast<size_t>(r)];
    std::vector<Vec> inter;
    for (const auto& k : m.kernel()) {
        Vec x(static_cast<size_t>(n));
        for (size_t i = 0; i < a.size(); ++i)
            if (!k[i].is_zero())
                for (int r = 0; r < n; ++r) x[static_cast<size_t>(r)] += k[i] * a[i][static_cast<size_t>(r)];
        inter.push_back(std::move(x));
    }
    return rref_basis(std::move(inter));
}

inline std::string subspace_signature(const std::vector<Vec>& rref) {
    std::string s;
    for (const auto& r : rref) {
        for (const auto& x : r) {
            s += x.to_string();
            s += ',';
        }
        s += ';';
    }
    return s;
}

// ---------------------------------------------------------------------------
// sparse vectors / matrices, used for tensor-space computations

using SparseVec = std::map<int, Scalar>;

inline void sparse_add_to(SparseVec& acc, int idx, const Scalar& val) {
    if (val.is_zero()) return;
    auto it = acc.find(idx);
    if (it == acc.end()) {
        acc.emplace(idx, val);
    } else {
        it->second += val;
        if (it->second.is_zero()) acc.erase(it);
    }
}

inline void sparse_axpy(SparseVec& acc, const Scalar& f, const SparseVec& x) {
    if (f.is_zero()) return;
    for (const auto& [i, v] : x) sparse_add_to(acc, i, f * v);
}

class SparseMat {
public:
    SparseMat() : rows_(0), cols_(0) {}
    SparseMat(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows)) {}

    static SparseMat identity(int n) {
        SparseMat m(n, n);
        for (int i = 0; i < n; ++i) m.set(i, i, Scalar(1L));
        return m;
    }
    static SparseMat from_dense(const Mat& d) {
        SparseMat m(d.rows(), d.cols());
        for (int i = 0; i < d.rows(); ++i)
            for (int j = 0; j < d.cols(); ++j)
                if (!d.at(i, j).is_zero()) m.set(i, j, d.at(i, j));
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const SparseVec& row(int i) const { return data_[static_cast<size_t>(i)]; }

    void set(int i, int j, const Scalar& v) {
        if (v.is_zero())
            data_[static_cast<size_t>(i)].erase(j);
        else
            data_[static_cast<size_t>(i)][j] = v;
    }
    void add(int i, int j, const Scalar& v) { sparse_add_to(data_[static_cast<size_t>(i)], j, v); }
    Scalar get(int i, int j) const {
        auto it = data_[static_cast<size_t>(i)].find(j);
        return it == data_[static_cast<size_t>(i)].end() ? Scalar() : it->second;
    }

    size_t nonzeros() const {
        size_t n = 0;
        for (const auto& r : data_) n += r.size();
        return n;
    }

    bool operator==(const SparseMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const SparseMat& o) const { return !(*this == o); }

    SparseMat operator*(const SparseMat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("sparse product shape mismatch");
        SparseMat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [k, x] : data_[static_cast<size_t>(i)])
                for (const auto& [j, y] : o.data_[static_cast<size_t>(k)])
                    r.add(i, j, x * y);
        return r;
    }
    SparseMat operator-(const SparseMat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch");
        SparseMat r = *this;
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, y] : o.data_[static_cast<size_t>(i)]) r.add(i, j, -y);
        return r;
    }

    SparseMat kron(const SparseMat& o) const {
        SparseMat r(rows_ * o.rows_, cols_ * o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, x] : data_[static_cast<size_t>(i)])
                for (int p = 0; p < o.rows_; ++p)
                    for (const auto& [q, y] : o.data_[static_cast<size_t>(p)])
                        r.set(i * o.rows_ + p, j * o.cols_ + q, x * y);
        return r;
    }

    Mat to_dense() const {
        Mat d(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[static_cast<size_t>(i)]) d.at(i, j) = v;
        return d;
    }

    Vec apply(const Vec& x) const {
        if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("apply shape mismatch");
        Vec r(static_cast<size_t>(rows_));
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[static_cast<size_t>(i)])
                r[static_cast<size_t>(i)] += v * x[static_cast<size_t>(j)];
        return r;
    }

private:
    int rows_, cols_;
    std::vector<SparseVec> data_;
};

// Incremental echelon form over sparse rows. Rows are normalized so the
// leading (smallest-index) entry is 1; pivots are unique. Optionally each
// inserted row carries augmented coordinates (indices >= aug_offset) that
// are carried through the elimination, which yields kernel combinations.
// reduces x against echelon rows (pivot-keyed, pivot coefficient 1)
inline SparseVec reduce_modulo(const std::vector<SparseVec>& rows, SparseVec x) {
    std::map<int, const SparseVec*> by_pivot;
    for (const auto& r : rows)
        if (!r.empty()) by_pivot[r.begin()->first] = &r;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [i, v] : x) {
            auto it = by_pivot.find(i);
            if (it != by_pivot.end()) {
                Scalar f = v / it->second->begin()->second;
                sparse_axpy(x, -f, *it->second);
                changed = true;
                break;
            }
        }
    }
    return x;
}

class SparseEchelon {
public:
    explicit SparseEchelon(int cols) : cols_(cols) {}

    int cols() const { return cols_; }
    int rank() const { return static_cast<int>(rows_.size()); }
    const std::map<int, SparseVec>& rows() const { return rows_; }

    // reduce r against the stored rows (entries below cols_ only)
    SparseVec reduce(SparseVec r) const {
        while (!r.empty()) {
            auto lead = r.begin();
            if (lead->first >= cols_) break;
            auto it = rows_.find(lead->first);
            if (it == rows_.end()) break;
            Scalar f = lead->second;
            sparse_axpy(r, -f, it->second);
        }
        // continue reducing interior entries that match pivots
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto it = r.begin(); it != r.end(); ++it) {
                if (it->first >= cols_) break;
                auto p = rows_.find(it->first);
                if (p != rows_.end()) {
                    Scalar f = it->second;
                    sparse_axpy(r, -f, p->second);
                    changed = true;
                    break;
                }
            }
        }
        return r;
    }

    // returns true when the row increased the rank
    bool insert(SparseVec r) {
        r = reduce(std::move(r));
        auto lead = r.begin();
        if (r.empty() || lead->first >= cols_) {
            if (!r.empty()) null_combos_.push_back(std::move(r));
            return false;
        }
        Scalar inv = lead->second.inverse();
        if (!lead->second.is_one())
            for (auto& [i, v] : r) v *= inv;
        rows_.emplace(r.begin()->first, std::move(r));
        return true;
    }

    // full back-substitution: every stored row has zeros at other pivots
    void make_reduced() {
        for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
            SparseVec& row = it->second;
            bool changed = true;
            while (changed) {
                changed = false;
                for (auto e = std::next(row.begin()); e != row.end(); ++e) {
                    if (e->first >= cols_) break;
                    auto p = rows_.find(e->first);
                    if (p != rows_.end() && p->first != it->first) {
                        Scalar f = e->second;
                        sparse_axpy(row, -f, p->second);
                        changed = true;
                        break;
                    }
                }
            }
        }
    }

    bool has_pivot(int c) const { return rows_.count(c) != 0; }

    // rows that reduced to zero on the main columns; their surviving
    // augmented entries encode kernel combinations of the inserted rows
    const std::vector<SparseVec>& null_combos() const { return null_combos_; }

private:
    int cols_;
    std::map<int, SparseVec> rows_;
    std::vector<SparseVec> null_combos_;
};

} // namespace braidlab

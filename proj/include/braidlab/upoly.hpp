#pragma once

#include <stdexcept>
#include <vector>

#include "braidlab/matrix.hpp"
#include "braidlab/scalar.hpp"

namespace braidlab {

// Dense univariate polynomial over the scalar field (variable = lambda).
class UPoly {
public:
    UPoly() = default;
    explicit UPoly(Scalar c) {
        if (!c.is_zero()) coef_.push_back(std::move(c));
    }
    explicit UPoly(std::vector<Scalar> coef) : coef_(std::move(coef)) { trim(); }

    static UPoly var() { return UPoly(std::vector<Scalar>{Scalar(), Scalar(1L)}); }
    static UPoly monomial(const Scalar& c, int k) {
        std::vector<Scalar> v(static_cast<size_t>(k) + 1);
        v.back() = c;
        return UPoly(std::move(v));
    }

    bool is_zero() const { return coef_.empty(); }
    int degree() const { return static_cast<int>(coef_.size()) - 1; }
    const Scalar& lead() const { return coef_.back(); }
    Scalar coeff(int i) const {
        if (i < 0 || i > degree()) return Scalar();
        return coef_[static_cast<size_t>(i)];
    }
    const std::vector<Scalar>& coefficients() const { return coef_; }

    bool operator==(const UPoly& o) const { return coef_ == o.coef_; }

    UPoly operator-() const {
        UPoly r = *this;
        for (auto& c : r.coef_) c = -c;
        return r;
    }
    UPoly operator+(const UPoly& o) const {
        std::vector<Scalar> r(std::max(coef_.size(), o.coef_.size()));
        for (size_t i = 0; i < r.size(); ++i) {
            if (i < coef_.size()) r[i] += coef_[i];
            if (i < o.coef_.size()) r[i] += o.coef_[i];
        }
        return UPoly(std::move(r));
    }
    UPoly operator-(const UPoly& o) const { return *this + (-o); }
    UPoly operator*(const UPoly& o) const {
        if (is_zero() || o.is_zero()) return {};
        std::vector<Scalar> r(coef_.size() + o.coef_.size() - 1);
        for (size_t i = 0; i < coef_.size(); ++i) {
            if (coef_[i].is_zero()) continue;
            for (size_t j = 0; j < o.coef_.size(); ++j) r[i + j] += coef_[i] * o.coef_[j];
        }
        return UPoly(std::move(r));
    }
    UPoly operator*(const Scalar& s) const {
        if (s.is_zero()) return {};
        UPoly r = *this;
        for (auto& c : r.coef_) c *= s;
        return r;
    }

    // division with remainder over the field
    std::pair<UPoly, UPoly> divmod(const UPoly& b) const {
        if (b.is_zero()) throw math_error("polynomial division by zero");
        UPoly r = *this;
        std::vector<Scalar> q;
        if (!r.is_zero() && r.degree() >= b.degree())
            q.resize(static_cast<size_t>(r.degree() - b.degree()) + 1);
        Scalar linv = b.lead().inverse();
        while (!r.is_zero() && r.degree() >= b.degree()) {
            int k = r.degree() - b.degree();
            Scalar c = r.lead() * linv;
            q[static_cast<size_t>(k)] = c;
            // r -= c * x^k * b
            for (int i = 0; i <= b.degree(); ++i)
                r.coef_[static_cast<size_t>(i + k)] -= c * b.coef_[static_cast<size_t>(i)];
            r.trim();
        }
        return {UPoly(std::move(q)), r};
    }

    UPoly monic() const {
        if (is_zero()) return {};
        return *this * lead().inverse();
    }

    static UPoly gcd(UPoly a, UPoly b) {
        while (!b.is_zero()) {
            UPoly r = a.divmod(b).second;
            a = std::move(b);
            b = std::move(r).monic(); // keep coefficients reduced
        }
        return a.monic();
    }

    UPoly derivative() const {
        if (coef_.size() <= 1) return {};
        std::vector<Scalar> r(coef_.size() - 1);
        for (size_t i = 1; i < coef_.size(); ++i)
            r[i - 1] = coef_[i] * Scalar(static_cast<long>(i));
        return UPoly(std::move(r));
    }

    bool squarefree() const {
        if (is_zero()) return false;
        if (degree() <= 1) return true;
        return gcd(*this, derivative()).degree() == 0;
    }

    Scalar eval(const Scalar& x) const {
        Scalar acc;
        for (size_t i = coef_.size(); i-- > 0;) acc = acc * x + coef_[i];
        return acc;
    }

    // divides out (lambda - root) once; throws when root is not a root
    UPoly deflate(const Scalar& root) const {
        UPoly lin(std::vector<Scalar>{-root, Scalar(1L)});
        auto [q, r] = divmod(lin);
        if (!r.is_zero()) throw math_error("deflate: not a root");
        return q;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            if (coeff(i).is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += "(" + coeff(i).to_string() + ")";
            if (i > 0) s += "*L^" + std::to_string(i);
        }
        return s;
    }

private:
    void trim() {
        while (!coef_.empty() && coef_.back().is_zero()) coef_.pop_back();
    }
    std::vector<Scalar> coef_;
};

// characteristic polynomial det(lambda*I - A) by Faddeev-LeVerrier
inline UPoly char_poly(const Mat& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("char_poly of non-square matrix");
    int n = a.rows();
    std::vector<Scalar> c(static_cast<size_t>(n) + 1);
    c[static_cast<size_t>(n)] = Scalar(1L);
    Mat m = Mat::identity(n);
    for (int k = 1; k <= n; ++k) {
        m = a * m;
        Scalar ck = -(m.trace() / Scalar(static_cast<long>(k)));
        c[static_cast<size_t>(n - k)] = ck;
        for (int i = 0; i < n; ++i) m.at(i, i) += ck;
    }
    return UPoly(std::move(c));
}

// minimal polynomial: lcm of the minimal polynomials of the cyclic
// subspaces generated by the standard basis vectors
inline UPoly min_poly(const Mat& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("min_poly of non-square matrix");
    int n = a.rows();
    UPoly m(Scalar(1L));
    for (int s = 0; s < n; ++s) {
        // grow the Krylov chain e_s, A e_s, ... until dependent
        std::vector<Vec> chain;
        Vec x(static_cast<size_t>(n));
        x[static_cast<size_t>(s)] = Scalar(1L);
        UPoly local;
        while (true) {
            // solve chain^T * c = x to detect dependence
            Mat cm(n, static_cast<int>(chain.size()));
            for (size_t j = 0; j < chain.size(); ++j)
                for (int i = 0; i < n; ++i) cm.at(i, static_cast<int>(j)) = chain[j][static_cast<size_t>(i)];
            std::optional<Vec> sol;
            if (!chain.empty()) sol = cm.solve(x);
            if (sol) {
                std::vector<Scalar> coef(chain.size() + 1);
                for (size_t j = 0; j < chain.size(); ++j) coef[j] = -(*sol)[j];
                coef[chain.size()] = Scalar(1L);
                local = UPoly(std::move(coef));
                break;
            }
            chain.push_back(x);
            x = a.apply(x);
        }
        // m = lcm(m, local)
        UPoly g = UPoly::gcd(m, local);
        m = (m * local).divmod(g).first.monic();
        if (m.degree() == n) break;
    }
    return m;
}

} // namespace braidlab

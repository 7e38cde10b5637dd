#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace braidlab {

// Dense polynomial over Z in the symbol v. Coefficient i is the
// coefficient of v^i; the vector never ends in a zero, and the zero
// polynomial is the empty vector.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(const mpz_class& c) {
        if (c != 0) coef_.push_back(c);
    }
    explicit IntPoly(long c) : IntPoly(mpz_class(c)) {}
    explicit IntPoly(std::vector<mpz_class> coef) : coef_(std::move(coef)) { trim(); }

    static IntPoly monomial(const mpz_class& c, int k) {
        if (c == 0) return {};
        std::vector<mpz_class> v(static_cast<size_t>(k) + 1);
        v.back() = c;
        return IntPoly(std::move(v));
    }
    static IntPoly var() { return monomial(1, 1); }

    bool is_zero() const { return coef_.empty(); }
    bool is_one() const { return coef_.size() == 1 && coef_[0] == 1; }
    // degree of the zero polynomial is -1 by convention
    int degree() const { return static_cast<int>(coef_.size()) - 1; }
    const mpz_class& lead() const { return coef_.back(); }
    const std::vector<mpz_class>& coefficients() const { return coef_; }
    mpz_class coeff(int i) const {
        if (i < 0 || i > degree()) return 0;
        return coef_[static_cast<size_t>(i)];
    }
    // index of the lowest nonzero coefficient (v-adic valuation); -1 for zero
    int valuation() const {
        for (size_t i = 0; i < coef_.size(); ++i)
            if (coef_[i] != 0) return static_cast<int>(i);
        return -1;
    }

    bool operator==(const IntPoly& o) const { return coef_ == o.coef_; }
    bool operator!=(const IntPoly& o) const { return !(*this == o); }

    IntPoly operator-() const {
        IntPoly r(*this);
        for (auto& c : r.coef_) c = -c;
        return r;
    }
    IntPoly operator+(const IntPoly& o) const {
        std::vector<mpz_class> r(std::max(coef_.size(), o.coef_.size()));
        for (size_t i = 0; i < r.size(); ++i) {
            if (i < coef_.size()) r[i] += coef_[i];
            if (i < o.coef_.size()) r[i] += o.coef_[i];
        }
        return IntPoly(std::move(r));
    }
    IntPoly operator-(const IntPoly& o) const { return *this + (-o); }
    IntPoly operator*(const IntPoly& o) const {
        if (is_zero() || o.is_zero()) return {};
        std::vector<mpz_class> r(coef_.size() + o.coef_.size() - 1);
        for (size_t i = 0; i < coef_.size(); ++i)
            for (size_t j = 0; j < o.coef_.size(); ++j)
                r[i + j] += coef_[i] * o.coef_[j];
        return IntPoly(std::move(r));
    }
    IntPoly operator*(const mpz_class& s) const {
        if (s == 0) return {};
        IntPoly r(*this);
        for (auto& c : r.coef_) c *= s;
        return r;
    }
    // multiply by v^k
    IntPoly shifted(int k) const {
        if (is_zero() || k == 0) return *this;
        std::vector<mpz_class> r(coef_.size() + static_cast<size_t>(k));
        for (size_t i = 0; i < coef_.size(); ++i) r[i + static_cast<size_t>(k)] = coef_[i];
        return IntPoly(std::move(r));
    }

    // gcd of all coefficients, sign matching the leading coefficient; 0 for zero
    mpz_class content() const {
        mpz_class g = 0;
        for (const auto& c : coef_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (!is_zero() && lead() < 0) g = -g;
        return g;
    }
    IntPoly primitive_part() const {
        if (is_zero()) return {};
        return divexact(content());
    }
    IntPoly divexact(const mpz_class& s) const {
        IntPoly r(*this);
        for (auto& c : r.coef_) {
            mpz_class q, rem;
            mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), c.get_mpz_t(), s.get_mpz_t());
            if (rem != 0) throw std::logic_error("IntPoly::divexact: not divisible");
            c = q;
        }
        return r;
    }

    // pseudo-remainder: lc(B)^(deg A - deg B + 1) * A = Q*B + R with deg R < deg B
    static IntPoly pseudo_rem(const IntPoly& a, const IntPoly& b) {
        if (b.is_zero()) throw std::logic_error("pseudo_rem by zero");
        IntPoly r = a;
        int db = b.degree();
        int e = a.degree() - db + 1;
        const mpz_class& lb = b.lead();
        while (!r.is_zero() && r.degree() >= db) {
            int k = r.degree() - db;
            mpz_class lr = r.lead();
            r = r * lb - b.shifted(k) * lr;
            --e;
        }
        if (e > 0) {
            mpz_class f;
            mpz_pow_ui(f.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(e));
            r = r * f;
        }
        return r;
    }

    // exact polynomial division; throws if the division leaves a remainder
    IntPoly divexact_poly(const IntPoly& b) const {
        if (b.is_zero()) throw std::logic_error("IntPoly division by zero");
        IntPoly r = *this;
        std::vector<mpz_class> q(r.is_zero() || r.degree() < b.degree()
                                     ? 0
                                     : static_cast<size_t>(r.degree() - b.degree()) + 1);
        while (!r.is_zero() && r.degree() >= b.degree()) {
            mpz_class c, rem;
            mpz_tdiv_qr(c.get_mpz_t(), rem.get_mpz_t(), r.lead().get_mpz_t(),
                        b.lead().get_mpz_t());
            if (rem != 0) throw std::logic_error("IntPoly::divexact_poly: not divisible");
            int k = r.degree() - b.degree();
            q[static_cast<size_t>(k)] = c;
            r = r - b.shifted(k) * c;
        }
        if (!r.is_zero()) throw std::logic_error("IntPoly::divexact_poly: remainder");
        return IntPoly(std::move(q));
    }

    // subresultant PRS gcd; result primitive with positive leading coefficient
    static IntPoly gcd(IntPoly a, IntPoly b) {
        if (a.is_zero()) return normalize_sign(b.primitive_part());
        if (b.is_zero()) return normalize_sign(a.primitive_part());
        a = a.primitive_part();
        b = b.primitive_part();
        if (a.degree() < b.degree()) std::swap(a, b);
        mpz_class g = 1, h = 1;
        while (true) {
            int delta = a.degree() - b.degree();
            IntPoly r = pseudo_rem(a, b);
            if (r.is_zero()) break;
            if (r.degree() == 0) return IntPoly(mpz_class(1));
            mpz_class hd;
            mpz_pow_ui(hd.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(delta));
            a = b;
            b = r.divexact(g * hd);
            g = a.lead();
            if (delta > 0) {
                mpz_class gd;
                mpz_pow_ui(gd.get_mpz_t(), g.get_mpz_t(), static_cast<unsigned long>(delta));
                // h = g^delta * h^(1-delta)
                mpz_class hpow;
                if (delta == 1) {
                    h = gd;
                } else {
                    mpz_pow_ui(hpow.get_mpz_t(), h.get_mpz_t(),
                               static_cast<unsigned long>(delta - 1));
                    mpz_class q2, rem2;
                    mpz_tdiv_qr(q2.get_mpz_t(), rem2.get_mpz_t(), gd.get_mpz_t(),
                                hpow.get_mpz_t());
                    if (rem2 != 0) throw std::logic_error("subresultant h update");
                    h = q2;
                }
            }
        }
        return normalize_sign(b.primitive_part());
    }

    IntPoly derivative() const {
        if (coef_.size() <= 1) return {};
        std::vector<mpz_class> r(coef_.size() - 1);
        for (size_t i = 1; i < coef_.size(); ++i) r[i - 1] = coef_[i] * mpz_class(i);
        return IntPoly(std::move(r));
    }

    mpq_class eval(const mpq_class& x) const {
        mpq_class acc = 0;
        for (size_t i = coef_.size(); i-- > 0;) acc = acc * x + mpq_class(coef_[i]);
        return acc;
    }

    // total order used only to make container iteration and test output deterministic
    static int compare(const IntPoly& a, const IntPoly& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
        for (size_t i = a.coef_.size(); i-- > 0;) {
            int c = cmp(a.coef_[i], b.coef_[i]);
            if (c != 0) return c;
        }
        return 0;
    }

    // renders within the scalar grammar: terms joined by binary +/-,
    // coefficients as integers, powers as v^k
    std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        bool first = true;
        for (int k = degree(); k >= 0; --k) {
            const mpz_class c = coeff(k);
            if (c == 0) continue;
            mpz_class a = abs(c);
            std::string term;
            if (k == 0) {
                term = a.get_str();
            } else {
                std::string vp = (k == 1) ? "v" : "v^" + std::to_string(k);
                term = (a == 1) ? vp : a.get_str() + "*" + vp;
            }
            if (first) {
                // a leading negative coefficient is emitted as "-c*v^k" so the
                // string still parses as integer-atom * power
                if (c < 0) {
                    if (k == 0)
                        term = c.get_str();
                    else
                        term = c.get_str() + "*" + ((k == 1) ? "v" : "v^" + std::to_string(k));
                }
                out += term;
                first = false;
            } else {
                out += (c < 0) ? "-" : "+";
                out += term;
            }
        }
        return out;
    }

private:
    static IntPoly normalize_sign(IntPoly p) {
        if (!p.is_zero() && p.lead() < 0) return -p;
        return p;
    }
    void trim() {
        while (!coef_.empty() && coef_.back() == 0) coef_.pop_back();
    }
    std::vector<mpz_class> coef_;
};

} // namespace braidlab

#pragma once

#include <gmpxx.h>

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "braidlab/intpoly.hpp"

namespace braidlab {

enum class Field { Q, Qv };

inline std::string field_name(Field f) { return f == Field::Q ? "Q" : "Qv"; }
inline std::optional<Field> field_from_name(const std::string& s) {
    if (s == "Q") return Field::Q;
    if (s == "Qv") return Field::Qv;
    return std::nullopt;
}

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct math_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Element of Q or Q(v). Constants are always held as a reduced mpq with
// positive denominator; a genuine rational function is held as a reduced
// fraction of integer polynomials with positive leading denominator
// coefficient and coprime contents. Equality is representation equality.
class Scalar {
public:
    Scalar() : rat_(0) {}
    Scalar(long n) : rat_(n) {}
    Scalar(long n, long d) : rat_(n, d) {
        if (d == 0) throw math_error("division by zero");
        rat_.canonicalize();
    }
    explicit Scalar(mpq_class q) : rat_(std::move(q)) { rat_.canonicalize(); }
    explicit Scalar(const mpz_class& z) : rat_(z) {}

    static Scalar from_fraction(IntPoly num, IntPoly den) {
        if (den.is_zero()) throw math_error("division by zero polynomial");
        Scalar s;
        s.assign_fraction(std::move(num), std::move(den));
        return s;
    }
    static Scalar v() { return from_fraction(IntPoly::var(), IntPoly(1L)); }

    bool is_rational() const { return !fun_; }
    bool is_zero() const { return !fun_ && rat_ == 0; }
    bool is_one() const { return !fun_ && rat_ == 1; }
    const mpq_class& as_rational() const {
        if (fun_) throw math_error("scalar is not a rational number");
        return rat_;
    }
    // numerator/denominator as integer polynomials (degree 0 for rationals)
    IntPoly numerator_poly() const {
        return fun_ ? num_ : IntPoly(rat_.get_num());
    }
    IntPoly denominator_poly() const {
        return fun_ ? den_ : IntPoly(rat_.get_den());
    }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (a.fun_ != b.fun_) return false;
        if (!a.fun_) return a.rat_ == b.rat_;
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    // total order: rationals by value, then functions lexicographically;
    // used for deterministic sorting only
    static int compare(const Scalar& a, const Scalar& b) {
        if (!a.fun_ && !b.fun_) return cmp(a.rat_, b.rat_);
        if (!a.fun_) return -1;
        if (!b.fun_) return 1;
        int c = IntPoly::compare(a.num_, b.num_);
        if (c != 0) return c;
        return IntPoly::compare(a.den_, b.den_);
    }
    friend bool operator<(const Scalar& a, const Scalar& b) { return compare(a, b) < 0; }

    friend Scalar operator-(const Scalar& a) {
        Scalar r = a;
        if (r.fun_)
            r.num_ = -r.num_;
        else
            r.rat_ = -r.rat_;
        return r;
    }
    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        if (!a.fun_ && !b.fun_) return Scalar(mpq_class(a.rat_ + b.rat_));
        Scalar r;
        r.assign_fraction(a.numerator_poly() * b.denominator_poly() +
                              b.numerator_poly() * a.denominator_poly(),
                          a.denominator_poly() * b.denominator_poly());
        return r;
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        if (!a.fun_ && !b.fun_) return Scalar(mpq_class(a.rat_ * b.rat_));
        if (a.is_zero() || b.is_zero()) return Scalar();
        Scalar r;
        r.assign_fraction(a.numerator_poly() * b.numerator_poly(),
                          a.denominator_poly() * b.denominator_poly());
        return r;
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        if (b.is_zero()) throw math_error("division by zero");
        if (!a.fun_ && !b.fun_) return Scalar(mpq_class(a.rat_ / b.rat_));
        Scalar r;
        r.assign_fraction(a.numerator_poly() * b.denominator_poly(),
                          a.denominator_poly() * b.numerator_poly());
        return r;
    }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    Scalar inverse() const { return Scalar(1L) / *this; }

    Scalar pow(long e) const {
        if (e == 0) return Scalar(1L);
        Scalar base = e < 0 ? inverse() : *this;
        unsigned long n = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
        Scalar acc(1L);
        while (n) {
            if (n & 1) acc *= base;
            base = base * base;
            n >>= 1;
        }
        return acc;
    }

    // substitute v := t; throws math_error if the denominator vanishes at t
    Scalar substitute(const mpq_class& t) const {
        if (!fun_) return *this;
        mpq_class d = den_.eval(t);
        if (d == 0) throw math_error("denominator vanishes at specialization point");
        return Scalar(mpq_class(num_.eval(t) / d));
    }

    std::string to_string() const {
        if (!fun_) {
            if (rat_.get_den() == 1) return rat_.get_num().get_str();
            return rat_.get_num().get_str() + "/" + rat_.get_den().get_str();
        }
        if (den_.is_one()) return num_.to_string();
        return wrap(num_, false) + "/" + wrap(den_, true);
    }

    // Parses the scalar grammar:
    //   integer ::= ['-']digits ; atom ::= integer | "v" | "(" expr ")"
    //   power ::= atom ["^" ['-']digits]
    //   expr ::= power (("+"|"-"|"*"|"/") power)*   with *,/ binding tighter
    // Also accepts a unary minus before any atom (a strict superset).
    static Scalar parse(const std::string& text, Field field) {
        Parser p{text, 0, field};
        Scalar s = p.parse_expr();
        p.skip_ws();
        if (p.pos != text.size()) throw parse_error("trailing input in scalar: '" + text + "'");
        return s;
    }

private:
    // Parenthesize unless the rendering is a single factor. In denominator
    // position a product like 2*v must also be wrapped, since / and * are
    // left-associative at the same precedence.
    static std::string wrap(const IntPoly& p, bool denominator) {
        std::string s = p.to_string();
        bool simple = true;
        for (size_t i = 1; i < s.size(); ++i)
            if (s[i] == '+' || s[i] == '-' || (denominator && s[i] == '*')) simple = false;
        return simple ? s : "(" + s + ")";
    }

    void assign_fraction(IntPoly n, IntPoly d) {
        if (d.is_zero()) throw math_error("division by zero polynomial");
        if (n.is_zero()) {
            fun_ = false;
            rat_ = 0;
            num_ = IntPoly();
            den_ = IntPoly();
            return;
        }
        IntPoly g = IntPoly::gcd(n, d);
        if (!g.is_one()) {
            n = n.divexact_poly(g);
            d = d.divexact_poly(g);
        }
        mpz_class cn = n.content(), cd = d.content();
        mpz_class cg;
        mpz_gcd(cg.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
        if (cg != 1) {
            n = n.divexact(cg);
            d = d.divexact(cg);
        }
        if (d.lead() < 0) {
            n = -n;
            d = -d;
        }
        if (n.degree() <= 0 && d.degree() <= 0) {
            fun_ = false;
            rat_ = mpq_class(n.is_zero() ? mpz_class(0) : n.lead(), d.lead());
            rat_.canonicalize();
            num_ = IntPoly();
            den_ = IntPoly();
        } else {
            fun_ = true;
            num_ = std::move(n);
            den_ = std::move(d);
        }
    }

    struct Parser {
        const std::string& s;
        size_t pos;
        Field field;

        void skip_ws() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool peek(char c) {
            skip_ws();
            return pos < s.size() && s[pos] == c;
        }
        bool eat(char c) {
            if (peek(c)) {
                ++pos;
                return true;
            }
            return false;
        }
        [[noreturn]] void fail(const std::string& msg) {
            throw parse_error(msg + " at position " + std::to_string(pos) + " in '" + s + "'");
        }

        mpz_class parse_int() {
            skip_ws();
            size_t start = pos;
            if (pos < s.size() && s[pos] == '-') ++pos;
            size_t digits = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == digits) fail("expected integer");
            return mpz_class(s.substr(start, pos - start));
        }

        Scalar parse_atom() {
            skip_ws();
            if (pos >= s.size()) fail("unexpected end of scalar");
            char c = s[pos];
            if (c == '(') {
                ++pos;
                Scalar inner = parse_expr();
                if (!eat(')')) fail("expected ')'");
                return inner;
            }
            if (c == 'v') {
                if (field == Field::Q) fail("symbol v is not allowed over field Q");
                ++pos;
                return Scalar::v();
            }
            if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
                // a '-' followed by a digit is a signed integer; otherwise unary minus
                if (c == '-' &&
                    (pos + 1 >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos + 1])))) {
                    ++pos;
                    return -parse_atom();
                }
                return Scalar(mpq_class(parse_int()));
            }
            fail("unexpected character");
        }

        Scalar parse_power() {
            Scalar base = parse_atom();
            if (eat('^')) {
                mpz_class e = parse_int();
                if (!e.fits_slong_p()) fail("exponent out of range");
                return base.pow(e.get_si());
            }
            return base;
        }

        Scalar parse_term() {
            Scalar acc = parse_power();
            while (true) {
                if (eat('*'))
                    acc *= parse_power();
                else if (eat('/')) {
                    Scalar d = parse_power();
                    if (d.is_zero()) fail("division by zero");
                    acc /= d;
                } else
                    break;
            }
            return acc;
        }

        Scalar parse_expr() {
            Scalar acc = parse_term();
            while (true) {
                if (eat('+'))
                    acc += parse_term();
                else if (eat('-'))
                    acc -= parse_term();
                else
                    break;
            }
            return acc;
        }
    };

    bool fun_ = false;
    mpq_class rat_;
    IntPoly num_, den_;
};

inline Scalar parse_scalar(const std::string& text, Field field) {
    return Scalar::parse(text, field);
}

} // namespace braidlab

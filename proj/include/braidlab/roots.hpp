#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <vector>

#include "braidlab/scalar.hpp"
#include "braidlab/upoly.hpp"

namespace braidlab {

// --------------------------------------------------------------------------
// integer factorization (trial division + Pollard-Brent), used to make
// rational-root candidate enumeration complete

namespace detail {

inline bool is_probable_prime(const mpz_class& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

inline mpz_class pollard_brent(const mpz_class& n) {
    if (n % 2 == 0) return 2;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xb5a1d1abUL);
    while (true) {
        mpz_class y = rng.get_z_range(n - 1) + 1;
        mpz_class c = rng.get_z_range(n - 1) + 1;
        mpz_class m = 128, g = 1, r = 1, q = 1, x, ys;
        while (g == 1) {
            x = y;
            for (mpz_class i = 0; i < r; ++i) y = (y * y + c) % n;
            mpz_class k = 0;
            while (k < r && g == 1) {
                ys = y;
                mpz_class lim = std::min(m, mpz_class(r - k));
                for (mpz_class i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                mpz_class d = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
            }
        }
        if (g != n) return g;
    }
}

inline void factor_into(mpz_class n, std::map<mpz_class, int>& out) {
    if (n <= 1) return;
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L, 43L}) {
        while (n % p == 0) {
            out[mpz_class(p)]++;
            n /= p;
        }
    }
    mpz_class d = 47;
    while (d * d <= n && d < 100000) {
        while (n % d == 0) {
            out[d]++;
            n /= d;
        }
        d += 2;
    }
    if (n == 1) return;
    if (is_probable_prime(n)) {
        out[n]++;
        return;
    }
    mpz_class f = pollard_brent(n);
    factor_into(f, out);
    factor_into(n / f, out);
}

} // namespace detail

inline std::map<mpz_class, int> factor_integer(const mpz_class& n) {
    std::map<mpz_class, int> f;
    detail::factor_into(abs(n), f);
    return f;
}

inline std::vector<mpz_class> positive_divisors(const mpz_class& n) {
    auto f = factor_integer(n);
    std::vector<mpz_class> divs{1};
    for (const auto& [p, e] : f) {
        size_t sz = divs.size();
        mpz_class pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < sz; ++i) divs.push_back(divs[i] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

// --------------------------------------------------------------------------
// rational roots of a polynomial with rational coefficients

struct RootList {
    std::vector<std::pair<Scalar, int>> roots; // (value, multiplicity)
    bool split = false;                        // all roots lie in the base field
};

inline RootList rational_roots(const UPoly& p) {
    RootList out;
    if (p.is_zero()) throw math_error("roots of the zero polynomial");
    UPoly f = p;
    // strip roots at zero
    int zero_mult = 0;
    while (f.degree() >= 1 && f.coeff(0).is_zero()) {
        f = f.divmod(UPoly::var()).first;
        ++zero_mult;
    }
    if (zero_mult > 0) out.roots.push_back({Scalar(), zero_mult});
    if (f.degree() >= 1) {
        // clear denominators to a primitive integer polynomial
        mpz_class lcm = 1;
        for (int i = 0; i <= f.degree(); ++i) {
            const mpq_class c = f.coeff(i).as_rational();
            mpz_class l;
            mpz_lcm(l.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
            lcm = l;
        }
        std::vector<mpz_class> zc(static_cast<size_t>(f.degree()) + 1);
        for (int i = 0; i <= f.degree(); ++i) {
            const mpq_class scaled = f.coeff(i).as_rational() * lcm;
            zc[static_cast<size_t>(i)] = scaled.get_num(); // exact: den divides lcm
        }
        IntPoly zp{std::vector<mpz_class>(zc)};
        zp = zp.primitive_part();
        auto ps = positive_divisors(zp.coeff(0));
        auto qs = positive_divisors(zp.lead());
        for (const auto& pd : ps)
            for (const auto& qd : qs) {
                mpz_class g;
                mpz_gcd(g.get_mpz_t(), pd.get_mpz_t(), qd.get_mpz_t());
                if (g != 1) continue;
                for (int sign : {1, -1}) {
                    mpq_class cand(sign * pd, qd);
                    cand.canonicalize();
                    if (zp.eval(cand) != 0) continue;
                    Scalar root{cand};
                    int mult = 0;
                    while (true) {
                        auto [q, r] = f.divmod(UPoly(std::vector<Scalar>{-root, Scalar(1L)}));
                        if (!r.is_zero()) break;
                        f = q;
                        ++mult;
                    }
                    if (mult > 0) out.roots.push_back({root, mult});
                }
            }
    }
    out.split = f.degree() <= 0;
    std::sort(out.roots.begin(), out.roots.end(),
              [](const auto& a, const auto& b) { return Scalar::compare(a.first, b.first) < 0; });
    return out;
}

// --------------------------------------------------------------------------
// roots in Q(v). Two stages: (a) monomial candidates c*v^k read off the
// Newton polygon of the cleared polynomial, (b) specialization of v at
// rational points, rational-root search there, and exact re-verification of
// interpolated low-degree candidates. Roots that survive are divided out;
// a nonconstant residual is reported as non-split, never guessed.

namespace detail {

// clears a Q(v)[lambda] polynomial to Z[v] coefficients
inline std::vector<IntPoly> clear_to_intpoly(const UPoly& p) {
    IntPoly den(1L);
    for (int i = 0; i <= p.degree(); ++i) {
        IntPoly d = p.coeff(i).denominator_poly();
        IntPoly g = IntPoly::gcd(den, d);
        den = den * d.divexact_poly(g);
    }
    std::vector<IntPoly> out(static_cast<size_t>(p.degree()) + 1);
    for (int i = 0; i <= p.degree(); ++i) {
        IntPoly n = p.coeff(i).numerator_poly();
        IntPoly d = p.coeff(i).denominator_poly();
        out[static_cast<size_t>(i)] = n * den.divexact_poly(d);
    }
    return out;
}

// candidate integer exponents k for a root c*v^k: slopes between pairs of
// support points of the lower and upper Newton polygons
inline std::vector<int> monomial_exponent_candidates(const std::vector<IntPoly>& a) {
    std::vector<int> ks;
    std::vector<std::pair<int, std::pair<int, int>>> pts; // (i, (val, deg))
    for (size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero())
            pts.push_back({static_cast<int>(i), {a[i].valuation(), a[i].degree()}});
    for (size_t s = 0; s < pts.size(); ++s)
        for (size_t t = s + 1; t < pts.size(); ++t) {
            int di = pts[t].first - pts[s].first;
            int dval = pts[s].second.first - pts[t].second.first;
            int ddeg = pts[s].second.second - pts[t].second.second;
            if (dval % di == 0) ks.push_back(dval / di);
            if (ddeg % di == 0) ks.push_back(ddeg / di);
        }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

// rational coefficients c for which c*v^k might be a root: rational roots of
// the polynomial formed by the extremal v-coefficients along slope k
inline std::vector<Scalar> monomial_coeff_candidates(const std::vector<IntPoly>& a, int k) {
    std::vector<Scalar> out;
    for (bool low : {true, false}) {
        // value of the extremal v-degree of a_i * (v^k)^i
        bool have = false;
        int best = 0;
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i].is_zero()) continue;
            int w = (low ? a[i].valuation() : a[i].degree()) + k * static_cast<int>(i);
            if (!have || (low ? w < best : w > best)) {
                best = w;
                have = true;
            }
        }
        if (!have) continue;
        std::vector<Scalar> edge(a.size());
        bool nontrivial = false;
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i].is_zero()) continue;
            int w = (low ? a[i].valuation() : a[i].degree()) + k * static_cast<int>(i);
            if (w == best) {
                edge[i] = Scalar(a[i].coeff(low ? a[i].valuation() : a[i].degree()));
                if (i > 0) nontrivial = true;
            }
        }
        if (!nontrivial) continue;
        RootList rl = rational_roots(UPoly(std::move(edge)));
        for (const auto& [r, m] : rl.roots)
            if (!r.is_zero()) out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// rational-function interpolation through (t_i, y_i) with numerator degree
// <= dn and denominator degree <= dd (denominator monic); nullopt if the
// linear system has no solution
inline std::optional<Scalar> interpolate_rational(const std::vector<mpq_class>& ts,
                                                  const std::vector<mpq_class>& ys, int dn,
                                                  int dd) {
    // unknowns: n_0..n_dn, d_0..d_{dd-1}; d_dd = 1
    int unknowns = dn + 1 + dd;
    Mat m(static_cast<int>(ts.size()), unknowns);
    Vec rhs(ts.size());
    for (size_t r = 0; r < ts.size(); ++r) {
        mpq_class tp = 1;
        for (int j = 0; j <= dn; ++j) {
            m.at(static_cast<int>(r), j) = Scalar(tp);
            tp *= ts[r];
        }
        tp = 1;
        for (int j = 0; j < dd; ++j) {
            m.at(static_cast<int>(r), dn + 1 + j) = Scalar(mpq_class(-ys[r] * tp));
            tp *= ts[r];
        }
        mpq_class tdd = 1;
        for (int j = 0; j < dd; ++j) tdd *= ts[r];
        rhs[r] = Scalar(mpq_class(ys[r] * tdd));
    }
    auto sol = m.solve(rhs);
    if (!sol) return std::nullopt;
    std::vector<mpz_class> ncoef(static_cast<size_t>(dn) + 1), dcoef(static_cast<size_t>(dd) + 1);
    // clear the common denominator of the solution
    mpz_class lcm = 1;
    for (const auto& s : *sol) {
        mpz_class l;
        mpz_lcm(l.get_mpz_t(), lcm.get_mpz_t(), s.as_rational().get_den().get_mpz_t());
        lcm = l;
    }
    for (int j = 0; j <= dn; ++j)
        ncoef[static_cast<size_t>(j)] = mpz_class((*sol)[static_cast<size_t>(j)].as_rational() * lcm);
    for (int j = 0; j < dd; ++j)
        dcoef[static_cast<size_t>(j)] =
            mpz_class((*sol)[static_cast<size_t>(dn + 1 + j)].as_rational() * lcm);
    dcoef[static_cast<size_t>(dd)] = lcm;
    IntPoly den{std::move(dcoef)};
    if (den.is_zero()) return std::nullopt;
    return Scalar::from_fraction(IntPoly{std::move(ncoef)}, std::move(den));
}

} // namespace detail

inline RootList qv_roots(const UPoly& p) {
    RootList out;
    if (p.is_zero()) throw math_error("roots of the zero polynomial");
    UPoly f = p;

    auto take_root = [&f, &out](const Scalar& root) {
        int mult = 0;
        while (f.degree() >= 1 && f.eval(root).is_zero()) {
            f = f.deflate(root);
            ++mult;
        }
        if (mult > 0) out.roots.push_back({root, mult});
        return mult > 0;
    };

    // lambda = 0
    take_root(Scalar());

    // stage (a): monomial candidates from the Newton polygon
    bool progress = true;
    while (progress && f.degree() >= 1) {
        progress = false;
        auto cleared = detail::clear_to_intpoly(f);
        for (int k : detail::monomial_exponent_candidates(cleared)) {
            for (const auto& c : detail::monomial_coeff_candidates(cleared, k)) {
                Scalar cand = c * Scalar::v().pow(k);
                if (f.degree() >= 1 && f.eval(cand).is_zero()) {
                    take_root(cand);
                    progress = true;
                }
            }
            if (progress) break; // re-derive the polygon after deflation
        }
    }

    // stage (b): specialize v at rational points and interpolate candidates
    if (f.degree() >= 1) {
        const std::vector<mpq_class> points{2, 3, 5, 7};
        std::vector<mpq_class> good_ts;
        std::vector<std::vector<mpq_class>> root_sets;
        bool specialization_ok = true;
        for (const auto& t : points) {
            UPoly ft;
            try {
                std::vector<Scalar> c(static_cast<size_t>(f.degree()) + 1);
                for (int i = 0; i <= f.degree(); ++i) c[static_cast<size_t>(i)] = f.coeff(i).substitute(t);
                ft = UPoly(std::move(c));
            } catch (const math_error&) {
                continue; // denominator vanished at t; skip the point
            }
            if (ft.degree() != f.degree()) continue; // leading coefficient vanished
            RootList rl = rational_roots(ft);
            std::vector<mpq_class> rs;
            for (const auto& [r, m] : rl.roots) rs.push_back(r.as_rational());
            if (rs.empty()) {
                specialization_ok = false;
                break;
            }
            good_ts.push_back(t);
            root_sets.push_back(std::move(rs));
        }
        if (specialization_ok && good_ts.size() == points.size()) {
            // choose one root per point in all combinations; interpolate with
            // numerator/denominator degrees (a,b), a+b <= 2, verify exactly
            std::vector<size_t> idx(good_ts.size(), 0);
            bool done = false;
            while (!done && f.degree() >= 1) {
                std::vector<mpq_class> ys;
                for (size_t i = 0; i < good_ts.size(); ++i) ys.push_back(root_sets[i][idx[i]]);
                for (auto [dn, dd] : {std::pair{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}) {
                    auto cand = detail::interpolate_rational(good_ts, ys, dn, dd);
                    if (cand && f.eval(*cand).is_zero()) {
                        take_root(*cand);
                        break;
                    }
                }
                // advance the combination counter
                size_t i = 0;
                while (i < idx.size()) {
                    if (++idx[i] < root_sets[i].size()) break;
                    idx[i] = 0;
                    ++i;
                }
                if (i == idx.size()) done = true;
            }
        }
    }

    out.split = f.degree() <= 0;
    std::sort(out.roots.begin(), out.roots.end(),
              [](const auto& a, const auto& b) { return Scalar::compare(a.first, b.first) < 0; });
    return out;
}

inline RootList field_roots(const UPoly& p, Field field) {
    if (field == Field::Q) {
        for (int i = 0; i <= p.degree(); ++i)
            if (!p.coeff(i).is_rational())
                return qv_roots(p); // coefficients escaped Q; fall back
        return rational_roots(p);
    }
    return qv_roots(p);
}

} // namespace braidlab

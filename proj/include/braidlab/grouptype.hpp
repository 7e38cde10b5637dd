#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "braidlab/braiding.hpp"
#include "braidlab/eigen.hpp"
#include "braidlab/frt.hpp"
#include "braidlab/roots.hpp"
#include "braidlab/smith.hpp"

namespace braidlab {
namespace grouptype {

// A group given either by a full multiplication table or as a finitely
// generated abelian group with an order vector (0 = infinite). Elements are
// integer vectors: a single index for table groups, an exponent vector
// reduced modulo the orders for fg-abelian ones.
struct Group {
    enum class Kind { Table, FgAbelian };
    Kind kind = Kind::FgAbelian;

    // table presentation
    std::vector<std::string> names;
    std::vector<std::vector<int>> mul;

    // fg-abelian presentation
    std::vector<long> orders;

    using Elt = std::vector<long>;

    int generator_count() const {
        return kind == Kind::Table ? static_cast<int>(names.size())
                                   : static_cast<int>(orders.size());
    }

    Elt reduce(Elt e) const {
        if (kind == Kind::Table) return e;
        for (size_t i = 0; i < e.size(); ++i) {
            long o = orders[i];
            if (o > 0) e[i] = ((e[i] % o) + o) % o;
        }
        return e;
    }
    Elt identity() const {
        if (kind == Kind::Table) {
            for (int e = 0; e < static_cast<int>(names.size()); ++e) {
                bool id = true;
                for (int x = 0; x < static_cast<int>(names.size()); ++x)
                    id = id && mul[static_cast<size_t>(e)][static_cast<size_t>(x)] == x &&
                         mul[static_cast<size_t>(x)][static_cast<size_t>(e)] == x;
                if (id) return {e};
            }
            throw input_error("multiplication table has no identity");
        }
        return Elt(orders.size(), 0);
    }
    Elt op(const Elt& a, const Elt& b) const {
        if (kind == Kind::Table)
            return {static_cast<long>(
                mul[static_cast<size_t>(a[0])][static_cast<size_t>(b[0])])};
        Elt r(a.size());
        for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
        return reduce(r);
    }
    Elt inverse(const Elt& a) const {
        if (kind == Kind::Table) {
            Elt id = identity();
            for (int x = 0; x < static_cast<int>(names.size()); ++x)
                if (mul[static_cast<size_t>(a[0])][static_cast<size_t>(x)] == id[0]) return {x};
            throw input_error("element has no inverse in the table");
        }
        Elt r(a.size());
        for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
        return reduce(r);
    }
    bool is_abelian() const {
        if (kind == Kind::FgAbelian) return true;
        for (size_t a = 0; a < names.size(); ++a)
            for (size_t b = a + 1; b < names.size(); ++b)
                if (mul[a][b] != mul[b][a]) return false;
        return true;
    }
    std::string show(const Elt& e) const {
        if (kind == Kind::Table) return names[static_cast<size_t>(e[0])];
        std::string s = "(";
        for (size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
        return s + ")";
    }

    // full validation of the table axioms; quadratic/cubic, so capped
    void validate(int table_cap = 256) const {
        if (kind == Kind::FgAbelian) {
            for (long o : orders)
                if (o < 0) throw input_error("orders must be nonnegative");
            return;
        }
        int n = static_cast<int>(names.size());
        if (n == 0) throw input_error("empty group table");
        if (n > table_cap) throw resource_error("group table exceeds the validation cap");
        if (static_cast<int>(mul.size()) != n) throw input_error("table row count mismatch");
        for (const auto& row : mul) {
            if (static_cast<int>(row.size()) != n) throw input_error("table column count mismatch");
            for (int v : row)
                if (v < 0 || v >= n) throw input_error("table entry out of range");
        }
        identity(); // existence
        for (int a = 0; a < n; ++a) {
            std::vector<bool> seen(static_cast<size_t>(n), false);
            for (int b = 0; b < n; ++b) seen[static_cast<size_t>(mul[static_cast<size_t>(a)][static_cast<size_t>(b)])] = true;
            for (bool s : seen)
                if (!s) throw input_error("table rows must be permutations");
        }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    int lhs = mul[static_cast<size_t>(mul[static_cast<size_t>(a)][static_cast<size_t>(b)])][static_cast<size_t>(c)];
                    int rhs = mul[static_cast<size_t>(a)][static_cast<size_t>(mul[static_cast<size_t>(b)][static_cast<size_t>(c)])];
                    if (lhs != rhs) throw input_error("multiplication table is not associative");
                }
    }
};

// Yetter-Drinfeld data over a group: a homogeneous coaction given by the
// degree map delta(m_i) = g_i (x) m_i, plus action matrices for generators
struct GroupYDData {
    Group group;
    int dim = 0;
    Field field = Field::Q;
    std::vector<Group::Elt> degrees;      // one per basis vector
    std::vector<std::pair<Group::Elt, Mat>> action; // generator -> matrix
};

struct Verdict {
    bool valid = true;
    std::string violation;
};

namespace detail {

// extend the generator action to arbitrary elements
struct ActionContext {
    const GroupYDData& d;
    std::map<Group::Elt, Mat> cache;

    explicit ActionContext(const GroupYDData& data) : d(data) {
        cache[d.group.identity()] = Mat::identity(d.dim);
        for (const auto& [g, m] : d.action) cache[d.group.reduce(g)] = m;
    }

    Mat of(const Group::Elt& raw) {
        Group::Elt e = d.group.reduce(raw);
        auto it = cache.find(e);
        if (it != cache.end()) return it->second;
        if (d.group.kind == Group::Kind::FgAbelian) {
            // product of generator powers
            Mat m = Mat::identity(d.dim);
            for (size_t t = 0; t < e.size(); ++t) {
                if (e[t] == 0) continue;
                Group::Elt gen(e.size(), 0);
                gen[t] = 1;
                auto git = cache.find(d.group.reduce(gen));
                if (git == cache.end())
                    throw input_error("action is missing a generator matrix");
                Mat base = git->second;
                long k = e[t];
                if (k < 0) {
                    auto inv = base.inverse();
                    if (!inv) throw input_error("generator action is singular");
                    base = *inv;
                    k = -k;
                }
                for (long s = 0; s < k; ++s) m = m * base;
            }
            cache[e] = m;
            return m;
        }
        // table group: BFS through products of known elements
        bool progress = true;
        while (progress && !cache.count(e)) {
            progress = false;
            std::vector<std::pair<Group::Elt, Mat>> found;
            for (const auto& [a, ma] : cache)
                for (const auto& [g, mg] : d.action) {
                    Group::Elt prod = d.group.op(a, g);
                    if (!cache.count(prod)) {
                        found.push_back({prod, ma * mg});
                        progress = true;
                    }
                }
            for (auto& [k, v] : found) cache.emplace(k, v);
        }
        it = cache.find(e);
        if (it == cache.end())
            throw input_error("action generators do not reach element " + d.group.show(e));
        return it->second;
    }
};

} // namespace detail

inline Verdict validate_group_yd(const GroupYDData& d) {
    Verdict v;
    auto fail = [&v](std::string msg) {
        v.valid = false;
        v.violation = std::move(msg);
        return v;
    };
    d.group.validate();
    if (static_cast<int>(d.degrees.size()) != d.dim) return fail("degree map size mismatch");
    for (const auto& [g, m] : d.action)
        if (m.rows() != d.dim || m.cols() != d.dim) return fail("action matrix shape mismatch");

    // the action must be a homomorphism: check the presentation relations
    if (d.group.kind == Group::Kind::FgAbelian) {
        int k = d.group.generator_count();
        std::vector<Mat> gens;
        for (int t = 0; t < k; ++t) {
            Group::Elt g(static_cast<size_t>(k), 0);
            g[static_cast<size_t>(t)] = 1;
            g = d.group.reduce(g);
            bool found = false;
            for (const auto& [ge, m] : d.action)
                if (d.group.reduce(ge) == g) {
                    gens.push_back(m);
                    found = true;
                    break;
                }
            if (!found) return fail("missing action matrix for generator " + std::to_string(t + 1));
        }
        for (int t = 0; t < k; ++t) {
            if (!gens[static_cast<size_t>(t)].inverse())
                return fail("generator " + std::to_string(t + 1) + " acts singularly");
            long o = d.group.orders[static_cast<size_t>(t)];
            if (o > 0) {
                Mat p = Mat::identity(d.dim);
                for (long s = 0; s < o; ++s) p = p * gens[static_cast<size_t>(t)];
                if (p != Mat::identity(d.dim))
                    return fail("relation g" + std::to_string(t + 1) + "^" + std::to_string(o) +
                                " = 1 violated by the action");
            }
        }
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b)
                if (gens[static_cast<size_t>(a)] * gens[static_cast<size_t>(b)] !=
                    gens[static_cast<size_t>(b)] * gens[static_cast<size_t>(a)])
                    return fail("generators " + std::to_string(a + 1) + "," + std::to_string(b + 1) +
                                " do not commute under the action");
    } else {
        // extend and compare against the table
        detail::ActionContext ctx(d);
        for (int e = 0; e < static_cast<int>(d.group.names.size()); ++e) {
            Group::Elt ge{e};
            Mat me = ctx.of(ge);
            for (const auto& [g, mg] : d.action) {
                Mat lhs = ctx.of(d.group.op(ge, g));
                if (lhs != me * mg)
                    return fail("action is not multiplicative at " + d.group.show(ge) + " * " +
                                d.group.show(g));
            }
        }
    }

    // Yetter-Drinfeld compatibility: rho(g) maps M_h into M_{g h g^{-1}}
    detail::ActionContext ctx(d);
    std::map<Group::Elt, std::vector<int>> components;
    for (int i = 0; i < d.dim; ++i) components[d.group.reduce(d.degrees[static_cast<size_t>(i)])].push_back(i);
    for (const auto& [g, mg] : d.action) {
        for (const auto& [h, idxs] : components) {
            Group::Elt target =
                d.group.reduce(d.group.op(d.group.op(g, h), d.group.inverse(g)));
            auto tit = components.find(target);
            for (int i : idxs)
                for (int r = 0; r < d.dim; ++r) {
                    if (mg.at(r, i).is_zero()) continue;
                    bool in_target = tit != components.end() &&
                                     std::count(tit->second.begin(), tit->second.end(), r) > 0;
                    if (!in_target)
                        return fail("action of " + d.group.show(g) +
                                    " leaves the homogeneous component of " + d.group.show(h));
                }
        }
    }
    return v;
}

// braiding c(m_i (x) n) = rho(g_i)(n) (x) m_i
inline BraidedVectorSpace group_braiding(const GroupYDData& d) {
    Verdict v = validate_group_yd(d);
    if (!v.valid) throw input_error("invalid Yetter-Drinfeld data: " + v.violation);
    detail::ActionContext ctx(d);
    int n = d.dim;
    SparseMat t(n * n, n * n);
    for (int i = 1; i <= n; ++i) {
        Mat rho = ctx.of(d.degrees[static_cast<size_t>(i - 1)]);
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k) {
                const Scalar& c = rho.at(k - 1, j - 1);
                if (!c.is_zero()) t.set(pair_index(k, i, n), pair_index(i, j, n), c);
            }
    }
    auto b = make_braiding(n, d.field, std::move(t), {});
    if (!check_braid_equation(b).pass)
        throw input_error("group-type data produced a non-braiding (internal error)");
    return b;
}

// --------------------------------------------------------------------------
// support subgroup H, acting kernel N, and the reduced group algebra k(H/N)

struct SupportKernel {
    // abstract presentation of H on the distinct degree generators h_1..h_s
    std::vector<Group::Elt> h_generators; // as elements of G
    IntMat h_relations;                    // columns span {x : sum x_t h_t = 1}
    bool abelian = true;
    // N as a subgroup of H (abelian route: exponent vectors in the h_t)
    std::vector<std::vector<long>> n_generators;
    AbelianQuotient h_mod_n;        // presentation of H/N when H is abelian
    std::vector<mpz_class> n_order; // |N| when finite, empty otherwise
    // table-group route keeps explicit element lists and a coset table
    std::vector<Group::Elt> h_elements; // when enumerable
    std::vector<Group::Elt> n_elements;
    std::optional<Group> quotient_table;      // H/N as a table group
    std::map<Group::Elt, int> coset_of;       // H element -> coset index
};

struct unsupported_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// sign and exponents of a scalar of the form +/- q * v^z with q a factored
// rational; nullopt when the scalar is not of that shape
struct FactoredUnit {
    int sign = 0; // exponent of -1
    long vexp = 0;
    std::map<mpz_class, long> primes;
};

inline std::optional<FactoredUnit> factor_unit(const Scalar& s) {
    if (s.is_zero()) return std::nullopt;
    FactoredUnit f;
    IntPoly num = s.numerator_poly(), den = s.denominator_poly();
    // monomials only
    auto mono = [](const IntPoly& p) -> std::optional<std::pair<mpz_class, int>> {
        int val = p.valuation();
        if (val != p.degree()) return std::nullopt;
        return std::make_pair(p.coeff(val), val);
    };
    auto mn = mono(num), md = mono(den);
    if (!mn || !md) return std::nullopt;
    f.vexp = mn->second - md->second;
    mpq_class q(mn->first, md->first);
    q.canonicalize();
    if (q < 0) {
        f.sign = 1;
        q = -q;
    }
    for (const auto& [p, e] : factor_integer(q.get_num())) f.primes[p] += e;
    for (const auto& [p, e] : factor_integer(q.get_den())) f.primes[p] -= e;
    return f;
}

} // namespace detail

inline SupportKernel support_and_kernel(const GroupYDData& d, long enumeration_cap = 100000) {
    detail::ActionContext ctx(d);
    SupportKernel out;
    // distinct degrees generate H
    for (const auto& g : d.degrees) {
        Group::Elt e = d.group.reduce(g);
        bool seen = false;
        for (const auto& h : out.h_generators) seen = seen || h == e;
        if (!seen) out.h_generators.push_back(e);
    }
    int s = static_cast<int>(out.h_generators.size());

    if (d.group.kind == Group::Kind::Table) {
        // enumerate H by closure
        std::set<std::vector<long>> h;
        std::vector<Group::Elt> frontier{d.group.identity()};
        h.insert(d.group.identity());
        while (!frontier.empty()) {
            std::vector<Group::Elt> next;
            for (const auto& a : frontier)
                for (const auto& g : out.h_generators)
                    for (const auto& e : {d.group.op(a, g), d.group.op(a, d.group.inverse(g))}) {
                        if (h.insert(e).second) next.push_back(e);
                        if (static_cast<long>(h.size()) > enumeration_cap)
                            throw resource_error("subgroup enumeration exceeds the cap");
                    }
            frontier = std::move(next);
        }
        out.h_elements.assign(h.begin(), h.end());
        for (const auto& e : out.h_elements)
            if (ctx.of(e) == Mat::identity(d.dim)) out.n_elements.push_back(e);

        // coset table for H/N (N is normal: it is the kernel of the action)
        {
            std::set<std::vector<long>> nset(out.n_elements.begin(), out.n_elements.end());
            std::vector<Group::Elt> reps;
            for (const auto& a : out.h_elements) {
                bool found = false;
                for (size_t r = 0; r < reps.size() && !found; ++r) {
                    Group::Elt diff = d.group.op(d.group.inverse(reps[r]), a);
                    if (nset.count(diff)) {
                        out.coset_of[a] = static_cast<int>(r);
                        found = true;
                    }
                }
                if (!found) {
                    out.coset_of[a] = static_cast<int>(reps.size());
                    reps.push_back(a);
                }
            }
            Group q;
            q.kind = Group::Kind::Table;
            int nc = static_cast<int>(reps.size());
            for (int r = 0; r < nc; ++r) q.names.push_back("c" + std::to_string(r));
            q.mul.assign(static_cast<size_t>(nc), std::vector<int>(static_cast<size_t>(nc)));
            for (int a = 0; a < nc; ++a)
                for (int bb = 0; bb < nc; ++bb)
                    q.mul[static_cast<size_t>(a)][static_cast<size_t>(bb)] =
                        out.coset_of.at(d.group.op(reps[static_cast<size_t>(a)],
                                                   reps[static_cast<size_t>(bb)]));
            out.quotient_table = std::move(q);
        }

        out.abelian = d.group.is_abelian();
        if (!out.abelian) {
            // the abelian presentation below does not apply; the coset table
            // above carries the full quotient
            out.n_order.push_back(static_cast<long>(out.n_elements.size()));
            return out;
        }
        // abelian: map onto exponent vectors over the generators via
        // discrete logs by enumeration
        // relations: x with prod h_t^{x_t} = 1; collect by full enumeration
        // of the box [0, ord_t) -- feasible for small table groups
        std::vector<long> gen_orders;
        for (const auto& g : out.h_generators) {
            long o = 1;
            Group::Elt p = g;
            while (p != d.group.identity()) {
                p = d.group.op(p, g);
                ++o;
                if (o > enumeration_cap) throw resource_error("generator order exceeds cap");
            }
            gen_orders.push_back(o);
        }
        std::vector<std::vector<long>> rel_cols;
        for (int t = 0; t < s; ++t) {
            std::vector<long> col(static_cast<size_t>(s), 0);
            col[static_cast<size_t>(t)] = gen_orders[static_cast<size_t>(t)];
            rel_cols.push_back(std::move(col));
        }
        // extra relations between generators are found by enumerating the
        // quotient box and testing products
        std::vector<long> idx(static_cast<size_t>(s), 0);
        long total = 1;
        for (long o : gen_orders) {
            total *= o;
            if (total > enumeration_cap) throw resource_error("relation search exceeds cap");
        }
        while (true) {
            Group::Elt prod = d.group.identity();
            for (int t = 0; t < s; ++t)
                for (long r = 0; r < idx[static_cast<size_t>(t)]; ++r)
                    prod = d.group.op(prod, out.h_generators[static_cast<size_t>(t)]);
            bool nontrivial = false;
            for (long x : idx) nontrivial = nontrivial || x != 0;
            if (nontrivial && prod == d.group.identity())
                rel_cols.push_back(std::vector<long>(idx.begin(), idx.end()));
            int t = s - 1;
            while (t >= 0 && idx[static_cast<size_t>(t)] + 1 == gen_orders[static_cast<size_t>(t)]) {
                idx[static_cast<size_t>(t)] = 0;
                --t;
            }
            if (t < 0) break;
            ++idx[static_cast<size_t>(t)];
        }
        out.h_relations = IntMat(s, static_cast<int>(rel_cols.size()));
        for (size_t c = 0; c < rel_cols.size(); ++c)
            for (int r = 0; r < s; ++r) out.h_relations.at(r, static_cast<int>(c)) = rel_cols[c][static_cast<size_t>(r)];
        // N generators: discrete logs of n_elements over the generator box
        std::vector<std::vector<long>> ngens;
        std::vector<long> idx2(static_cast<size_t>(s), 0);
        while (true) {
            Group::Elt prod = d.group.identity();
            bool nontrivial = false;
            for (long x : idx2) nontrivial = nontrivial || x != 0;
            for (int t = 0; t < s; ++t)
                for (long r = 0; r < idx2[static_cast<size_t>(t)]; ++r)
                    prod = d.group.op(prod, out.h_generators[static_cast<size_t>(t)]);
            if (nontrivial && ctx.of(prod) == Mat::identity(d.dim))
                ngens.push_back(std::vector<long>(idx2.begin(), idx2.end()));
            int t = s - 1;
            while (t >= 0 && idx2[static_cast<size_t>(t)] + 1 == gen_orders[static_cast<size_t>(t)]) {
                idx2[static_cast<size_t>(t)] = 0;
                --t;
            }
            if (t < 0) break;
            ++idx2[static_cast<size_t>(t)];
        }
        out.n_generators = std::move(ngens);
    } else {
        // fg-abelian: relations of H inside G via an integer kernel
        int k = d.group.generator_count();
        IntMat stacked(k, s + k);
        for (int t = 0; t < s; ++t)
            for (int r = 0; r < k; ++r)
                stacked.at(r, t) = out.h_generators[static_cast<size_t>(t)][static_cast<size_t>(r)];
        for (int r = 0; r < k; ++r) stacked.at(r, s + r) = d.group.orders[static_cast<size_t>(r)];
        IntMat ker = integer_kernel(stacked);
        out.h_relations = IntMat(s, ker.cols());
        for (int c = 0; c < ker.cols(); ++c)
            for (int t = 0; t < s; ++t) out.h_relations.at(t, c) = ker.at(t, c);

        // generator actions
        std::vector<Mat> gen_actions;
        for (const auto& h : out.h_generators) gen_actions.push_back(ctx.of(h));

        // decide the strategy: finite H -> enumeration; otherwise the
        // exponent-lattice method, with the matrix-order fallback for a
        // single infinite cyclic generator
        AbelianQuotient hpres = present_quotient(s, out.h_relations);
        bool h_finite = true;
        mpz_class h_order = 1;
        for (const auto& o : hpres.orders) {
            if (o == 0) h_finite = false;
            else h_order *= o;
        }
        if (h_finite && h_order <= enumeration_cap) {
            // enumerate exponent boxes of the presented coordinates
            std::vector<long> lim;
            for (const auto& o : hpres.orders) lim.push_back(o.get_si());
            std::vector<long> idx(lim.size(), 0);
            while (true) {
                // x (old coords) = uinv * idx
                std::vector<long> x(static_cast<size_t>(s), 0);
                for (int t = 0; t < s; ++t)
                    for (int u = 0; u < s; ++u)
                        x[static_cast<size_t>(t)] +=
                            hpres.uinv.at(t, u).get_si() * idx[static_cast<size_t>(u)];
                Mat rho = Mat::identity(d.dim);
                for (int t = 0; t < s; ++t) {
                    long e = x[static_cast<size_t>(t)];
                    Mat base = gen_actions[static_cast<size_t>(t)];
                    if (e < 0) {
                        base = *base.inverse();
                        e = -e;
                    }
                    for (long r = 0; r < e; ++r) rho = rho * base;
                }
                bool nontrivial = false;
                for (long e : x) nontrivial = nontrivial || e != 0;
                if (nontrivial && rho == Mat::identity(d.dim)) out.n_generators.push_back(x);
                int t = static_cast<int>(lim.size()) - 1;
                while (t >= 0 && idx[static_cast<size_t>(t)] + 1 == lim[static_cast<size_t>(t)]) {
                    idx[static_cast<size_t>(t)] = 0;
                    --t;
                }
                if (t < 0) break;
                ++idx[static_cast<size_t>(t)];
            }
        } else {
            // exponent-lattice method: simultaneous eigenvalues must be of
            // the shape +/- q v^z with factored rational q
            auto sd = simuldiag(gen_actions, d.field);
            if (sd.ok) {
                std::vector<std::vector<detail::FactoredUnit>> units; // [block][gen]
                bool factorable = true;
                for (const auto& blk : sd.blocks) {
                    std::vector<detail::FactoredUnit> row;
                    for (const auto& val : blk.values) {
                        auto f = detail::factor_unit(val);
                        if (!f) {
                            factorable = false;
                            break;
                        }
                        row.push_back(*f);
                    }
                    if (!factorable) break;
                    units.push_back(std::move(row));
                }
                if (factorable) {
                    // integer conditions: per block, v-exponent and each prime
                    std::set<mpz_class> primes;
                    for (const auto& row : units)
                        for (const auto& u : row)
                            for (const auto& [p, e] : u.primes) {
                                (void)e;
                                primes.insert(p);
                            }
                    std::vector<std::vector<long>> rows; // over x in Z^s
                    for (const auto& row : units) {
                        std::vector<long> vrow(static_cast<size_t>(s));
                        bool any = false;
                        for (int t = 0; t < s; ++t) {
                            vrow[static_cast<size_t>(t)] = row[static_cast<size_t>(t)].vexp;
                            any = any || vrow[static_cast<size_t>(t)] != 0;
                        }
                        if (any) rows.push_back(vrow);
                        for (const auto& p : primes) {
                            std::vector<long> prow(static_cast<size_t>(s), 0);
                            bool nz = false;
                            for (int t = 0; t < s; ++t) {
                                auto it = row[static_cast<size_t>(t)].primes.find(p);
                                if (it != row[static_cast<size_t>(t)].primes.end()) {
                                    prow[static_cast<size_t>(t)] = it->second;
                                    nz = nz || it->second != 0;
                                }
                            }
                            if (nz) rows.push_back(prow);
                        }
                    }
                    IntMat cond(static_cast<int>(rows.size()), s);
                    for (size_t r = 0; r < rows.size(); ++r)
                        for (int t = 0; t < s; ++t) cond.at(static_cast<int>(r), t) = rows[r][static_cast<size_t>(t)];
                    IntMat kerlat = rows.empty() ? IntMat::identity(s) : integer_kernel(cond);
                    // sign conditions modulo 2 inside the kernel lattice
                    std::vector<std::vector<int>> signrows;
                    for (const auto& row : units) {
                        std::vector<int> srow(static_cast<size_t>(kerlat.cols()), 0);
                        bool nz = false;
                        for (int c = 0; c < kerlat.cols(); ++c) {
                            long acc = 0;
                            for (int t = 0; t < s; ++t)
                                acc += row[static_cast<size_t>(t)].sign * kerlat.at(t, c).get_si();
                            srow[static_cast<size_t>(c)] = static_cast<int>(((acc % 2) + 2) % 2);
                            nz = nz || srow[static_cast<size_t>(c)] != 0;
                        }
                        if (nz) signrows.push_back(srow);
                    }
                    // solve srow . y = 0 mod 2: lattice = lift(ker mod 2) + 2 Z^r
                    int r = kerlat.cols();
                    std::vector<std::vector<long>> ygens;
                    {
                        // gaussian elimination mod 2
                        std::vector<std::vector<int>> m2 = signrows;
                        std::vector<int> pivot_col;
                        size_t rr = 0;
                        for (int c = 0; c < r && rr < m2.size(); ++c) {
                            size_t sel = rr;
                            while (sel < m2.size() && m2[sel][static_cast<size_t>(c)] == 0) ++sel;
                            if (sel == m2.size()) continue;
                            std::swap(m2[rr], m2[sel]);
                            for (size_t i = 0; i < m2.size(); ++i)
                                if (i != rr && m2[i][static_cast<size_t>(c)])
                                    for (int cc = 0; cc < r; ++cc)
                                        m2[i][static_cast<size_t>(cc)] ^= m2[rr][static_cast<size_t>(cc)];
                            pivot_col.push_back(c);
                            ++rr;
                        }
                        std::vector<bool> is_piv(static_cast<size_t>(r), false);
                        for (int c : pivot_col) is_piv[static_cast<size_t>(c)] = true;
                        for (int c = 0; c < r; ++c) {
                            if (is_piv[static_cast<size_t>(c)]) continue;
                            std::vector<long> y(static_cast<size_t>(r), 0);
                            y[static_cast<size_t>(c)] = 1;
                            for (size_t pr = 0; pr < pivot_col.size(); ++pr)
                                y[static_cast<size_t>(pivot_col[pr])] = m2[pr][static_cast<size_t>(c)];
                            ygens.push_back(std::move(y));
                        }
                        for (int c = 0; c < r; ++c) {
                            std::vector<long> y(static_cast<size_t>(r), 0);
                            y[static_cast<size_t>(c)] = 2;
                            ygens.push_back(std::move(y));
                        }
                    }
                    for (const auto& y : ygens) {
                        std::vector<long> x(static_cast<size_t>(s), 0);
                        for (int t = 0; t < s; ++t)
                            for (int c = 0; c < r; ++c)
                                x[static_cast<size_t>(t)] += kerlat.at(t, c).get_si() * y[static_cast<size_t>(c)];
                        bool nz = false;
                        for (long e : x) nz = nz || e != 0;
                        if (nz) out.n_generators.push_back(x);
                    }
                } else if (s == 1) {
                    // single generator: finite matrix order test, complete for
                    // dimensions <= 8 (orders are bounded by 60)
                    Mat base = gen_actions[0];
                    long order = 0;
                    Mat p = Mat::identity(d.dim);
                    for (long kk = 1; kk <= 60; ++kk) {
                        p = p * base;
                        if (p == Mat::identity(d.dim)) {
                            order = kk;
                            break;
                        }
                    }
                    if (order > 0) out.n_generators.push_back({order});
                } else {
                    throw unsupported_error(
                        "kernel computation: eigenvalues are not factorable units");
                }
            } else if (s == 1) {
                Mat base = gen_actions[0];
                long order = 0;
                Mat p = Mat::identity(d.dim);
                for (long kk = 1; kk <= 60; ++kk) {
                    p = p * base;
                    if (p == Mat::identity(d.dim)) {
                        order = kk;
                        break;
                    }
                }
                if (order > 0) out.n_generators.push_back({order});
            } else {
                throw unsupported_error("kernel computation unsupported for this action class");
            }
        }
    }

    // present H/N = Z^s / (relations + N generators)
    int extra = static_cast<int>(out.n_generators.size());
    IntMat all(s, out.h_relations.cols() + extra);
    for (int c = 0; c < out.h_relations.cols(); ++c)
        for (int t = 0; t < s; ++t) all.at(t, c) = out.h_relations.at(t, c);
    for (int c = 0; c < extra; ++c)
        for (int t = 0; t < s; ++t)
            all.at(t, out.h_relations.cols() + c) = out.n_generators[static_cast<size_t>(c)][static_cast<size_t>(t)];
    out.h_mod_n = present_quotient(s, all);

    // |N| = |H| / |H/N| when both are finite
    AbelianQuotient hp = present_quotient(s, out.h_relations);
    mpz_class horder = 1, qorder = 1;
    bool finite = true;
    for (const auto& o : hp.orders) {
        if (o == 0) finite = false;
        else horder *= o;
    }
    for (const auto& o : out.h_mod_n.orders) {
        if (o == 0) finite = false;
        else qorder *= o;
    }
    if (finite) out.n_order.push_back(horder / qorder);
    return out;
}

// the induced Yetter-Drinfeld data over H/N
struct ReducedGroupData {
    GroupYDData data;            // over the presented H/N
    std::vector<int> degree_gen; // index of each basis degree among h_generators
};

inline ReducedGroupData reduced_group_algebra(const GroupYDData& d, const SupportKernel& sk) {
    detail::ActionContext ctx(d);
    int s = static_cast<int>(sk.h_generators.size());
    ReducedGroupData out;
    if (d.group.kind == Group::Kind::Table) {
        // finite groups: H/N as the coset table
        if (!sk.quotient_table) throw unsupported_error("missing quotient table");
        out.data.group = *sk.quotient_table;
        out.data.dim = d.dim;
        out.data.field = d.field;
        int nc = static_cast<int>(sk.quotient_table->names.size());
        std::vector<Group::Elt> reps(static_cast<size_t>(nc));
        for (const auto& [elt, idx] : sk.coset_of)
            if (reps[static_cast<size_t>(idx)].empty()) reps[static_cast<size_t>(idx)] = elt;
        for (int i = 0; i < d.dim; ++i) {
            Group::Elt gi = d.group.reduce(d.degrees[static_cast<size_t>(i)]);
            out.degree_gen.push_back(-1);
            out.data.degrees.push_back({sk.coset_of.at(gi)});
        }
        for (int r = 0; r < nc; ++r)
            out.data.action.push_back({Group::Elt{r}, ctx.of(reps[static_cast<size_t>(r)])});
        return out;
    }
    Group quotient;
    quotient.kind = Group::Kind::FgAbelian;
    for (const auto& o : sk.h_mod_n.orders) quotient.orders.push_back(o.get_si());
    out.data.group = quotient;
    out.data.dim = d.dim;
    out.data.field = d.field;
    // degrees: image of e_{t(i)} under the presentation map u
    for (int i = 0; i < d.dim; ++i) {
        Group::Elt gi = d.group.reduce(d.degrees[static_cast<size_t>(i)]);
        int t = -1;
        for (int c = 0; c < s; ++c)
            if (sk.h_generators[static_cast<size_t>(c)] == gi) t = c;
        out.degree_gen.push_back(t);
        Group::Elt img(static_cast<size_t>(s), 0);
        for (int r = 0; r < s; ++r) img[static_cast<size_t>(r)] = sk.h_mod_n.u.at(r, t).get_si();
        out.data.degrees.push_back(quotient.reduce(img));
    }
    // action of the presented generators: e'_u corresponds to uinv column u
    for (int u = 0; u < s; ++u) {
        Mat rho = Mat::identity(d.dim);
        for (int t = 0; t < s; ++t) {
            long e = sk.h_mod_n.uinv.at(t, u).get_si();
            if (e == 0) continue;
            Mat base = ctx.of(sk.h_generators[static_cast<size_t>(t)]);
            if (e < 0) {
                base = *base.inverse();
                e = -e;
            }
            for (long r = 0; r < e; ++r) rho = rho * base;
        }
        Group::Elt gen(static_cast<size_t>(s), 0);
        gen[static_cast<size_t>(u)] = 1;
        out.data.action.push_back({gen, rho});
    }
    return out;
}

// --------------------------------------------------------------------------
// cross-checks against the FRT machinery

struct GroupCrossCheck {
    bool braiding_matches = false;   // k(H/N) data reproduces the braiding
    bool quotient_m_reduced = false; // largest coideal of k(H/N) killing M is 0
    bool relations_match = false;    // grouplike relations visible at degree <= D
    bool abelian = true;
    std::vector<mpz_class> invariant_factors; // abelian H only
    int free_rank = 0;
    mpz_class quotient_order = 0; // |H/N| when finite, 0 otherwise
};

// Compares the relations satisfied by products of the diagonal generator
// images in A^red_{<=D} with the relations of a target abelian group: words
// with equal images must map to equal group elements. gen_elts[i] is the
// group element attached to t_{ii}.
inline bool grouplike_relations_match(const frt::Truncation& t,
                                      const std::vector<SparseVec>& radical_basis,
                                      const Group& grp,
                                      const std::vector<Group::Elt>& gen_elts) {
    int n = t.n();
    std::vector<std::vector<int>> words{{}};
    {
        std::vector<std::vector<int>> layer = words;
        for (int l = 1; l <= t.degree_bound(); ++l) {
            std::vector<std::vector<int>> next;
            for (const auto& w : layer)
                for (int i = 0; i < n; ++i) {
                    auto nw = w;
                    nw.push_back(i);
                    next.push_back(nw);
                }
            words.insert(words.end(), next.begin(), next.end());
            layer = std::move(next);
        }
    }
    std::map<std::string, Group::Elt> image_to_elt;
    for (const auto& w : words) {
        SparseVec img;
        if (w.empty()) {
            img[0] = Scalar(1L);
        } else {
            SparseVec cur;
            cur[0] = Scalar(1L);
            int dcur = 0;
            for (int i : w) {
                SparseVec gen;
                gen[frt::gen_index(i + 1, i + 1, n)] = Scalar(1L);
                cur = t.multiply(dcur, cur, 1, gen);
                ++dcur;
            }
            for (const auto& [p, v] : cur)
                img[t.global_index(static_cast<int>(w.size()), p)] = v;
        }
        SparseVec reduced = reduce_modulo(radical_basis, img);
        std::string sig;
        for (const auto& [i, v] : reduced) sig += std::to_string(i) + ":" + v.to_string() + ";";
        Group::Elt elt = grp.identity();
        for (int i : w) elt = grp.op(elt, gen_elts[static_cast<size_t>(i)]);
        auto it = image_to_elt.find(sig);
        if (it == image_to_elt.end())
            image_to_elt.emplace(sig, elt);
        else if (it->second != elt)
            return false;
    }
    return true;
}

inline GroupCrossCheck crosscheck_group_reduction(const GroupYDData& d, int degree,
                                                  long cap = 4096) {
    auto b = group_braiding(d);
    auto sk = support_and_kernel(d);
    auto red = reduced_group_algebra(d, sk);
    GroupCrossCheck out;
    out.abelian = sk.abelian;
    if (sk.abelian) {
        out.invariant_factors = sk.h_mod_n.invariant_factors;
        for (const auto& o : sk.h_mod_n.orders) out.free_rank += o == 0;
    }

    // (a) the induced data rebuilds the same braiding
    out.braiding_matches = group_braiding(red.data).table == b.table;

    // (b) k(H/N) is M-reduced, when H/N is finite
    bool finite = true;
    mpz_class order = 1;
    if (red.data.group.kind != Group::Kind::Table)
        for (const auto& o : sk.h_mod_n.orders) {
            if (o == 0) finite = false;
            else order *= o;
        }
    if (red.data.group.kind == Group::Kind::Table) {
        finite = true;
        order = static_cast<long>(red.data.group.names.size());
    }
    if (finite && order <= 4096) {
        detail::ActionContext rctx(red.data);
        // enumerate H/N
        std::vector<Group::Elt> elements;
        if (red.data.group.kind == Group::Kind::Table) {
            for (long i = 0; i < order.get_si(); ++i) elements.push_back({i});
        } else {
            std::vector<long> lim;
            for (long o : red.data.group.orders) lim.push_back(o);
            std::vector<long> idx(lim.size(), 0);
            while (true) {
                elements.push_back(Group::Elt(idx.begin(), idx.end()));
                int t = static_cast<int>(lim.size()) - 1;
                while (t >= 0 && idx[static_cast<size_t>(t)] + 1 == lim[static_cast<size_t>(t)]) {
                    idx[static_cast<size_t>(t)] = 0;
                    --t;
                }
                if (t < 0) break;
                ++idx[static_cast<size_t>(t)];
            }
        }
        int m = static_cast<int>(elements.size());
        std::map<int, std::map<std::pair<int, int>, Scalar>> deltas;
        for (int i = 0; i < m; ++i) deltas[i][{i, i}] = Scalar(1L);
        std::vector<Vec> conds;
        Vec eps(static_cast<size_t>(m), Scalar(1L));
        conds.push_back(eps);
        for (int i = 0; i < d.dim; ++i)
            for (int l = 0; l < d.dim; ++l) {
                Vec row(static_cast<size_t>(m));
                for (int e = 0; e < m; ++e)
                    row[static_cast<size_t>(e)] = rctx.of(elements[static_cast<size_t>(e)]).at(l, i);
                conds.push_back(std::move(row));
            }
        auto delta_fn = [&deltas](int i) -> const std::map<std::pair<int, int>, Scalar>& {
            return deltas.at(i);
        };
        out.quotient_m_reduced = frt::largest_coideal(m, delta_fn, conds).basis.empty();
    }
    if (finite) out.quotient_order = order;

    // (c) relations among the diagonal generator images in A^red_{<=D} agree
    // with the relations of H/N visible at degree <= D; equal images with
    // different group elements must not occur (relations that are merely
    // invisible at low degree are fine)
    {
        frt::Truncation t(b, degree, cap);
        auto rad = frt::radical_of(t);
        out.relations_match =
            grouplike_relations_match(t, rad.basis, red.data.group, red.data.degrees);
    }
    return out;
}

// --------------------------------------------------------------------------
// file format

inline GroupYDData load_group_yd(const nlohmann::json& doc) {
    GroupYDData d;
    if (!doc.is_object() || !doc.contains("group") || !doc.contains("degrees") ||
        !doc.contains("action"))
        throw input_error("group YD document needs group, degrees and action");
    const auto& g = doc.at("group");
    std::string kind = g.at("kind").get<std::string>();
    if (kind == "fg_abelian") {
        d.group.kind = Group::Kind::FgAbelian;
        d.group.orders = g.at("orders").get<std::vector<long>>();
    } else if (kind == "table") {
        d.group.kind = Group::Kind::Table;
        d.group.names = g.at("elements").get<std::vector<std::string>>();
        d.group.mul = g.at("mul").get<std::vector<std::vector<int>>>();
    } else {
        throw input_error("unknown group kind: " + kind);
    }
    d.field = Field::Q;
    if (doc.contains("field")) {
        auto f = field_from_name(doc.at("field").get<std::string>());
        if (!f) throw input_error("unknown field tag");
        d.field = *f;
    }
    auto parse_elt = [&](const nlohmann::json& e) -> Group::Elt {
        if (d.group.kind == Group::Kind::FgAbelian) {
            auto v = e.get<std::vector<long>>();
            if (static_cast<int>(v.size()) != d.group.generator_count())
                throw input_error("element vector has wrong length");
            return d.group.reduce(v);
        }
        std::string name = e.get<std::string>();
        for (size_t i = 0; i < d.group.names.size(); ++i)
            if (d.group.names[i] == name) return {static_cast<long>(i)};
        throw input_error("unknown group element: " + name);
    };
    for (const auto& e : doc.at("degrees")) d.degrees.push_back(parse_elt(e));
    d.dim = static_cast<int>(d.degrees.size());
    for (const auto& [key, mat] : doc.at("action").items()) {
        Group::Elt gen;
        if (d.group.kind == Group::Kind::FgAbelian) {
            if (key.size() < 2 || key[0] != 'g') throw input_error("action key must be g<k>");
            int t = std::stoi(key.substr(1));
            if (t < 1 || t > d.group.generator_count())
                throw input_error("action key out of range: " + key);
            gen.assign(static_cast<size_t>(d.group.generator_count()), 0);
            gen[static_cast<size_t>(t - 1)] = 1;
        } else {
            gen = parse_elt(nlohmann::json(key));
        }
        auto rows = mat.get<std::vector<std::vector<std::string>>>();
        Mat m(d.dim, d.dim);
        if (static_cast<int>(rows.size()) != d.dim) throw input_error("action matrix shape");
        for (int i = 0; i < d.dim; ++i) {
            if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != d.dim)
                throw input_error("action matrix shape");
            for (int j = 0; j < d.dim; ++j)
                m.at(i, j) = parse_scalar(rows[static_cast<size_t>(i)][static_cast<size_t>(j)], d.field);
        }
        d.action.push_back({gen, m});
    }
    return d;
}

} // namespace grouptype
} // namespace braidlab

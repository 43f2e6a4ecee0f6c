#pragma once

#include "tlkit/errors.hpp"
#include "tlkit/linalg.hpp"
#include "tlkit/poly.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

// Small exact polynomial-system solver over the rationals: Buchberger with
// the product and chain criteria under graded reverse lexicographic order,
// plus zero-dimensional variety extraction through eliminant polynomials of
// the quotient algebra.  Systems over Cyclotomic(N) are handled by clients
// via restriction of scalars (adjoin a variable z with its cyclotomic
// polynomial).  Desk scale by design: no modular tricks, correctness first.

namespace tlkit {

inline constexpr int kPolysolveVarCeiling = 20;
inline constexpr long kPolysolvePairBudget = 200000;
inline constexpr long kPolysolveQuotientCap = 8192;
inline constexpr long kPolysolvePointCap = 100000;

/// Dense exponent vector; all monomials of a system share the same length.
struct Monomial {
    std::vector<unsigned> e;

    unsigned degree() const {
        unsigned d = 0;
        for (unsigned x : e) d += x;
        return d;
    }
    bool divides(const Monomial& m) const {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > m.e[i]) return false;
        return true;
    }
    Monomial div(const Monomial& m) const {
        Monomial r = *this;
        for (std::size_t i = 0; i < e.size(); ++i) r.e[i] -= m.e[i];
        return r;
    }
    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial r = a;
        for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] += b.e[i];
        return r;
    }
    static Monomial lcm(const Monomial& a, const Monomial& b) {
        Monomial r = a;
        for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] = std::max(r.e[i], b.e[i]);
        return r;
    }
    static bool coprime(const Monomial& a, const Monomial& b) {
        for (std::size_t i = 0; i < a.e.size(); ++i)
            if (a.e[i] > 0 && b.e[i] > 0) return false;
        return true;
    }
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
};

/// Strict "greater in grevlex": higher total degree wins; on ties the
/// monomial with the smaller exponent in the rightmost differing variable
/// is the larger one.
struct GrevlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const {
        unsigned da = a.degree(), db = b.degree();
        if (da != db) return da > db;
        for (std::size_t i = a.e.size(); i-- > 0;) {
            if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
        }
        return false;
    }
};

/// Multivariate polynomial with exact rational coefficients; terms live in a
/// map ordered with the leading term first.
struct MPoly {
    int nvars = 0;
    std::map<Monomial, mpq_class, GrevlexGreater> t;

    explicit MPoly(int nv = 0) : nvars(nv) {}

    bool is_zero() const { return t.empty(); }
    const std::pair<const Monomial, mpq_class>& lt() const {
        if (t.empty()) throw DomainError("MPoly: leading term of zero");
        return *t.begin();
    }

    void add_term(const Monomial& m, const mpq_class& c) {
        if (sgn(c) == 0) return;
        auto it = t.find(m);
        if (it == t.end()) {
            t.emplace(m, c);
        } else {
            it->second += c;
            if (sgn(it->second) == 0) t.erase(it);
        }
    }

    friend MPoly operator+(const MPoly& a, const MPoly& b) {
        MPoly r = a;
        for (const auto& [m, c] : b.t) r.add_term(m, c);
        return r;
    }
    friend MPoly operator-(const MPoly& a, const MPoly& b) {
        MPoly r = a;
        for (const auto& [m, c] : b.t) r.add_term(m, -c);
        return r;
    }
    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        MPoly r(a.nvars);
        for (const auto& [ma, ca] : a.t)
            for (const auto& [mb, cb] : b.t) r.add_term(ma * mb, ca * cb);
        return r;
    }
    friend bool operator==(const MPoly& a, const MPoly& b) { return a.t == b.t; }

    /// f * c * x^m.
    MPoly term_mul(const Monomial& m, const mpq_class& c) const {
        MPoly r(nvars);
        if (sgn(c) == 0) return r;
        for (const auto& [mm, cc] : t) r.t.emplace(mm * m, cc * c);
        return r;
    }

    /// Scale to a content-free integer polynomial with positive leading
    /// coefficient (growth control between reduction steps).
    void normalize_content() {
        if (t.empty()) return;
        mpz_class l = 1;
        for (const auto& [m, c] : t) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
        mpz_class g = 0;
        for (const auto& [m, c] : t) {
            mpz_class n = mpq_class(c * l).get_num();
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
        }
        mpq_class scale(l, g);
        scale.canonicalize();
        if (sgn(t.begin()->second) < 0) scale = -scale;
        for (auto& [m, c] : t) {
            c *= scale;
            c.canonicalize();
        }
    }

    void make_monic() {
        if (t.empty()) return;
        mpq_class inv = 1 / t.begin()->second;
        for (auto& [m, c] : t) c *= inv;
    }
};

struct PolySystem {
    std::vector<std::string> vars;
    std::vector<MPoly> gens;
};

// ---------------------------------------------------------------------------
// Parsing and printing.  Grammar: rational coefficients (a or a/b), declared
// variable names, '^' integer powers, '*' products, '+'/'-' sums, parentheses.

namespace detail {

struct PolyParser {
    const std::string& s;
    const std::vector<std::string>& vars;
    std::size_t pos = 0;

    PolyParser(const std::string& str, const std::vector<std::string>& vs) : s(str), vars(vs) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw DomainError("parse_poly: " + why + " at position " + std::to_string(pos));
    }

    MPoly parse() {
        MPoly r = expr();
        skip_ws();
        if (pos != s.size()) fail("trailing input");
        return r;
    }

    MPoly expr() {
        skip_ws();
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        MPoly r = term();
        if (neg) r = MPoly(static_cast<int>(vars.size())) - r;
        while (true) {
            skip_ws();
            if (eat('+')) {
                r = r + term();
            } else if (eat('-')) {
                r = r - term();
            } else {
                break;
            }
        }
        return r;
    }

    MPoly term() {
        MPoly r = factor();
        while (eat('*')) r = r * factor();
        return r;
    }

    MPoly factor() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        int nv = static_cast<int>(vars.size());
        if (eat('(')) {
            MPoly r = expr();
            if (!eat(')')) fail("expected ')'");
            return r;
        }
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mpz_class num = integer();
            mpz_class den = 1;
            skip_ws();
            if (pos < s.size() && s[pos] == '/') {
                ++pos;
                den = integer();
                if (den == 0) fail("zero denominator");
            }
            MPoly r(nv);
            mpq_class q(num, den);
            q.canonicalize();
            r.add_term(Monomial{std::vector<unsigned>(static_cast<std::size_t>(nv), 0u)}, q);
            return r;
        }
        // Variable: longest declared name matching here.
        int best = -1;
        std::size_t best_len = 0;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            const std::string& v = vars[i];
            if (!v.empty() && v.size() >= best_len && s.compare(pos, v.size(), v) == 0) {
                best = static_cast<int>(i);
                best_len = v.size();
            }
        }
        if (best < 0) fail("unknown token");
        pos += best_len;
        unsigned pow = 1;
        if (eat('^')) {
            mpz_class p = integer();
            if (p < 1 || p > 4096) fail("bad exponent");
            pow = static_cast<unsigned>(p.get_ui());
        }
        MPoly r(nv);
        Monomial m{std::vector<unsigned>(static_cast<std::size_t>(nv), 0u)};
        m.e[static_cast<std::size_t>(best)] = pow;
        r.add_term(m, mpq_class(1));
        return r;
    }

    mpz_class integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected integer");
        return mpz_class(s.substr(start, pos - start));
    }
};

}  // namespace detail

inline MPoly parse_poly(const std::string& str, const std::vector<std::string>& vars) {
    detail::PolyParser p(str, vars);
    return p.parse();
}

inline std::string poly_to_string(const MPoly& f, const std::vector<std::string>& vars) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : f.t) {
        bool neg = sgn(c) < 0;
        mpq_class mag = neg ? mpq_class(-c) : c;
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        bool has_var = m.degree() > 0;
        if (!has_var || mag != 1) {
            os << mag.get_str();
            if (has_var) os << "*";
        }
        bool first_var = true;
        for (std::size_t i = 0; i < m.e.size(); ++i) {
            if (m.e[i] == 0) continue;
            if (!first_var) os << "*";
            first_var = false;
            os << vars[i];
            if (m.e[i] > 1) os << "^" << m.e[i];
        }
    }
    return os.str();
}

inline PolySystem make_system(std::vector<std::string> vars, const std::vector<std::string>& polys) {
    PolySystem sys;
    sys.vars = std::move(vars);
    for (const auto& p : polys) sys.gens.push_back(parse_poly(p, sys.vars));
    return sys;
}

// ---------------------------------------------------------------------------
// Buchberger.

/// Full remainder of f on division by basis (deterministic: divisors are
/// tried in basis order, leading reducible monomial first).
inline MPoly normal_form(MPoly f, const std::vector<MPoly>& basis) {
    MPoly r(f.nvars);
    while (!f.is_zero()) {
        const auto& [mf, cf] = f.lt();
        bool reduced = false;
        for (const auto& g : basis) {
            if (g.is_zero()) continue;
            const auto& [mg, cg] = g.lt();
            if (!mg.divides(mf)) continue;
            f = f - g.term_mul(mf.div(mg), cf / cg);
            reduced = true;
            break;
        }
        if (!reduced) {
            r.t.emplace(mf, cf);
            f.t.erase(f.t.begin());
        }
    }
    return r;
}

inline MPoly s_poly(const MPoly& f, const MPoly& g) {
    const auto& [mf, cf] = f.lt();
    const auto& [mg, cg] = g.lt();
    Monomial l = Monomial::lcm(mf, mg);
    MPoly r = f.term_mul(l.div(mf), 1 / cf) - g.term_mul(l.div(mg), 1 / cg);
    r.normalize_content();
    return r;
}

namespace detail {

struct SPairKey {
    Monomial l;
    int i, j;
    bool operator<(const SPairKey& o) const {
        GrevlexGreater gt;
        if (gt(o.l, l)) return true;  // smaller lcm first (normal strategy)
        if (gt(l, o.l)) return false;
        if (i != o.i) return i < o.i;
        return j < o.j;
    }
};

}  // namespace detail

/// Reduced Groebner basis under grevlex: Buchberger with the normal pair
/// selection strategy and both classical skip criteria (coprime leading
/// terms; chain criterion over already-treated pairs), then minimalization,
/// inter-reduction, monic scaling, and a deterministic sort (ascending
/// leading monomial).
inline std::vector<MPoly> groebner(const PolySystem& sys) {
    if (static_cast<int>(sys.vars.size()) > kPolysolveVarCeiling)
        throw GuardError("groebner: variable ceiling exceeded");
    std::vector<MPoly> G;
    for (const auto& g : sys.gens) {
        if (g.is_zero()) throw DomainError("groebner: zero generator");
        if (g.nvars != static_cast<int>(sys.vars.size()))
            throw DomainError("groebner: inconsistent variable count");
        MPoly h = g;
        h.normalize_content();
        G.push_back(std::move(h));
    }

    std::set<detail::SPairKey> pending;
    std::set<std::pair<int, int>> treated;
    auto add_pairs = [&](int j) {
        for (int i = 0; i < j; ++i)
            pending.insert({Monomial::lcm(G[static_cast<std::size_t>(i)].lt().first,
                                          G[static_cast<std::size_t>(j)].lt().first),
                            i, j});
    };
    for (int j = 1; j < static_cast<int>(G.size()); ++j) add_pairs(j);

    long budget = kPolysolvePairBudget;
    while (!pending.empty()) {
        if (--budget < 0) throw GuardError("groebner: pair budget exceeded");
        auto key = *pending.begin();
        pending.erase(pending.begin());
        treated.emplace(key.i, key.j);
        const MPoly& f = G[static_cast<std::size_t>(key.i)];
        const MPoly& g = G[static_cast<std::size_t>(key.j)];
        if (Monomial::coprime(f.lt().first, g.lt().first)) continue;
        bool chain = false;
        for (int k = 0; k < static_cast<int>(G.size()) && !chain; ++k) {
            if (k == key.i || k == key.j) continue;
            if (!G[static_cast<std::size_t>(k)].lt().first.divides(key.l)) continue;
            auto p1 = std::minmax(key.i, k), p2 = std::minmax(key.j, k);
            chain = treated.count({p1.first, p1.second}) > 0 && treated.count({p2.first, p2.second}) > 0;
        }
        if (chain) continue;
        MPoly h = normal_form(s_poly(f, g), G);
        if (h.is_zero()) continue;
        h.normalize_content();
        G.push_back(std::move(h));
        add_pairs(static_cast<int>(G.size()) - 1);
    }

    // Minimalize: drop any element whose leading term another's divides.
    std::vector<MPoly> minimal;
    for (std::size_t i = 0; i < G.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < G.size() && !redundant; ++j) {
            if (i == j) continue;
            const auto& mi = G[i].lt().first;
            const auto& mj = G[j].lt().first;
            if (mj.divides(mi) && !(mi == mj && j > i)) redundant = true;
        }
        if (!redundant) minimal.push_back(G[i]);
    }
    // Inter-reduce to the unique reduced basis.
    std::vector<MPoly> reduced;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<MPoly> others;
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        MPoly h = normal_form(minimal[i], others);
        if (!h.is_zero()) {
            h.make_monic();
            reduced.push_back(std::move(h));
        }
    }
    GrevlexGreater gt;
    std::sort(reduced.begin(), reduced.end(),
              [&](const MPoly& a, const MPoly& b) { return gt(b.lt().first, a.lt().first); });
    return reduced;
}

// ---------------------------------------------------------------------------
// Variety classification.

enum class VarietyKind { Empty, Finite, PositiveDimensional };

/// Zero-dimensional solution sets are described through the eliminant
/// (minimal) polynomial of each coordinate in the quotient algebra: rational
/// points are enumerated from the rational eliminant roots and re-verified by
/// exact substitution; irrational coordinate branches are reported through
/// their eliminant factors (an algebraic-closure description).  When every
/// eliminant splits over Q, `points` is provably the entire variety and
/// `points_complete` is set.
struct VarietyResult {
    VarietyKind kind = VarietyKind::Empty;
    std::vector<MPoly> basis;
    std::vector<std::vector<mpq_class>> points;            // Finite: rational points
    bool points_complete = false;                          // Finite: points == whole variety
    std::vector<std::pair<int, Poly>> algebraic_factors;   // Finite: var index, irrational factor
};

namespace detail {

inline mpq_class eval_mpoly(const MPoly& f, const std::vector<mpq_class>& x) {
    mpq_class acc = 0;
    for (const auto& [m, c] : f.t) {
        mpq_class term = c;
        for (std::size_t i = 0; i < m.e.size(); ++i)
            for (unsigned k = 0; k < m.e[i]; ++k) term *= x[i];
        acc += term;
    }
    return acc;
}

/// All rational roots of a nonzero rational polynomial (exact: candidate
/// p/q with p | trailing and q | leading integer coefficient).
inline std::vector<mpq_class> rational_roots(const Poly& f) {
    std::vector<mpq_class> roots;
    Poly g = f;
    // Strip x = 0 roots.
    std::size_t low = 0;
    while (low < g.c.size() && g.c[low] == 0) ++low;
    if (low == g.c.size()) throw DomainError("rational_roots: zero polynomial");
    if (low > 0) {
        roots.push_back(mpq_class(0));
        g.c.erase(g.c.begin(), g.c.begin() + static_cast<long>(low));
    }
    if (g.degree() == 0) return roots;
    // Content-free integer version.
    mpz_class l = 1;
    for (const auto& q : g.c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    std::vector<mpz_class> z(g.c.size());
    for (std::size_t i = 0; i < g.c.size(); ++i) z[i] = mpq_class(g.c[i] * l).get_num();
    mpz_class a0 = abs(z.front()), ad = abs(z.back());
    auto divisors = [](const mpz_class& n) {
        std::vector<mpz_class> out;
        mpz_class d = 1;
        long scanned = 0;
        for (; d * d <= n; ++d) {
            if (++scanned > 2000000) throw GuardError("rational_roots: divisor scan budget exceeded");
            if (n % d == 0) {
                out.push_back(d);
                out.push_back(n / d);
            }
        }
        return out;
    };
    auto horner_zero = [&](const mpq_class& x) {
        mpq_class acc = 0;
        for (std::size_t i = z.size(); i-- > 0;) acc = acc * x + mpq_class(z[i]);
        return sgn(acc) == 0;
    };
    for (const auto& p : divisors(a0))
        for (const auto& q : divisors(ad)) {
            mpq_class cand(p, q);
            cand.canonicalize();
            if (horner_zero(cand)) roots.push_back(cand);
            cand = -cand;
            if (horner_zero(cand)) roots.push_back(cand);
        }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

}  // namespace detail

inline VarietyResult variety(const PolySystem& sys) {
    VarietyResult res;
    res.basis = groebner(sys);
    const int nv = static_cast<int>(sys.vars.size());

    // Empty iff 1 lies in the ideal, i.e. the reduced basis is {1}.
    for (const auto& g : res.basis)
        if (g.lt().first.degree() == 0) {
            res.kind = VarietyKind::Empty;
            return res;
        }

    // Zero-dimensional iff every variable has a pure-power leading term.
    for (int i = 0; i < nv; ++i) {
        bool pure = false;
        for (const auto& g : res.basis) {
            const Monomial& m = g.lt().first;
            if (m.e[static_cast<std::size_t>(i)] == 0) continue;
            bool only_i = true;
            for (int j = 0; j < nv && only_i; ++j)
                if (j != i && m.e[static_cast<std::size_t>(j)] > 0) only_i = false;
            if (only_i) {
                pure = true;
                break;
            }
        }
        if (!pure) {
            res.kind = VarietyKind::PositiveDimensional;
            return res;
        }
    }
    res.kind = VarietyKind::Finite;
    if (nv == 0) {
        res.points.push_back({});
        res.points_complete = true;
        return res;
    }

    // Standard monomials of the quotient algebra (finite by the test above).
    std::map<Monomial, int, GrevlexGreater> std_index;
    {
        std::vector<Monomial> queue{Monomial{std::vector<unsigned>(static_cast<std::size_t>(nv), 0u)}};
        std::set<std::vector<unsigned>> seen{queue[0].e};
        while (!queue.empty()) {
            Monomial m = queue.back();
            queue.pop_back();
            bool standard = true;
            for (const auto& g : res.basis)
                if (g.lt().first.divides(m)) {
                    standard = false;
                    break;
                }
            if (!standard) continue;
            if (static_cast<long>(std_index.size()) >= kPolysolveQuotientCap)
                throw GuardError("variety: quotient dimension cap exceeded");
            std_index.emplace(m, 0);
            for (int i = 0; i < nv; ++i) {
                Monomial m2 = m;
                ++m2.e[static_cast<std::size_t>(i)];
                if (seen.insert(m2.e).second) queue.push_back(m2);
            }
        }
        int k = 0;
        for (auto& [m, idx] : std_index) idx = k++;
    }
    const int dim = static_cast<int>(std_index.size());

    auto coords = [&](const MPoly& f) {
        std::vector<mpq_class> v(static_cast<std::size_t>(dim), mpq_class(0));
        for (const auto& [m, c] : f.t) v[static_cast<std::size_t>(std_index.at(m))] = c;
        return v;
    };

    // Eliminant of x_i: minimal monic m with m(x_i) in the ideal, found as the
    // first linear dependence among normal forms of successive powers of x_i.
    bool all_rational = true;
    std::vector<std::vector<mpq_class>> roots_per_var;
    for (int i = 0; i < nv; ++i) {
        MPoly xi(nv);
        Monomial mi{std::vector<unsigned>(static_cast<std::size_t>(nv), 0u)};
        mi.e[static_cast<std::size_t>(i)] = 1;
        xi.add_term(mi, mpq_class(1));

        std::vector<std::vector<mpq_class>> krylov;
        MPoly power(nv);
        power.add_term(Monomial{std::vector<unsigned>(static_cast<std::size_t>(nv), 0u)}, mpq_class(1));
        Poly elim;
        for (int k = 0; k <= dim; ++k) {
            std::vector<mpq_class> vk = coords(power);
            DenseMatrix<mpq_class> A(dim, k, mpq_class(0));
            for (int c = 0; c < k; ++c)
                for (int r = 0; r < dim; ++r) A.at(r, c) = krylov[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
            std::optional<std::vector<mpq_class>> sol;
            if (k > 0) sol = solve_linear(A, vk, mpq_class(0));
            if (sol) {
                elim.c.assign(static_cast<std::size_t>(k) + 1, mpq_class(0));
                for (int c = 0; c < k; ++c) elim.c[static_cast<std::size_t>(c)] = -(*sol)[static_cast<std::size_t>(c)];
                elim.c[static_cast<std::size_t>(k)] = 1;
                break;
            }
            krylov.push_back(std::move(vk));
            power = normal_form(power * xi, res.basis);
        }
        if (elim.is_zero()) throw DomainError("variety: eliminant not found");

        // Square-free part, then split off the rational roots.
        Poly sf = poly_divexact(elim, poly_gcd(elim, poly_derivative(elim)));
        std::vector<mpq_class> roots = detail::rational_roots(sf);
        Poly rem = sf;
        for (const auto& r : roots) {
            Poly lin;
            lin.c = {-r, mpq_class(1)};
            rem = poly_divexact(rem, lin);
        }
        if (rem.degree() > 0) {
            all_rational = false;
            res.algebraic_factors.emplace_back(i, rem);
        }
        roots_per_var.push_back(std::move(roots));
    }

    // Candidate grid of rational coordinates, verified by exact substitution.
    long grid = 1;
    for (const auto& r : roots_per_var) {
        grid *= std::max<long>(1, static_cast<long>(r.size()));
        if (grid > kPolysolvePointCap) throw GuardError("variety: point grid cap exceeded");
    }
    std::vector<mpq_class> cur(static_cast<std::size_t>(nv), mpq_class(0));
    auto substitute_all = [&]() {
        for (const auto& g : sys.gens)
            if (sgn(detail::eval_mpoly(g, cur)) != 0) return false;
        return true;
    };
    std::vector<std::size_t> pick(static_cast<std::size_t>(nv), 0);
    bool any_empty = false;
    for (int i = 0; i < nv; ++i)
        if (roots_per_var[static_cast<std::size_t>(i)].empty()) any_empty = true;
    if (!any_empty) {
        while (true) {
            for (int i = 0; i < nv; ++i) cur[static_cast<std::size_t>(i)] = roots_per_var[static_cast<std::size_t>(i)][pick[static_cast<std::size_t>(i)]];
            if (substitute_all()) res.points.push_back(cur);
            int i = nv - 1;
            while (i >= 0 && ++pick[static_cast<std::size_t>(i)] == roots_per_var[static_cast<std::size_t>(i)].size()) {
                pick[static_cast<std::size_t>(i)] = 0;
                --i;
            }
            if (i < 0) break;
        }
    }
    res.points_complete = all_rational;
    return res;
}

}  // namespace tlkit

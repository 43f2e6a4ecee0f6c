#pragma once

#include "tlkit/diagram.hpp"
#include "tlkit/errors.hpp"
#include "tlkit/finitefield.hpp"
#include "tlkit/linalg.hpp"
#include "tlkit/scalar.hpp"
#include "tlkit/smallff.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace tlkit {

enum class Mode { Generic, Crystal };

/// Sign flag selecting dim_q(T_n) = (-1)^n [n+1]_q (Minus, the default that
/// matches the circle relation delta = -[2]_q literally) or [n+1]_q (Plus).
enum class SphericalConvention { Minus, Plus };

template <class D>
struct Morphism {
    using E = typename D::Elem;
    D dom;
    Mode mode = Mode::Generic;
    int n_src = 0, n_tgt = 0;
    std::map<std::uint32_t, E> coeff;  // index into diagram_table(n_src, n_tgt)

    bool is_zero() const { return coeff.empty(); }
};

template <class D>
typename D::Elem delta_scalar(const D& dom) {
    return dom.zero() - qint(2, dom);
}

template <class D>
Morphism<D> morphism_zero(const D& dom, Mode mode, int n, int m) {
    return Morphism<D>{dom, mode, n, m, {}};
}

template <class D>
Morphism<D> diagram_morphism(const D& dom, Mode mode, const Diagram& d) {
    Morphism<D> f{dom, mode, d.n, d.m, {}};
    f.coeff.emplace(diagram_table(d.n, d.m).id_of(d), dom.one());
    return f;
}

template <class D>
Morphism<D> identity_morphism(const D& dom, Mode mode, int n) {
    return diagram_morphism(dom, mode, id_diagram(n));
}

namespace detail {

template <class D>
void require_parallel(const Morphism<D>& f, const Morphism<D>& g) {
    if (f.n_src != g.n_src || f.n_tgt != g.n_tgt) throw DomainError("morphism arity mismatch");
    if (f.mode != g.mode) throw DomainError("morphism mode mismatch");
    if (f.dom.fingerprint() != g.dom.fingerprint()) throw DomainError("morphism domain mismatch");
}

template <class D>
void set_coeff(Morphism<D>& f, std::uint32_t idx, typename D::Elem c) {
    if (c.is_zero())
        f.coeff.erase(idx);
    else
        f.coeff[idx] = std::move(c);
}

template <class D>
void add_coeff(Morphism<D>& f, std::uint32_t idx, const typename D::Elem& c) {
    auto it = f.coeff.find(idx);
    if (it == f.coeff.end()) {
        if (!c.is_zero()) f.coeff.emplace(idx, c);
        return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) f.coeff.erase(it);
}

}  // namespace detail

template <class D>
Morphism<D> operator+(const Morphism<D>& f, const Morphism<D>& g) {
    detail::require_parallel(f, g);
    Morphism<D> r = f;
    for (const auto& [idx, c] : g.coeff) detail::add_coeff(r, idx, c);
    return r;
}

template <class D>
Morphism<D> operator-(const Morphism<D>& f, const Morphism<D>& g) {
    detail::require_parallel(f, g);
    Morphism<D> r = f;
    for (const auto& [idx, c] : g.coeff) detail::add_coeff(r, idx, f.dom.zero() - c);
    return r;
}

template <class D>
Morphism<D> scalar_mul(const typename D::Elem& s, const Morphism<D>& f) {
    Morphism<D> r{f.dom, f.mode, f.n_src, f.n_tgt, {}};
    if (s.is_zero()) return r;
    for (const auto& [idx, c] : f.coeff) {
        auto prod = s * c;
        if (!prod.is_zero()) r.coeff.emplace(idx, std::move(prod));
    }
    return r;
}

template <class D>
bool operator==(const Morphism<D>& f, const Morphism<D>& g) {
    return f.n_src == g.n_src && f.n_tgt == g.n_tgt && f.mode == g.mode && f.coeff == g.coeff;
}

/// f after g (f: b->c, g: a->b).  Generic: each glued pair contributes
/// delta^loops; Crystal: loops contribute 1 and zigzag terms are dropped.
template <class D>
Morphism<D> compose(const Morphism<D>& f, const Morphism<D>& g) {
    if (f.n_src != g.n_tgt) throw DomainError("compose: arity mismatch");
    if (f.mode != g.mode) throw DomainError("compose: mode mismatch");
    if (f.dom.fingerprint() != g.dom.fingerprint()) throw DomainError("compose: domain mismatch");
    Morphism<D> r{f.dom, f.mode, g.n_src, f.n_tgt, {}};
    if (f.coeff.empty() || g.coeff.empty()) return r;
    const auto& tab_f = diagram_table(f.n_src, f.n_tgt);
    const auto& tab_g = diagram_table(g.n_src, g.n_tgt);
    const auto& tab_r = diagram_table(g.n_src, f.n_tgt);
    typename D::Elem delta = delta_scalar(f.dom);
    std::vector<typename D::Elem> delta_pow = {f.dom.one()};
    for (const auto& [fi, fc] : f.coeff)
        for (const auto& [gi, gc] : g.coeff) {
            GlueResult glued = glue(tab_f.diags[fi], tab_g.diags[gi]);
            if (f.mode == Mode::Crystal && glued.zigzag_hit) continue;
            typename D::Elem c = fc * gc;
            if (f.mode == Mode::Generic && glued.loops > 0) {
                while (static_cast<int>(delta_pow.size()) <= glued.loops)
                    delta_pow.push_back(delta_pow.back() * delta);
                c = c * delta_pow[static_cast<std::size_t>(glued.loops)];
            }
            detail::add_coeff(r, tab_r.id_of(glued.matching), c);
        }
    return r;
}

template <class D>
Morphism<D> tensor(const Morphism<D>& f, const Morphism<D>& g) {
    if (f.mode != g.mode) throw DomainError("tensor: mode mismatch");
    if (f.dom.fingerprint() != g.dom.fingerprint()) throw DomainError("tensor: domain mismatch");
    Morphism<D> r{f.dom, f.mode, f.n_src + g.n_src, f.n_tgt + g.n_tgt, {}};
    const auto& tab_f = diagram_table(f.n_src, f.n_tgt);
    const auto& tab_g = diagram_table(g.n_src, g.n_tgt);
    const auto& tab_r = diagram_table(r.n_src, r.n_tgt);
    for (const auto& [fi, fc] : f.coeff)
        for (const auto& [gi, gc] : g.coeff)
            detail::add_coeff(r, tab_r.id_of(tensor(tab_f.diags[fi], tab_g.diags[gi])), fc * gc);
    return r;
}

/// Markov/quantum trace: close each strand around the right.
template <class D>
typename D::Elem qtrace(const Morphism<D>& f,
                        SphericalConvention conv = SphericalConvention::Minus) {
    if (f.n_src != f.n_tgt) throw DomainError("qtrace: square morphism required");
    if (f.mode != Mode::Generic) throw DomainError("qtrace: Generic mode required");
    const auto& tab = diagram_table(f.n_src, f.n_tgt);
    typename D::Elem delta = delta_scalar(f.dom);
    typename D::Elem acc = f.dom.zero();
    for (const auto& [idx, c] : f.coeff)
        acc = acc + c * epow(delta, trace_close(tab.diags[idx]));
    if (conv == SphericalConvention::Plus && f.n_src % 2 == 1) acc = f.dom.zero() - acc;
    return acc;
}

/// delta-exponents of the Gram pairings: entry (i,j) is the total circle
/// count of the closure of basis_j . basis_i in End(n).
inline const DenseMatrix<int>& gram_exponents(int n) {
    static std::map<int, DenseMatrix<int>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    const auto& tab = diagram_table(n, n);
    int m = static_cast<int>(tab.size());
    DenseMatrix<int> E(m, m, 0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            GlueResult glued = glue(tab.diags[static_cast<std::size_t>(j)],
                                    tab.diags[static_cast<std::size_t>(i)]);
            E.at(i, j) = glued.loops + trace_close(glued.matching);
        }
    return cache.emplace(n, std::move(E)).first->second;
}

template <class D>
DenseMatrix<typename D::Elem> gram_matrix(int n, const D& dom) {
    const auto& exps = gram_exponents(n);
    typename D::Elem delta = delta_scalar(dom);
    int max_e = 0;
    for (int x : exps.a) max_e = std::max(max_e, x);
    std::vector<typename D::Elem> pow = {dom.one()};
    for (int e = 1; e <= max_e; ++e) pow.push_back(pow.back() * delta);
    DenseMatrix<typename D::Elem> G(exps.rows, exps.cols, dom.zero());
    for (int i = 0; i < exps.rows; ++i)
        for (int j = 0; j < exps.cols; ++j)
            G.at(i, j) = pow[static_cast<std::size_t>(exps.at(i, j))];
    return G;
}

/// Multiplicities of T_i (kappa = 0, generic) or L_i (kappa >= 3, truncated)
/// in the n-th tensor power of the generating object.
inline std::map<int, long> multiplicity_profile(int n, int kappa) {
    if (kappa == 1 || kappa == 2) throw DomainError("multiplicity_profile: kappa must be 0 or >= 3");
    if (kappa < 0 || n < 0) throw DomainError("multiplicity_profile: negative argument");
    std::map<int, long> cur{{0, 1}};
    for (int step = 0; step < n; ++step) {
        std::map<int, long> nxt;
        for (const auto& [i, c] : cur) {
            if (i - 1 >= 0) nxt[i - 1] += c;
            if (kappa == 0 || i + 1 <= kappa - 2) nxt[i + 1] += c;
        }
        cur = nxt;
    }
    return cur;
}

/// Clebsch-Gordan labels of L_i (x) L_j: |i-j|, |i-j|+2, ..., i+j, truncated
/// at 2(kappa-2) - (i+j) when kappa >= 3.
inline std::vector<int> fusion_labels(int i, int j, int kappa) {
    if (kappa == 1 || kappa == 2) throw DomainError("fusion_labels: kappa must be 0 or >= 3");
    if (i < 0 || j < 0 || kappa < 0) throw DomainError("fusion_labels: negative argument");
    if (kappa != 0 && (i > kappa - 2 || j > kappa - 2))
        throw DomainError("fusion_labels: label exceeds kappa - 2");
    int hi = kappa == 0 ? i + j : std::min(i + j, 2 * kappa - 4 - (i + j));
    std::vector<int> out;
    for (int k = std::abs(i - j); k <= hi; k += 2) out.push_back(k);
    return out;
}

/// Idempotent cut (n, e): the subobject of n carved out by e in the Karoubi
/// envelope.  Hom((a,e), (b,e')) is the image of f |-> e'.f.e.
template <class D>
struct CutObject {
    int n = 0;
    Morphism<D> e;
};

template <class D>
int cut_hom_dim(const CutObject<D>& tgt, const CutObject<D>& src) {
    const auto& tab = diagram_table(src.n, tgt.n);
    const int dim = static_cast<int>(tab.size());
    if (dim == 0) return 0;
    const D& dom = src.e.dom;
    DenseMatrix<typename D::Elem> A(dim, dim, dom.zero());
    for (int k = 0; k < dim; ++k) {
        Morphism<D> f = diagram_morphism(dom, src.e.mode, tab.diags[static_cast<std::size_t>(k)]);
        Morphism<D> proj = compose(tgt.e, compose(f, src.e));
        for (const auto& [idx, c] : proj.coeff) A.at(static_cast<int>(idx), k) = c;
    }
    return row_reduce(std::move(A)).rank;
}

inline Diagram cap_at(int n, int i) {
    if (n < 2 || i < 0 || i + 1 >= n) throw DomainError("cap_at: bad position");
    std::vector<int> pr(static_cast<std::size_t>(2 * n - 2));
    pr[static_cast<std::size_t>(i)] = i + 1;
    pr[static_cast<std::size_t>(i + 1)] = i;
    for (int b = 0, t = 0; b < n; ++b) {
        if (b == i || b == i + 1) continue;
        pr[static_cast<std::size_t>(b)] = n + t;
        pr[static_cast<std::size_t>(n + t)] = b;
        ++t;
    }
    return Diagram{n, n - 2, std::move(pr)};
}

inline Diagram cup_at(int n, int i) {
    if (i < 0 || i > n) throw DomainError("cup_at: bad position");
    // n -> n+2, new cup occupying top positions i, i+1.
    std::vector<int> pr(static_cast<std::size_t>(2 * n + 2));
    pr[static_cast<std::size_t>(n + i)] = n + i + 1;
    pr[static_cast<std::size_t>(n + i + 1)] = n + i;
    for (int b = 0; b < n; ++b) {
        int t = b < i ? b : b + 2;
        pr[static_cast<std::size_t>(b)] = n + t;
        pr[static_cast<std::size_t>(n + t)] = b;
    }
    return Diagram{n, n + 2, std::move(pr)};
}

namespace detail {

inline Diagram jw_e_diagram(int k) {
    return tensor(id_diagram(k - 1), glue(cup_diagram(), cap_diagram()).matching);
}

/// The [n]!_q-scaled Jones-Wenzl projector over the generic domain, together
/// with the scaling factor [n]!_q.  All coefficients of [n]!_q JW_n are
/// Laurent polynomials, so the recursion runs entirely in integer arithmetic:
/// with hat(JW)_k = [k]!_q JW_k and hat(t) = hat(JW)_k (x) 1,
///   hat(JW)_{k+1} = [k+1]_q hat(t) + ([k]_q hat(t) e_k hat(t)) / [k]!_q,
/// and the division is exact coefficientwise.  This avoids the rational-
/// function gcd per multiplication that makes the textbook recursion blow up.
inline std::pair<Morphism<GenericDomain>, Laurent> jones_wenzl_scaled(int n, const GenericDomain& dom) {
    static std::map<int, Morphism<GenericDomain>> cache;
    static std::vector<Laurent> fact{Laurent(mpq_class(1)), Laurent(mpq_class(1))};
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    while (static_cast<int>(fact.size()) <= n)
        fact.push_back(fact.back() * qint(static_cast<int>(fact.size()), dom).num);
    Morphism<GenericDomain> jw = identity_morphism(dom, Mode::Generic, 1);
    cache.emplace(1, jw);
    for (int k = 1; k < n; ++k) {
        auto next_it = cache.find(k + 1);
        if (next_it != cache.end()) {
            jw = next_it->second;
            continue;
        }
        Morphism<GenericDomain> t = tensor(jw, identity_morphism(dom, Mode::Generic, 1));
        Morphism<GenericDomain> e_k = diagram_morphism(dom, Mode::Generic, jw_e_diagram(k));
        Morphism<GenericDomain> outer = compose(t, compose(e_k, t));
        const Laurent qk = qint(k, dom).num;
        Morphism<GenericDomain> next = scalar_mul(GenericScalar(qint(k + 1, dom).num), t);
        for (const auto& [idx, c] : outer.coeff)
            add_coeff(next, idx, GenericScalar(laurent_divexact(c.num * qk, fact[static_cast<std::size_t>(k)])));
        jw = std::move(next);
        cache.emplace(k + 1, jw);
    }
    return {jw, fact[static_cast<std::size_t>(n)]};
}

}  // namespace detail

/// Jones-Wenzl projector by the [n]/[n+1] recursion; cached per
/// (n, domain fingerprint); throws naming the first vanishing [k]_q.
template <class D>
Morphism<D> jones_wenzl(int n, const D& dom) {
    if (n < 1) throw DomainError("jones_wenzl: n must be >= 1");
    static std::map<std::pair<int, std::string>, Morphism<D>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    std::string fp = dom.fingerprint();
    auto found = cache.find({n, fp});
    if (found != cache.end()) return found->second;
    if constexpr (std::is_same_v<D, GenericDomain>) {
        auto [scaled, factorial] = detail::jones_wenzl_scaled(n, dom);
        Morphism<D> jw{dom, Mode::Generic, n, n, {}};
        for (const auto& [idx, c] : scaled.coeff)
            detail::set_coeff(jw, idx, GenericScalar(c.num, factorial));
        cache.emplace(std::make_pair(n, fp), jw);
        return jw;
    } else {
        Morphism<D> jw = identity_morphism(dom, Mode::Generic, 1);
        cache.emplace(std::make_pair(1, fp), jw);
        for (int k = 1; k < n; ++k) {
            auto next = cache.find({k + 1, fp});
            if (next != cache.end()) {
                jw = next->second;
                continue;
            }
            typename D::Elem den = qint(k + 1, dom);
            if (den.is_zero())
                throw DomainError("[" + std::to_string(k + 1) + "]_q = 0");
            // With circle = -[2]_q the quantum dimensions are P_n = (-1)^n[n+1]_q,
            // and the Wenzl coefficient P_{k-1}/P_k = -[k]_q/[k+1]_q, so the
            // classical subtraction becomes addition in this convention.
            typename D::Elem ratio = qint(k, dom) * den.inv();
            Morphism<D> t = tensor(jw, identity_morphism(dom, Mode::Generic, 1));
            Morphism<D> e_k = diagram_morphism(dom, Mode::Generic, detail::jw_e_diagram(k));
            Morphism<D> corr = compose(t, compose(e_k, t));
            jw = t + scalar_mul(ratio, corr);
            cache.emplace(std::make_pair(k + 1, fp), jw);
        }
        return jw;
    }
}

/// Split test: solves f.g.f = f for g by exact linear algebra (the
/// condition is linear in g); returns a witness when solvable.
template <class D>
std::pair<bool, std::optional<Morphism<D>>> is_split(const Morphism<D>& f) {
    const int n = f.n_src, m = f.n_tgt;
    const auto& tab_g = diagram_table(m, n);
    const auto& tab_t = diagram_table(n, m);
    const int gdim = static_cast<int>(tab_g.size());
    const int tdim = static_cast<int>(tab_t.size());
    DenseMatrix<typename D::Elem> A(tdim, gdim, f.dom.zero());
    for (int k = 0; k < gdim; ++k) {
        Morphism<D> gk = diagram_morphism(f.dom, f.mode, tab_g.diags[static_cast<std::size_t>(k)]);
        Morphism<D> fgf = compose(f, compose(gk, f));
        for (const auto& [idx, c] : fgf.coeff) A.at(static_cast<int>(idx), k) = c;
    }
    std::vector<typename D::Elem> b(static_cast<std::size_t>(tdim), f.dom.zero());
    for (const auto& [idx, c] : f.coeff) b[idx] = c;
    auto sol = solve_linear(A, b, f.dom.zero());
    if (!sol) return {false, std::nullopt};
    Morphism<D> g{f.dom, f.mode, m, n, {}};
    for (int k = 0; k < gdim; ++k) detail::set_coeff(g, static_cast<std::uint32_t>(k), (*sol)[static_cast<std::size_t>(k)]);
    return {true, g};
}

/// Graded fiber functor: the generator goes to a 2-dimensional graded space
/// with basis (u, v); cup |-> -q u(x)v + v(x)u, cap |-> (u(x)v -> 1,
/// v(x)u -> -q^{-1}).  Basis of V^{(x)k} indexed by bitmask, u = 0 bit,
/// leftmost factor = most significant bit.
template <class D>
DenseMatrix<typename D::Elem> fiber_eval(const Morphism<D>& f) {
    if (f.mode != Mode::Generic) throw DomainError("fiber_eval: Generic mode required");
    const int n = f.n_src, m = f.n_tgt;
    if (n + m > 20) throw GuardError("fiber_eval: arity ceiling exceeded");
    const auto& tab = diagram_table(n, m);
    const D& dom = f.dom;
    typename D::Elem q = dom.q();
    typename D::Elem minus_q = dom.zero() - q;
    typename D::Elem minus_qinv = dom.zero() - epow(q, -1);
    DenseMatrix<typename D::Elem> M(1 << m, 1 << n, dom.zero());
    auto bit_of = [&](long bot, long top, int point) {
        return point < n ? ((bot >> (n - 1 - point)) & 1) : ((top >> (m - 1 - (point - n))) & 1);
    };
    for (const auto& [idx, c] : f.coeff) {
        const Diagram& d = tab.diags[idx];
        for (long bot = 0; bot < (1L << n); ++bot)
            for (long top = 0; top < (1L << m); ++top) {
                typename D::Elem val = c;
                bool dead = false;
                for (int p = 0; p < n + m && !dead; ++p) {
                    int pp = d.pair_[static_cast<std::size_t>(p)];
                    if (pp < p) continue;
                    int bl = static_cast<int>(bit_of(bot, top, p));
                    int br = static_cast<int>(bit_of(bot, top, pp));
                    bool p_bot = p < n, pp_bot = pp < n;
                    if (p_bot != pp_bot) {
                        if (bl != br) dead = true;  // through strand: identity
                    } else if (p_bot) {
                        // cap arc, left point p: (u,v) -> 1, (v,u) -> -q^{-1}
                        if (bl == 0 && br == 1) {
                        } else if (bl == 1 && br == 0)
                            val = val * minus_qinv;
                        else
                            dead = true;
                    } else {
                        // cup arc: (u,v) -> -q, (v,u) -> 1
                        if (bl == 0 && br == 1)
                            val = val * minus_q;
                        else if (!(bl == 1 && br == 0))
                            dead = true;
                    }
                }
                if (!dead)
                    M.at(static_cast<int>(top), static_cast<int>(bot)) =
                        M.at(static_cast<int>(top), static_cast<int>(bot)) + val;
            }
    }
    return M;
}

/// Graded trace matching the Minus spherical convention: weights u -> -q,
/// v -> -q^{-1}.
template <class D>
typename D::Elem graded_trace(const DenseMatrix<typename D::Elem>& M, int strands, const D& dom) {
    if (M.rows != M.cols || M.rows != (1 << strands))
        throw DomainError("graded_trace: shape mismatch");
    typename D::Elem q = dom.q();
    typename D::Elem wu = dom.zero() - q;
    typename D::Elem wv = dom.zero() - epow(q, -1);
    typename D::Elem acc = dom.zero();
    for (long bits = 0; bits < (1L << strands); ++bits) {
        typename D::Elem w = dom.one();
        for (int i = 0; i < strands; ++i) w = w * (((bits >> i) & 1) ? wv : wu);
        acc = acc + w * M.at(static_cast<int>(bits), static_cast<int>(bits));
    }
    return acc;
}

template <class D>
std::string scalar_to_string(const D&, const GenericScalar& x) {
    return generic_to_string(x);
}
inline std::string scalar_to_string(const CycloDomain& dom, const NFElem& x) {
    return nf_to_string(x, dom.M);
}
inline std::string scalar_to_string(const FiniteDomain& dom, const FFElem& x) {
    std::string s = "[";
    for (unsigned i = 0; i < dom.F->d; ++i) {
        if (i) s += ", ";
        mpz_class c = i < x.rep.c.size() ? x.rep.c[i] : mpz_class(0);
        s += c.get_str();
    }
    return s + "] in F_" + dom.F->p.get_str() + "^" + std::to_string(dom.F->d);
}

template <class D>
std::string morphism_to_string(const Morphism<D>& f) {
    if (f.coeff.empty()) return "0";
    const auto& tab = diagram_table(f.n_src, f.n_tgt);
    std::string s;
    for (const auto& [idx, c] : f.coeff) {
        if (!s.empty()) s += " + ";
        s += "(" + scalar_to_string(f.dom, c) + ")·(" + tab.diags[idx].str() + ")";
    }
    return s;
}

}  // namespace tlkit

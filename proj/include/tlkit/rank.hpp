#pragma once

#include "tlkit/tlcat.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace tlkit {

/// Minimal polynomial of alpha over Q (monic), found as the first linear
/// dependency among the power coordinates of alpha.
inline Poly nf_min_poly(const NFElem& alpha) {
    long deg = alpha.F->degree();
    std::vector<Poly> pows;
    NFElem cur = alpha.one_like();
    for (long k = 0;; ++k) {
        if (k > 0) {
            DenseMatrix<mpq_class> A(static_cast<int>(deg), static_cast<int>(k), mpq_class(0));
            for (long j = 0; j < k; ++j)
                for (long i = 0; i < deg; ++i)
                    A.at(static_cast<int>(i), static_cast<int>(j)) =
                        pows[static_cast<std::size_t>(j)].at(static_cast<std::size_t>(i));
            std::vector<mpq_class> b(static_cast<std::size_t>(deg), mpq_class(0));
            for (long i = 0; i < deg; ++i) b[static_cast<std::size_t>(i)] = cur.p.at(static_cast<std::size_t>(i));
            auto sol = solve_linear(A, b, mpq_class(0));
            if (sol) {
                Poly mu = Poly::monomial(static_cast<std::size_t>(k), mpq_class(1));
                for (long j = 0; j < k; ++j)
                    mu = mu - Poly::monomial(static_cast<std::size_t>(j), (*sol)[static_cast<std::size_t>(j)]);
                return mu;
            }
        }
        if (k > deg) throw DomainError("nf_min_poly: no dependency found (corrupt field?)");
        pows.push_back(cur.p);
        cur = cur * alpha;
    }
}

inline Poly delta_min_poly(const CycloDomain& dom) {
    return nf_min_poly(delta_scalar(dom));
}

template <class D>
typename D::Elem poly_eval(const Poly& p, const typename D::Elem& x, const D& dom) {
    typename D::Elem acc = dom.zero();
    for (long i = p.degree(); i >= 0; --i)
        acc = acc * x + dom.from_rational(p.at(static_cast<std::size_t>(i)));
    return acc;
}

template <class D>
struct RankResult {
    int rank = 0;
    std::vector<Morphism<D>> radical;  // basis of the Gram radical in End(n)
    std::string method;
};

namespace detail {

constexpr int kRankArityCeiling = 8;

inline void check_rank_arity(int n) {
    if (n < 0) throw DomainError("negligible_rank: negative arity");
    if (n > kRankArityCeiling)
        throw GuardError("negligible_rank: arity ceiling " + std::to_string(kRankArityCeiling) +
                         " exceeded");
}

template <class D>
std::vector<Morphism<D>> kernel_to_morphisms(const D& dom, int n,
                                             const std::vector<std::vector<typename D::Elem>>& ker) {
    std::vector<Morphism<D>> out;
    out.reserve(ker.size());
    for (const auto& v : ker) {
        Morphism<D> f = morphism_zero(dom, Mode::Generic, n, n);
        for (std::size_t k = 0; k < v.size(); ++k)
            set_coeff(f, static_cast<std::uint32_t>(k), v[k]);
        out.push_back(std::move(f));
    }
    return out;
}

inline GenericScalar eval_laurent_at(const Laurent& L, const GenericScalar& x) {
    GenericScalar acc;
    for (long e = L.lo(); e <= L.hi(); ++e) {
        mpq_class c = L.at(e);
        if (c == 0) continue;
        acc = acc + GenericScalar(c) * epow(x, e);
    }
    return acc;
}

inline GenericScalar eval_generic_at(const GenericScalar& r, const GenericScalar& x) {
    return eval_laurent_at(r.num, x) * eval_laurent_at(r.den, x).inv();
}

/// Subfield Q(delta) presented as Q[t]/(mu) plus the evaluation t -> delta
/// back into the ambient cyclotomic field.
struct DeltaSubfield {
    std::shared_ptr<const NumberField> F;
    NFElem tbar;  // class of t, i.e. delta inside the subfield
    Poly mu;
    long g = 1;
};

inline DeltaSubfield delta_subfield(const CycloDomain& dom) {
    DeltaSubfield s;
    s.mu = delta_min_poly(dom);
    s.g = s.mu.degree();
    s.F = std::make_shared<const NumberField>(s.mu, "deltamin:" + dom.fingerprint());
    s.tbar = NFElem(s.F, Poly::monomial(1, mpq_class(1)));
    return s;
}

}  // namespace detail

/// Gram rank over Q(v).  The entries delta^e generate the subfield Q(delta);
/// eliminating the matrix t^e over the abstract rational function field and
/// evaluating the kernel at t = delta preserves rank and kernel exactly,
/// because t -> delta embeds Q(t) into Q(v).
inline RankResult<GenericDomain> negligible_rank(int n, const GenericDomain& dom) {
    detail::check_rank_arity(n);
    const auto& exps = gram_exponents(n);
    const int dim = exps.rows;
    DenseMatrix<GenericScalar> A(dim, dim, dom.zero());
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) A.at(i, j) = dom.v_pow(exps.at(i, j));
    auto ech = row_reduce(std::move(A));
    auto ker = kernel_basis(ech, dom.zero(), dom.one());
    GenericScalar delta = delta_scalar(dom);
    std::vector<std::vector<GenericScalar>> mapped;
    mapped.reserve(ker.size());
    for (const auto& v : ker) {
        std::vector<GenericScalar> w;
        w.reserve(v.size());
        for (const auto& r : v) w.push_back(detail::eval_generic_at(r, delta));
        mapped.push_back(std::move(w));
    }
    return {ech.rank, detail::kernel_to_morphisms(dom, n, mapped), "generic-univariate"};
}

inline RankResult<FiniteDomain> negligible_rank(int n, const FiniteDomain& dom) {
    detail::check_rank_arity(n);
    const auto& exps = gram_exponents(n);
    const int dim = exps.rows;
    FFElem delta = delta_scalar(dom);
    int max_e = 0;
    for (int x : exps.a) max_e = std::max(max_e, x);
    std::vector<FFElem> pow = {dom.one()};
    for (int e = 1; e <= max_e; ++e) pow.push_back(pow.back() * delta);
    DenseMatrix<FFElem> A(dim, dim, dom.zero());
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) A.at(i, j) = pow[static_cast<std::size_t>(exps.at(i, j))];
    auto ech = row_reduce(std::move(A));
    auto ker = kernel_basis(ech, dom.zero(), dom.one());
    return {ech.rank, detail::kernel_to_morphisms(dom, n, ker), "finite-elimination"};
}

namespace detail {

/// Honest elimination over the subfield Q(delta) (degree g, small), with the
/// kernel evaluated back into the ambient cyclotomic field.
inline RankResult<CycloDomain> subfield_rank(int n, const CycloDomain& dom) {
    const auto& exps = gram_exponents(n);
    const int dim = exps.rows;
    DeltaSubfield sub = delta_subfield(dom);
    NFElem zero(sub.F, Poly());
    NFElem one(sub.F, Poly(mpq_class(1)));
    int max_e = 0;
    for (int x : exps.a) max_e = std::max(max_e, x);
    std::vector<NFElem> pow = {one};
    for (int e = 1; e <= max_e; ++e) pow.push_back(pow.back() * sub.tbar);
    DenseMatrix<NFElem> A(dim, dim, zero);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) A.at(i, j) = pow[static_cast<std::size_t>(exps.at(i, j))];
    auto ech = row_reduce(std::move(A));
    auto ker = kernel_basis(ech, zero, one);
    NFElem delta = delta_scalar(dom);
    std::vector<std::vector<NFElem>> mapped;
    mapped.reserve(ker.size());
    for (const auto& v : ker) {
        std::vector<NFElem> w;
        w.reserve(v.size());
        for (const auto& c : v) w.push_back(poly_eval(c.p, delta, dom));
        mapped.push_back(std::move(w));
    }
    return {ech.rank, kernel_to_morphisms(dom, n, mapped),
            "subfield-elimination(deg=" + std::to_string(sub.g) + ")"};
}

struct ModularElim {
    std::uint64_t p = 0;
    std::shared_ptr<SmallFF> field;  // owns the modulus the SFElems point at
    Echelon<SFElem> ech;
};

inline std::optional<ModularElim> eliminate_mod_p(std::uint64_t p, const Poly& mu,
                                                  const DenseMatrix<int>& exps) {
    FpPoly mu_p;
    mpz_class pz(static_cast<unsigned long>(p));
    for (long i = 0; i <= mu.degree(); ++i) {
        mpq_class ci = mu.at(static_cast<std::size_t>(i));
        mpz_class num = ci.get_num();
        mpz_class r = ((num % pz) + pz) % pz;
        mu_p.c.push_back(r);
    }
    mu_p.trim();
    if (mu_p.degree() != mu.degree() || !fp_irreducible(mu_p, pz)) return std::nullopt;
    ModularElim me;
    me.p = p;
    me.field = std::make_shared<SmallFF>();
    me.field->p = p;
    me.field->g = static_cast<int>(mu.degree());
    me.field->modulus.fill(0);
    for (long i = 0; i <= mu.degree(); ++i)
        me.field->modulus[static_cast<std::size_t>(i)] = mu_p.c[static_cast<std::size_t>(i)].get_ui();
    SFElem tbar = sf_from_int(*me.field, 0);
    if (me.field->g == 1) {
        tbar = sf_from_int(*me.field, static_cast<std::int64_t>(p - me.field->modulus[0] % p));
    } else {
        tbar.c[1] = 1;
    }
    int max_e = 0;
    for (int x : exps.a) max_e = std::max(max_e, x);
    std::vector<SFElem> pow = {sf_from_int(*me.field, 1)};
    for (int e = 1; e <= max_e; ++e) pow.push_back(pow.back() * tbar);
    DenseMatrix<SFElem> A(exps.rows, exps.cols, sf_from_int(*me.field, 0));
    for (int i = 0; i < exps.rows; ++i)
        for (int j = 0; j < exps.cols; ++j)
            A.at(i, j) = pow[static_cast<std::size_t>(exps.at(i, j))];
    me.ech = row_reduce(std::move(A));
    return me;
}

/// Certified modular Gram rank for large hom spaces.
///
/// Soundness: for a prime p where mu stays irreducible, Z[t]/(mu) -> F_{p^g}
/// is a ring map sending delta-powers to delta-powers.  An elimination rank r
/// mod p exhibits an r x r minor with nonzero determinant in F_{p^g}; its
/// preimage determinant in Z[delta] is therefore nonzero, so rank >= r.  The
/// reconstructed kernel is verified exactly over Z[delta] (denominators
/// cleared), giving dim - r independent radical vectors, so rank <= r.
inline std::optional<RankResult<CycloDomain>> modular_rank(int n, const CycloDomain& dom) {
    const auto& exps = gram_exponents(n);
    const int dim = exps.rows;
    DeltaSubfield sub = delta_subfield(dom);
    const long g = sub.g;
    if (g > SmallFF::kMaxDeg) return std::nullopt;
    for (const auto& ci : sub.mu.c)
        if (ci.get_den() != 1) return std::nullopt;  // need an integral generator

    std::vector<ModularElim> agreeing;
    std::uint64_t p = (1ull << 31) - 1;
    int attempts = 0;
    auto next_elim = [&]() -> bool {
        while (attempts < 40) {
            while (!sf_is_prime(p)) p -= 2;
            ++attempts;
            auto me = eliminate_mod_p(p, sub.mu, exps);
            p -= 2;
            if (!me) continue;
            if (!agreeing.empty() && (me->ech.rank != agreeing[0].ech.rank ||
                                      me->ech.pivot_cols != agreeing[0].ech.pivot_cols)) {
                // Disagreement: keep the elimination whose rank is larger
                // (mod-p rank never exceeds the true rank) and restart.
                if (me->ech.rank > agreeing[0].ech.rank) {
                    agreeing.clear();
                    agreeing.push_back(std::move(*me));
                }
                continue;
            }
            agreeing.push_back(std::move(*me));
            return true;
        }
        return false;
    };
    while (static_cast<int>(agreeing.size()) < 2)
        if (!next_elim()) return std::nullopt;

    const int rank = agreeing[0].ech.rank;
    const std::vector<int>& pivots = agreeing[0].ech.pivot_cols;
    std::vector<int> free_cols;
    std::vector<int> pivot_of_col(static_cast<std::size_t>(dim), -1);
    for (int r = 0; r < rank; ++r) pivot_of_col[static_cast<std::size_t>(pivots[static_cast<std::size_t>(r)])] = r;
    for (int c = 0; c < dim; ++c)
        if (pivot_of_col[static_cast<std::size_t>(c)] < 0) free_cols.push_back(c);

    // Reconstruct the pivot-row coefficients at the free columns over Q.
    std::vector<std::vector<NFElem>> X;  // [free index][pivot row] in the subfield
    for (int tries = 0; tries < 5; ++tries) {
        mpz_class modulus = 1;
        for (const auto& me : agreeing) modulus *= mpz_class(static_cast<unsigned long>(me.p));
        bool ok = true;
        X.assign(free_cols.size(), {});
        for (std::size_t fi = 0; fi < free_cols.size() && ok; ++fi) {
            X[fi].reserve(static_cast<std::size_t>(rank));
            for (int r = 0; r < rank && ok; ++r) {
                Poly coord;
                for (long k = 0; k < g && ok; ++k) {
                    mpz_class acc = agreeing[0].ech.mat.at(r, free_cols[fi]).c[static_cast<std::size_t>(k)];
                    mpz_class m = mpz_class(static_cast<unsigned long>(agreeing[0].p));
                    for (std::size_t ai = 1; ai < agreeing.size(); ++ai) {
                        mpz_class rk(static_cast<unsigned long>(
                            agreeing[ai].ech.mat.at(r, free_cols[fi]).c[static_cast<std::size_t>(k)]));
                        acc = crt_combine(acc, m, rk, mpz_class(static_cast<unsigned long>(agreeing[ai].p)));
                        m *= mpz_class(static_cast<unsigned long>(agreeing[ai].p));
                    }
                    auto rc = rational_reconstruct(acc, modulus);
                    if (!rc) {
                        ok = false;
                        break;
                    }
                    coord = coord + Poly::monomial(static_cast<std::size_t>(k), *rc);
                }
                if (ok) X[fi].push_back(NFElem(sub.F, coord));
            }
        }
        if (ok) break;
        if (!next_elim()) return std::nullopt;
        X.clear();
    }
    if (X.size() != free_cols.size()) return std::nullopt;

    // Exact verification of G v = 0 over Z[delta]: clear denominators, then
    // bucket the (at most rank+1) support entries of v by delta-exponent and
    // combine with integer coefficient vectors of delta^e mod mu.
    std::vector<std::vector<mpz_class>> tpow_int;  // t^e mod mu, integer coeffs
    {
        NFElem cur(sub.F, Poly(mpq_class(1)));
        int max_e = 0;
        for (int x : exps.a) max_e = std::max(max_e, x);
        for (int e = 0; e <= max_e; ++e) {
            std::vector<mpz_class> row(static_cast<std::size_t>(g), 0);
            for (long k = 0; k < g; ++k) {
                mpq_class c = cur.p.at(static_cast<std::size_t>(k));
                if (c.get_den() != 1) return std::nullopt;  // mu monic integral keeps these integral
                row[static_cast<std::size_t>(k)] = c.get_num();
            }
            tpow_int.push_back(std::move(row));
            cur = cur * sub.tbar;
        }
    }
    for (std::size_t fi = 0; fi < free_cols.size(); ++fi) {
        // v[free] = 1, v[pivot_r] = -X[fi][r]; clear denominators.
        mpz_class den = 1;
        for (const auto& c : X[fi])
            for (long k = 0; k < g; ++k) den = lcm(den, c.p.at(static_cast<std::size_t>(k)).get_den());
        std::vector<std::pair<int, std::vector<mpz_class>>> supp;  // (column, integer coords)
        supp.reserve(static_cast<std::size_t>(rank) + 1);
        for (int r = 0; r < rank; ++r) {
            std::vector<mpz_class> coords(static_cast<std::size_t>(g), 0);
            bool nonzero = false;
            for (long k = 0; k < g; ++k) {
                mpq_class scaled = X[fi][static_cast<std::size_t>(r)].p.at(static_cast<std::size_t>(k)) * den;
                coords[static_cast<std::size_t>(k)] = -scaled.get_num();
                if (coords[static_cast<std::size_t>(k)] != 0) nonzero = true;
            }
            if (nonzero) supp.emplace_back(pivots[static_cast<std::size_t>(r)], std::move(coords));
        }
        {
            std::vector<mpz_class> coords(static_cast<std::size_t>(g), 0);
            coords[0] = den;
            supp.emplace_back(free_cols[fi], std::move(coords));
        }
        std::vector<std::vector<mpz_class>> bucket(tpow_int.size());
        for (int i = 0; i < dim; ++i) {
            for (auto& b : bucket) b.clear();
            for (const auto& [col, coords] : supp) {
                auto& b = bucket[static_cast<std::size_t>(exps.at(i, col))];
                if (b.empty()) b.assign(static_cast<std::size_t>(g), 0);
                for (long k = 0; k < g; ++k) b[static_cast<std::size_t>(k)] += coords[static_cast<std::size_t>(k)];
            }
            // Sum over exponents of (t^e mod mu) * bucket_e as polynomials mod mu.
            std::vector<mpz_class> total(static_cast<std::size_t>(2 * g), 0);
            for (std::size_t e = 0; e < bucket.size(); ++e) {
                if (bucket[e].empty()) continue;
                for (long a2 = 0; a2 < g; ++a2) {
                    if (tpow_int[e][static_cast<std::size_t>(a2)] == 0) continue;
                    for (long b2 = 0; b2 < g; ++b2)
                        total[static_cast<std::size_t>(a2 + b2)] +=
                            tpow_int[e][static_cast<std::size_t>(a2)] * bucket[e][static_cast<std::size_t>(b2)];
                }
            }
            // Reduce modulo the monic integral mu and require zero.
            for (long d2 = 2 * g - 1; d2 >= g; --d2) {
                mpz_class lead = total[static_cast<std::size_t>(d2)];
                if (lead == 0) continue;
                total[static_cast<std::size_t>(d2)] = 0;
                for (long k = 0; k < g; ++k)
                    total[static_cast<std::size_t>(d2 - g + k)] -= lead * sub.mu.at(static_cast<std::size_t>(k)).get_num();
            }
            for (long k = 0; k < g; ++k)
                if (total[static_cast<std::size_t>(k)] != 0) return std::nullopt;  // verification failed
        }
    }

    // Certified: evaluate the kernel at delta in the ambient field.
    NFElem delta = delta_scalar(dom);
    std::vector<std::vector<NFElem>> mapped;
    mapped.reserve(free_cols.size());
    for (std::size_t fi = 0; fi < free_cols.size(); ++fi) {
        std::vector<NFElem> v(static_cast<std::size_t>(dim), dom.zero());
        v[static_cast<std::size_t>(free_cols[fi])] = dom.one();
        for (int r = 0; r < rank; ++r)
            v[static_cast<std::size_t>(pivots[static_cast<std::size_t>(r)])] =
                dom.zero() - poly_eval(X[fi][static_cast<std::size_t>(r)].p, delta, dom);
        mapped.push_back(std::move(v));
    }
    return RankResult<CycloDomain>{rank, kernel_to_morphisms(dom, n, mapped), "modular-certified"};
}

}  // namespace detail

inline RankResult<CycloDomain> negligible_rank(int n, const CycloDomain& dom) {
    detail::check_rank_arity(n);
    const int dim = gram_exponents(n).rows;
    if (dim > 200) {
        auto certified = detail::modular_rank(n, dom);
        if (certified) return std::move(*certified);
    }
    return detail::subfield_rank(n, dom);
}

}  // namespace tlkit

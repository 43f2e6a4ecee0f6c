#pragma once

#include "tlkit/errors.hpp"
#include "tlkit/finitefield.hpp"
#include "tlkit/laurent.hpp"
#include "tlkit/numberfield.hpp"

#include <functional>
#include <optional>
#include <variant>

namespace tlkit {

template <class E>
E epow(E base, long e) {
    E acc = base.one_like();
    if (e < 0) {
        base = base.inv();
        e = -e;
    }
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

/// Generic domain: the rational function field Q(v) with q = v^2.
struct GenericDomain {
    using Elem = GenericScalar;

    Elem zero() const { return GenericScalar(); }
    Elem one() const { return GenericScalar(mpq_class(1)); }
    Elem from_int(long n) const { return GenericScalar(mpq_class(n)); }
    Elem from_rational(const mpq_class& r) const { return GenericScalar(r); }
    Elem v_pow(long k) const { return GenericScalar(Laurent::monomial(k, mpq_class(1))); }
    Elem v() const { return v_pow(1); }
    Elem q() const { return v_pow(2); }
    bool has_v() const { return true; }
    GenericDomain with_sqrt_q() const { return *this; }
    std::optional<unsigned> q_order() const { return std::nullopt; }
    std::optional<unsigned> kappa() const { return std::nullopt; }
    std::string fingerprint() const { return "generic"; }
};

inline std::shared_ptr<const NumberField> cyclotomic_field(unsigned M) {
    static std::map<unsigned, std::shared_ptr<const NumberField>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(M);
    if (it != cache.end()) return it->second;
    auto F = std::make_shared<const NumberField>(cyclotomic_poly(M), "cyclo:" + std::to_string(M));
    cache.emplace(M, F);
    return F;
}

/// Cyclotomic domain: Q(zeta_M) carrying a designated primitive N-th root q
/// (q = zeta_M^qpow) and, when present in the field, a designated v = sqrt(q).
struct CycloDomain {
    using Elem = NFElem;

    std::shared_ptr<const NumberField> F;
    unsigned M = 1;     // conductor of the ambient field
    unsigned qpow = 1;  // q = zeta_M^qpow
    unsigned N = 1;     // multiplicative order of q
    std::optional<unsigned> vpow;

    static CycloDomain make(unsigned N) {
        if (N == 0) throw DomainError("Cyclotomic(0) is not a field: N must be >= 1");
        CycloDomain d;
        d.M = N;
        d.N = N;
        d.qpow = 1;
        d.F = cyclotomic_field(N);
        if (N % 2 == 1) d.vpow = (N + 1) / 2;
        return d;
    }

    Elem zero() const { return Elem(F, Poly()); }
    Elem one() const { return Elem(F, Poly(mpq_class(1))); }
    Elem from_int(long n) const { return Elem(F, Poly(mpq_class(n))); }
    Elem from_rational(const mpq_class& r) const { return Elem(F, Poly(r)); }
    Elem root() const { return Elem(F, Poly::x()); }
    Elem root_pow(long k) const {
        long m = static_cast<long>(M);
        long e = ((k % m) + m) % m;
        return Elem(F, Poly::monomial(static_cast<std::size_t>(e), mpq_class(1)));
    }
    Elem q() const { return root_pow(qpow); }
    bool has_v() const { return vpow.has_value(); }
    Elem v() const {
        if (!vpow) throw DomainError("Cyclotomic(" + std::to_string(N) + "): v = sqrt(q) not in field, use with_sqrt_q()");
        return root_pow(static_cast<long>(*vpow));
    }
    Elem v_pow(long k) const { return epow(v(), k); }

    /// Same field if v exists, otherwise the conductor-doubled field where q
    /// keeps its order and v = zeta_{2M}^{qpow}.
    CycloDomain with_sqrt_q() const {
        if (vpow) return *this;
        CycloDomain d;
        d.M = 2 * M;
        d.qpow = 2 * qpow;
        d.N = N;
        d.vpow = qpow;
        d.F = cyclotomic_field(d.M);
        return d;
    }

    std::optional<unsigned> q_order() const { return N; }
    std::optional<unsigned> kappa() const {
        if (N % 2 == 0) return N / 2;
        return std::nullopt;
    }
    unsigned degree() const { return static_cast<unsigned>(F->degree()); }
    std::string fingerprint() const {
        return "cyclo:" + std::to_string(M) + ":q" + std::to_string(qpow);
    }
};

/// Ring map Q(zeta_M) -> Q(zeta_M') for M | M', zeta_M -> zeta_M'^{M'/M}.
inline NFElem cyclo_embed(const NFElem& x, const CycloDomain& src, const CycloDomain& dst) {
    if (dst.M % src.M != 0) throw DomainError("cyclo_embed: target conductor not a multiple");
    unsigned k = dst.M / src.M;
    NFElem acc = dst.zero();
    NFElem zk = dst.root_pow(k);
    for (long i = x.p.degree(); i >= 0; --i)
        acc = acc * zk + NFElem(dst.F, Poly(x.p.c[static_cast<std::size_t>(i)]));
    return acc;
}

/// Finite domain F_{p^d} with designated q and v = sqrt(q).
struct FiniteDomain {
    using Elem = FFElem;

    std::shared_ptr<const FFField> F;
    FFElem qval, vval;

    static FiniteDomain make(const mpz_class& p, unsigned d, const std::vector<mpz_class>& qcoeffs) {
        if (p < 2 || !fp_is_prime(p)) throw DomainError("Finite(p,d): p must be prime");
        if (d == 0) throw DomainError("Finite(p,d): d must be >= 1");
        FiniteDomain dom;
        dom.F = FFField::make(p, d);
        FpPoly qq;
        qq.c = qcoeffs;
        qq.trim();
        dom.qval = FFElem(dom.F, qq);
        if (dom.qval.is_zero()) throw DomainError("Finite(p,d): q must be nonzero");
        if (!ff_sqrt(dom.qval, dom.vval))
            throw DomainError("Finite(p,d): q has no square root in F_{p^d}; extend the field");
        return dom;
    }

    Elem zero() const { return FFElem::from_int(F, 0); }
    Elem one() const { return FFElem::from_int(F, 1); }
    Elem from_int(long n) const { return FFElem::from_int(F, mpz_class(n)); }
    Elem from_rational(const mpq_class& r) const {
        return FFElem::from_int(F, r.get_num()) * FFElem::from_int(F, r.get_den()).inv();
    }
    Elem q() const { return qval; }
    Elem v() const { return vval; }
    Elem v_pow(long k) const { return vval.pow(mpz_class(k)); }
    bool has_v() const { return true; }
    FiniteDomain with_sqrt_q() const { return *this; }
    std::optional<unsigned> q_order() const {
        // Order of q divides p^d - 1; computed by direct powering (small use only).
        FFElem x = qval;
        unsigned n = 1;
        while (!(x == one())) {
            x = x * qval;
            ++n;
            if (n > 1u << 20) return std::nullopt;
        }
        return n;
    }
    std::optional<unsigned> kappa() const {
        auto n = q_order();
        if (n && *n % 2 == 0) return *n / 2;
        return std::nullopt;
    }
    std::string fingerprint() const {
        std::string s = "ff:" + F->p.get_str() + ":" + std::to_string(F->d) + ":q";
        for (auto& c : qval.rep.c) s += "_" + c.get_str();
        return s;
    }

    static bool fp_is_prime(const mpz_class& p) {
        return mpz_probab_prime_p(p.get_mpz_t(), 40) != 0;  // exact for the small p used here
    }
};

inline GenericScalar one_like_impl(const GenericScalar&) { return GenericScalar(mpq_class(1)); }

/// q-integer by the summation form [n]_q = q^{n-1} + q^{n-3} + ... + q^{1-n},
/// extended by [-n]_q = -[n]_q and [0]_q = 0.
template <class D>
typename D::Elem qint(long n, const D& dom) {
    if (n == 0) return dom.zero();
    bool neg = n < 0;
    long m = neg ? -n : n;
    typename D::Elem q = dom.q();
    typename D::Elem acc = dom.zero();
    typename D::Elem term = epow(q, m - 1);
    typename D::Elem qinv2 = epow(q, -2);
    for (long k = 0; k < m; ++k) {
        acc = acc + term;
        if (k + 1 < m) term = term * qinv2;
    }
    return neg ? dom.zero() - acc : acc;
}

/// The designated primitive N-th root of unity, in its Cyclotomic(N) domain.
struct PrimitiveRoot {
    CycloDomain dom;
    NFElem value;
};

inline PrimitiveRoot primitive_root(unsigned N) {
    if (N == 0) throw DomainError("primitive_root: N = 0 rejected (no primitive 0th root)");
    CycloDomain d = CycloDomain::make(N);
    return {d, d.q()};
}

/// Braiding units: solutions a of ab = 1, [2]_q = a^2 + a^{-2}, namely
/// {v, -v, v^{-1}, -v^{-1}} with duplicates removed.  The returned domain is
/// the sqrt-extension when v is not already present.
template <class D>
struct BraidingUnits {
    D dom;
    std::vector<typename D::Elem> units;
};

template <class D>
BraidingUnits<D> braiding_units(const D& dom0) {
    D dom = dom0.with_sqrt_q();
    using E = typename D::Elem;
    std::vector<E> cand = {dom.v_pow(1), dom.zero() - dom.v_pow(1), dom.v_pow(-1),
                           dom.zero() - dom.v_pow(-1)};
    std::vector<E> out;
    for (auto& c : cand) {
        bool dup = false;
        for (auto& u : out)
            if (u == c) dup = true;
        if (!dup) out.push_back(c);
    }
    return {dom, out};
}

inline std::string nf_to_string(const NFElem& x, unsigned M) {
    std::string s = "[";
    for (long i = 0; i < static_cast<long>(x.F->degree()); ++i) {
        if (i) s += ", ";
        s += x.p.at(static_cast<std::size_t>(i)).get_str();
    }
    return s + "] mod Phi_" + std::to_string(M);
}

}  // namespace tlkit

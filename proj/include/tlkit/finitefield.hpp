#pragma once

#include <gmpxx.h>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace tlkit {

inline mpz_class mod_pos(const mpz_class& a, const mpz_class& p) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
    return r;
}

/// Polynomial over F_p, coefficients in [0, p), no trailing zeros.
struct FpPoly {
    std::vector<mpz_class> c;

    bool is_zero() const { return c.empty(); }
    long degree() const { return static_cast<long>(c.size()) - 1; }
    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    friend bool operator==(const FpPoly& a, const FpPoly& b) { return a.c == b.c; }
};

inline FpPoly fp_add(const FpPoly& a, const FpPoly& b, const mpz_class& p) {
    FpPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < r.c.size(); ++i) {
        mpz_class s = (i < a.c.size() ? a.c[i] : mpz_class(0)) + (i < b.c.size() ? b.c[i] : mpz_class(0));
        r.c[i] = s >= p ? mpz_class(s - p) : s;
    }
    r.trim();
    return r;
}

inline FpPoly fp_sub(const FpPoly& a, const FpPoly& b, const mpz_class& p) {
    FpPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < r.c.size(); ++i) {
        mpz_class s = (i < a.c.size() ? a.c[i] : mpz_class(0)) - (i < b.c.size() ? b.c[i] : mpz_class(0));
        r.c[i] = s < 0 ? mpz_class(s + p) : s;
    }
    r.trim();
    return r;
}

inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b, const mpz_class& p) {
    FpPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    for (auto& x : r.c) x = mod_pos(x, p);
    r.trim();
    return r;
}

inline FpPoly fp_scale(const FpPoly& a, const mpz_class& s, const mpz_class& p) {
    FpPoly r = a;
    for (auto& x : r.c) x = mod_pos(x * s, p);
    r.trim();
    return r;
}

inline mpz_class fp_inv_scalar(const mpz_class& a, const mpz_class& p) {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()) == 0)
        throw std::domain_error("fp_inv_scalar: not invertible");
    return r;
}

/// a mod b for monic-able b (b nonzero).
inline FpPoly fp_rem(FpPoly a, const FpPoly& b, const mpz_class& p) {
    if (b.is_zero()) throw std::domain_error("fp_rem: zero divisor");
    mpz_class binv = fp_inv_scalar(b.c.back(), p);
    while (!a.is_zero() && a.degree() >= b.degree()) {
        mpz_class f = mod_pos(a.c.back() * binv, p);
        std::size_t shift = static_cast<std::size_t>(a.degree() - b.degree());
        for (std::size_t i = 0; i < b.c.size(); ++i)
            a.c[shift + i] = mod_pos(a.c[shift + i] - f * b.c[i], p);
        a.trim();
    }
    return a;
}

inline FpPoly fp_gcd(FpPoly a, FpPoly b, const mpz_class& p) {
    while (!b.is_zero()) {
        FpPoly r = fp_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero() && a.c.back() != 1) a = fp_scale(a, fp_inv_scalar(a.c.back(), p), p);
    return a;
}

/// x^e mod f over F_p (e arbitrary mpz), by square and multiply.
inline FpPoly fp_xpow_mod(const mpz_class& e, const FpPoly& f, const mpz_class& p) {
    FpPoly base;
    base.c = {0, 1};
    base = fp_rem(base, f, p);
    FpPoly acc;
    acc.c = {1};
    for (long i = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; i >= 0; --i) {
        acc = fp_rem(fp_mul(acc, acc, p), f, p);
        if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(i)))
            acc = fp_rem(fp_mul(acc, base, p), f, p);
    }
    return acc;
}

/// Monic f of degree d >= 1 irreducible over F_p (Rabin's test).
inline bool fp_irreducible(const FpPoly& f, const mpz_class& p) {
    long d = f.degree();
    if (d < 1) return false;
    mpz_class pd;
    mpz_pow_ui(pd.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(d));
    FpPoly xq = fp_xpow_mod(pd, f, p);
    FpPoly x;
    x.c = {0, 1};
    if (!(xq == fp_rem(x, f, p))) return false;
    for (long l = 2; l <= d; ++l) {
        if (d % l != 0) continue;
        bool lprime = true;
        for (long m = 2; m * m <= l; ++m)
            if (l % m == 0) lprime = false;
        if (!lprime) continue;
        mpz_class pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(d / l));
        FpPoly xe = fp_xpow_mod(pe, f, p);
        FpPoly g = fp_gcd(fp_sub(xe, x, p), f, p);
        if (g.degree() != 0) return false;
    }
    return true;
}

/// Lexicographically least monic irreducible of degree d over F_p: the monic
/// polynomial whose lower-coefficient vector (a_0, ..., a_{d-1}) encodes the
/// smallest integer sum a_i p^i among irreducibles.
inline FpPoly fp_least_irreducible(const mpz_class& p, unsigned d) {
    if (d == 0) throw std::domain_error("fp_least_irreducible: d = 0");
    for (mpz_class code = 0;; ++code) {
        FpPoly f;
        f.c.assign(d + 1, 0);
        f.c[d] = 1;
        mpz_class rest = code;
        for (unsigned i = 0; i < d && rest != 0; ++i) {
            f.c[i] = mod_pos(rest, p);
            rest /= p;
        }
        if (rest != 0) throw std::domain_error("fp_least_irreducible: no irreducible found");
        if (fp_irreducible(f, p)) return f;
    }
}

/// F_{p^d} = F_p[x]/(modulus).
struct FFField {
    mpz_class p;
    unsigned d;
    FpPoly modulus;

    FFField(mpz_class p_, unsigned d_, FpPoly mod_) : p(std::move(p_)), d(d_), modulus(std::move(mod_)) {}
    static std::shared_ptr<const FFField> make(const mpz_class& p, unsigned d) {
        return std::make_shared<const FFField>(p, d, fp_least_irreducible(p, d));
    }
    mpz_class order() const {
        mpz_class q;
        mpz_pow_ui(q.get_mpz_t(), p.get_mpz_t(), d);
        return q;
    }
};

struct FFElem {
    std::shared_ptr<const FFField> F;
    FpPoly rep;  // degree < d

    FFElem() = default;
    FFElem(std::shared_ptr<const FFField> f, FpPoly r) : F(std::move(f)), rep(std::move(r)) {
        for (auto& x : rep.c) x = mod_pos(x, F->p);
        rep.trim();
        rep = fp_rem(rep, F->modulus, F->p);
    }
    static FFElem from_int(const std::shared_ptr<const FFField>& f, const mpz_class& n) {
        FpPoly r;
        r.c = {mod_pos(n, f->p)};
        r.trim();
        return FFElem(f, r);
    }

    bool is_zero() const { return rep.is_zero(); }
    friend bool operator==(const FFElem& a, const FFElem& b) { return a.rep == b.rep; }
    friend FFElem operator+(const FFElem& a, const FFElem& b) {
        const auto& f = a.F ? a.F : b.F;
        return FFElem(f, fp_add(a.rep, b.rep, f->p));
    }
    friend FFElem operator-(const FFElem& a, const FFElem& b) {
        const auto& f = a.F ? a.F : b.F;
        return FFElem(f, fp_sub(a.rep, b.rep, f->p));
    }
    friend FFElem operator-(const FFElem& a) {
        FpPoly z;
        return FFElem(a.F, fp_sub(z, a.rep, a.F->p));
    }
    friend FFElem operator*(const FFElem& a, const FFElem& b) {
        const auto& f = a.F ? a.F : b.F;
        return FFElem(f, fp_rem(fp_mul(a.rep, b.rep, f->p), f->modulus, f->p));
    }
    FFElem pow(mpz_class e) const {
        mpz_class m = F->order() - 1;
        if (e < 0) e = mod_pos(e, m);  // valid on nonzero elements
        FFElem base = *this, acc = from_int(F, 1);
        for (long i = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; e != 0 && i >= 0; --i) {
            acc = acc * acc;
            if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) acc = acc * base;
        }
        return acc;
    }
    FFElem one_like() const { return from_int(F, 1); }

    FFElem inv() const {
        if (is_zero()) throw std::domain_error("FFElem: inverse of zero");
        return pow(F->order() - 2);
    }
    friend FFElem operator/(const FFElem& a, const FFElem& b) { return a * b.inv(); }
};

/// Deterministic element enumeration: code -> coefficient vector base p.
inline FFElem ff_nth_element(const std::shared_ptr<const FFField>& F, mpz_class code) {
    FpPoly r;
    r.c.assign(F->d, 0);
    for (unsigned i = 0; i < F->d && code != 0; ++i) {
        r.c[i] = mod_pos(code, F->p);
        code /= F->p;
    }
    r.trim();
    return FFElem(F, r);
}

/// Square root in F_{p^d} if one exists (Tonelli-Shanks on the cyclic group).
inline bool ff_sqrt(const FFElem& a, FFElem& out) {
    const auto& F = a.F;
    if (a.is_zero()) {
        out = a;
        return true;
    }
    if (F->p == 2) {
        out = a;
        for (unsigned i = 1; i < F->d; ++i) out = out * out;  // a^(2^(d-1))
        return true;
    }
    mpz_class m = F->order() - 1, h = m / 2;
    if (!(a.pow(h) == FFElem::from_int(F, 1))) return false;
    // Write m = 2^s * t with t odd; find a non-residue z.
    unsigned long s = mpz_scan1(m.get_mpz_t(), 0);
    mpz_class t = m >> s;
    FFElem z;
    for (mpz_class code = 2;; ++code) {
        z = ff_nth_element(F, code);
        if (!z.is_zero() && !(z.pow(h) == FFElem::from_int(F, 1))) break;
    }
    FFElem c = z.pow(t);
    FFElem x = a.pow((t + 1) / 2);
    FFElem b = a.pow(t);
    unsigned long r = s;
    FFElem one = FFElem::from_int(F, 1);
    while (!(b == one)) {
        unsigned long k = 0;
        FFElem b2 = b;
        while (!(b2 == one)) {
            b2 = b2 * b2;
            ++k;
            if (k == r) return false;
        }
        FFElem g = c;
        for (unsigned long i = 0; i + k + 1 < r; ++i) g = g * g;
        x = x * g;
        c = g * g;
        b = b * c;
        r = k;
    }
    out = x;
    return true;
}

}  // namespace tlkit

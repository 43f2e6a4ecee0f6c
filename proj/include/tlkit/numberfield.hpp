#pragma once

#include "tlkit/poly.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace tlkit {

/// Q[x]/(modulus), modulus monic of degree >= 1.  Irreducibility is the
/// caller's responsibility (cyclotomic polynomials and minimal polynomials
/// are irreducible by construction).
struct NumberField {
    Poly modulus;
    std::string tag;  // stable fingerprint component, e.g. "cyclo:12"

    explicit NumberField(Poly m, std::string t) : modulus(std::move(m)), tag(std::move(t)) {}
    long degree() const { return modulus.degree(); }
};

struct NFElem {
    std::shared_ptr<const NumberField> F;
    Poly p;  // degree < F->degree()

    NFElem() = default;
    NFElem(std::shared_ptr<const NumberField> field, Poly v) : F(std::move(field)), p(std::move(v)) {
        reduce();
    }

    void reduce() {
        if (p.degree() >= F->degree()) p = poly_divrem(p, F->modulus).second;
    }
    bool is_zero() const { return p.is_zero(); }

    friend bool operator==(const NFElem& a, const NFElem& b) { return a.p == b.p; }
    friend NFElem operator+(const NFElem& a, const NFElem& b) { return NFElem(a.F ? a.F : b.F, a.p + b.p); }
    friend NFElem operator-(const NFElem& a, const NFElem& b) { return NFElem(a.F ? a.F : b.F, a.p - b.p); }
    friend NFElem operator-(const NFElem& a) { return NFElem(a.F, -a.p); }
    friend NFElem operator*(const NFElem& a, const NFElem& b) { return NFElem(a.F ? a.F : b.F, a.p * b.p); }

    NFElem one_like() const { return NFElem(F, Poly(mpq_class(1))); }

    NFElem inv() const {
        if (is_zero()) throw std::domain_error("NFElem: inverse of zero");
        auto [g, s, t] = poly_xgcd(p, F->modulus);
        (void)t;
        if (g.degree() != 0) throw std::domain_error("NFElem: modulus not coprime (reducible modulus?)");
        return NFElem(F, s * (1 / g.c[0]));
    }
    friend NFElem operator/(const NFElem& a, const NFElem& b) { return a * b.inv(); }

    NFElem pow(long e) const {
        NFElem base = *this, acc(F, Poly(mpq_class(1)));
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
};

/// Cyclotomic polynomial Phi_N by recursive exact division of x^N - 1.
inline const Poly& cyclotomic_poly(unsigned N) {
    static std::map<unsigned, Poly> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
    if (N == 0) throw std::domain_error("cyclotomic_poly: N = 0");
    std::function<const Poly&(unsigned)> get = [&](unsigned n) -> const Poly& {
        auto jt = cache.find(n);
        if (jt != cache.end()) return jt->second;
        Poly xn1 = Poly::monomial(n, mpq_class(1)) - Poly(mpq_class(1));
        Poly quot = xn1;
        for (unsigned d = 1; d < n; ++d)
            if (n % d == 0) quot = poly_divexact(quot, get(d));
        return cache.emplace(n, std::move(quot)).first->second;
    };
    return get(N);
}

inline unsigned euler_phi(unsigned n) {
    unsigned result = n;
    for (unsigned p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    if (n > 1) result -= result / n;
    return result;
}

}  // namespace tlkit

#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tlkit {

/// Dense univariate polynomial over the rationals.
/// Invariant: coefficients never end with a zero (zero polynomial = empty vector).
struct Poly {
    std::vector<mpq_class> c;

    Poly() = default;
    explicit Poly(mpq_class c0) {
        if (c0 != 0) c.push_back(std::move(c0));
    }
    static Poly x() { return monomial(1, 1); }
    static Poly monomial(std::size_t deg, mpq_class coeff) {
        Poly p;
        if (coeff == 0) return p;
        p.c.assign(deg + 1, mpq_class(0));
        p.c[deg] = std::move(coeff);
        return p;
    }

    bool is_zero() const { return c.empty(); }
    long degree() const { return static_cast<long>(c.size()) - 1; }
    const mpq_class& lead() const { return c.back(); }
    mpq_class at(std::size_t i) const { return i < c.size() ? c[i] : mpq_class(0); }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c == b.c; }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r;
        r.c.resize(std::max(a.c.size(), b.c.size()), mpq_class(0));
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.at(i) + b.at(i);
        r.trim();
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        Poly r;
        r.c.resize(std::max(a.c.size(), b.c.size()), mpq_class(0));
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.at(i) - b.at(i);
        r.trim();
        return r;
    }
    friend Poly operator-(const Poly& a) {
        Poly r = a;
        for (auto& q : r.c) q = -q;
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        if (a.is_zero() || b.is_zero()) return r;
        r.c.assign(a.c.size() + b.c.size() - 1, mpq_class(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) {
            if (a.c[i] == 0) continue;
            for (std::size_t j = 0; j < b.c.size(); ++j)
                if (b.c[j] != 0) r.c[i + j] += a.c[i] * b.c[j];
        }
        r.trim();
        return r;
    }
    friend Poly operator*(const Poly& a, const mpq_class& s) {
        Poly r;
        if (s == 0) return r;
        r.c.reserve(a.c.size());
        for (auto& q : a.c) r.c.push_back(q * s);
        return r;
    }

    mpq_class eval(const mpq_class& x) const {
        mpq_class acc(0);
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
        return acc;
    }
};

/// Euclidean division: a = q*b + r with deg r < deg b.  b must be nonzero.
inline std::pair<Poly, Poly> poly_divrem(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("poly_divrem: division by zero polynomial");
    Poly q, r = a;
    if (a.degree() < b.degree()) return {q, r};
    q.c.assign(static_cast<std::size_t>(a.degree() - b.degree()) + 1, mpq_class(0));
    while (!r.is_zero() && r.degree() >= b.degree()) {
        std::size_t shift = static_cast<std::size_t>(r.degree() - b.degree());
        mpq_class f = r.lead() / b.lead();
        q.c[shift] = f;
        for (std::size_t i = 0; i < b.c.size(); ++i)
            if (b.c[i] != 0) r.c[shift + i] -= f * b.c[i];
        r.trim();
    }
    q.trim();
    return {q, r};
}

/// Exact division; throws if the remainder is nonzero.
inline Poly poly_divexact(const Poly& a, const Poly& b) {
    auto [q, r] = poly_divrem(a, b);
    if (!r.is_zero()) throw std::domain_error("poly_divexact: inexact division");
    return q;
}

inline Poly poly_derivative(const Poly& a) {
    Poly d;
    if (a.c.size() <= 1) return d;
    d.c.resize(a.c.size() - 1);
    for (std::size_t i = 1; i < a.c.size(); ++i)
        d.c[i - 1] = a.c[i] * static_cast<long>(i);
    d.trim();
    return d;
}

inline Poly poly_make_monic(const Poly& a) {
    if (a.is_zero() || a.lead() == 1) return a;
    Poly r = a;
    mpq_class inv = 1 / a.lead();
    for (auto& q : r.c) q *= inv;
    return r;
}

/// Monic gcd via a primitive pseudo-remainder sequence over the integers.
/// Rational-coefficient Euclid blows up the bit size of intermediate
/// coefficients exponentially; stripping integer content after each
/// pseudo-remainder keeps them near the size of the inputs.
inline Poly poly_gcd(const Poly& a0, const Poly& b0) {
    if (a0.is_zero()) return poly_make_monic(b0);
    if (b0.is_zero()) return poly_make_monic(a0);

    auto primitive = [](const Poly& p) {
        mpz_class l = 1;
        for (const auto& q : p.c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
        std::vector<mpz_class> v(p.c.size());
        mpz_class g = 0;
        for (std::size_t i = 0; i < p.c.size(); ++i) {
            v[i] = mpq_class(p.c[i] * l).get_num();
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v[i].get_mpz_t());
        }
        if (g > 1)
            for (auto& z : v) mpz_divexact(z.get_mpz_t(), z.get_mpz_t(), g.get_mpz_t());
        return v;
    };

    std::vector<mpz_class> a = primitive(a0), b = primitive(b0);
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        // Pseudo-remainder of a by b (a scaled by a power of b's leading
        // coefficient, which the content strip below removes again).
        std::vector<mpz_class> r = a;
        const mpz_class& lb = b.back();
        while (r.size() >= b.size()) {
            if (r.back() == 0) {
                r.pop_back();
                continue;
            }
            mpz_class lr = r.back();
            for (auto& z : r) z *= lb;
            const std::size_t shift = r.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i)
                r[shift + i] -= lr * b[i];
            r.pop_back();
            while (!r.empty() && r.back() == 0) r.pop_back();
        }
        mpz_class g = 0;
        for (const auto& z : r) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
        if (g > 1)
            for (auto& z : r) mpz_divexact(z.get_mpz_t(), z.get_mpz_t(), g.get_mpz_t());
        a = std::move(b);
        b = std::move(r);
    }
    Poly g;
    g.c.reserve(a.size());
    for (const auto& z : a) g.c.emplace_back(z);
    return poly_make_monic(g);
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic.
inline std::tuple<Poly, Poly, Poly> poly_xgcd(Poly a, Poly b) {
    Poly s0(mpq_class(1)), s1, t0, t1(mpq_class(1));
    while (!b.is_zero()) {
        auto [q, r] = poly_divrem(a, b);
        a = std::move(b);
        b = std::move(r);
        Poly s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = std::move(s1); s1 = std::move(s2);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    if (!a.is_zero() && a.lead() != 1) {
        mpq_class inv = 1 / a.lead();
        a = a * inv; s0 = s0 * inv; t0 = t0 * inv;
    }
    return {a, s0, t0};
}

inline std::string mpq_to_string(const mpq_class& q) { return q.get_str(); }

}  // namespace tlkit

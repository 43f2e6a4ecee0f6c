#pragma once

#include "tlkit/poly.hpp"

#include <cctype>
#include <sstream>

namespace tlkit {

/// Laurent polynomial over the rationals: c[0]*x^off + c[1]*x^(off+1) + ...
/// Invariant: zero is the empty vector; otherwise c.front() != 0 and c.back() != 0.
struct Laurent {
    long off = 0;
    std::vector<mpq_class> c;

    Laurent() = default;
    explicit Laurent(mpq_class c0) {
        if (c0 != 0) c.push_back(std::move(c0));
    }
    static Laurent monomial(long e, mpq_class coeff) {
        Laurent r;
        if (coeff == 0) return r;
        r.off = e;
        r.c.push_back(std::move(coeff));
        return r;
    }

    bool is_zero() const { return c.empty(); }
    long lo() const { return off; }
    long hi() const { return off + static_cast<long>(c.size()) - 1; }
    mpq_class at(long e) const {
        if (e < lo() || e > hi()) return mpq_class(0);
        return c[static_cast<std::size_t>(e - off)];
    }

    void normalize() {
        std::size_t lead0 = 0;
        while (lead0 < c.size() && c[lead0] == 0) ++lead0;
        if (lead0 == c.size()) {
            c.clear();
            off = 0;
            return;
        }
        std::size_t tail0 = c.size();
        while (tail0 > 0 && c[tail0 - 1] == 0) --tail0;
        if (lead0 > 0 || tail0 < c.size()) {
            c = std::vector<mpq_class>(c.begin() + static_cast<long>(lead0),
                                       c.begin() + static_cast<long>(tail0));
            off += static_cast<long>(lead0);
        }
    }

    friend bool operator==(const Laurent& a, const Laurent& b) {
        return a.off == b.off && a.c == b.c;
    }

    friend Laurent operator+(const Laurent& a, const Laurent& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        Laurent r;
        r.off = std::min(a.off, b.off);
        long top = std::max(a.hi(), b.hi());
        r.c.assign(static_cast<std::size_t>(top - r.off) + 1, mpq_class(0));
        for (long e = a.lo(); e <= a.hi(); ++e) r.c[static_cast<std::size_t>(e - r.off)] = a.at(e);
        for (long e = b.lo(); e <= b.hi(); ++e) r.c[static_cast<std::size_t>(e - r.off)] += b.at(e);
        r.normalize();
        return r;
    }
    friend Laurent operator-(const Laurent& a) {
        Laurent r = a;
        for (auto& q : r.c) q = -q;
        return r;
    }
    friend Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }
    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        Laurent r;
        if (a.is_zero() || b.is_zero()) return r;
        r.off = a.off + b.off;
        r.c.assign(a.c.size() + b.c.size() - 1, mpq_class(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) {
            if (a.c[i] == 0) continue;
            for (std::size_t j = 0; j < b.c.size(); ++j)
                if (b.c[j] != 0) r.c[i + j] += a.c[i] * b.c[j];
        }
        return r;
    }

    /// Polynomial part (drops the monomial shift x^off).
    Poly body() const {
        Poly p;
        p.c = c;
        return p;
    }
    static Laurent from_body(const Poly& p, long off) {
        Laurent r;
        r.off = off;
        r.c = p.c;
        r.normalize();
        return r;
    }
};

/// Exact division of Laurent polynomials; throws if b does not divide a.
inline Laurent laurent_divexact(const Laurent& a, const Laurent& b) {
    if (b.is_zero()) throw std::domain_error("laurent_divexact: zero divisor");
    if (a.is_zero()) return Laurent();
    return Laurent::from_body(poly_divexact(a.body(), b.body()), a.off - b.off);
}

/// Rational function in one variable v, as a normalized Laurent fraction.
/// Invariants: den is an ordinary polynomial (lo() == 0) with nonzero constant
/// term, monic; gcd(num.body, den.body) = 1.  Zero has num = 0, den = 1.
struct GenericScalar {
    Laurent num;
    Laurent den = Laurent(mpq_class(1));

    GenericScalar() = default;
    explicit GenericScalar(mpq_class q) : num(std::move(q)) {}
    explicit GenericScalar(Laurent n) : num(std::move(n)) {}
    GenericScalar(Laurent n, Laurent d) : num(std::move(n)), den(std::move(d)) { reduce(); }

    bool is_zero() const { return num.is_zero(); }
    bool is_den_one() const { return den.off == 0 && den.c.size() == 1 && den.c[0] == 1; }

    void reduce() {
        if (den.is_zero()) throw std::domain_error("GenericScalar: zero denominator");
        if (num.is_zero()) {
            den = Laurent(mpq_class(1));
            return;
        }
        // Push the denominator's monomial shift into num.
        num.off -= den.off;
        den.off = 0;
        if (den.c.size() > 1) {
            Poly g = poly_gcd(num.body(), den.body());
            if (g.degree() > 0) {
                long noff = num.off;
                num = Laurent::from_body(poly_divexact(num.body(), g), noff);
                den = Laurent::from_body(poly_divexact(den.body(), g), 0);
            }
        }
        if (den.c.back() != 1) {
            mpq_class inv = 1 / den.c.back();
            for (auto& q : num.c) q *= inv;
            for (auto& q : den.c) q *= inv;
        }
    }

    friend bool operator==(const GenericScalar& a, const GenericScalar& b) {
        return a.num == b.num && a.den == b.den;
    }

    friend GenericScalar operator+(const GenericScalar& a, const GenericScalar& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.is_den_one() && b.is_den_one()) return GenericScalar(a.num + b.num);
        GenericScalar r;
        r.num = a.num * b.den + b.num * a.den;
        r.den = a.den * b.den;
        r.reduce();
        return r;
    }
    friend GenericScalar operator-(const GenericScalar& a) {
        GenericScalar r = a;
        r.num = -r.num;
        return r;
    }
    friend GenericScalar operator-(const GenericScalar& a, const GenericScalar& b) { return a + (-b); }
    friend GenericScalar operator*(const GenericScalar& a, const GenericScalar& b) {
        GenericScalar r;
        if (a.is_zero() || b.is_zero()) return r;
        r.num = a.num * b.num;
        if (a.is_den_one() && b.is_den_one()) return r;
        r.den = a.den * b.den;
        r.reduce();
        return r;
    }

    GenericScalar one_like() const { return GenericScalar(mpq_class(1)); }

    GenericScalar inv() const {
        if (is_zero()) throw std::domain_error("GenericScalar: inverse of zero");
        GenericScalar r;
        r.num = den;
        r.den = num;
        r.reduce();
        return r;
    }
    friend GenericScalar operator/(const GenericScalar& a, const GenericScalar& b) { return a * b.inv(); }
};

/// Prints a Laurent polynomial; generator name is chosen by the caller.
/// halve_exponents renders even v-exponents as powers of q = v^2.
inline std::string laurent_to_string(const Laurent& a, const std::string& var, bool halve_exponents) {
    if (a.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (long e = a.lo(); e <= a.hi(); ++e) {
        mpq_class co = a.at(e);
        if (co == 0) continue;
        bool neg = co < 0;
        mpq_class mag = neg ? mpq_class(-co) : co;
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        long ee = halve_exponents ? e / 2 : e;
        if (ee == 0) {
            os << mag.get_str();
        } else {
            if (mag != 1) os << mag.get_str() << "*";
            os << var;
            if (ee != 1) os << "^" << ee;
        }
    }
    return os.str();
}

/// Serialization format: even-exponent elements print in q, otherwise in v.
inline std::string generic_to_string(const GenericScalar& s) {
    auto all_even = [](const Laurent& l) {
        if (l.is_zero()) return true;
        if (l.off % 2 != 0) return false;
        for (std::size_t i = 1; i < l.c.size(); i += 2)
            if (l.c[i] != 0) return false;
        return true;
    };
    bool q_form = all_even(s.num) && all_even(s.den);
    std::string var = q_form ? "q" : "v";
    std::string n = laurent_to_string(s.num, var, q_form);
    if (s.is_den_one()) return n;
    return "(" + n + ")/(" + laurent_to_string(s.den, var, q_form) + ")";
}

namespace detail {

inline void skip_ws(const std::string& s, std::size_t& i) {
    while (i < s.size() && s[i] == ' ') ++i;
}

inline Laurent parse_laurent(const std::string& s, std::size_t& i, char stop) {
    Laurent acc;
    skip_ws(s, i);
    int sign = 1;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
        sign = s[i] == '-' ? -1 : 1;
        ++i;
    }
    while (true) {
        skip_ws(s, i);
        std::string numtok;
        while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) numtok += s[i++];
        mpq_class coeff = numtok.empty() ? mpq_class(1) : mpq_class(numtok);
        coeff.canonicalize();
        skip_ws(s, i);
        if (i < s.size() && s[i] == '*') {
            ++i;
            skip_ws(s, i);
        }
        long e = 0;
        bool q_gen = false;
        if (i < s.size() && (s[i] == 'q' || s[i] == 'v')) {
            q_gen = s[i] == 'q';
            ++i;
            e = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::string etok;
                if (i < s.size() && s[i] == '-') etok += s[i++];
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) etok += s[i++];
                e = std::stol(etok);
            }
        } else if (numtok.empty()) {
            throw std::domain_error("parse_laurent: expected term at '" + s.substr(i) + "'");
        }
        acc = acc + Laurent::monomial(q_gen ? 2 * e : e, sign * coeff);
        skip_ws(s, i);
        if (i >= s.size() || s[i] == stop) return acc;
        if (s[i] == '+') sign = 1;
        else if (s[i] == '-') sign = -1;
        else throw std::domain_error("parse_laurent: unexpected '" + s.substr(i) + "'");
        ++i;
    }
}

}  // namespace detail

/// Inverse of generic_to_string (accepts both the q and v renderings).
inline GenericScalar parse_generic(const std::string& s) {
    std::size_t i = 0;
    detail::skip_ws(s, i);
    if (i < s.size() && s[i] == '(') {
        ++i;
        Laurent num = detail::parse_laurent(s, i, ')');
        if (i >= s.size() || s[i] != ')') throw std::domain_error("parse_generic: missing ')'");
        ++i;
        detail::skip_ws(s, i);
        if (i + 1 >= s.size() || s[i] != '/' || s[i + 1] != '(')
            throw std::domain_error("parse_generic: missing '/('");
        i += 2;
        Laurent den = detail::parse_laurent(s, i, ')');
        if (i >= s.size() || s[i] != ')') throw std::domain_error("parse_generic: missing final ')'");
        return GenericScalar(num, den);
    }
    Laurent num = detail::parse_laurent(s, i, '\0');
    return GenericScalar(num);
}

}  // namespace tlkit

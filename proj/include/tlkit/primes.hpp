#pragma once

#include "tlkit/errors.hpp"

#include <json.hpp>

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace tlkit {

// ---------------------------------------------------------------------------
// Exact 64-bit primality and factoring primitives.
// ---------------------------------------------------------------------------

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

/// Deterministic Miller-Rabin: the 12-base set below decides primality for
/// every n < 2^64.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                            29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                            29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

namespace detail {

/// Brent's rho on a 64-bit odd composite; always succeeds for such inputs.
inline std::uint64_t rho_u64(std::uint64_t n) {
    if (n % 2 == 0) return 2;
    for (std::uint64_t c = 1;; ++c) {
        std::uint64_t x = 2, y = 2, q = 1, g = 1, ys = 0, r = 1;
        const std::uint64_t batch = 128;
        while (g == 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = (mulmod_u64(y, y, n) + c) % n;
            for (std::uint64_t k = 0; k < r && g == 1; k += batch) {
                ys = y;
                std::uint64_t lim = std::min(batch, r - k);
                for (std::uint64_t i = 0; i < lim; ++i) {
                    y = (mulmod_u64(y, y, n) + c) % n;
                    q = mulmod_u64(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
            }
            r *= 2;
        }
        if (g == n) {
            // Backtrack one batch step at a time.
            g = 1;
            while (g == 1) {
                ys = (mulmod_u64(ys, ys, n) + c) % n;
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            }
        }
        if (g != n) return g;
    }
}

}  // namespace detail

/// Complete exact factorization of a 64-bit integer.
inline std::map<std::uint64_t, int> factor_u64(std::uint64_t n) {
    std::map<std::uint64_t, int> out;
    if (n == 0) throw DomainError("factor_u64: zero");
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        while (n % p == 0) {
            ++out[p];
            n /= p;
        }
    }
    std::vector<std::uint64_t> stack;
    if (n > 1) stack.push_back(n);
    while (!stack.empty()) {
        std::uint64_t m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (is_prime_u64(m)) {
            ++out[m];
            continue;
        }
        std::uint64_t f = detail::rho_u64(m);
        stack.push_back(f);
        stack.push_back(m / f);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Big-integer factoring: trial division, then Brent's rho.  Moduli of the
// shape 2^s + 1 (s a multiple of 64) get a fixed-limb engine whose reduction
// folds the product as lo - hi, avoiding division entirely.
// ---------------------------------------------------------------------------

namespace detail {

/// Residues mod m = 2^{64L}+1, kept canonical: value = w + top*2^{64L} with
/// w < 2^{64L}, and top set only for the value 2^{64L} == -1 (then w = 0).
template <int L>
struct FermatResidue {
    std::array<std::uint64_t, static_cast<std::size_t>(L)> w{};
    bool top = false;
};

template <int L>
using Limbs = std::array<std::uint64_t, static_cast<std::size_t>(L)>;

/// r = (a - b) mod 2^{64L}, returning the borrow.
template <int L>
inline std::uint64_t limbs_sub(Limbs<L>& r, const Limbs<L>& a, const Limbs<L>& b) {
    std::uint64_t borrow = 0;
    for (int i = 0; i < L; ++i) {
        std::uint64_t ai = a[static_cast<std::size_t>(i)], bi = b[static_cast<std::size_t>(i)];
        std::uint64_t d1 = ai - bi;
        std::uint64_t b1 = d1 > ai ? 1u : 0u;
        std::uint64_t d2 = d1 - borrow;
        std::uint64_t b2 = d2 > d1 ? 1u : 0u;
        r[static_cast<std::size_t>(i)] = d2;
        borrow = b1 | b2;
    }
    return borrow;
}

/// a += v (small), returning the carry out of the top limb.
template <int L>
inline std::uint64_t limbs_add_small(Limbs<L>& a, std::uint64_t v) {
    for (int i = 0; i < L && v; ++i) {
        std::uint64_t s = a[static_cast<std::size_t>(i)] + v;
        v = s < v ? 1 : 0;
        a[static_cast<std::size_t>(i)] = s;
    }
    return v;
}

template <int L>
inline bool limbs_zero(const Limbs<L>& a) {
    for (int i = 0; i < L; ++i)
        if (a[static_cast<std::size_t>(i)]) return false;
    return true;
}

/// Canonical v + delta for small delta >= 0 (modular wrap via 2^{64L} == -1).
template <int L>
inline void fermat_add_small(FermatResidue<L>& v, std::uint64_t delta) {
    if (delta == 0) return;
    if (v.top) {  // v == -1: result is delta - 1, which fits the limbs
        v.top = false;
        v.w = Limbs<L>{};
        v.w[0] = delta - 1;
        return;
    }
    std::uint64_t carry = limbs_add_small<L>(v.w, delta);
    if (carry) {  // wrapped past 2^{64L}: value w' + 2^{64L} == w' - 1
        if (limbs_zero<L>(v.w))
            v.top = true;  // exactly 2^{64L}
        else
            limbs_sub<L>(v.w, v.w, [] { Limbs<L> one{}; one[0] = 1; return one; }());
    }
}

/// Canonical a - b (both canonical); uses 2^{64L} == -1 for all adjustments.
template <int L>
inline FermatResidue<L> fermat_sub(const FermatResidue<L>& a, const FermatResidue<L>& b) {
    FermatResidue<L> r;
    std::uint64_t borrow = limbs_sub<L>(r.w, a.w, b.w);
    // true value == r.w - borrow*2^{64L} + (a.top - b.top)*2^{64L}
    //            == r.w + borrow - a.top + b.top  (mod m)
    std::int64_t adj = static_cast<std::int64_t>(borrow) - (a.top ? 1 : 0) + (b.top ? 1 : 0);
    while (adj > 0) {
        fermat_add_small<L>(r, 1);
        --adj;
    }
    while (adj < 0) {  // subtract 1
        if (r.top) {
            r.top = false;
            Limbs<L> mx{};
            for (int i = 0; i < L; ++i) mx[static_cast<std::size_t>(i)] = ~0ull;
            r.w = mx;  // 2^{64L} - 1
        } else if (limbs_zero<L>(r.w)) {
            r.top = true;  // 0 - 1 == -1 == 2^{64L}
        } else {
            Limbs<L> one{};
            one[0] = 1;
            limbs_sub<L>(r.w, r.w, one);
        }
        ++adj;
    }
    return r;
}

/// Canonical a * b mod 2^{64L}+1.  The low product folds as P_lo - P_hi; the
/// top bits contribute -a.w, -b.w, +1 by the congruence 2^{64L} == -1.
template <int L>
inline FermatResidue<L> fermat_mul(const FermatResidue<L>& a, const FermatResidue<L>& b) {
    std::array<std::uint64_t, static_cast<std::size_t>(2 * L)> p{};
    for (int i = 0; i < L; ++i) {
        std::uint64_t ai = a.w[static_cast<std::size_t>(i)];
        if (!ai) continue;
        std::uint64_t carry = 0;
        for (int j = 0; j < L; ++j) {
            unsigned __int128 cur =
                static_cast<unsigned __int128>(ai) * b.w[static_cast<std::size_t>(j)] +
                p[static_cast<std::size_t>(i + j)] + carry;
            p[static_cast<std::size_t>(i + j)] = static_cast<std::uint64_t>(cur);
            carry = static_cast<std::uint64_t>(cur >> 64);
        }
        int pos = i + L;
        while (carry) {
            std::uint64_t s = p[static_cast<std::size_t>(pos)] + carry;
            carry = s < carry ? 1 : 0;
            p[static_cast<std::size_t>(pos)] = s;
            ++pos;
        }
    }
    Limbs<L> lo{}, hi{};
    for (int i = 0; i < L; ++i) {
        lo[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
        hi[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i + L)];
    }
    FermatResidue<L> r;
    std::uint64_t borrow = limbs_sub<L>(r.w, lo, hi);
    std::int64_t extra = static_cast<std::int64_t>(borrow);
    auto sub_w = [&](const Limbs<L>& v) {
        Limbs<L> tmp;
        std::uint64_t bw = limbs_sub<L>(tmp, r.w, v);
        r.w = tmp;
        extra += static_cast<std::int64_t>(bw);
    };
    if (a.top) sub_w(b.w);
    if (b.top) sub_w(a.w);
    if (a.top && b.top) extra += 1;
    while (extra > 0) {
        fermat_add_small<L>(r, 1);
        --extra;
    }
    return r;
}

template <int L>
inline mpz_class fermat_to_mpz(const FermatResidue<L>& a) {
    mpz_class v = 0;
    for (int i = L - 1; i >= 0; --i) {
        v <<= 64;
        v += mpz_class(static_cast<unsigned long>(a.w[static_cast<std::size_t>(i)]));
    }
    if (a.top) v += mpz_class(1) << (64 * L);
    return v;
}

template <int L>
inline FermatResidue<L> fermat_from_mpz(mpz_class v, const mpz_class& m) {
    v %= m;
    if (v < 0) v += m;
    FermatResidue<L> r;
    if (v == m - 1) {
        r.top = true;
        return r;
    }
    for (int i = 0; i < L; ++i) {
        mpz_class limb = v & mpz_class(0xffffffffffffffffUL);
        r.w[static_cast<std::size_t>(i)] = limb.get_ui();
        v >>= 64;
    }
    return r;
}

/// Brent rho specialized to m = 2^{64L}+1; returns 0 when the budget runs out.
template <int L>
inline mpz_class rho_fermat(const mpz_class& n, std::uint64_t max_iters) {
    for (std::uint64_t c = 1; c <= 8; ++c) {
        FermatResidue<L> x{}, y{}, q{}, ys{};
        x.w[0] = y.w[0] = 2;
        q.w[0] = 1;
        mpz_class g = 1;
        std::uint64_t r = 1, iters = 0;
        const std::uint64_t batch = 512;
        auto step = [&](FermatResidue<L>& v) {
            v = fermat_mul<L>(v, v);
            fermat_add_small<L>(v, c);
        };
        while (g == 1 && iters < max_iters) {
            x = y;
            for (std::uint64_t i = 0; i < r && iters < max_iters; ++i, ++iters) step(y);
            for (std::uint64_t k = 0; k < r && g == 1 && iters < max_iters; k += batch) {
                ys = y;
                std::uint64_t lim = std::min(batch, r - k);
                for (std::uint64_t i = 0; i < lim; ++i, ++iters) {
                    step(y);
                    q = fermat_mul<L>(q, fermat_sub<L>(x, y));
                }
                mpz_class qz = fermat_to_mpz<L>(q);
                mpz_gcd(g.get_mpz_t(), qz.get_mpz_t(), n.get_mpz_t());
            }
            r *= 2;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                step(ys);
                mpz_class dz = fermat_to_mpz<L>(fermat_sub<L>(x, ys));
                mpz_gcd(g.get_mpz_t(), dz.get_mpz_t(), n.get_mpz_t());
            }
        }
        if (g > 1 && g < n) return g;
        if (iters >= max_iters) return 0;
    }
    return 0;
}

/// Generic Brent rho over mpz with an iteration budget; 0 when exhausted.
inline mpz_class rho_mpz(const mpz_class& n, std::uint64_t max_iters) {
    for (unsigned long c = 1; c <= 4; ++c) {
        mpz_class x(2), y(2), q(1), g(1), ys, t;
        std::uint64_t r = 1, iters = 0;
        const std::uint64_t batch = 256;
        while (g == 1 && iters < max_iters) {
            x = y;
            for (std::uint64_t i = 0; i < r && iters < max_iters; ++i, ++iters)
                y = (y * y + c) % n;
            for (std::uint64_t k = 0; k < r && g == 1 && iters < max_iters; k += batch) {
                ys = y;
                std::uint64_t lim = std::min(batch, r - k);
                for (std::uint64_t i = 0; i < lim; ++i, ++iters) {
                    y = (y * y + c) % n;
                    t = x - y;
                    q = (q * t) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
            r *= 2;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                t = x - ys;
                mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
            }
        }
        if (g > 1 && g < n) return g;
        if (iters >= max_iters) return 0;
    }
    return 0;
}

inline std::optional<int> fermat_limbs(const mpz_class& n) {
    // n == 2^{64L}+1 for L in {2, 4, 8}?
    for (int L : {2, 4, 8}) {
        mpz_class m = (mpz_class(1) << (64 * L)) + 1;
        if (n == m) return L;
    }
    return std::nullopt;
}

}  // namespace detail

/// Exact factorization data for a big integer: certified primes (deterministic
/// 64-bit test) with multiplicity, plus any unfactored or uncertified residues.
struct MpzFactorization {
    std::map<mpz_class, int> primes;
    std::vector<mpz_class> residues;  // composite-or-unproven leftovers, never assumed prime
};

inline MpzFactorization factor_mpz(const mpz_class& n0, std::uint64_t rho_budget = (1ull << 30)) {
    if (n0 == 0) throw DomainError("factor_mpz: zero");
    mpz_class n = abs(n0);
    MpzFactorization out;
    if (n == 1) return out;
    for (std::uint64_t p = 2; p < 1000000; p = (p == 2 ? 3 : p + 2)) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
            do {
                ++out.primes[mpz_class(static_cast<unsigned long>(p))];
                mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(p));
            } while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p)));
        }
        if (mpz_cmp_ui(n.get_mpz_t(), 1) == 0) return out;
        mpz_class psq = mpz_class(static_cast<unsigned long>(p)) * static_cast<unsigned long>(p);
        if (psq > n) {  // remaining cofactor is prime
            ++out.primes[n];
            return out;
        }
    }
    std::vector<mpz_class> stack{n};
    while (!stack.empty()) {
        mpz_class m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (m.fits_ulong_p()) {
            for (const auto& [p, e] : factor_u64(m.get_ui()))
                out.primes[mpz_class(static_cast<unsigned long>(p))] += e;
            continue;
        }
        // Beyond the deterministic range: a probable prime is a residue, not a prime.
        if (mpz_probab_prime_p(m.get_mpz_t(), 40) > 0) {
            out.residues.push_back(m);
            continue;
        }
        mpz_class f = 0;
        if (auto L = detail::fermat_limbs(m)) {
            if (*L == 2) f = detail::rho_fermat<2>(m, rho_budget);
            else if (*L == 4) f = detail::rho_fermat<4>(m, rho_budget);
            else f = detail::rho_fermat<8>(m, rho_budget);
        } else {
            f = detail::rho_mpz(m, std::min<std::uint64_t>(rho_budget, 1ull << 23));
        }
        if (f == 0) {
            out.residues.push_back(m);  // budget exhausted: honest leftover
            continue;
        }
        stack.push_back(f);
        stack.push_back(m / f);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Finite-field helpers: F_p and F_{p^2} = F_p[t]/(f), f monic quadratic.
// Elements of F_{p^2} are encoded base p as a + b*p for a + b*t.
// ---------------------------------------------------------------------------

namespace detail {

struct Fp2Modulus {
    mpz_class p, c0, c1;  // t^2 + c1 t + c0 == 0
};

struct Fp2 {
    mpz_class a, b;  // a + b t
};

inline Fp2 fp2_mul(const Fp2& x, const Fp2& y, const Fp2Modulus& M) {
    // (a + bt)(c + dt) = ac + (ad + bc) t + bd (-c1 t - c0)
    mpz_class ac = x.a * y.a, bd = x.b * y.b, ad_bc = x.a * y.b + x.b * y.a;
    Fp2 r;
    r.a = (ac - bd * M.c0) % M.p;
    r.b = (ad_bc - bd * M.c1) % M.p;
    if (r.a < 0) r.a += M.p;
    if (r.b < 0) r.b += M.p;
    return r;
}

inline Fp2 fp2_pow(Fp2 x, mpz_class e, const Fp2Modulus& M) {
    Fp2 r{mpz_class(1), mpz_class(0)};
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = fp2_mul(r, x, M);
        x = fp2_mul(x, x, M);
        e >>= 1;
    }
    return r;
}

inline bool fp2_is_one(const Fp2& x) { return x.a == 1 && x.b == 0; }

/// Tonelli-Shanks square root mod an odd prime; nullopt for non-residues.
inline std::optional<mpz_class> sqrt_mod(const mpz_class& a0, const mpz_class& p) {
    mpz_class a = a0 % p;
    if (a < 0) a += p;
    if (a == 0) return mpz_class(0);
    if (mpz_legendre(a.get_mpz_t(), p.get_mpz_t()) != 1) return std::nullopt;
    if (p % 4 == 3) {
        mpz_class r;
        mpz_class e = (p + 1) / 4;
        mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        return r;
    }
    mpz_class q = p - 1;
    unsigned long s = 0;
    while (mpz_even_p(q.get_mpz_t())) {
        q >>= 1;
        ++s;
    }
    mpz_class z = 2;
    while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
    mpz_class m(s), c, t, r;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_class e = (q + 1) / 2;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    while (t != 1) {
        mpz_class i = 0, tt = t;
        while (tt != 1) {
            tt = (tt * tt) % p;
            ++i;
        }
        mpz_class b = c;
        for (mpz_class j = 0; j < m - i - 1; ++j) b = (b * b) % p;
        m = i;
        c = (b * b) % p;
        t = (t * c) % p;
        r = (r * b) % p;
    }
    return r;
}

}  // namespace detail

/// Exact multiplicative order of x in F_{p^d}, d <= 2.  For d = 2, x is
/// encoded base p (x = a + b*p represents a + b t) and min_poly supplies the
/// monic modulus {c0, c1, 1} of t over F_p.  The group order p^d - 1 must fit
/// 64 bits so its factorization stays in the deterministic range.
inline mpz_class mult_order(const mpz_class& x, const mpz_class& p, int d = 1,
                            const std::vector<mpz_class>& min_poly = {}) {
    if (p < 2) throw DomainError("mult_order: modulus must be a prime >= 2");
    if (d != 1 && d != 2) throw DomainError("mult_order: only degrees 1 and 2 supported");
    mpz_class group = d == 1 ? mpz_class(p - 1) : mpz_class(p * p - 1);
    if (!group.fits_ulong_p())
        throw GuardError("mult_order: group order exceeds the 64-bit factoring budget");
    std::map<std::uint64_t, int> fac = factor_u64(group.get_ui());

    auto pow_is_one = [&](const mpz_class& e) {
        if (d == 1) {
            mpz_class r;
            mpz_class xm = x % p;
            if (xm < 0) xm += p;
            if (xm == 0) throw DomainError("mult_order: x = 0");
            mpz_powm(r.get_mpz_t(), xm.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
            return r == 1;
        }
        if (min_poly.size() != 3 || min_poly[2] % p != 1)
            throw DomainError("mult_order: degree 2 needs a monic quadratic min_poly");
        detail::Fp2Modulus M{p, min_poly[0] % p, min_poly[1] % p};
        if (M.c0 < 0) M.c0 += p;
        if (M.c1 < 0) M.c1 += p;
        detail::Fp2 v{x % p, (x / p) % p};
        if (v.a < 0) v.a += p;
        if (v.b < 0) v.b += p;
        if (v.a == 0 && v.b == 0) throw DomainError("mult_order: x = 0");
        return detail::fp2_is_one(detail::fp2_pow(v, e, M));
    };

    if (!pow_is_one(group)) throw DomainError("mult_order: x is not a unit of the field");
    mpz_class ord = group;
    for (const auto& [ell, e] : fac) {
        for (int i = 0; i < e; ++i) {
            mpz_class cand = ord / static_cast<unsigned long>(ell);
            if (ord % static_cast<unsigned long>(ell) == 0 && pow_is_one(cand))
                ord = cand;
            else
                break;
        }
    }
    return ord;
}

// ---------------------------------------------------------------------------
// Integer resultants via the subresultant polynomial remainder sequence.
// ---------------------------------------------------------------------------

namespace detail {

using IPoly = std::vector<mpz_class>;  // coefficients, low to high, normalized

inline void ipoly_trim(IPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int ipoly_deg(const IPoly& f) { return static_cast<int>(f.size()) - 1; }

inline mpz_class ipoly_content(const IPoly& f) {
    mpz_class g = 0;
    for (const auto& c : f) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

}  // namespace detail

/// Resultant of two integer polynomials (coefficients low to high), computed
/// with the subresultant PRS — fully exact, no interpolation.
inline mpz_class poly_resultant(std::vector<mpz_class> A, std::vector<mpz_class> B) {
    using namespace detail;
    ipoly_trim(A);
    ipoly_trim(B);
    if (A.empty() || B.empty()) return 0;
    if (ipoly_deg(A) == 0) {
        mpz_class acc = 1;
        for (int i = 0; i < ipoly_deg(B); ++i) acc *= A[0];
        return acc;
    }
    if (ipoly_deg(B) == 0) {
        mpz_class base = B[0];
        mpz_class acc = 1;
        for (int i = 0; i < ipoly_deg(A); ++i) acc *= base;
        return acc;
    }
    int sign = 1;
    if (ipoly_deg(A) < ipoly_deg(B)) {
        if ((ipoly_deg(A) % 2) && (ipoly_deg(B) % 2)) sign = -sign;
        std::swap(A, B);
    }
    mpz_class ca = ipoly_content(A), cb = ipoly_content(B);
    for (auto& c : A) c /= ca;
    for (auto& c : B) c /= cb;
    mpz_class t = 1;
    for (int i = 0; i < ipoly_deg(B); ++i) t *= ca;
    for (int i = 0; i < ipoly_deg(A); ++i) t *= cb;

    mpz_class g = 1, h = 1;
    while (true) {
        int da = ipoly_deg(A), db = ipoly_deg(B);
        int delta = da - db;
        if ((da % 2) && (db % 2)) sign = -sign;
        // True pseudo-remainder lc(B)^{delta+1} A mod B.
        IPoly R = A;
        {
            const mpz_class& lb = B.back();
            int steps = 0;
            while (ipoly_deg(R) >= db && !R.empty()) {
                int dr = ipoly_deg(R);
                mpz_class lr = R.back();
                for (auto& c : R) c *= lb;
                for (int i = 0; i <= db; ++i)
                    R[static_cast<std::size_t>(dr - db + i)] -= lr * B[static_cast<std::size_t>(i)];
                ipoly_trim(R);
                ++steps;
            }
            for (int i = steps; i < delta + 1; ++i)
                for (auto& c : R) c *= lb;
        }
        A = B;
        if (R.empty()) return 0;  // common factor: resultant vanishes
        // B = R / (g h^delta), exact in Z.
        mpz_class divisor = g;
        for (int i = 0; i < delta; ++i) divisor *= h;
        for (auto& c : R) {
            mpz_class qq;
            mpz_divexact(qq.get_mpz_t(), c.get_mpz_t(), divisor.get_mpz_t());
            c = qq;
        }
        B = R;
        g = A.back();
        if (delta > 0) {
            // h = g^delta / h^{delta-1}, exact.
            mpz_class num = 1;
            for (int i = 0; i < delta; ++i) num *= g;
            mpz_class den = 1;
            for (int i = 0; i < delta - 1; ++i) den *= h;
            mpz_class qq;
            mpz_divexact(qq.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
            h = qq;
        }
        if (ipoly_deg(B) == 0) {
            int da2 = ipoly_deg(A);
            // res = lc(B)^{da2} / h^{da2-1}, adjusted by sign and contents.
            mpz_class num = 1;
            for (int i = 0; i < da2; ++i) num *= B[0];
            mpz_class den = 1;
            for (int i = 0; i < da2 - 1; ++i) den *= h;
            mpz_class qq;
            mpz_divexact(qq.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
            return sign * t * qq;
        }
    }
}

// ---------------------------------------------------------------------------
// Prime towers.
// ---------------------------------------------------------------------------

/// One verified level of a tower: a prime p together with a root of the input
/// (q itself, or a root of f) living in F_{p^d} and having exact multiplicative
/// order 2^{k+1}.  For d = 2 the root residue is encoded base p (a + b*p).
struct TowerEntry {
    int k = 0;
    mpz_class p;
    int d = 1;
    mpz_class root;
    mpz_class order;
};

struct Tower {
    std::string label;
    std::vector<mpz_class> poly;  // minimal polynomial, low to high (empty for integer towers)
    std::vector<TowerEntry> entries;
    std::vector<std::pair<int, mpz_class>> sources;  // k -> A_k or R_k (certificate data)
    std::vector<std::string> notes;                  // honest per-k failures
};

/// Tower over an integer q: for each k, the smallest certified odd prime
/// divisor of A_k = q^{2^k}+1 not used before; q mod p then has exact order
/// 2^{k+1} (verified, never assumed).
inline Tower integer_tower(const mpz_class& q, int k_max) {
    if (q == -1 || q == 0 || q == 1)
        throw DomainError("integer_tower: q in {-1, 0, 1} is a degenerate root of unity");
    if (k_max < 1 || k_max > 12) throw GuardError("integer_tower: k_max must be 1..12");
    Tower tw;
    tw.label = "q = " + q.get_str();

    std::vector<std::future<std::pair<mpz_class, MpzFactorization>>> jobs;
    for (int k = 1; k <= k_max; ++k) {
        jobs.push_back(std::async(std::launch::async, [&q, k]() {
            mpz_class A;
            mpz_class e = mpz_class(1) << k;  // 2^k
            mpz_pow_ui(A.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(e.get_ui()));
            A += 1;
            return std::make_pair(A, factor_mpz(A));
        }));
    }

    std::set<mpz_class> used;
    for (int k = 1; k <= k_max; ++k) {
        auto [A, fac] = jobs[static_cast<std::size_t>(k - 1)].get();
        tw.sources.emplace_back(k, A);
        mpz_class target_order = mpz_class(1) << (k + 1);
        bool placed = false;
        for (const auto& [p, e] : fac.primes) {
            if (p == 2 || used.count(p)) continue;
            // Defining congruence of the construction: q^{2^k} == -1 mod p.
            mpz_class pw, ex = mpz_class(1) << k;
            mpz_class qm = q % p;
            if (qm < 0) qm += p;
            mpz_powm_ui(pw.get_mpz_t(), qm.get_mpz_t(), static_cast<unsigned long>(ex.get_ui()),
                        p.get_mpz_t());
            if (pw != p - 1) continue;
            mpz_class ord;
            try {
                ord = mult_order(qm, p);
            } catch (const GuardError&) {
                continue;  // order verification out of budget: skip, stay honest
            }
            if (ord != target_order) continue;
            tw.entries.push_back({k, p, 1, qm, ord});
            used.insert(p);
            placed = true;
            break;
        }
        if (!placed) {
            std::string why = fac.residues.empty()
                                  ? "no qualifying certified prime divisor"
                                  : "not found up to factoring limits (unfactored residue)";
            tw.notes.push_back("k = " + std::to_string(k) + ": " + why);
        }
    }
    return tw;
}

namespace detail {

inline mpz_class ipoly_eval_mod(const IPoly& f, const mpz_class& x, const mpz_class& p) {
    mpz_class acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = (acc * x + f[i]) % p;
    if (acc < 0) acc += p;
    return acc;
}

}  // namespace detail

/// Tower over an algebraic q with minimal polynomial f (integer coefficients,
/// low to high): levels come from prime divisors of R_k = |Res(f, x^{2^k}+1)|;
/// at each usable prime a root of f in F_p or F_{p^2} with exact order 2^{k+1}
/// is exhibited and verified.
inline Tower algebraic_tower(const std::vector<mpz_class>& f, int k_max) {
    using namespace detail;
    IPoly F = f;
    ipoly_trim(F);
    if (ipoly_deg(F) < 1) throw DomainError("algebraic_tower: need a nonconstant polynomial");
    if (F[0] == 0) throw DomainError("algebraic_tower: f(0) = 0 means q = 0");
    if (k_max < 1 || k_max > 12) throw GuardError("algebraic_tower: k_max must be 1..12");
    const int deg = ipoly_deg(F);

    // Basic irreducibility screening: rational roots for deg >= 2, squarefree.
    if (deg >= 2) {
        mpz_class a0 = abs(F[0]), an = abs(F.back());
        if (a0 < 1000000 && an < 1000000) {  // screen only when divisor search is cheap
            std::vector<mpz_class> num_divs, den_divs;
            for (mpz_class v = 1; v * v <= a0; ++v)
                if (a0 % v == 0) {
                    num_divs.push_back(v);
                    num_divs.push_back(a0 / v);
                }
            for (mpz_class v = 1; v * v <= an; ++v)
                if (an % v == 0) {
                    den_divs.push_back(v);
                    den_divs.push_back(an / v);
                }
            for (const auto& nu : num_divs)
                for (const auto& de : den_divs)
                    for (int s : {1, -1}) {
                        // candidate root s*nu/de: evaluate de^deg * f(s*nu/de)
                        mpz_class acc = 0, powv = 1;
                        for (int i = deg; i >= 0; --i) {
                            acc = acc * (s * nu) + F[static_cast<std::size_t>(i)] * powv;
                            if (i > 0) powv *= de;
                        }
                        if (acc == 0)
                            throw DomainError(
                                "algebraic_tower: f has a rational root (reducible)");
                    }
        }
        // Squarefree check via gcd(f, f') resultant-style: disc != 0.
        IPoly Fd;
        for (int i = 1; i <= deg; ++i) Fd.push_back(F[static_cast<std::size_t>(i)] * i);
        if (poly_resultant(F, Fd) == 0)
            throw DomainError("algebraic_tower: f is not squarefree (reducible)");
        if (deg == 2) {
            mpz_class disc = F[1] * F[1] - 4 * F[2] * F[0];
            mpz_class ad = abs(disc);
            mpz_class rt;
            mpz_sqrt(rt.get_mpz_t(), ad.get_mpz_t());
            if (disc >= 0 && rt * rt == disc)
                throw DomainError("algebraic_tower: f splits over the rationals");
        }
    }

    Tower tw;
    {
        std::ostringstream os;
        for (int i = deg; i >= 0; --i) {
            const mpz_class& c = F[static_cast<std::size_t>(i)];
            if (c == 0) continue;
            if (os.tellp() > 0) os << (c > 0 ? " + " : " - ");
            else if (c < 0) os << "-";
            mpz_class a = abs(c);
            if (a != 1 || i == 0) os << a.get_str();
            if (i >= 1) os << "x";
            if (i >= 2) os << "^" << i;
        }
        tw.label = "f = " + os.str();
    }
    tw.poly = F;

    std::set<mpz_class> used;
    for (int k = 1; k <= k_max; ++k) {
        // R_k = |Res(f, x^{2^k}+1)|; zero exactly when f shares a cyclotomic root.
        IPoly cyc(static_cast<std::size_t>((1 << k)) + 1, mpz_class(0));
        cyc[0] = 1;
        cyc.back() = 1;
        mpz_class R = poly_resultant(F, cyc);
        if (R == 0)
            throw DomainError(
                "algebraic_tower: resultant vanishes — q is a root of unity, rejected");
        R = abs(R);
        tw.sources.emplace_back(k, R);
        MpzFactorization fac = factor_mpz(R);
        mpz_class target_order = mpz_class(1) << (k + 1);
        bool placed = false;
        for (const auto& [p, e] : fac.primes) {
            if (p == 2 || used.count(p)) continue;
            if (F.back() % p == 0) continue;  // degree would drop mod p
            if (!(R % p == 0)) continue;      // re-check the divisibility invariant
            // Roots of f in F_p first (d = 1).
            std::vector<mpz_class> roots;
            if (deg == 1) {
                // F[1] x + F[0] == 0 -> x = -F[0] * F[1]^{-1}
                mpz_class inv;
                mpz_class lc = F[1] % p;
                if (lc < 0) lc += p;
                if (mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), p.get_mpz_t())) {
                    mpz_class r = (-F[0] % p) * inv % p;
                    if (r < 0) r += p;
                    roots.push_back(r);
                }
            } else if (deg == 2) {
                mpz_class lc = F[2] % p, b = F[1] % p, c0 = F[0] % p;
                mpz_class inv2a;
                mpz_class two_a = (2 * lc) % p;
                if (two_a < 0) two_a += p;
                if (p != 2 && mpz_invert(inv2a.get_mpz_t(), two_a.get_mpz_t(), p.get_mpz_t())) {
                    mpz_class disc = (b * b - 4 * lc * c0) % p;
                    if (auto s = sqrt_mod(disc, p)) {
                        for (int sg : {1, -1}) {
                            mpz_class r = ((-b + sg * *s) % p) * inv2a % p;
                            if (r < 0) r += p;
                            if (std::find(roots.begin(), roots.end(), r) == roots.end())
                                roots.push_back(r);
                        }
                    }
                }
            } else if (p < 100000) {
                for (mpz_class r = 0; r < p; ++r)
                    if (ipoly_eval_mod(F, r, p) == 0) roots.push_back(r);
            }
            std::sort(roots.begin(), roots.end());
            std::optional<TowerEntry> entry;
            for (const auto& r : roots) {
                if (r == 0) continue;
                mpz_class ord;
                try {
                    ord = mult_order(r, p);
                } catch (const GuardError&) {
                    continue;
                }
                if (ord == target_order && ipoly_eval_mod(F, r, p) == 0) {
                    entry = TowerEntry{k, p, 1, r, ord};
                    break;
                }
            }
            if (!entry && deg == 2 && roots.empty()) {
                // f irreducible mod p: the class of t in F_p[t]/(f~) is a root,
                // where f~ is f made monic.  Encoded residue: 0 + 1*p.
                mpz_class lc = F[2] % p;
                if (lc < 0) lc += p;
                mpz_class inv;
                if (mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), p.get_mpz_t())) {
                    mpz_class c1 = F[1] % p * inv % p, c0 = F[0] % p * inv % p;
                    if (c1 < 0) c1 += p;
                    if (c0 < 0) c0 += p;
                    std::vector<mpz_class> mp{c0, c1, mpz_class(1)};
                    try {
                        mpz_class ord = mult_order(p, p, 2, mp);
                        if (ord == target_order) entry = TowerEntry{k, p, 2, p, ord};
                    } catch (const GuardError&) {
                    }
                }
            }
            if (entry) {
                tw.entries.push_back(*entry);
                used.insert(p);
                placed = true;
                break;
            }
        }
        if (!placed) {
            std::string why = fac.residues.empty()
                                  ? "no certified prime exhibits a root of order 2^" +
                                        std::to_string(k + 1)
                                  : "not found up to factoring limits (unfactored residue)";
            tw.notes.push_back("k = " + std::to_string(k) + ": " + why);
        }
    }
    return tw;
}

// ---------------------------------------------------------------------------
// Serialization: CSV rows "k,p,d,root,order" and a JSON certificate document.
// ---------------------------------------------------------------------------

inline std::string tower_csv(const Tower& tw) {
    std::ostringstream os;
    os << "k,p,d,root,order\n";
    for (const auto& e : tw.entries)
        os << e.k << "," << e.p.get_str() << "," << e.d << "," << e.root.get_str() << ","
           << e.order.get_str() << "\n";
    return os.str();
}

inline std::string tower_json(const Tower& tw) {
    nlohmann::json j;
    j["label"] = tw.label;
    j["polynomial"] = nlohmann::json::array();
    for (const auto& c : tw.poly) j["polynomial"].push_back(c.get_str());
    j["entries"] = nlohmann::json::array();
    for (const auto& e : tw.entries) {
        nlohmann::json je;
        je["k"] = e.k;
        je["p"] = e.p.get_str();
        je["d"] = e.d;
        je["root"] = e.root.get_str();
        je["order"] = e.order.get_str();
        for (const auto& [k, src] : tw.sources)
            if (k == e.k) je["source"] = src.get_str();
        j["entries"].push_back(je);
    }
    j["sources"] = nlohmann::json::array();
    for (const auto& [k, src] : tw.sources) {
        nlohmann::json js;
        js["k"] = k;
        js["value"] = src.get_str();
        j["sources"].push_back(js);
    }
    j["notes"] = tw.notes;
    return j.dump(2);
}

}  // namespace tlkit

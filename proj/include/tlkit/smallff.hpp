#pragma once

#include "tlkit/errors.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace tlkit {

/// Word-sized finite field F_{p^g} for the certified modular rank path:
/// p an odd prime below 2^31, g ≤ 8, elements as fixed arrays (no heap).
struct SmallFF {
    std::uint64_t p = 0;
    int g = 1;
    std::array<std::uint64_t, 9> modulus{};  // monic of degree g

    static constexpr int kMaxDeg = 8;
};

struct SFElem {
    const SmallFF* F = nullptr;
    std::array<std::uint64_t, SmallFF::kMaxDeg> c{};

    bool is_zero() const {
        for (int i = 0; i < F->g; ++i)
            if (c[static_cast<std::size_t>(i)] != 0) return false;
        return true;
    }
    SFElem one_like() const {
        SFElem r{F, {}};
        r.c[0] = 1 % F->p;
        return r;
    }

    friend bool operator==(const SFElem& a, const SFElem& b) { return a.F == b.F && a.c == b.c; }

    friend SFElem operator+(const SFElem& a, const SFElem& b) {
        SFElem r{a.F, {}};
        for (int i = 0; i < a.F->g; ++i) {
            std::uint64_t s = a.c[static_cast<std::size_t>(i)] + b.c[static_cast<std::size_t>(i)];
            r.c[static_cast<std::size_t>(i)] = s >= a.F->p ? s - a.F->p : s;
        }
        return r;
    }
    friend SFElem operator-(const SFElem& a, const SFElem& b) {
        SFElem r{a.F, {}};
        for (int i = 0; i < a.F->g; ++i) {
            std::uint64_t ai = a.c[static_cast<std::size_t>(i)], bi = b.c[static_cast<std::size_t>(i)];
            r.c[static_cast<std::size_t>(i)] = ai >= bi ? ai - bi : ai + a.F->p - bi;
        }
        return r;
    }
    friend SFElem operator*(const SFElem& a, const SFElem& b) {
        const SmallFF& F = *a.F;
        unsigned __int128 acc[2 * SmallFF::kMaxDeg - 1] = {};
        for (int i = 0; i < F.g; ++i) {
            if (a.c[static_cast<std::size_t>(i)] == 0) continue;
            for (int j = 0; j < F.g; ++j)
                acc[i + j] += static_cast<unsigned __int128>(a.c[static_cast<std::size_t>(i)]) *
                              b.c[static_cast<std::size_t>(j)];
        }
        std::uint64_t tmp[2 * SmallFF::kMaxDeg - 1];
        for (int i = 0; i < 2 * F.g - 1; ++i) tmp[i] = static_cast<std::uint64_t>(acc[i] % F.p);
        // Reduce by the monic modulus.
        for (int i = 2 * F.g - 2; i >= F.g; --i) {
            std::uint64_t lead = tmp[i];
            if (lead == 0) continue;
            tmp[i] = 0;
            for (int j = 0; j < F.g; ++j) {
                std::uint64_t sub = static_cast<std::uint64_t>(
                    (static_cast<unsigned __int128>(lead) * F.modulus[static_cast<std::size_t>(j)]) % F.p);
                std::uint64_t& slot = tmp[i - F.g + j];
                slot = slot >= sub ? slot - sub : slot + F.p - sub;
            }
        }
        SFElem r{a.F, {}};
        for (int i = 0; i < F.g; ++i) r.c[static_cast<std::size_t>(i)] = tmp[i];
        return r;
    }

    SFElem inv() const;
};

inline SFElem sf_from_int(const SmallFF& F, long long v) {
    long long m = v % static_cast<long long>(F.p);
    if (m < 0) m += static_cast<long long>(F.p);
    SFElem r{&F, {}};
    r.c[0] = static_cast<std::uint64_t>(m);
    return r;
}

namespace detail {

inline std::uint64_t sf_scalar_inv(std::uint64_t a, std::uint64_t p) {
    // Extended Euclid in the integers.
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a);
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::int64_t tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (r != 1) throw DomainError("sf_scalar_inv: not invertible");
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

}  // namespace detail

/// Inverse by extended Euclid on polynomials over F_p.
inline SFElem SFElem::inv() const {
    const SmallFF& Fd = *F;
    const std::uint64_t p = Fd.p;
    if (is_zero()) throw DomainError("SFElem::inv: zero");
    using PolyV = std::vector<std::uint64_t>;
    auto trim = [](PolyV& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    };
    auto submul = [&](PolyV& a, const PolyV& b, std::uint64_t s, std::size_t shift) {
        // a -= s * x^shift * b
        if (a.size() < b.size() + shift) a.resize(b.size() + shift, 0);
        for (std::size_t i = 0; i < b.size(); ++i) {
            std::uint64_t sub = static_cast<std::uint64_t>(
                (static_cast<unsigned __int128>(s) * b[i]) % p);
            std::uint64_t& slot = a[i + shift];
            slot = slot >= sub ? slot - sub : slot + p - sub;
        }
        trim(a);
    };
    PolyV r0(Fd.modulus.begin(), Fd.modulus.begin() + Fd.g + 1);
    PolyV r1(c.begin(), c.begin() + Fd.g);
    trim(r0);
    trim(r1);
    PolyV t0 = {}, t1 = {1};
    while (!r1.empty()) {
        std::uint64_t lead_inv = detail::sf_scalar_inv(r1.back(), p);
        while (r0.size() >= r1.size()) {
            // Kill the leading coefficient of r0; submul trims, so the size
            // strictly decreases and the inner loop terminates.
            std::uint64_t coef = static_cast<std::uint64_t>(
                (static_cast<unsigned __int128>(r0.back()) * lead_inv) % p);
            std::size_t shift = r0.size() - r1.size();
            submul(r0, r1, coef, shift);
            submul(t0, t1, coef, shift);
        }
        std::swap(r0, r1);
        std::swap(t0, t1);
    }
    if (r0.size() != 1) throw DomainError("SFElem::inv: not invertible");
    std::uint64_t scale = detail::sf_scalar_inv(r0[0], p);
    SFElem out{F, {}};
    for (std::size_t i = 0; i < t0.size() && i < static_cast<std::size_t>(Fd.g); ++i)
        out.c[i] = static_cast<std::uint64_t>((static_cast<unsigned __int128>(t0[i]) * scale) % p);
    return out;
}

inline bool sf_is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull}) {
        if (n % d == 0) return n == d;
    }
    // Deterministic Miller-Rabin for 64-bit.
    auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t m) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
    };
    auto powmod = [&](std::uint64_t a, std::uint64_t e, std::uint64_t m) {
        std::uint64_t r = 1;
        a %= m;
        while (e) {
            if (e & 1) r = mulmod(r, a, m);
            a = mulmod(a, a, m);
            e >>= 1;
        }
        return r;
    };
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

}  // namespace tlkit

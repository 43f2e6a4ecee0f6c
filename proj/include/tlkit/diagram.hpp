#pragma once

#include "tlkit/errors.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace tlkit {

/// Planar pairing diagram with n bottom points and m top points.
/// Points are 0-based: bottom 0..n-1 left to right, top n..n+m-1 left to right.
/// pair_[i] is the partner of point i (a fixed-point-free involution).
/// Planarity means non-crossing in the boundary walk: bottom left to right,
/// then top right to left.
struct Diagram {
    int n = 0, m = 0;
    std::vector<int> pair_;

    int points() const { return n + m; }
    bool is_bottom(int p) const { return p < n; }

    /// Position of point p in the planarity walk.
    int walk_pos(int p) const { return p < n ? p : n + (n + m - 1 - p); }

    static bool planar(int n, int m, const std::vector<int>& pr) {
        Diagram d{n, m, pr};
        std::vector<int> stack;
        std::vector<int> point_at(static_cast<std::size_t>(n + m));
        for (int p = 0; p < n + m; ++p) point_at[static_cast<std::size_t>(d.walk_pos(p))] = p;
        std::vector<char> seen(static_cast<std::size_t>(n + m), 0);
        for (int pos = 0; pos < n + m; ++pos) {
            int p = point_at[static_cast<std::size_t>(pos)];
            int q = pr[static_cast<std::size_t>(p)];
            if (seen[static_cast<std::size_t>(q)]) {
                if (stack.empty() || stack.back() != q) return false;
                stack.pop_back();
            } else {
                stack.push_back(p);
            }
            seen[static_cast<std::size_t>(p)] = 1;
        }
        return stack.empty();
    }

    static Diagram make(int n, int m, std::vector<int> pr) {
        if (n < 0 || m < 0 || static_cast<int>(pr.size()) != n + m)
            throw DomainError("Diagram: pairing size mismatch");
        for (int i = 0; i < n + m; ++i) {
            int j = pr[static_cast<std::size_t>(i)];
            if (j < 0 || j >= n + m || j == i || pr[static_cast<std::size_t>(j)] != i)
                throw DomainError("Diagram: not a fixed-point-free involution");
        }
        if (!planar(n, m, pr)) throw DomainError("Diagram: crossing strands");
        return Diagram{n, m, std::move(pr)};
    }

    friend bool operator==(const Diagram& a, const Diagram& b) {
        return a.n == b.n && a.m == b.m && a.pair_ == b.pair_;
    }

    /// Pairing list in 1-based labels, e.g. "1<->4, 2<->3".
    std::string str() const {
        std::string s;
        for (int i = 0; i < n + m; ++i) {
            int j = pair_[static_cast<std::size_t>(i)];
            if (j < i) continue;
            if (!s.empty()) s += ", ";
            s += std::to_string(i + 1) + "↔" + std::to_string(j + 1);
        }
        return s.empty() ? "(empty)" : s;
    }
};

inline Diagram id_diagram(int n) {
    std::vector<int> pr(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
        pr[static_cast<std::size_t>(i)] = n + i;
        pr[static_cast<std::size_t>(n + i)] = i;
    }
    return Diagram{n, n, std::move(pr)};
}
inline Diagram cup_diagram() { return Diagram{0, 2, {1, 0}}; }
inline Diagram cap_diagram() { return Diagram{2, 0, {1, 0}}; }

inline Diagram tensor(const Diagram& a, const Diagram& b) {
    Diagram r;
    r.n = a.n + b.n;
    r.m = a.m + b.m;
    r.pair_.resize(static_cast<std::size_t>(r.points()));
    auto map_a = [&](int p) { return p < a.n ? p : p + b.n; };
    auto map_b = [&](int p) { return p < b.n ? p + a.n : p + a.n + a.m; };
    for (int p = 0; p < a.points(); ++p)
        r.pair_[static_cast<std::size_t>(map_a(p))] = map_a(a.pair_[static_cast<std::size_t>(p)]);
    for (int p = 0; p < b.points(); ++p)
        r.pair_[static_cast<std::size_t>(map_b(p))] = map_b(b.pair_[static_cast<std::size_t>(p)]);
    return r;
}

struct GlueResult {
    Diagram matching;
    int loops = 0;
    // True iff some component (open or closed) crosses the interface at least
    // 3 times.  Loops cross an even number of times, so a flagged loop
    // crosses >= 4; such a loop carries an extra max/min pair and dies under
    // the crystal zigzag relation, while minimal 2-crossing loops and
    // turn-backs survive.  This is exactly the crystal zero condition, and it
    // is what makes the zero flag independent of association order.
    bool zigzag_hit = false;
};

/// Composite upper . lower: lower maps a -> b, upper maps b -> c.
/// Interface crossings per component: through strands cross an odd number of
/// times, turn-backs an even number, loops an even number >= 2 (parity
/// guarantee: each crossing flips which diagram the walk is in).
inline GlueResult glue(const Diagram& upper, const Diagram& lower) {
    if (lower.m != upper.n) throw DomainError("glue: interface mismatch");
    const int a = lower.n, b = lower.m, c = upper.m;
    GlueResult res;
    res.matching.n = a;
    res.matching.m = c;
    res.matching.pair_.assign(static_cast<std::size_t>(a + c), -1);

    // Outer labels: 0..a-1 lower bottoms, a..a+c-1 upper tops.
    // Interface label i (0..b-1) is lower point a+i and upper point i.
    std::vector<char> iface_seen(static_cast<std::size_t>(b), 0);
    auto walk = [&](int start_outer) -> std::pair<int, int> {
        // Returns (other outer endpoint, crossings).
        bool in_lower = start_outer < a;
        int p = in_lower ? start_outer : (start_outer - a) + b;  // local point index
        int crossings = 0;
        while (true) {
            int q = in_lower ? lower.pair_[static_cast<std::size_t>(p)]
                             : upper.pair_[static_cast<std::size_t>(p)];
            if (in_lower) {
                if (q < a) return {q, crossings};  // lower bottom: outer
                int i = q - a;                     // interface
                iface_seen[static_cast<std::size_t>(i)] = 1;
                ++crossings;
                in_lower = false;
                p = i;
            } else {
                if (q >= b) return {a + (q - b), crossings};  // upper top: outer
                iface_seen[static_cast<std::size_t>(q)] = 1;
                ++crossings;
                in_lower = true;
                p = a + q;
            }
        }
    };

    for (int s = 0; s < a + c; ++s) {
        if (res.matching.pair_[static_cast<std::size_t>(s)] != -1) continue;
        auto [t, crossings] = walk(s);
        res.matching.pair_[static_cast<std::size_t>(s)] = t;
        res.matching.pair_[static_cast<std::size_t>(t)] = s;
        bool through = (s < a) != (t < a);
        assert(through ? crossings % 2 == 1 : crossings % 2 == 0);
        if (crossings >= 3) res.zigzag_hit = true;
    }

    // Remaining interface points lie on closed loops; each loop alternates
    // lower and upper arcs between interface points.
    for (int i = 0; i < b; ++i) {
        if (iface_seen[static_cast<std::size_t>(i)]) continue;
        int crossings = 0;
        int j = i;
        bool next_lower = true;
        do {
            iface_seen[static_cast<std::size_t>(j)] = 1;
            ++crossings;
            int q = next_lower ? lower.pair_[static_cast<std::size_t>(a + j)] - a
                               : upper.pair_[static_cast<std::size_t>(j)];
            assert(q >= 0 && q < b);
            j = q;
            next_lower = !next_lower;
        } while (j != i);
        assert(crossings % 2 == 0 && crossings >= 2);
        if (crossings >= 3) res.zigzag_hit = true;
        ++res.loops;
    }
    return res;
}

/// Number of closed components when bottom i is joined to top i (closure
/// around the right of the rectangle).  Requires n == m.
inline int trace_close(const Diagram& d) {
    if (d.n != d.m) throw DomainError("trace_close: endomorphism required");
    const int n = d.n;
    std::vector<int> parent(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < 2 * n; ++i) parent[static_cast<std::size_t>(i)] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    auto unite = [&](int x, int y) { parent[static_cast<std::size_t>(find(x))] = find(y); };
    for (int i = 0; i < 2 * n; ++i) unite(i, d.pair_[static_cast<std::size_t>(i)]);
    for (int i = 0; i < n; ++i) unite(i, n + i);
    int comps = 0;
    for (int i = 0; i < 2 * n; ++i)
        if (find(i) == i) ++comps;
    return comps;
}

/// Interned table of all planar (n, m) diagrams, sorted by pairing vector in
/// descending lexicographic order; in End(2) this yields [identity, cup.cap].
struct DiagramTable {
    int n, m;
    std::vector<Diagram> diags;
    std::map<std::vector<int>, std::uint32_t> index;

    std::uint32_t id_of(const Diagram& d) const {
        auto it = index.find(d.pair_);
        if (it == index.end()) throw DomainError("DiagramTable: foreign diagram");
        return it->second;
    }
    std::size_t size() const { return diags.size(); }
};

namespace detail {

/// Enumerate non-crossing perfect matchings of the walk positions in `avail`
/// (strictly increasing); matched point indices accumulate in pr.
inline void enumerate_rec(const std::vector<int>& point_at, std::vector<int>& pr,
                          const std::vector<int>& avail,
                          const std::function<void()>& done) {
    if (avail.empty()) {
        done();
        return;
    }
    int p = point_at[static_cast<std::size_t>(avail.front())];
    for (std::size_t k = 1; k < avail.size(); k += 2) {
        int q = point_at[static_cast<std::size_t>(avail[k])];
        pr[static_cast<std::size_t>(p)] = q;
        pr[static_cast<std::size_t>(q)] = p;
        std::vector<int> inner(avail.begin() + 1, avail.begin() + static_cast<long>(k));
        std::vector<int> outer(avail.begin() + static_cast<long>(k) + 1, avail.end());
        enumerate_rec(point_at, pr, inner,
                      [&] { enumerate_rec(point_at, pr, outer, done); });
    }
}

}  // namespace detail

inline std::vector<Diagram> enumerate_diagrams(int n, int m) {
    if (n < 0 || m < 0) throw DomainError("enumerate_diagrams: negative arity");
    if ((n + m) % 2 != 0) return {};
    std::vector<int> point_at(static_cast<std::size_t>(n + m));
    Diagram proto{n, m, {}};
    for (int p = 0; p < n + m; ++p) point_at[static_cast<std::size_t>(proto.walk_pos(p))] = p;
    std::vector<int> avail(static_cast<std::size_t>(n + m));
    for (int i = 0; i < n + m; ++i) avail[static_cast<std::size_t>(i)] = i;
    std::vector<int> pr(static_cast<std::size_t>(n + m), -1);
    std::vector<Diagram> out;
    detail::enumerate_rec(point_at, pr, avail, [&] { out.push_back(Diagram{n, m, pr}); });
    std::sort(out.begin(), out.end(),
              [](const Diagram& a, const Diagram& b) { return a.pair_ > b.pair_; });
    return out;
}

/// Cached interned table; `limit` guards Catalan blowup (raise it explicitly
/// for large arities).
inline const DiagramTable& diagram_table(int n, int m, int limit = 26) {
    if (n + m > limit) throw GuardError("diagram_table: arity exceeds size ceiling");
    static std::map<std::pair<int, int>, std::unique_ptr<DiagramTable>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, m);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto tab = std::make_unique<DiagramTable>();
        tab->n = n;
        tab->m = m;
        tab->diags = enumerate_diagrams(n, m);
        for (std::uint32_t i = 0; i < tab->diags.size(); ++i)
            tab->index.emplace(tab->diags[i].pair_, i);
        it = cache.emplace(key, std::move(tab)).first;
    }
    return *it->second;
}

}  // namespace tlkit

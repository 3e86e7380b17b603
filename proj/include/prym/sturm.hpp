#pragma once
#include <algorithm>
#include <vector>

#include "prym/rational.hpp"
#include "prym/upoly.hpp"

namespace prym {

// Sturm chain of f: f0 = f, f1 = f', f_{i+1} = -rem(f_{i-1}, f_i).
inline std::vector<upoly<Rat>> sturm_chain(const upoly<Rat>& f) {
    std::vector<upoly<Rat>> chain;
    if (f.deg() < 0) return chain;
    chain.push_back(f);
    if (f.deg() == 0) return chain;
    chain.push_back(f.derivative());
    while (chain.back().deg() > 0) {
        auto r = divrem(chain[chain.size() - 2], chain.back()).second;
        if (r.deg() < 0) break;  // repeated roots: chain ends at the gcd
        chain.push_back(-r);
    }
    return chain;
}

namespace detail {

inline int sign_rat(const Rat& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

inline int sign_changes_at(const std::vector<upoly<Rat>>& chain, const Rat& x) {
    int changes = 0, prev = 0;
    for (auto& g : chain) {
        int s = sign_rat(g.eval(x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

inline int sign_changes_at_inf(const std::vector<upoly<Rat>>& chain, int dir) {
    int changes = 0, prev = 0;
    for (auto& g : chain) {
        if (g.deg() < 0) continue;
        int s = sign_rat(g.lead());
        if (dir < 0 && g.deg() % 2 == 1) s = -s;
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

}  // namespace detail

// Number of distinct real roots of f in the half-open interval (a, b].
inline int real_roots_in(const std::vector<upoly<Rat>>& chain, const Rat& a, const Rat& b) {
    PRYM_CHECK(a < b, "real_roots_in: empty interval");
    return detail::sign_changes_at(chain, a) - detail::sign_changes_at(chain, b);
}

// Number of distinct real roots of f on all of R.
inline int real_root_count(const upoly<Rat>& f) {
    if (f.deg() <= 0) return 0;
    auto chain = sturm_chain(f);
    return detail::sign_changes_at_inf(chain, -1) - detail::sign_changes_at_inf(chain, +1);
}

// Cauchy-style bound: all real roots lie in (-B, B).
inline Rat root_bound(const upoly<Rat>& f) {
    PRYM_CHECK(f.deg() >= 1, "root_bound wants positive degree");
    Rat m(0);
    for (int i = 0; i < f.deg(); ++i) {
        Rat c = f[i] / f.lead();
        if (c < 0) c = -c;
        if (c > m) m = c;
    }
    return m + 1;
}

// Disjoint isolating intervals (a, b] for the distinct real roots of f,
// each of length at most `width`, ordered left to right.
inline std::vector<std::pair<Rat, Rat>> isolate_real_roots(const upoly<Rat>& f,
                                                           const Rat& width = Rat(1, 64)) {
    std::vector<std::pair<Rat, Rat>> out;
    if (f.deg() <= 0) return out;
    auto chain = sturm_chain(f);
    Rat B = root_bound(f);
    struct seg {
        Rat a, b;
        int n;
    };
    std::vector<seg> work;
    int total = real_roots_in(chain, -B, B);
    if (total == 0) return out;
    work.push_back({-B, B, total});
    while (!work.empty()) {
        seg s = work.back();
        work.pop_back();
        if (s.n == 0) continue;
        if (s.n == 1 && s.b - s.a <= width) {
            out.push_back({s.a, s.b});
            continue;
        }
        Rat mid = (s.a + s.b) / 2;
        int left = real_roots_in(chain, s.a, mid);
        work.push_back({mid, s.b, s.n - left});
        work.push_back({s.a, mid, left});
    }
    std::sort(out.begin(), out.end(),
              [](auto& x, auto& y) { return x.first < y.first; });
    return out;
}

// Shrink an isolating interval of f until g has constant nonzero sign on it,
// returning that sign; if g shares the root (gcd nonconstant there), returns 0.
inline int sign_at_root(const upoly<Rat>& f, std::pair<Rat, Rat> iv, const upoly<Rat>& g) {
    auto chain_f = sturm_chain(f);
    auto common = gcd_poly(f, g);
    if (common.deg() > 0 && real_roots_in(sturm_chain(common), iv.first, iv.second) > 0) return 0;
    auto chain_g = sturm_chain(g);
    for (int guard = 0; guard < 512; ++guard) {
        if (g.deg() < 0) return 0;
        if (real_roots_in(chain_g, iv.first, iv.second) == 0) {
            Rat mid = (iv.first + iv.second) / 2;
            int s = detail::sign_rat(g.eval(mid));
            if (s != 0) return s;
        }
        Rat mid = (iv.first + iv.second) / 2;
        if (real_roots_in(chain_f, iv.first, mid) == 1)
            iv.second = mid;
        else
            iv.first = mid;
    }
    throw error("sign_at_root failed to separate");
}

}  // namespace prym

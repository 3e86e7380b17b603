#pragma once
#include <map>

#include "prym/fp.hpp"
#include "prym/upoly.hpp"

namespace prym {

inline upoly<fpelem> poly_powmod(const upoly<fpelem>& base, const Int& e, const upoly<fpelem>& m) {
    upoly<fpelem> r = upoly<fpelem>::constant(dom<fpelem>::one(base.zr));
    upoly<fpelem> b = pmod(base, m);
    Int k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) r = pmod(r * b, m);
        b = pmod(b * b, m);
        k >>= 1;
    }
    return r;
}

// Squarefree part of f over F_p (handles the char-p derivative collapse).
inline upoly<fpelem> fp_squarefree_part(const upoly<fpelem>& f) {
    if (f.deg() <= 0) return f;
    uint64_t p = f.zr.p;
    upoly<fpelem> fp = f.derivative();
    if (fp.is_zero()) {
        // f = g(x^p); p-th roots of the coefficients give g.
        upoly<fpelem> g(f.zr);
        for (int i = 0; i * (int)p <= f.deg(); ++i) {
            // c^(1/p) = c^(p^(k-1)) in F_p is just c
            g.set(i, f[i * (int)p]);
        }
        return fp_squarefree_part(g);
    }
    upoly<fpelem> g = gcd_poly(f, fp);
    if (g.deg() == 0) return f.monic();
    auto [q, r] = divrem(f, g);
    PRYM_CHECK(r.is_zero(), "squarefree part: gcd division not exact");
    upoly<fpelem> h = fp_squarefree_part(q);
    // q may still miss factors whose multiplicity is divisible by p
    upoly<fpelem> gg = fp_squarefree_part(g);
    auto [qq, rr] = divrem(gg, gcd_poly(gg, h));
    PRYM_CHECK(rr.is_zero(), "squarefree part: merge division not exact");
    return (h * qq).monic();
}

// Distinct-degree decomposition of a squarefree monic f: list of (g, d)
// where g is the product of the irreducible factors of degree d.
inline std::vector<std::pair<upoly<fpelem>, int>> fp_distinct_degree(const upoly<fpelem>& f) {
    std::vector<std::pair<upoly<fpelem>, int>> out;
    upoly<fpelem> rem = f.monic();
    upoly<fpelem> x = upoly<fpelem>::x_power(1, f.zr);
    upoly<fpelem> h = x;
    int d = 0;
    while (rem.deg() > 0) {
        ++d;
        if (2 * d > rem.deg()) {
            out.emplace_back(rem, rem.deg());
            break;
        }
        h = poly_powmod(h, Int(f.zr.p), rem);
        upoly<fpelem> g = gcd_poly(rem, h - x);
        if (g.deg() > 0) {
            out.emplace_back(g, d);
            auto [q, r] = divrem(rem, g);
            PRYM_CHECK(r.is_zero(), "distinct-degree: division not exact");
            rem = q.monic();
            h = pmod(h, rem);
        }
    }
    return out;
}

// Cantor-Zassenhaus equal-degree splitting: f squarefree monic, all
// irreducible factors of degree d.
inline void fp_equal_degree(const upoly<fpelem>& f, int d, rng_t& rng,
                            std::vector<upoly<fpelem>>& out) {
    if (f.deg() == d) {
        out.push_back(f.monic());
        return;
    }
    uint64_t p = f.zr.p;
    PRYM_CHECK(p % 2 == 1, "equal-degree splitting requires odd p");
    Int q(1);
    for (int i = 0; i < d; ++i) q *= (long)p;
    Int e = (q - 1) / 2;
    while (true) {
        upoly<fpelem> a(f.zr);
        std::uniform_int_distribution<uint64_t> U(0, p - 1);
        for (int i = 0; i < f.deg(); ++i) a.set(i, fpelem{U(rng), p});
        if (a.deg() < 1) continue;
        upoly<fpelem> g = gcd_poly(f, a);
        if (g.deg() == 0) {
            upoly<fpelem> b = poly_powmod(a, e, f);
            g = gcd_poly(f, b - upoly<fpelem>::constant(dom<fpelem>::one(f.zr)));
        }
        if (g.deg() > 0 && g.deg() < f.deg()) {
            auto [q, r] = divrem(f, g);
            PRYM_CHECK(r.is_zero(), "equal-degree: division not exact");
            fp_equal_degree(g, d, rng, out);
            fp_equal_degree(q.monic(), d, rng, out);
            return;
        }
    }
}

// Full factorization over F_p: returns (irreducible monic factor, multiplicity),
// plus the leading coefficient.
inline std::pair<fpelem, std::vector<std::pair<upoly<fpelem>, int>>> fp_factor(
    const upoly<fpelem>& f, uint64_t seed = 11) {
    PRYM_CHECK(!f.is_zero(), "cannot factor the zero polynomial");
    fpelem lc = f.lead();
    std::vector<std::pair<upoly<fpelem>, int>> out;
    if (f.deg() == 0) return {lc, out};
    rng_t rng = make_rng(seed);
    upoly<fpelem> rem = f.monic();
    upoly<fpelem> sqf = fp_squarefree_part(rem);
    std::vector<upoly<fpelem>> irr;
    for (auto& [g, d] : fp_distinct_degree(sqf)) fp_equal_degree(g, d, rng, irr);
    for (auto& q : irr) {
        int mult = 0;
        while (true) {
            auto [quo, r] = divrem(rem, q);
            if (!r.is_zero()) break;
            rem = quo;
            ++mult;
        }
        out.emplace_back(q, mult);
    }
    PRYM_CHECK(rem.deg() == 0, "factorization incomplete");
    return {lc, out};
}

inline std::vector<fpelem> fp_roots(const upoly<fpelem>& f) {
    std::vector<fpelem> roots;
    if (f.is_zero()) return roots;
    upoly<fpelem> x = upoly<fpelem>::x_power(1, f.zr);
    upoly<fpelem> sqf = fp_squarefree_part(f.deg() > 0 ? f : f.monic());
    if (sqf.deg() < 1) return roots;
    // gcd with x^p - x isolates the linear factors
    upoly<fpelem> xp = poly_powmod(x, Int(f.zr.p), sqf);
    upoly<fpelem> lin = gcd_poly(sqf, xp - x);
    if (lin.deg() < 1) return roots;
    rng_t rng = make_rng(5);
    std::vector<upoly<fpelem>> irr;
    fp_equal_degree(lin, 1, rng, irr);
    for (auto& q : irr) roots.push_back(-q[0]);
    std::sort(roots.begin(), roots.end(), [](const fpelem& a, const fpelem& b) { return a.v < b.v; });
    return roots;
}

inline bool fp_is_irreducible(const upoly<fpelem>& f, uint64_t seed = 7) {
    if (f.deg() <= 0) return false;
    if (f.deg() == 1) return true;
    if (!is_squarefree(f)) return false;
    (void)seed;
    auto dd = fp_distinct_degree(f.monic());
    return dd.size() == 1 && dd[0].second == f.deg();
}

}  // namespace prym

#pragma once
#include <algorithm>
#include <vector>

#include "prym/fppoly.hpp"
#include "prym/upoly.hpp"
#include "prym/zfuncs.hpp"

namespace prym {
namespace detail {

// Integer polynomials as little-endian coefficient vectors with a nonzero back.
using ipoly = std::vector<Int>;

inline void itrim(ipoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int ideg(const ipoly& f) { return (int)f.size() - 1; }

inline ipoly imul(const ipoly& a, const ipoly& b) {
    if (a.empty() || b.empty()) return {};
    ipoly r(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

inline ipoly isub(ipoly a, const ipoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Int(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    itrim(a);
    return a;
}

inline void imod(ipoly& f, const Int& m) {
    for (auto& c : f) c = mod_pos(c, m);
    itrim(f);
}

// balanced residue in (-m/2, m/2]
inline void ibalance(ipoly& f, const Int& m) {
    for (auto& c : f) {
        c = mod_pos(c, m);
        if (2 * c > m) c -= m;
    }
    itrim(f);
}

// division of f by monic g over Z/m; returns (quotient, remainder)
inline std::pair<ipoly, ipoly> idivmod_monic(ipoly f, const ipoly& g, const Int& m) {
    PRYM_CHECK(!g.empty() && mod_pos(g.back(), m) == 1, "idivmod_monic wants a monic divisor");
    imod(f, m);
    ipoly q;
    if (ideg(f) >= ideg(g)) q.assign(f.size() - g.size() + 1, Int(0));
    while (ideg(f) >= ideg(g) && !f.empty()) {
        int shift = ideg(f) - ideg(g);
        Int c = f.back();
        q[shift] = c;
        for (size_t i = 0; i < g.size(); ++i)
            f[shift + i] = mod_pos(f[shift + i] - c * g[i], m);
        itrim(f);
    }
    itrim(q);
    return {q, f};
}

// exact division over Z; nullopt if not divisible
inline std::optional<ipoly> idivexact(const ipoly& f, const ipoly& g) {
    if (g.empty()) return std::nullopt;
    ipoly r = f, q;
    if (ideg(f) < ideg(g)) return f.empty() ? std::optional<ipoly>(ipoly{}) : std::nullopt;
    q.assign(f.size() - g.size() + 1, Int(0));
    while (!r.empty() && ideg(r) >= ideg(g)) {
        if (r.back() % g.back() != 0) return std::nullopt;
        Int c = r.back() / g.back();
        int shift = ideg(r) - ideg(g);
        q[shift] = c;
        for (size_t i = 0; i < g.size(); ++i) r[shift + i] -= c * g[i];
        itrim(r);
    }
    if (!r.empty()) return std::nullopt;
    return q;
}

inline Int icontent(const ipoly& f) {
    Int g(0);
    for (auto& c : f) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g == 0 ? Int(1) : g;
}

inline ipoly to_ipoly(const upoly<Rat>& f) {
    Int l(1);
    for (int i = 0; i <= f.deg(); ++i) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den(f[i]).get_mpz_t());
    ipoly out(f.deg() + 1, Int(0));
    for (int i = 0; i <= f.deg(); ++i) out[i] = num(f[i]) * (l / den(f[i]));
    itrim(out);
    return out;
}

inline upoly<Rat> from_ipoly(const ipoly& f) {
    upoly<Rat> out{Rat(0)};
    for (size_t i = 0; i < f.size(); ++i) out.set((int)i, Rat(f[i]));
    return out;
}

inline ipoly fp_to_ipoly(const upoly<fpelem>& f) {
    ipoly out(f.deg() + 1, Int(0));
    for (int i = 0; i <= f.deg(); ++i) out[i] = Int((unsigned long)f[i].v);
    itrim(out);
    return out;
}

// One quadratic Hensel step for a monic pair: f = A*B mod p^k with Bezout
// s*A + t*B = 1 mod p^k; all lifted to mod p^(2k).
struct hensel_pair {
    ipoly A, B, s, t;
};

inline hensel_pair hensel_step(const ipoly& f, hensel_pair h, const Int& mk, const Int& m2k) {
    ipoly e = isub(f, imul(h.A, h.B));
    imod(e, m2k);
    ipoly te = imul(h.t, e);
    auto [u, a] = idivmod_monic(te, h.A, m2k);
    ipoly A2 = h.A;
    if (A2.size() < a.size()) A2.resize(a.size(), Int(0));
    for (size_t i = 0; i < a.size(); ++i) A2[i] = mod_pos(A2[i] + a[i], m2k);
    itrim(A2);
    auto [B2, rem] = idivmod_monic(f, A2, m2k);
    PRYM_CHECK(rem.empty(), "hensel step lost divisibility");
    // lift the Bezout pair
    ipoly delta = imul(h.s, A2);
    {
        ipoly tb = imul(h.t, B2);
        if (delta.size() < tb.size()) delta.resize(tb.size(), Int(0));
        for (size_t i = 0; i < tb.size(); ++i) delta[i] += tb[i];
        if (delta.empty()) delta.push_back(Int(-1));
        else delta[0] -= 1;
        imod(delta, m2k);
    }
    ipoly sd = imul(h.s, delta);
    auto [q, a2] = idivmod_monic(sd, h.B, m2k);
    ipoly s2 = isub(h.s, a2);
    imod(s2, m2k);
    ipoly t2 = isub(h.t, imul(h.t, delta));
    t2 = isub(t2, imul(q, A2));
    imod(t2, m2k);
    (void)mk;
    return {A2, B2, s2, t2};
}

// Lift a list of pairwise-coprime monic factors of monic f from mod p to mod
// p^K (K a power-of-two exponent target with p^K >= bound).
inline std::vector<ipoly> hensel_lift_list(const ipoly& f, std::vector<ipoly> fac, uint64_t p,
                                           const Int& bound) {
    if (fac.size() == 1) {
        Int mk((unsigned long)p);
        while (mk < bound) mk *= mk;
        ipoly g = f;
        imod(g, mk);
        return {g};
    }
    size_t half = fac.size() / 2;
    ipoly A{Int(1)}, B{Int(1)};
    Int pp((unsigned long)p);
    for (size_t i = 0; i < half; ++i) A = imul(A, fac[i]);
    for (size_t i = half; i < fac.size(); ++i) B = imul(B, fac[i]);
    imod(A, pp);
    imod(B, pp);
    // Bezout over F_p via fppoly machinery
    upoly<fpelem> Ap{fpelem{0, p}}, Bp{fpelem{0, p}};
    for (size_t i = 0; i < A.size(); ++i) Ap.set((int)i, fpelem{mpz_get_ui(A[i].get_mpz_t()), p});
    for (size_t i = 0; i < B.size(); ++i) Bp.set((int)i, fpelem{mpz_get_ui(B[i].get_mpz_t()), p});
    auto [g, u, v] = xgcd_poly(Ap, Bp);
    PRYM_CHECK(g.deg() == 0, "hensel factors not coprime");
    hensel_pair h{A, B, fp_to_ipoly(u * upoly<fpelem>::constant(g[0].inv())),
                  fp_to_ipoly(v * upoly<fpelem>::constant(g[0].inv()))};
    Int mk = pp;
    while (mk < bound) {
        Int m2k = mk * mk;
        h = hensel_step(f, h, mk, m2k);
        mk = m2k;
    }
    std::vector<ipoly> left(fac.begin(), fac.begin() + half);
    std::vector<ipoly> right(fac.begin() + half, fac.end());
    auto L = hensel_lift_list(h.A, left, p, bound);
    auto R = hensel_lift_list(h.B, right, p, bound);
    // re-reduce to the common modulus actually reached
    for (auto& x : L) imod(x, mk);
    for (auto& x : R) imod(x, mk);
    L.insert(L.end(), R.begin(), R.end());
    return L;
}

// Factor a monic squarefree integral polynomial into monic irreducibles over Z.
inline std::vector<ipoly> factor_monic_squarefree(const ipoly& f) {
    int n = ideg(f);
    if (n <= 1) return {f};
    // coefficient bound for monic factors (Mignotte-style, generous)
    Int norm(0);
    for (auto& c : f) norm += abs(c);
    Int bound = Int(4) * norm;
    for (int i = 0; i < n; ++i) bound *= 2;
    // pick a prime with squarefree reduction
    uint64_t p = 3;
    std::vector<upoly<fpelem>> modfac;
    for (;; p = mpz_get_ui(next_prime(Int((unsigned long)p)).get_mpz_t())) {
        upoly<fpelem> fp{fpelem{0, p}};
        for (size_t i = 0; i < f.size(); ++i)
            fp.set((int)i, fpelem{mpz_get_ui(mod_pos(f[i], Int((unsigned long)p)).get_mpz_t()), p});
        if (fp.deg() != n) continue;
        if (!is_squarefree(fp)) continue;
        auto [lc, fac] = fp_factor(fp);
        (void)lc;
        modfac.clear();
        for (auto& [g, m] : fac) {
            PRYM_CHECK(m == 1, "unexpected multiplicity");
            modfac.push_back(g);
        }
        break;
    }
    if (modfac.size() == 1) return {f};
    std::vector<ipoly> lifted;
    {
        std::vector<ipoly> start;
        for (auto& g : modfac) start.push_back(fp_to_ipoly(g));
        lifted = hensel_lift_list(f, start, p, bound);
    }
    Int modulus((unsigned long)p);
    while (modulus < bound) modulus *= modulus;
    // subset recombination
    std::vector<ipoly> out;
    ipoly rest = f;
    std::vector<int> alive(lifted.size());
    for (size_t i = 0; i < alive.size(); ++i) alive[i] = (int)i;
    for (size_t take = 1; take <= alive.size() && !alive.empty();) {
        if (take > alive.size()) break;
        std::vector<size_t> idx(take);
        for (size_t i = 0; i < take; ++i) idx[i] = i;
        bool found = false;
        for (;;) {
            ipoly cand{Int(1)};
            for (size_t i = 0; i < take; ++i) cand = imul(cand, lifted[(size_t)alive[idx[i]]]);
            ibalance(cand, modulus);
            auto q = idivexact(rest, cand);
            if (q) {
                out.push_back(cand);
                rest = *q;
                std::vector<int> keep;
                for (size_t i = 0, j = 0; i < alive.size(); ++i) {
                    if (j < take && idx[j] == i) {
                        ++j;
                        continue;
                    }
                    keep.push_back(alive[i]);
                }
                alive = keep;
                found = true;
                break;
            }
            // next combination
            int i = (int)take - 1;
            while (i >= 0 && idx[(size_t)i] == alive.size() - take + (size_t)i) --i;
            if (i < 0) break;
            ++idx[(size_t)i];
            for (size_t j = (size_t)i + 1; j < take; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!found) ++take;
        if (2 * take > alive.size() + 1) break;  // remainder is irreducible
    }
    if (ideg(rest) > 0) out.push_back(rest);
    return out;
}

}  // namespace detail

struct qfactorization {
    Rat unit;  // overall rational scalar
    std::vector<std::pair<upoly<Rat>, int>> factors;  // monic irreducible, multiplicity
};

// Full factorization over Q: f = unit * prod factors[i]^mult[i] with each
// factor monic irreducible over Q.
inline qfactorization factor_q(const upoly<Rat>& f) {
    PRYM_CHECK(f.deg() >= 0, "factor_q of zero polynomial");
    qfactorization out;
    out.unit = f.lead();
    if (f.deg() == 0) return out;
    upoly<Rat> g = f.monic();
    // squarefree decomposition by repeated gcd
    std::vector<std::pair<upoly<Rat>, int>> sqfree;
    upoly<Rat> cur = g;
    int mult = 1;
    while (cur.deg() > 0) {
        upoly<Rat> d = gcd_poly(cur, cur.derivative());
        upoly<Rat> part = divrem(cur, d).first.monic();  // product of primes with mult >= mult
        // primes with exactly this multiplicity: part / gcd(part, d-part-of-next)
        upoly<Rat> next = d.monic();
        upoly<Rat> exact = divrem(part, gcd_poly(part, next)).first.monic();
        if (exact.deg() > 0) sqfree.push_back({exact, mult});
        cur = next;
        ++mult;
        if (d.deg() == 0) break;
    }
    for (auto& [sq, m] : sqfree) {
        // factor the squarefree part: make monic integral via x -> x / lc trick
        detail::ipoly fi = detail::to_ipoly(sq);
        Int lc = fi.back();
        detail::ipoly monic(fi.size());
        // monic(x) = lc^(n-1) f(x/lc): coeff_i = f_i * lc^(n-1-i)
        int n = detail::ideg(fi);
        monic[(size_t)n] = 1;
        for (int i = 0; i < n; ++i) {
            Int scale(1);
            for (int j = 0; j < n - 1 - i; ++j) scale *= lc;
            monic[(size_t)i] = fi[(size_t)i] * scale;
        }
        auto irr = detail::factor_monic_squarefree(monic);
        for (auto& h : irr) {
            // map back: root r of h corresponds to root r/lc of sq
            upoly<Rat> hq = detail::from_ipoly(h);
            upoly<Rat> back{Rat(0)};
            for (int i = 0; i <= hq.deg(); ++i) {
                Rat c = hq[i];
                Int scale(1);
                for (int j = 0; j < i; ++j) scale *= lc;
                back.set(i, c * Rat(scale));
            }
            out.factors.push_back({back.monic(), m});
        }
    }
    // deterministic order: by degree then coefficient string
    std::sort(out.factors.begin(), out.factors.end(), [](auto& A, auto& B) {
        if (A.first.deg() != B.first.deg()) return A.first.deg() < B.first.deg();
        for (int i = A.first.deg(); i >= 0; --i)
            if (A.first[i] != B.first[i]) return A.first[i] < B.first[i];
        return A.second < B.second;
    });
    return out;
}

// Rational roots with multiplicity.
inline std::vector<std::pair<Rat, int>> rational_roots(const upoly<Rat>& f) {
    std::vector<std::pair<Rat, int>> out;
    for (auto& [g, m] : factor_q(f).factors)
        if (g.deg() == 1) out.push_back({-g[0], m});
    return out;
}

}  // namespace prym

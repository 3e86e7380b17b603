#pragma once
#include <algorithm>
#include <array>
#include <optional>
#include <random>
#include <vector>

#include "prym/genus2.hpp"
#include "prym/kummer.hpp"
#include "prym/linalg.hpp"
#include "prym/quadforms.hpp"
#include "prym/zfuncs.hpp"

namespace prym {

// Reconstruction of a conic-pencil model from a genus-2 curve.
//
// Given y^2 = f(x) with f squarefree of degree 5 or 6, this header produces
// symmetric ternary forms Q1, Q2, Q3 with det(Q1 + 2x Q2 + x^2 Q3) equal to f
// up to the twist bookkeeping used elsewhere in the library.  The route runs
// through the Kummer quartic: a plane section k4 = v1 k1 + v2 k2 + v3 k3
// carries a distinguished pair of conjugate quadrics that cut squares on the
// double cover, and that pair spans the wanted pencil.
//
// The computational skeleton:
//   * a basis g_0..g_5 of the anti-invariant functions of level four, whose
//     pairwise products are quartic expressions in the Kummer coordinates
//     (interpolated modulo word-size primes and reconstructed over Q);
//   * the coefficient vectors a with (sum a_i g_i)^2 restricting to u^2 times
//     a conic on the chosen plane, modulo the plane section of the surface --
//     eight quadratic conditions whose solution set is a line in P^5 (the
//     anti-invariant functions restricting to u times a generator of the
//     two-dimensional twisted-canonical space on the double cover), located
//     by a finite-field scan plus Newton lifting of its span;
//   * assembly of the three conics from any basis of that span, a Moebius
//     change of frame aligning the pencil determinant with f, and an exact
//     final check.

// One anti-invariant function, written as
//     (C(x1, x2) y1 - C(x2, x1) y2) / (x1 - x2)^3
// on split degree-2 divisors, with C of degree <= 2 in the first slot and
// <= 5 in the second.  The value is symmetric in the two points and changes
// sign under the hyperelliptic involution.
struct odd_gen {
    std::array<std::array<Rat, 6>, 3> c{};  // c[a][b] x1^a x2^b
};

inline fpelem odd_eval(const odd_gen& g, const fpelem& x1, const fpelem& y1, const fpelem& x2,
                       const fpelem& y2) {
    uint64_t p = x1.p;
    auto cval = [&](const fpelem& s, const fpelem& t) {
        fpelem acc{0, p}, sp{1, p};
        for (int a = 0; a < 3; ++a) {
            fpelem rowacc{0, p}, tp{1, p};
            for (int b = 0; b < 6; ++b) {
                rowacc = rowacc + fpelem::from_rat(g.c[(size_t)a][(size_t)b], p) * tp;
                tp = tp * t;
            }
            acc = acc + rowacc * sp;
            sp = sp * s;
        }
        return acc;
    };
    fpelem d = x1 - x2;
    return (cval(x1, x2) * y1 - cval(x2, x1) * y2) / (d * d * d);
}

// The six anti-invariant functions with pole order at most four along the
// theta divisor.  The degree bounds cap the poles at infinity; regularity
// along the diagonal forces the numerator to vanish there to third order,
// which is two linear conditions on C obtained from the expansion of
// y(x + eps):
//     2 (C_b - C_a) f = C_0 f'
//     4 (C_bb - C_aa) f^2 - 4 C_a f' f - 2 C_0 f'' f + C_0 f'^2 = 0
// with C_0, C_a, C_b, ... the diagonal restrictions of C and its partials.
inline std::array<odd_gen, 6> odd_space(const g2curve<Rat>& C) {
    const upoly<Rat>& f = C.f;
    upoly<Rat> fp = f.derivative();
    upoly<Rat> fpp = fp.derivative();
    upoly<Rat> f2 = f * f, fpf = fp * f, ffpp = fpp * f, fp2 = fp * fp;
    auto xp = [](int k) { return upoly<Rat>::x_power(k, Rat(0)); };
    matrix<Rat> M(31, 18, Rat(0));
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 5; ++b) {
            size_t col = (size_t)(a * 6 + b);
            upoly<Rat> c1{Rat(0)};
            if (b != a) c1 = c1 + xp(a + b - 1) * f * Rat(2 * (b - a));
            c1 = c1 - xp(a + b) * fp;
            long bb = (long)b * (b - 1), aa = (long)a * (a - 1);
            upoly<Rat> c2{Rat(0)};
            if (bb != aa) c2 = c2 + xp(a + b - 2) * f2 * Rat(4 * (bb - aa));
            if (a > 0) c2 = c2 - xp(a + b - 1) * fpf * Rat(4 * a);
            c2 = c2 - xp(a + b) * ffpp * Rat(2) + xp(a + b) * fp2;
            for (int i = 0; i <= c1.deg(); ++i) M.at((size_t)i, col) = c1[i];
            for (int i = 0; i <= c2.deg(); ++i) M.at((size_t)(13 + i), col) = c2[i];
        }
    auto ker = kernel_basis(M);
    PRYM_CHECK(ker.size() == 6, "anti-invariant function space has unexpected dimension");
    std::array<odd_gen, 6> G{};
    for (size_t i = 0; i < 6; ++i)
        for (int a = 0; a <= 2; ++a)
            for (int b = 0; b <= 5; ++b)
                G[i].c[(size_t)a][(size_t)b] = ker[i][(size_t)(a * 6 + b)];
    return G;
}

// products are indexed by unordered pairs: (i, j) with i <= j.
inline size_t pair_index(size_t i, size_t j) {
    if (i > j) std::swap(i, j);
    return i * (11 - i) / 2 + j;
}

struct fibre_options {
    uint64_t basis_prime = 10007;     // prime for the final spot checks
    uint64_t interp_prime = 1000003;  // first coefficient-interpolation prime
    int samples = 50;                 // divisor classes per interpolation prime
    int min_primes = 2;
    int max_primes = 14;
    int check_classes = 500;  // evaluation-identity checks after reconstruction
    uint64_t seed = 2026;
};

struct odd_basis {
    std::array<odd_gen, 6> gens;
    std::vector<mpoly> products;  // pair_index(i, j) -> quartic in (k1..k4)
    mpoly surface;                // Kummer quartic of the curve
    size_t norm_index;            // k2^2 k4^2 coefficient zeroed in every product
};

namespace detail {

struct split_sample {
    fpelem x1, y1, x2, y2;
    std::array<fpelem, 4> k;
};

inline std::optional<split_sample> draw_split_sample(const g2curve<fpelem>& C, rng_t& rng) {
    uint64_t p = C.f.zr.p;
    std::uniform_int_distribution<uint64_t> U(0, p - 1);
    fpelem x1{U(rng), p}, x2{U(rng), p};
    if (x1.v == x2.v) return std::nullopt;
    fpelem f1 = C.f.eval(x1), f2 = C.f.eval(x2);
    if (f1.v == 0 || f2.v == 0) return std::nullopt;
    auto y1 = fp_sqrt(f1), y2 = fp_sqrt(f2);
    if (!y1 || !y2) return std::nullopt;
    if (U(rng) % 2) *y1 = -*y1;
    if (U(rng) % 2) *y2 = -*y2;
    auto d = g2_from_points(C, x1, *y1, x2, *y2);
    auto k = kummer_map(C, d);
    return split_sample{x1, *y1, x2, *y2, k};
}

inline std::vector<fpelem> monomial_row(const std::array<fpelem, 4>& k,
                                        const std::vector<expv>& mons) {
    uint64_t p = k[0].p;
    std::array<std::array<fpelem, 5>, 4> pw;
    for (int j = 0; j < 4; ++j) {
        pw[j][0] = fpelem{1, p};
        for (int e = 1; e <= 4; ++e) pw[j][e] = pw[j][e - 1] * k[(size_t)j];
    }
    std::vector<fpelem> row;
    row.reserve(mons.size());
    for (auto& m : mons)
        row.push_back(pw[0][m.e[0]] * pw[1][m.e[1]] * pw[2][m.e[2]] * pw[3][m.e[3]]);
    return row;
}

inline Int curve_bad_primes(const g2curve<Rat>& C) {
    Int bad(2);
    for (int i = 0; i <= C.f.deg(); ++i) bad *= den(C.f[i]);
    bad *= num(C.f.lead());
    Rat dsc = poly_disc(C.f);
    bad *= num(dsc) * den(dsc);
    return bad;
}

}  // namespace detail

// Interpolate the 21 pairwise products of an anti-invariant basis as quartics
// in the Kummer coordinates, with exact rational coefficients.
inline odd_basis build_odd_basis(const g2curve<Rat>& C, const fibre_options& opt = {}) {
    auto mons = detail::quartic_monomials4();
    const size_t NM = mons.size();
    PRYM_CHECK(NM == 35, "expected 35 quartic monomials");
    size_t inorm = NM;
    for (size_t i = 0; i < NM; ++i)
        if (mons[i].e[0] == 0 && mons[i].e[1] == 2 && mons[i].e[2] == 0 && mons[i].e[3] == 2)
            inorm = i;
    PRYM_CHECK(inorm < NM, "normalization monomial not found");
    mpoly K = kummer_surface_exact(C).K;
    std::vector<Rat> kq(NM);
    for (size_t i = 0; i < NM; ++i) kq[i] = K.coeff(mons[i]);
    PRYM_CHECK(kq[inorm] == 1, "kummer quartic not monic in k2^2 k4^2");
    Int bad = detail::curve_bad_primes(C);
    for (size_t i = 0; i < NM; ++i) bad *= den(kq[i]);
    rng_t rng = make_rng(opt.seed);
    auto good_prime_after = [&](uint64_t q) {
        do {
            q = detail::next_prime_u64(q + 1);
        } while (bad % Int((unsigned long)q) == 0);
        return q;
    };

    std::array<odd_gen, 6> gens = odd_space(C);
    for (auto& g : gens)
        for (auto& row : g.c)
            for (auto& q : row) bad *= den(q);
    uint64_t p0 = good_prime_after(opt.basis_prime - 2);
    g2curve<fpelem> C0 = g2_reduce_curve(C, p0);

    // interpolate the products one prime at a time; each product is pinned by
    // zeroing its k2^2 k4^2 coefficient against the Kummer quartic, so the
    // per-prime results are reductions of fixed rationals and CRT applies.
    const size_t NP = 21;
    std::vector<std::vector<Int>> acc(NP, std::vector<Int>(NM, Int(0)));
    std::vector<std::vector<Rat>> co(NP, std::vector<Rat>(NM));
    Int modulus(1);
    int used = 0;
    bool done = false;
    uint64_t p = opt.interp_prime - 2;
    for (int iter = 0; iter < opt.max_primes && !done; ++iter) {
        p = good_prime_after(p);
        try {
            g2curve<fpelem> Cp = g2_reduce_curve(C, p);
            std::vector<fpelem> kp(NM);
            for (size_t i = 0; i < NM; ++i) kp[i] = fpelem::from_rat(kq[i], p);
            const int N = opt.samples;
            std::vector<detail::split_sample> smp;
            for (int guard = 0; (int)smp.size() < N && guard < 40000; ++guard)
                if (auto s = detail::draw_split_sample(Cp, rng)) smp.push_back(*s);
            if ((int)smp.size() != N) continue;
            matrix<fpelem> A((size_t)N, NM, fpelem{0, p});
            for (int r = 0; r < N; ++r) {
                auto row = detail::monomial_row(smp[(size_t)r].k, mons);
                for (size_t cidx = 0; cidx < NM; ++cidx) A.at((size_t)r, cidx) = row[cidx];
            }
            {
                matrix<fpelem> A2 = A;
                if (kernel_basis(A2).size() != 1) continue;  // samples too special
            }
            std::vector<std::vector<fpelem>> gv(6, std::vector<fpelem>(smp.size(), fpelem{0, p}));
            for (size_t i = 0; i < 6; ++i)
                for (size_t s = 0; s < smp.size(); ++s)
                    gv[i][s] = odd_eval(gens[i], smp[s].x1, smp[s].y1, smp[s].x2, smp[s].y2);
            std::vector<std::vector<Int>> res(NP, std::vector<Int>(NM));
            bool okall = true;
            for (size_t i = 0; i < 6 && okall; ++i)
                for (size_t j = i; j < 6 && okall; ++j) {
                    std::vector<fpelem> rhs(smp.size(), fpelem{0, p});
                    for (size_t s = 0; s < smp.size(); ++s) rhs[s] = gv[i][s] * gv[j][s];
                    auto sol = solve_linear(A, rhs);
                    if (!sol) {
                        okall = false;
                        break;
                    }
                    fpelem lam = (*sol)[inorm];
                    for (size_t m = 0; m < NM; ++m)
                        res[pair_index(i, j)][m] = Int((unsigned long)((*sol)[m] - lam * kp[m]).v);
                }
            if (!okall) continue;
            Int pz((unsigned long)p);
            for (size_t t = 0; t < NP; ++t)
                for (size_t m = 0; m < NM; ++m)
                    acc[t][m] = used == 0 ? res[t][m]
                                          : crt_pair(acc[t][m], modulus, res[t][m], pz).first;
            modulus = used == 0 ? pz : modulus * pz;
            ++used;
            if (used < opt.min_primes) continue;
            bool ok = true;
            for (size_t t = 0; t < NP && ok; ++t)
                for (size_t m = 0; m < NM && ok; ++m) {
                    auto r = rational_reconstruct(acc[t][m], modulus);
                    if (!r)
                        ok = false;
                    else
                        co[t][m] = *r;
                }
            if (!ok) continue;
            // verify the evaluation identity at a fresh prime
            uint64_t q = good_prime_after(p);
            g2curve<fpelem> Cq = g2_reduce_curve(C, q);
            std::vector<std::vector<fpelem>> cq(NP, std::vector<fpelem>(NM, fpelem{0, q}));
            for (size_t t = 0; t < NP; ++t)
                for (size_t m = 0; m < NM; ++m) cq[t][m] = fpelem::from_rat(co[t][m], q);
            bool verified = true;
            int got = 0;
            for (int guard = 0; got < 40 && guard < 40000 && verified; ++guard) {
                auto s = detail::draw_split_sample(Cq, rng);
                if (!s) continue;
                ++got;
                auto row = detail::monomial_row(s->k, mons);
                std::array<fpelem, 6> g6;
                for (size_t i = 0; i < 6; ++i)
                    g6[i] = odd_eval(gens[i], s->x1, s->y1, s->x2, s->y2);
                for (size_t i = 0; i < 6 && verified; ++i)
                    for (size_t j = i; j < 6 && verified; ++j) {
                        fpelem accv{0, q};
                        for (size_t m = 0; m < NM; ++m)
                            accv = accv + cq[pair_index(i, j)][m] * row[m];
                        if (!(accv == g6[i] * g6[j])) verified = false;
                    }
            }
            if (verified && got == 40) done = true;
        } catch (const error&) {
            continue;
        }
    }
    PRYM_CHECK(done, "product interpolation did not stabilize");

    odd_basis B{gens, {}, K, inorm};
    B.products.reserve(NP);
    for (size_t t = 0; t < NP; ++t) {
        mpoly q(4);
        for (size_t m = 0; m < NM; ++m)
            if (co[t][m] != 0) q.add_term(mons[m], co[t][m]);
        B.products.push_back(q);
    }

    // many-class evaluation identity at the selection prime
    {
        int got = 0;
        std::vector<std::vector<fpelem>> cp(NP, std::vector<fpelem>(NM, fpelem{0, p0}));
        for (size_t t = 0; t < NP; ++t)
            for (size_t m = 0; m < NM; ++m) cp[t][m] = fpelem::from_rat(co[t][m], p0);
        for (int guard = 0; got < opt.check_classes && guard < 100 * opt.check_classes; ++guard) {
            auto s = detail::draw_split_sample(C0, rng);
            if (!s) continue;
            ++got;
            auto row = detail::monomial_row(s->k, mons);
            std::array<fpelem, 6> g6;
            for (size_t i = 0; i < 6; ++i) g6[i] = odd_eval(gens[i], s->x1, s->y1, s->x2, s->y2);
            for (size_t i = 0; i < 6; ++i)
                for (size_t j = i; j < 6; ++j) {
                    fpelem accv{0, p0};
                    for (size_t m = 0; m < NM; ++m)
                        accv = accv + cp[pair_index(i, j)][m] * row[m];
                    PRYM_CHECK(accv == g6[i] * g6[j], "product table fails on a sampled class");
                }
        }
        PRYM_CHECK(got == opt.check_classes, "could not sample enough classes for validation");
    }

    // quadratic relations: (g_i g_j)(g_k g_l) = (g_i g_k)(g_j g_l) modulo the
    // surface quartic
    {
        const std::array<std::array<size_t, 4>, 5> quads{
            {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 1, 2, 4}, {1, 3, 4, 5}, {0, 2, 3, 5}}};
        for (auto& qd : quads) {
            mpoly R = B.products[pair_index(qd[0], qd[1])] * B.products[pair_index(qd[2], qd[3])] -
                      B.products[pair_index(qd[0], qd[2])] * B.products[pair_index(qd[1], qd[3])];
            if (R.is_zero()) continue;
            bool divides = true;
            try {
                mpoly Q = R.divexact(K);
                (void)Q;
            } catch (const error&) {
                divides = false;
            }
            PRYM_CHECK(divides, "product table fails the quadratic relations");
        }
    }
    return B;
}

// ---------------------------------------------------------------------------
// Plane sections.

namespace detail {

inline const std::vector<expv>& ternary_quartics() {
    static const std::vector<expv> L = [] {
        std::vector<expv> v;
        for (int a = 4; a >= 0; --a)
            for (int b = 4 - a; b >= 0; --b)
                v.push_back(expv{{(uint8_t)a, (uint8_t)b, (uint8_t)(4 - a - b)}, 3});
        return v;
    }();
    return L;
}

// monomials not divisible by u^2: the obstruction rows of the section system
inline const std::vector<size_t>& section_obstruction_rows() {
    static const std::vector<size_t> L = [] {
        std::vector<size_t> v;
        auto& M = ternary_quartics();
        for (size_t i = 0; i < M.size(); ++i)
            if (M[i].e[0] <= 1) v.push_back(i);
        return v;
    }();
    return L;
}

// substitute k4 = v1 u + v2 v + v3 w, (k1, k2, k3) = (u, v, w)
inline mpoly restrict_quartic(const mpoly& q, const std::array<Rat, 3>& v) {
    PRYM_CHECK(q.nv == 4, "plane restriction wants a 4-variable form");
    mpoly L = mpoly::var(3, 0) * v[0] + mpoly::var(3, 1) * v[1] + mpoly::var(3, 2) * v[2];
    std::vector<mpoly> lp{mpoly::constant(3, Rat(1))};
    for (int i = 1; i <= 4; ++i) lp.push_back(lp.back() * L);
    mpoly out(3);
    for (auto& [e, c] : q.t) {
        mpoly mon(3);
        mon.add_term(expv{{e.e[0], e.e[1], e.e[2]}, 3}, c);
        out = out + mon * lp[e.e[3]];
    }
    return out;
}

}  // namespace detail

// The reconstruction data on the plane k4 = v1 k1 + v2 k2 + v3 k3.  The
// square condition only pins quartics modulo the plane section of the
// surface, so the not-u^2-divisible coefficients are compared against the
// section's through a reference row, leaving eight bilinear equations.
struct plane_data {
    std::array<Rat, 3> v{};
    mpoly section = mpoly(3);     // restricted Kummer quartic
    std::vector<mpoly> products;  // restricted pair products, same indexing
    // coefficients of the not-u^2-divisible monomials of sum a_i a_j g_i g_j,
    // ordered by pair_index with off-diagonal pairs doubled
    std::array<std::array<Rat, 21>, 9> rows{};
    std::array<Rat, 9> kobs{};  // the section's own obstruction coefficients
    size_t ref = 0;             // reference row, kobs[ref] != 0
    // proj[r] = kobs[ref] * rows[r'] - kobs[r'] * rows[ref] over rows r' != ref
    std::array<std::array<Rat, 21>, 8> proj{};
};

inline plane_data restrict_to_plane(const odd_basis& B, const std::array<Rat, 3>& v) {
    plane_data P;
    P.v = v;
    P.section = detail::restrict_quartic(B.surface, v);
    PRYM_CHECK(!P.section.is_zero(), "plane lies on the Kummer surface");
    P.products.reserve(B.products.size());
    for (auto& q : B.products) P.products.push_back(detail::restrict_quartic(q, v));
    auto& tq = detail::ternary_quartics();
    auto& ob = detail::section_obstruction_rows();
    PRYM_CHECK(ob.size() == 9, "expected nine obstruction rows");
    for (size_t i = 0; i < 6; ++i)
        for (size_t j = i; j < 6; ++j) {
            size_t t = pair_index(i, j);
            Rat fold = i == j ? Rat(1) : Rat(2);
            for (size_t r = 0; r < 9; ++r) P.rows[r][t] = P.products[t].coeff(tq[ob[r]]) * fold;
        }
    size_t ref = 9;
    for (size_t r = 0; r < 9; ++r) {
        P.kobs[r] = P.section.coeff(tq[ob[r]]);
        if (ref == 9 && P.kobs[r] != 0) ref = r;
    }
    PRYM_CHECK(ref < 9, "plane section is a square multiple");
    P.ref = ref;
    size_t out = 0;
    for (size_t r = 0; r < 9; ++r) {
        if (r == ref) continue;
        for (size_t t = 0; t < 21; ++t)
            P.proj[out][t] = P.kobs[ref] * P.rows[r][t] - P.kobs[r] * P.rows[ref][t];
        ++out;
    }
    return P;
}

namespace detail {

struct plane_mod_p {
    uint64_t p = 0;
    std::array<std::array<uint64_t, 21>, 8> rows{};
};

inline std::optional<plane_mod_p> reduce_plane(const plane_data& P, uint64_t p) {
    plane_mod_p R;
    R.p = p;
    try {
        for (size_t r = 0; r < 8; ++r)
            for (size_t t = 0; t < 21; ++t) R.rows[r][t] = fpelem::from_rat(P.proj[r][t], p).v;
    } catch (const error&) {
        return std::nullopt;
    }
    return R;
}

// all projective solutions of the nine quadrics over F_p, first nonzero
// coordinate normalized to 1; stops early past `cap` solutions
inline std::vector<std::array<uint64_t, 6>> plane_solutions_fp(const plane_mod_p& T, size_t cap) {
    std::vector<std::array<uint64_t, 6>> sols;
    const uint64_t p = T.p;
    for (int L = 0; L < 6; ++L) {
        std::array<uint64_t, 6> a{};
        a[(size_t)L] = 1;
        size_t nfree = (size_t)(5 - L);
        std::vector<uint64_t> dig(nfree, 0);
        while (true) {
            for (size_t i = 0; i < nfree; ++i) a[(size_t)L + 1 + i] = dig[i];
            uint64_t prod[21];
            {
                size_t t = 0;
                for (size_t i = 0; i < 6; ++i)
                    for (size_t j = i; j < 6; ++j, ++t) prod[t] = a[i] * a[j] % p;
            }
            bool zero = true;
            for (size_t eq = 0; eq < 8 && zero; ++eq) {
                uint64_t acc = 0;
                for (size_t t = 0; t < 21; ++t) acc += T.rows[eq][t] * prod[t];
                if (acc % p != 0) zero = false;
            }
            if (zero) {
                sols.push_back(a);
                if (sols.size() > cap) return sols;
            }
            size_t pos = 0;
            while (pos < nfree && ++dig[pos] == p) {
                dig[pos] = 0;
                ++pos;
            }
            if (pos == nfree) break;
        }
    }
    return sols;
}

}  // namespace detail

// Number of F_p points of the locus of coefficient vectors whose square
// restricts to a multiple of u^2 on the plane; nullopt at bad primes.
inline std::optional<size_t> section_locus_count(const plane_data& P, uint64_t p,
                                                 size_t cap = 6) {
    auto R = detail::reduce_plane(P, p);
    if (!R) return std::nullopt;
    return detail::plane_solutions_fp(*R, cap).size();
}

// ---------------------------------------------------------------------------
// Newton lifting of the section locus and rational reconstruction.

namespace detail {

inline Int int_pow_u(uint64_t p, int e) {
    Int r(1), b((unsigned long)p);
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

inline std::optional<Int> mod_inv_opt(const Int& a, const Int& m) {
    Int r;
    if (!mpz_invert(r.get_mpz_t(), mod_pos(a, m).get_mpz_t(), m.get_mpz_t()))
        return std::nullopt;
    return r;
}

inline std::optional<Int> rat_mod_pk(const Rat& q, const Int& m) {
    auto di = mod_inv_opt(den(q), m);
    if (!di) return std::nullopt;
    return mod_pos(num(q) * *di, m);
}

struct plane_mod_pk {
    uint64_t p = 0;
    Int P;
    std::array<std::array<Int, 21>, 8> rows;
};

inline std::optional<plane_mod_pk> reduce_plane_pk(const plane_data& Pd, uint64_t p, int e) {
    plane_mod_pk R;
    R.p = p;
    R.P = int_pow_u(p, e);
    for (size_t r = 0; r < 8; ++r)
        for (size_t t = 0; t < 21; ++t) {
            auto v = rat_mod_pk(Pd.proj[r][t], R.P);
            if (!v) return std::nullopt;
            R.rows[r][t] = *v;
        }
    return R;
}

inline Int plane_residual(const plane_mod_pk& T, size_t eq, const std::array<Int, 6>& a,
                          const Int& M) {
    Int acc(0);
    size_t t = 0;
    for (size_t i = 0; i < 6; ++i)
        for (size_t j = i; j < 6; ++j, ++t) acc += T.rows[eq][t] * a[i] * a[j];
    return mod_pos(acc, M);
}

inline Int plane_jacobian(const plane_mod_pk& T, size_t eq, size_t m, const std::array<Int, 6>& a,
                          const Int& M) {
    Int acc = T.rows[eq][pair_index(m, m)] * a[m] * 2;
    for (size_t j = 0; j < 6; ++j)
        if (j != m) acc += T.rows[eq][pair_index(m, j)] * a[j];
    return mod_pos(acc, M);
}

// Gaussian elimination with unit pivots over Z/p^k
inline std::optional<std::vector<Int>> solve_unit_pk(std::vector<std::vector<Int>> A,
                                                     std::vector<Int> b, const Int& M,
                                                     uint64_t p) {
    const size_t n = A.size();
    Int pz((unsigned long)p);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = n;
        for (size_t r = col; r < n; ++r)
            if (A[r][col] % pz != 0) {
                piv = r;
                break;
            }
        if (piv == n) return std::nullopt;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        auto iv = mod_inv_opt(A[col][col], M);
        if (!iv) return std::nullopt;
        for (size_t c2 = col; c2 < n; ++c2) A[col][c2] = mod_pos(A[col][c2] * *iv, M);
        b[col] = mod_pos(b[col] * *iv, M);
        for (size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col] == 0) continue;
            Int f = A[r][col];
            for (size_t c2 = col; c2 < n; ++c2) A[r][c2] = mod_pos(A[r][c2] - f * A[col][c2], M);
            b[r] = mod_pos(b[r] - f * b[col], M);
        }
    }
    return b;
}

// lift a smooth F_p point of the plane system to Z/p^e along the slice that
// keeps the leading chart coordinate at 1 and coordinate mfix frozen; on the
// solution line such a slice point is simple, so four of the eight equations
// have independent differentials in the four remaining coordinates
inline std::optional<std::array<Int, 6>> lift_line_point(const plane_data& Pd, uint64_t p,
                                                         int e,
                                                         const std::array<uint64_t, 6>& a0,
                                                         size_t mfix) {
    int L = 0;
    while (L < 6 && a0[(size_t)L] == 0) ++L;
    if (L == 6 || a0[(size_t)L] != 1 || mfix == (size_t)L) return std::nullopt;
    std::array<size_t, 4> un{};
    {
        size_t t = 0;
        for (size_t i = 0; i < 6; ++i)
            if ((int)i != L && i != mfix) un[t++] = i;
    }
    auto top = reduce_plane_pk(Pd, p, e);
    if (!top) return std::nullopt;
    std::array<Int, 6> a;
    for (size_t i = 0; i < 6; ++i) a[i] = Int((unsigned long)a0[i]);
    // pick four equations with independent differentials at the slice point
    std::vector<size_t> rows;
    {
        Int pz((unsigned long)p);
        std::vector<std::vector<fpelem>> jr;
        for (size_t eq = 0; eq < 8 && rows.size() < 4; ++eq) {
            std::vector<fpelem> row(4, fpelem{0, p});
            for (size_t m = 0; m < 4; ++m)
                row[m] = fpelem{mod_pos(plane_jacobian(*top, eq, un[m], a, top->P), pz).get_ui(),
                                p};
            std::vector<std::vector<fpelem>> trial = jr;
            trial.push_back(row);
            matrix<fpelem> M(trial.size(), 4, fpelem{0, p});
            for (size_t r = 0; r < trial.size(); ++r)
                for (size_t c = 0; c < 4; ++c) M.at(r, c) = trial[r][c];
            if (rank(M) == trial.size()) {
                jr = trial;
                rows.push_back(eq);
            }
        }
        if (rows.size() != 4) return std::nullopt;
    }
    int k = 1;
    while (k < e) {
        int k2 = std::min(2 * k, e);
        Int M = int_pow_u(p, k2);
        std::vector<std::vector<Int>> J(4, std::vector<Int>(4));
        std::vector<Int> rhs(4);
        for (size_t r = 0; r < 4; ++r) {
            for (size_t c = 0; c < 4; ++c) J[r][c] = plane_jacobian(*top, rows[r], un[c], a, M);
            rhs[r] = mod_pos(-plane_residual(*top, rows[r], a, M), M);
        }
        auto dl = solve_unit_pk(J, rhs, M, p);
        if (!dl) return std::nullopt;
        for (size_t c = 0; c < 4; ++c) a[un[c]] = mod_pos(a[un[c]] + (*dl)[c], M);
        k = k2;
    }
    for (size_t eq = 0; eq < 8; ++eq)
        if (plane_residual(*top, eq, a, top->P) != 0) return std::nullopt;
    return a;
}

// the two conjugate solutions encoded symmetrically: a_i = c_i + d_i z with
// z^2 - s z + n = 0 at a chart where both solutions are units
struct conjugate_pair {
    uint64_t p = 0;
    Int P;
    Int s, n;
    std::array<Int, 6> c{}, d{};
};

inline std::optional<conjugate_pair> pair_data(const plane_data& Pd, uint64_t p, int e,
                                               const std::array<uint64_t, 6>& s1,
                                               const std::array<uint64_t, 6>& s2) {
    auto A1o = lift_plane_solution(Pd, p, e, s1);
    auto A2o = lift_plane_solution(Pd, p, e, s2);
    if (!A1o || !A2o) return std::nullopt;
    auto A1 = *A1o, A2 = *A2o;
    Int P = int_pow_u(p, e), pz((unsigned long)p);
    int ch = -1;
    for (int i = 0; i < 6 && ch < 0; ++i)
        if (A1[(size_t)i] % pz != 0 && A2[(size_t)i] % pz != 0) ch = i;
    if (ch < 0) return std::nullopt;
    auto u1 = mod_inv_opt(A1[(size_t)ch], P), u2 = mod_inv_opt(A2[(size_t)ch], P);
    if (!u1 || !u2) return std::nullopt;
    for (size_t i = 0; i < 6; ++i) {
        A1[i] = mod_pos(A1[i] * *u1, P);
        A2[i] = mod_pos(A2[i] * *u2, P);
    }
    int tv = -1;
    for (int i = 0; i < 6 && tv < 0; ++i)
        if ((A1[(size_t)i] - A2[(size_t)i]) % pz != 0) tv = i;
    if (tv < 0) return std::nullopt;
    auto w = mod_inv_opt(A1[(size_t)tv] - A2[(size_t)tv], P);
    if (!w) return std::nullopt;
    conjugate_pair out;
    out.p = p;
    out.P = P;
    out.s = mod_pos(A1[(size_t)tv] + A2[(size_t)tv], P);
    out.n = mod_pos(A1[(size_t)tv] * A2[(size_t)tv], P);
    for (size_t i = 0; i < 6; ++i) {
        out.d[i] = mod_pos((A1[i] - A2[i]) * *w, P);
        out.c[i] = mod_pos(A1[i] - out.d[i] * A1[(size_t)tv], P);
    }
    return out;
}

}  // namespace detail

// The pair of conjugate quadric sections, over Q: coefficient vectors
// a = alpha +- beta sqrt(e).
struct square_sections {
    Rat e;
    Rat s, n;
    std::array<Rat, 6> alpha{}, beta{};
};

namespace detail {

inline std::optional<square_sections> reconstruct_pair(const plane_data& Pd,
                                                       const conjugate_pair& cp) {
    auto rec = [&](const Int& x) { return rational_reconstruct(x, cp.P); };
    auto so = rec(cp.s), no = rec(cp.n);
    if (!so || !no) return std::nullopt;
    std::array<Rat, 6> c, d;
    for (size_t i = 0; i < 6; ++i) {
        auto ci = rec(cp.c[i]), di = rec(cp.d[i]);
        if (!ci || !di) return std::nullopt;
        c[i] = *ci;
        d[i] = *di;
    }
    Rat D = *so * *so - Rat(4) * *no;
    if (D == 0) return std::nullopt;
    Int ef = squarefree_part(num(D) * den(D));
    Rat e{ef};
    auto m = sqrt_rat(D / e);
    if (!m) return std::nullopt;
    square_sections S;
    S.e = e;
    S.s = *so;
    S.n = *no;
    for (size_t i = 0; i < 6; ++i) {
        S.alpha[i] = c[i] + d[i] * *so / 2;
        S.beta[i] = d[i] * *m / 2;
    }
    // exact check of the eight equations in Q(sqrt(e))
    std::array<quadext<Rat>, 6> av{
        quadext<Rat>{S.alpha[0], S.beta[0], e}, quadext<Rat>{S.alpha[1], S.beta[1], e},
        quadext<Rat>{S.alpha[2], S.beta[2], e}, quadext<Rat>{S.alpha[3], S.beta[3], e},
        quadext<Rat>{S.alpha[4], S.beta[4], e}, quadext<Rat>{S.alpha[5], S.beta[5], e}};
    for (size_t eq = 0; eq < 8; ++eq) {
        quadext<Rat> acc{Rat(0), Rat(0), e};
        size_t t = 0;
        for (size_t i = 0; i < 6; ++i)
            for (size_t j = i; j < 6; ++j, ++t)
                acc = acc + av[i] * av[j] * quadext<Rat>::embed(Pd.proj[eq][t], e);
        if (!dom<quadext<Rat>>::is_zero(acc)) return std::nullopt;
    }
    return S;
}

inline symmat<Rat> conic_form(const mpoly& q) {
    PRYM_CHECK(q.nv == 3, "conic extraction wants 3 variables");
    for (auto& [m, cf] : q.t)
        PRYM_CHECK(m.e[0] + m.e[1] + m.e[2] == 2, "not a conic");
    auto cf = [&](int a, int b, int c) {
        return q.coeff(expv{{(uint8_t)a, (uint8_t)b, (uint8_t)c}, 3});
    };
    return ternary_form({cf(2, 0, 0), cf(1, 1, 0), cf(1, 0, 1), cf(0, 2, 0), cf(0, 1, 1),
                         cf(0, 0, 2)});
}

inline mpoly quotient_u2(const mpoly& q) {
    mpoly out(3);
    for (auto& [m, c] : q.t) {
        PRYM_CHECK(m.e[0] >= 2, "form not divisible by u^2");
        out.add_term(expv{{(uint8_t)(m.e[0] - 2), m.e[1], m.e[2]}, 3}, c);
    }
    return out;
}

inline bool obstruction_free(const mpoly& q) {
    auto& tq = ternary_quartics();
    for (size_t idx : section_obstruction_rows())
        if (q.coeff(tq[idx]) != 0) return false;
    return true;
}

}  // namespace detail

struct recovered_pencil {
    quad_triple T;
    Rat mu;  // Q1 Q3 - Q2^2 = mu * section
};

// Assemble the conic pencil from the pair of square sections: the two members
// that cut squares sit at the pencil parameters 0 and infinity, and their
// product pins the middle coefficient.
inline recovered_pencil assemble_pencil(const plane_data& Pd, const square_sections& S) {
    auto bil = [&](const std::array<Rat, 6>& x, const std::array<Rat, 6>& y) {
        mpoly out(3);
        for (size_t i = 0; i < 6; ++i)
            for (size_t j = i; j < 6; ++j) {
                Rat cf = i == j ? Rat(x[i] * y[i]) : Rat(x[i] * y[j] + x[j] * y[i]);
                if (cf != 0) out = out + Pd.products[pair_index(i, j)] * cf;
            }
        return out;
    };
    // each combination is u^2 times a conic only up to a multiple of the
    // section quartic: remove that multiple via the reference coefficient
    auto& tq = detail::ternary_quartics();
    const expv& m0 = tq[detail::section_obstruction_rows()[Pd.ref]];
    auto normalize = [&](const mpoly& q) {
        mpoly qc = q - Pd.section * (q.coeff(m0) / Pd.section.coeff(m0));
        PRYM_CHECK(detail::obstruction_free(qc),
                   "combination is not a section multiple away from divisibility");
        return detail::quotient_u2(qc);
    };
    mpoly qa = normalize(bil(S.alpha, S.alpha) + bil(S.beta, S.beta) * S.e);
    mpoly qb = normalize(bil(S.alpha, S.beta) * Rat(2));
    mpoly qm = normalize(bil(S.alpha, S.alpha) - bil(S.beta, S.beta) * S.e);
    mpoly p1 = (qa + qm) * Rat(2);
    mpoly p2 = qb * Rat(2);
    mpoly p3 = (qa - qm) * (Rat(2) / S.e);
    quad_triple T{detail::conic_form(p1), detail::conic_form(p2), detail::conic_form(p3)};
    mpoly R = triple_quartic(T);
    PRYM_CHECK(!R.is_zero(), "degenerate recovered pencil");
    auto it = Pd.section.t.begin();
    Rat mu = R.coeff(it->first) / it->second;
    mpoly diff = R - Pd.section * mu;
    PRYM_CHECK(mu != 0 && diff.is_zero(), "recovered conics do not satisfy the pencil identity");
    return {T, mu};
}

// ---------------------------------------------------------------------------
// Frame alignment: Moebius equivalence of binary sextics.

struct mobius {
    Rat a, b, c, d;
    Rat det() const { return a * d - b * c; }
};

// substitute x -> (a x + b)/(c x + d) into the pencil, clearing (c x + d)^2
inline quad_triple transform_pencil(const quad_triple& T, const mobius& m) {
    auto comb = [&](const Rat& x, const Rat& y, const Rat& z) {
        return T.Q1.scaled(x) + T.Q2.scaled(y) + T.Q3.scaled(z);
    };
    return quad_triple{comb(m.d * m.d, Rat(2) * m.b * m.d, m.b * m.b),
                       comb(m.c * m.d, m.a * m.d + m.b * m.c, m.a * m.b),
                       comb(m.c * m.c, Rat(2) * m.a * m.c, m.a * m.a)};
}

namespace detail {

template <class T>
std::vector<T> conv_vec(const std::vector<T>& u, const std::vector<T>& v, const T& zero) {
    std::vector<T> r(u.size() + v.size() - 1, zero);
    for (size_t i = 0; i < u.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) r[i + j] = r[i + j] + u[i] * v[j];
    return r;
}

// coefficients of sum_j s_j (a X + b)^j (c X + d)^(6-j) by X-degree
template <class T>
std::array<T, 7> substitute_sextic(const std::array<T, 7>& s, const T& a, const T& b, const T& c,
                                   const T& d, const T& one, const T& zero) {
    std::vector<std::vector<T>> p1(7), p2(7);
    p1[0] = {one};
    p2[0] = {one};
    std::vector<T> l1{b, a}, l2{d, c};
    for (int j = 1; j <= 6; ++j) {
        p1[(size_t)j] = conv_vec(p1[(size_t)j - 1], l1, zero);
        p2[(size_t)j] = conv_vec(p2[(size_t)j - 1], l2, zero);
    }
    std::array<T, 7> out;
    out.fill(zero);
    for (int j = 0; j <= 6; ++j) {
        auto t = conv_vec(p1[(size_t)j], p2[(size_t)(6 - j)], zero);
        for (int k = 0; k <= 6; ++k) out[(size_t)k] = out[(size_t)k] + t[(size_t)k] * s[(size_t)j];
    }
    return out;
}

// derivatives of the substituted coefficients with respect to (a, b, c, d)
template <class T>
std::array<std::array<T, 7>, 4> substitute_sextic_jac(const std::array<T, 7>& s, const T& a,
                                                      const T& b, const T& c, const T& d,
                                                      const T& one, const T& zero) {
    std::vector<std::vector<T>> p1(7), p2(7);
    p1[0] = {one};
    p2[0] = {one};
    std::vector<T> l1{b, a}, l2{d, c};
    for (int j = 1; j <= 6; ++j) {
        p1[(size_t)j] = conv_vec(p1[(size_t)j - 1], l1, zero);
        p2[(size_t)j] = conv_vec(p2[(size_t)j - 1], l2, zero);
    }
    auto shift = [&](std::vector<T> v) {
        v.insert(v.begin(), zero);
        return v;
    };
    std::array<std::array<T, 7>, 4> out;
    for (auto& o : out) o.fill(zero);
    auto addin = [&](std::array<T, 7>& o, const std::vector<T>& t, const T& cf) {
        for (size_t k = 0; k < t.size() && k < 7; ++k) o[k] = o[k] + t[k] * cf;
    };
    for (int j = 0; j <= 6; ++j) {
        T sj = s[(size_t)j];
        T jf = zero;
        for (int r = 0; r < j; ++r) jf = jf + one;
        T mj = zero;
        for (int r = 0; r < 6 - j; ++r) mj = mj + one;
        if (j >= 1) {
            auto base = conv_vec(p1[(size_t)j - 1], p2[(size_t)(6 - j)], zero);
            addin(out[0], shift(base), sj * jf);  // d/da
            addin(out[1], base, sj * jf);         // d/db
        }
        if (j <= 5) {
            auto base = conv_vec(p1[(size_t)j], p2[(size_t)(5 - j)], zero);
            addin(out[2], shift(base), sj * mj);  // d/dc
            addin(out[3], base, sj * mj);         // d/dd
        }
    }
    return out;
}

inline std::array<Rat, 7> sextic_vec(const upoly<Rat>& f) {
    PRYM_CHECK(f.deg() >= 0 && f.deg() <= 6, "expected a binary sextic");
    std::array<Rat, 7> s{};
    for (int i = 0; i <= f.deg(); ++i) s[(size_t)i] = f[i];
    return s;
}

struct pgl_candidate {
    int chart = 0;  // 0: a = 1 free (b, c, d); 1: a = 0, b = 1 free (c, d)
    uint64_t b = 0, c = 0, d = 0;
};

inline std::optional<mobius> lift_equivalence(const std::array<Rat, 7>& s,
                                              const std::array<Rat, 7>& t, uint64_t p, int e,
                                              const pgl_candidate& sol) {
    Int P = int_pow_u(p, e), pz((unsigned long)p);
    std::array<Int, 7> sm, tm;
    for (size_t i = 0; i < 7; ++i) {
        auto a = rat_mod_pk(s[i], P), b = rat_mod_pk(t[i], P);
        if (!a || !b) return std::nullopt;
        sm[i] = *a;
        tm[i] = *b;
    }
    size_t lq = 7;
    for (size_t i = 0; i < 7; ++i)
        if (t[i] != 0 && tm[i] % pz != 0) {
            lq = i;
            break;
        }
    if (lq == 7) return std::nullopt;
    // parameters (a, b, c, d) with the chart coordinate frozen
    std::array<Int, 4> par{Int(sol.chart == 0 ? 1 : 0), Int(sol.chart == 0 ? sol.b : 1),
                           Int((unsigned long)sol.c), Int((unsigned long)sol.d)};
    std::vector<size_t> un = sol.chart == 0 ? std::vector<size_t>{1, 2, 3}
                                            : std::vector<size_t>{2, 3};
    const size_t nu = un.size();
    auto resid_jac = [&](const Int& M, std::vector<Int>& R,
                         std::vector<std::vector<Int>>& J, const std::vector<size_t>& rows) {
        auto X = substitute_sextic<Int>(sm, par[0], par[1], par[2], par[3], Int(1), Int(0));
        auto D = substitute_sextic_jac<Int>(sm, par[0], par[1], par[2], par[3], Int(1), Int(0));
        R.assign(rows.size(), Int(0));
        J.assign(rows.size(), std::vector<Int>(nu, Int(0)));
        for (size_t r = 0; r < rows.size(); ++r) {
            size_t k = rows[r];
            R[r] = mod_pos(X[k] * tm[lq] - X[lq] * tm[k], M);
            for (size_t m = 0; m < nu; ++m)
                J[r][m] = mod_pos(D[un[m]][k] * tm[lq] - D[un[m]][lq] * tm[k], M);
        }
    };
    // pick nu independent rows mod p
    std::vector<size_t> rows;
    {
        std::vector<size_t> all;
        for (size_t k = 0; k < 7; ++k)
            if (k != lq) all.push_back(k);
        std::vector<Int> R;
        std::vector<std::vector<Int>> J;
        resid_jac(pz, R, J, all);
        std::vector<std::vector<fpelem>> jr;
        for (size_t r = 0; r < all.size() && rows.size() < nu; ++r) {
            if (R[r] % pz != 0) return std::nullopt;  // not a solution mod p
            std::vector<fpelem> row(nu, fpelem{0, p});
            for (size_t m = 0; m < nu; ++m) row[m] = fpelem{mod_pos(J[r][m], pz).get_ui(), p};
            std::vector<std::vector<fpelem>> trial = jr;
            trial.push_back(row);
            matrix<fpelem> M(trial.size(), nu, fpelem{0, p});
            for (size_t rr = 0; rr < trial.size(); ++rr)
                for (size_t cc = 0; cc < nu; ++cc) M.at(rr, cc) = trial[rr][cc];
            if (rank(M) == trial.size()) {
                jr = trial;
                rows.push_back(all[r]);
            }
        }
        if (rows.size() != nu) return std::nullopt;
    }
    int k = 1;
    while (k < e) {
        int k2 = std::min(2 * k, e);
        Int M = int_pow_u(p, k2);
        std::vector<Int> R;
        std::vector<std::vector<Int>> J;
        resid_jac(M, R, J, rows);
        for (auto& r : R) r = mod_pos(-r, M);
        auto dl = solve_unit_pk(J, R, M, p);
        if (!dl) return std::nullopt;
        for (size_t m = 0; m < nu; ++m) par[un[m]] = mod_pos(par[un[m]] + (*dl)[m], M);
        k = k2;
    }
    // reconstruct and verify exactly
    std::array<Rat, 4> pq{Rat(sol.chart == 0 ? 1 : 0), Rat(sol.chart == 0 ? 0 : 1), Rat(0),
                          Rat(0)};
    if (sol.chart == 0) {
        auto b = rational_reconstruct(par[1], P);
        if (!b) return std::nullopt;
        pq[1] = *b;
    }
    for (size_t m = 0; m < 2; ++m) {
        auto x = rational_reconstruct(par[2 + m], P);
        if (!x) return std::nullopt;
        pq[2 + m] = *x;
    }
    mobius out{pq[0], pq[1], pq[2], pq[3]};
    if (out.det() == 0) return std::nullopt;
    auto X = substitute_sextic<Rat>(s, out.a, out.b, out.c, out.d, Rat(1), Rat(0));
    for (size_t i = 0; i < 7; ++i)
        for (size_t j = 0; j < 7; ++j)
            if (X[i] * t[j] != X[j] * t[i]) return std::nullopt;
    bool nz = false;
    for (size_t i = 0; i < 7; ++i)
        if (X[i] != 0) nz = true;
    if (!nz) return std::nullopt;
    return out;
}

}  // namespace detail

struct equivalence_options {
    std::vector<uint64_t> primes = {13, 17, 19, 23, 29, 31, 37, 43};
    int lift_exp = 32;
    int max_lift_exp = 512;
    size_t max_solutions = 12;
};

// Find a rational Moebius substitution carrying the binary sextic src to a
// nonzero multiple of dst, if one exists.
inline std::optional<mobius> binary_form_equivalence(const upoly<Rat>& src,
                                                     const upoly<Rat>& dst,
                                                     const equivalence_options& opt = {}) {
    auto s = detail::sextic_vec(src), t = detail::sextic_vec(dst);
    {
        bool prop = true;
        for (size_t i = 0; i < 7 && prop; ++i)
            for (size_t j = 0; j < 7 && prop; ++j)
                if (s[i] * t[j] != s[j] * t[i]) prop = false;
        if (prop) return mobius{Rat(1), Rat(0), Rat(0), Rat(1)};
    }
    Int bad(1);
    for (size_t i = 0; i < 7; ++i) bad *= den(s[i]) * den(t[i]);
    for (uint64_t p : opt.primes) {
        if (bad % Int((unsigned long)p) == 0) continue;
        std::array<fpelem, 7> sp, tp;
        bool zs = true, zt = true;
        for (size_t i = 0; i < 7; ++i) {
            sp[i] = fpelem::from_rat(s[i], p);
            tp[i] = fpelem::from_rat(t[i], p);
            if (sp[i].v) zs = false;
            if (tp[i].v) zt = false;
        }
        if (zs || zt) continue;
        size_t lp = 0;
        while (tp[lp].v == 0) ++lp;
        std::vector<detail::pgl_candidate> cands;
        bool toomany = false;
        auto consider = [&](int chart, uint64_t b, uint64_t c, uint64_t d) {
            fpelem a{chart == 0 ? 1ull : 0ull, p};
            fpelem bb{chart == 0 ? b : 1ull, p}, cc{c, p}, dd{d, p};
            if ((a * dd - bb * cc).v == 0) return;
            auto X = detail::substitute_sextic<fpelem>({sp[0], sp[1], sp[2], sp[3], sp[4], sp[5],
                                                        sp[6]},
                                                       a, bb, cc, dd, fpelem{1, p}, fpelem{0, p});
            if (X[lp].v == 0) return;
            fpelem r = X[lp] / tp[lp];
            for (size_t k = 0; k < 7; ++k)
                if (!(X[k] == r * tp[k])) return;
            cands.push_back({chart, b, c, d});
            if (cands.size() > opt.max_solutions) toomany = true;
        };
        for (uint64_t b = 0; b < p && !toomany; ++b)
            for (uint64_t c = 0; c < p && !toomany; ++c)
                for (uint64_t d = 0; d < p && !toomany; ++d) consider(0, b, c, d);
        for (uint64_t c = 1; c < p && !toomany; ++c)
            for (uint64_t d = 0; d < p && !toomany; ++d) consider(1, 0, c, d);
        if (toomany || cands.empty()) continue;
        for (auto& cand : cands)
            for (int e = opt.lift_exp; e <= opt.max_lift_exp; e *= 2)
                if (auto m = detail::lift_equivalence(s, t, p, e, cand)) return m;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Full reconstruction.

struct recover_options {
    std::vector<uint64_t> scan_primes = {11, 13, 17, 19, 23, 29, 31, 37, 41};
    int lift_exp = 48;
    int max_lift_exp = 768;
    equivalence_options frame;
};

struct recovered_cover {
    quad_triple raw;    // pencil with the two square members at the ends
    quad_triple model;  // frame aligned with the input curve
    mobius frame;       // substitution connecting raw to model
    Rat scale;          // f = scale * pencil_det(model)
    Rat delta;          // -delta * pencil_det(model) = f * (nonzero square)
    Rat e;              // square class of the pair of square sections
    Rat mu;             // pencil identity multiplier against the section
    mpoly section;      // restricted Kummer quartic
    uint64_t prime;     // split prime used for the reconstruction
};

namespace detail {

// scale all three forms by one rational making the coefficients coprime
// integers
inline quad_triple primitive_triple(const quad_triple& T) {
    Int l(1), g(0);
    auto visit = [&](const symmat<Rat>& Q) {
        for (auto& c : form_coeffs(Q)) l = lcm(l, den(c));
    };
    visit(T.Q1);
    visit(T.Q2);
    visit(T.Q3);
    auto visit2 = [&](const symmat<Rat>& Q) {
        for (auto& c : form_coeffs(Q)) g = gcd(g, num(c * Rat(l)));
    };
    visit2(T.Q1);
    visit2(T.Q2);
    visit2(T.Q3);
    if (g == 0) g = 1;
    Rat sc = Rat(l) / Rat(g);
    return quad_triple{T.Q1.scaled(sc), T.Q2.scaled(sc), T.Q3.scaled(sc)};
}

}  // namespace detail

// Recover the conic pencil of the curve from the plane section determined by
// v: locate the conjugate pair of square sections, assemble the pencil, and
// align its frame with the given model of the curve.
inline recovered_cover recover_quadrics(const g2curve<Rat>& C, const std::array<Rat, 3>& v,
                                        const odd_basis& B, const recover_options& opt = {}) {
    plane_data Pd = restrict_to_plane(B, v);
    std::optional<square_sections> Sq;
    uint64_t used_p = 0;
    for (uint64_t p : opt.scan_primes) {
        auto red = detail::reduce_plane(Pd, p);
        if (!red) continue;
        auto sols = detail::plane_solutions_fp(*red, 4);
        if (sols.size() != 2) continue;
        for (int e = opt.lift_exp; e <= opt.max_lift_exp && !Sq; e *= 2) {
            auto cp = detail::pair_data(Pd, p, e, sols[0], sols[1]);
            if (!cp) break;
            Sq = detail::reconstruct_pair(Pd, *cp);
        }
        if (Sq) {
            used_p = p;
            break;
        }
    }
    PRYM_CHECK(Sq.has_value(), "no split prime yielded the pair of square sections");
    recovered_pencil rp = assemble_pencil(Pd, *Sq);
    upoly<Rat> pd = pencil_det(rp.T);
    PRYM_CHECK(pd.deg() >= 1, "degenerate pencil determinant");
    auto M = binary_form_equivalence(pd, C.f, opt.frame);
    PRYM_CHECK(M.has_value(), "recovered pencil is not equivalent to the curve");
    quad_triple model = detail::primitive_triple(transform_pencil(rp.T, *M));
    upoly<Rat> pd2 = pencil_det(model);
    PRYM_CHECK(pd2.deg() == C.f.deg(), "aligned pencil has the wrong determinant degree");
    Rat scale = C.f.lead() / pd2.lead();
    for (int i = 0; i <= C.f.deg(); ++i)
        PRYM_CHECK(C.f[i] == pd2[i] * scale, "aligned pencil determinant mismatch");
    Rat ms = -scale;
    Rat delta{squarefree_part(num(ms) * den(ms))};
    auto sq = sqrt_rat(-delta / scale);
    PRYM_CHECK(sq.has_value(), "twist bookkeeping failed");
    return recovered_cover{rp.T,      model, *M,    scale,   delta,
                           Sq->e,     rp.mu, Pd.section, used_p};
}

// ---------------------------------------------------------------------------
// Symmetric determinantal models.

struct fdet_options {
    int max_attempts = 40;
    uint64_t seed = 20260822;
    fibre_options basis;
    recover_options recover;
};

struct fdet_result {
    matrix<Rat> m1, m2, m3;
    recovered_cover cover;
};

// Express a squarefree quintic or sextic exactly as det(M1 + x M2 + x^2 M3)
// with symmetric rational 3x3 matrices.
inline fdet_result fdet(const upoly<Rat>& f, const fdet_options& opt = {}) {
    g2curve<Rat> C = make_g2(f);
    odd_basis B = build_odd_basis(C, opt.basis);
    rng_t rng = make_rng(opt.seed);
    long H = 3;
    for (int att = 0; att < opt.max_attempts; ++att) {
        if (att > 0 && att % 6 == 0) H += 2;
        std::uniform_int_distribution<long> U(-H, H);
        std::array<Rat, 3> v{Rat(U(rng)), Rat(U(rng)), Rat(U(rng))};
        if (v[0] == 0 && v[1] == 0 && v[2] == 0) continue;
        try {
            recovered_cover rc = recover_quadrics(C, v, B, opt.recover);
            // absorb the determinant scale into the first row and column
            const Rat& c = rc.scale;
            auto fix = [&](const symmat<Rat>& Q) {
                matrix<Rat> N = Q.M;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) {
                        if (i == 0 && j == 0)
                            N.at(i, j) = N.at(i, j) / c;
                        else if (i > 0 && j > 0)
                            N.at(i, j) = N.at(i, j) * c;
                    }
                return N;
            };
            fdet_result out{fix(rc.model.Q1), fix(rc.model.Q2.scaled(Rat(2))),
                            fix(rc.model.Q3), rc};
            auto ent = [&](int i, int j) {
                upoly<Rat> e{Rat(0)};
                e.set(0, out.m1.at((size_t)i, (size_t)j));
                e.set(1, out.m2.at((size_t)i, (size_t)j));
                e.set(2, out.m3.at((size_t)i, (size_t)j));
                return e;
            };
            auto a = ent(0, 0), b = ent(0, 1), cc = ent(0, 2);
            auto d = ent(1, 1), ee = ent(1, 2), ff = ent(2, 2);
            upoly<Rat> dd = a * (d * ff - ee * ee) - b * (b * ff - ee * cc) +
                            cc * (b * ee - d * cc);
            PRYM_CHECK(dd.deg() == f.deg(), "determinant identity has the wrong degree");
            bool same = true;
            for (int i = 0; i <= f.deg(); ++i)
                if (dd[i] != f[i]) same = false;
            PRYM_CHECK(same, "determinant identity failed");
            return out;
        } catch (const error&) {
            continue;
        }
    }
    throw error("no plane produced a determinant model");
}

}  // namespace prym

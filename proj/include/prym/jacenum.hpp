#pragma once
#include <unordered_map>
#include <unordered_set>

#include "prym/fppoly.hpp"
#include "prym/genus2.hpp"
#include "prym/zfuncs.hpp"

namespace prym {

// Quadratic extension F_p(t), t^2 = nr (a fixed non-residue mod p).
struct fq2 {
    uint64_t a = 0, b = 0;  // a + b t
    uint64_t p = 0, nr = 0;
};

inline uint64_t fq2_nonresidue(uint64_t p) {
    for (uint64_t z = 2; z < p; ++z)
        if (legendre(fpelem{z, p}) == -1) return z;
    PRYM_CHECK(false, "no quadratic non-residue found");
    return 0;
}

inline fq2 fq2_make(uint64_t a, uint64_t b, uint64_t p, uint64_t nr) { return fq2{a % p, b % p, p, nr}; }

inline fq2 operator+(const fq2& x, const fq2& y) { return fq2{(x.a + y.a) % x.p, (x.b + y.b) % x.p, x.p, x.nr}; }
inline fq2 operator-(const fq2& x, const fq2& y) {
    return fq2{(x.a + x.p - y.a) % x.p, (x.b + x.p - y.b) % x.p, x.p, x.nr};
}
inline fq2 operator*(const fq2& x, const fq2& y) {
    auto mul = [&](uint64_t u, uint64_t v) { return (uint64_t)(((__uint128_t)u * v) % x.p); };
    uint64_t a = (mul(x.a, y.a) + mul(mul(x.b, y.b), x.nr)) % x.p;
    uint64_t b = (mul(x.a, y.b) + mul(x.b, y.a)) % x.p;
    return fq2{a, b, x.p, x.nr};
}
inline bool fq2_is_zero(const fq2& x) { return x.a == 0 && x.b == 0; }
inline fq2 fq2_conj(const fq2& x) { return fq2{x.a, (x.p - x.b) % x.p, x.p, x.nr}; }
// Norm to F_p: x * conj(x) = a^2 - nr b^2.
inline uint64_t fq2_norm(const fq2& x) {
    __uint128_t a2 = (__uint128_t)x.a * x.a % x.p;
    __uint128_t b2 = (__uint128_t)x.b * x.b % x.p;
    __uint128_t nb2 = b2 * x.nr % x.p;
    return (uint64_t)((a2 + x.p - (uint64_t)nb2) % x.p);
}
inline fq2 fq2_inv(const fq2& x) {
    PRYM_CHECK(!fq2_is_zero(x), "fq2 division by zero");
    uint64_t n = fq2_norm(x);
    uint64_t ni = fpelem{n, x.p}.inv().v;
    fq2 c = fq2_conj(x);
    auto mul = [&](uint64_t u) { return (uint64_t)(((__uint128_t)u * ni) % x.p); };
    return fq2{mul(c.a), mul(c.b), x.p, x.nr};
}
inline fq2 fq2_pow(fq2 x, Int e) {
    fq2 r = fq2{1, 0, x.p, x.nr};
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = r * x;
        x = x * x;
        e >>= 1;
    }
    return r;
}
// chi(x) over F_{p^2}: 1 for nonzero squares, -1 for non-squares, 0 for 0.
inline int fq2_chi(const fq2& x) {
    if (fq2_is_zero(x)) return 0;
    return legendre(fpelem{fq2_norm(x), x.p});
}
inline std::optional<fq2> fq2_sqrt(const fq2& x, rng_t& rng) {
    if (fq2_is_zero(x)) return fq2{0, 0, x.p, x.nr};
    if (fq2_chi(x) != 1) return std::nullopt;
    // Tonelli-Shanks in the cyclic group of order p^2 - 1.
    Int q = Int(x.p) * Int(x.p) - 1;
    Int s = q;
    long e = 0;
    while (mpz_even_p(s.get_mpz_t())) {
        s >>= 1;
        ++e;
    }
    // find a non-square in F_{p^2}
    std::uniform_int_distribution<uint64_t> U(0, x.p - 1);
    fq2 n{0, 0, x.p, x.nr};
    do {
        n = fq2{U(rng), U(rng), x.p, x.nr};
    } while (fq2_chi(n) != -1);
    fq2 z = fq2_pow(n, s);
    fq2 r = fq2_pow(x, (s + 1) / 2);
    fq2 t = fq2_pow(x, s);
    long m = e;
    fq2 one{1, 0, x.p, x.nr};
    while (!(t.a == 1 && t.b == 0)) {
        fq2 tt = t;
        long i = 0;
        while (!(tt.a == 1 && tt.b == 0)) {
            tt = tt * tt;
            ++i;
            PRYM_CHECK(i <= m, "fq2 sqrt: order mismatch");
        }
        fq2 bpow = z;
        for (long j = 0; j + 1 < m - i; ++j) bpow = bpow * bpow;
        r = r * bpow;
        t = t * bpow * bpow;
        z = bpow * bpow;
        m = i;
    }
    if (r.b > x.p - r.b || (r.b == 0 && r.a > x.p - r.a)) r = fq2{0, 0, x.p, x.nr} - r;
    return r;
}

inline fq2 fq2_eval(const upoly<fpelem>& f, const fq2& x) {
    fq2 acc{0, 0, x.p, x.nr};
    for (int i = f.deg(); i >= 0; --i) {
        acc = acc * x;
        acc = acc + fq2{f[i].v, 0, x.p, x.nr};
    }
    return acc;
}

// Point counts of the smooth projective genus-2 curve y^2 = f(x) over F_p
// and F_{p^2} (points at infinity included).
inline std::pair<Int, Int> g2_point_counts(const g2curve<fpelem>& C) {
    uint64_t p = C.f.zr.p;
    Int n1 = 0, n2 = 0;
    for (uint64_t x = 0; x < p; ++x) {
        int ch = legendre(C.f.eval(fpelem{x, p}));
        n1 += 1 + ch;
    }
    if (C.deg6) {
        n1 += 1 + legendre(C.f[6]);
    } else {
        n1 += 1;
    }
    uint64_t nr = fq2_nonresidue(p);
    for (uint64_t a = 0; a < p; ++a)
        for (uint64_t b = 0; b < p; ++b) {
            fq2 x{a, b, p, nr};
            n2 += 1 + fq2_chi(fq2_eval(C.f, x));
        }
    if (C.deg6) {
        n2 += 2;  // f6 is always a square in F_{p^2}
    } else {
        n2 += 1;
    }
    return {n1, n2};
}

// #Jac(F_p) from the zeta function: |J| = (N1^2 + N2)/2 - p.
inline Int g2_jacobian_order(const g2curve<fpelem>& C) {
    auto [n1, n2] = g2_point_counts(C);
    Int n = (n1 * n1 + n2) / 2 - Int((long)C.f.zr.p);
    PRYM_CHECK(n > 0, "jacobian order must be positive");
    return n;
}

inline uint64_t g2_div_key(const g2div<fpelem>& d) {
    auto clamp = [](const fpelem& e) { return e.v; };
    uint64_t a1 = d.a.deg() >= 1 ? clamp(d.a[1]) : 0;
    uint64_t a0 = d.a.deg() >= 0 ? clamp(d.a[0]) : 0;
    uint64_t b1 = clamp(d.b[1]);
    uint64_t b0 = clamp(d.b[0]);
    uint64_t da = (uint64_t)(d.a.deg() + 1);
    uint64_t mk = (uint64_t)(d.np * 9 + d.nm * 3 + d.ni);
    uint64_t h = 1469598103934665603ull;
    for (uint64_t v : {a1, a0, b1, b0, da, mk}) {
        h ^= v + 0x9e3779b97f4a7c15ull;
        h *= 1099511628211ull;
    }
    return h;
}

struct jacobian_table {
    g2curve<fpelem> C;
    std::vector<g2div<fpelem>> elems;
    std::unordered_map<uint64_t, size_t> index;  // g2_div_key -> position
    Int order;

    explicit jacobian_table(const g2curve<fpelem>& curve) : C(curve), order(0) {}

    size_t find(const g2div<fpelem>& d) const {
        auto it = index.find(g2_div_key(d));
        PRYM_CHECK(it != index.end(), "element not in jacobian table");
        return it->second;
    }
    bool contains(const g2div<fpelem>& d) const { return index.count(g2_div_key(d)) != 0; }
};

// Enumerate every point of Jac(F_p) as a reduced Mumford divisor and verify
// the count against the zeta function.
inline jacobian_table enumerate_jacobian_fp(const g2curve<fpelem>& C) {
    uint64_t p = C.f.zr.p;
    PRYM_CHECK(p % 2 == 1, "enumeration needs odd p");
    if (C.deg6) PRYM_CHECK(C.s.has_value(), "enumeration needs split infinity (choose p with f6 square)");
    jacobian_table J(C);
    auto push = [&](const g2div<fpelem>& d) {
        uint64_t k = g2_div_key(d);
        PRYM_CHECK(!J.index.count(k), "hash collision or duplicate element in enumeration");
        J.index.emplace(k, J.elems.size());
        J.elems.push_back(d);
    };
    fpelem zero{0, p};
    upoly<fpelem> X = upoly<fpelem>::x_power(1, zero);
    push(g2_identity(C));
    // classes {oo_sigma + oo_sigma} resp. affine marker-free handled below
    if (C.deg6) {
        g2div<fpelem> dpp(zero);
        dpp.np = 2;
        push(dpp);
        g2div<fpelem> dmm(zero);
        dmm.nm = 2;
        push(dmm);
    }
    // degree-1 affine + one infinity marker
    for (uint64_t x0 = 0; x0 < p; ++x0) {
        fpelem xv{x0, p};
        fpelem fv = C.f.eval(xv);
        std::vector<fpelem> ys;
        if (fv.v == 0) {
            ys.push_back(zero);
        } else if (auto r = fp_sqrt(fv)) {
            ys.push_back(*r);
            ys.push_back(-*r);
        }
        for (auto& y : ys) {
            upoly<fpelem> a = X - upoly<fpelem>::constant(xv);
            upoly<fpelem> b = upoly<fpelem>::constant(y);
            if (C.deg6) {
                for (int sgn : {+1, -1}) {
                    g2div<fpelem> d(zero);
                    d.a = a;
                    d.b = b;
                    (sgn > 0 ? d.np : d.nm) = 1;
                    push(d);
                }
            } else {
                g2div<fpelem> d(zero);
                d.a = a;
                d.b = b;
                d.ni = 1;
                push(d);
            }
        }
    }
    // split degree-2: unordered pairs of distinct affine points, x1 != x2
    for (uint64_t x1 = 0; x1 < p; ++x1) {
        fpelem xv1{x1, p};
        fpelem f1 = C.f.eval(xv1);
        std::vector<fpelem> y1s;
        if (f1.v == 0)
            y1s.push_back(zero);
        else if (auto r = fp_sqrt(f1)) {
            y1s.push_back(*r);
            y1s.push_back(-*r);
        }
        if (y1s.empty()) continue;
        for (uint64_t x2 = x1 + 1; x2 < p; ++x2) {
            fpelem xv2{x2, p};
            fpelem f2 = C.f.eval(xv2);
            std::vector<fpelem> y2s;
            if (f2.v == 0)
                y2s.push_back(zero);
            else if (auto r = fp_sqrt(f2)) {
                y2s.push_back(*r);
                y2s.push_back(-*r);
            }
            for (auto& y1 : y1s)
                for (auto& y2 : y2s) {
                    if (y1.v == 0 && y2.v == 0) {
                        // 2-torsion pair: b = 0
                        g2div<fpelem> d(zero);
                        d.a = (X - upoly<fpelem>::constant(xv1)) * (X - upoly<fpelem>::constant(xv2));
                        d.b = upoly<fpelem>(zero);
                        push(d);
                        goto next_pair;  // only one class for this (x1, x2)
                    }
                    push(g2_from_points(C, xv1, y1, xv2, y2));
                }
        next_pair:;
        }
    }
    // doubled affine points 2*(x0, y0), y0 != 0
    for (uint64_t x0 = 0; x0 < p; ++x0) {
        fpelem xv{x0, p};
        fpelem fv = C.f.eval(xv);
        if (fv.v == 0) continue;
        if (auto r = fp_sqrt(fv)) {
            push(g2_from_points(C, xv, *r, xv, *r));
            push(g2_from_points(C, xv, -*r, xv, -*r));
        }
    }
    // irreducible degree-2: conjugate point pairs over F_{p^2}
    {
        uint64_t nr = fq2_nonresidue(p);
        rng_t rng = make_rng(17);
        for (uint64_t t = 0; t < p; ++t)
            for (uint64_t n = 0; n < p; ++n) {
                // a = x^2 - t x + n irreducible <=> t^2 - 4n non-square
                fpelem disc = fpelem{t, p} * fpelem{t, p} - fpelem{4, p} * fpelem{n, p};
                if (legendre(disc) != -1) continue;
                upoly<fpelem> a = X * X - X * fpelem{t, p} + upoly<fpelem>::constant(fpelem{n, p});
                // xi = (t + sqrt(disc))/2 in F_{p^2}
                fq2 sd = *fq2_sqrt(fq2{disc.v, 0, p, nr}, rng);
                fpelem half = fpelem{2, p}.inv();
                fq2 xi = (fq2{t, 0, p, nr} + sd) * fq2{half.v, 0, p, nr};
                fq2 fxi = fq2_eval(C.f, xi);
                if (fq2_is_zero(fxi)) {
                    g2div<fpelem> d(zero);
                    d.a = a;
                    d.b = upoly<fpelem>(zero);
                    push(d);
                    continue;
                }
                auto y = fq2_sqrt(fxi, rng);
                if (!y) continue;
                // b = b1 x + b0 with b(xi) = y (Galois-stable, so b_i in F_p)
                for (int sgn : {+1, -1}) {
                    fq2 yy = sgn > 0 ? *y : fq2{0, 0, p, nr} - *y;
                    // xi = u + v t, yy = c + d t with v != 0: b1 = d/v, b0 = c - b1 u
                    fq2 diff = xi - fq2_conj(xi);
                    PRYM_CHECK(diff.a == 0 && diff.b != 0, "conjugate difference must be purely imaginary");
                    uint64_t v = (fpelem{diff.b, p} * fpelem{2, p}.inv()).v;
                    fpelem b1 = fpelem{yy.b, p} * fpelem{v, p}.inv();
                    fpelem u = fpelem{xi.a, p};
                    fpelem b0 = fpelem{yy.a, p} - b1 * u;
                    g2div<fpelem> d(zero);
                    d.a = a;
                    d.b = X * b1 + upoly<fpelem>::constant(b0);
                    g2_validate(C, d);
                    push(d);
                }
            }
    }
    J.order = g2_jacobian_order(C);
    PRYM_CHECK(Int((long)J.elems.size()) == J.order,
               "enumeration count disagrees with the zeta function");
    return J;
}

// Order of an element given the group order (factor and strip).
inline Int g2_element_order(const g2curve<fpelem>& C, const g2div<fpelem>& d, const Int& group_order) {
    Int o = group_order;
    for (auto& [q, e] : factorize(group_order)) {
        for (int i = 0; i < e; ++i) {
            Int cand = o / q;
            if (g2_is_identity(C, g2_mul(C, cand, d)))
                o = cand;
            else
                break;
        }
    }
    return o;
}

}  // namespace prym

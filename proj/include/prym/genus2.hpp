#pragma once
#include <optional>
#include "prym/upoly.hpp"

namespace prym {

// Hyperelliptic curve y^2 = f(x) of genus 2, deg f in {5, 6}, f squarefree.
// For a degree-6 model with square leading coefficient a branch of the two
// points at infinity is pinned by the stored square root s of f6; the series
// ser[j] are the expansion coefficients e_j of y/x^3 at that branch, so
// y = x^3 (e_0 + e_1/x + e_2/x^2 + ...) there.
template <class T>
struct g2curve {
    upoly<T> f;
    bool deg6 = false;
    std::optional<T> s;
    std::vector<T> ser;

    explicit g2curve(const T& sample) : f(sample) {}

    const T& coeff(int i) const { return f[i]; }
};

template <class T>
g2curve<T> make_g2(const upoly<T>& f, bool check_squarefree = true) {
    PRYM_CHECK(f.deg() == 5 || f.deg() == 6, "genus-2 model needs degree 5 or 6");
    if (check_squarefree) PRYM_CHECK(is_squarefree(f), "genus-2 model must be squarefree");
    g2curve<T> C(f.zr);
    C.f = f;
    C.deg6 = f.deg() == 6;
    if (C.deg6) {
        auto s = dom<T>::sqrt(f[6]);
        if (s) {
            C.s = *s;
            // (sum e_j t^j)^2 = f6 + f5 t + ... + f0 t^6.
            std::vector<T> e{*s};
            T two = dom<T>::from_int(2, f.zr);
            for (int j = 1; j <= 5; ++j) {
                T rhs = f[6 - j];
                for (int i = 1; i < j; ++i) rhs = rhs - e[i] * e[j - i];
                e.push_back(rhs / (two * e[0]));
            }
            C.ser = e;
        }
    }
    return C;
}

// Mumford representation with explicit points at infinity: the class of
// E - K where E = {roots of a with y = b(x)} + np*(oo+) + nm*(oo-) + ni*oo
// and K is the canonical class.  deg a + np + nm + ni == 2 always.
template <class T>
struct g2div {
    upoly<T> a, b;
    int np = 0, nm = 0, ni = 0;

    explicit g2div(const T& sample) : a(upoly<T>::constant(dom<T>::one(sample))), b(sample) {}
    int inf_count() const { return np + nm + ni; }
};

template <class T>
g2div<T> g2_identity(const g2curve<T>& C) {
    g2div<T> d(C.f.zr);
    if (C.deg6) {
        d.np = d.nm = 1;
    } else {
        d.ni = 2;
    }
    return d;
}

template <class T>
bool g2_is_identity(const g2curve<T>& C, const g2div<T>& d) {
    if (d.a.deg() != 0) return false;
    return C.deg6 ? (d.np == 1 && d.nm == 1) : d.ni == 2;
}

template <class T>
void g2_validate(const g2curve<T>& C, const g2div<T>& d) {
    PRYM_CHECK(d.a.deg() >= 0 && d.a.deg() <= 2, "mumford a degree out of range");
    PRYM_CHECK(dom<T>::is_zero(d.a.lead() - dom<T>::one(C.f.zr)), "mumford a not monic");
    PRYM_CHECK(d.a.deg() + d.inf_count() == 2, "divisor degree != 2");
    PRYM_CHECK(d.b.deg() < std::max(d.a.deg(), 1), "mumford b degree too large");
    if (C.deg6) {
        PRYM_CHECK(d.ni == 0, "single-infinity marker on a degree-6 model");
        if (d.np + d.nm > 0)
            PRYM_CHECK(C.s.has_value(), "infinity branch markers need a square leading coefficient");
        if (d.np == 1 && d.nm == 1)
            PRYM_CHECK(d.a.deg() == 0, "mixed infinity markers only in the identity class");
    } else {
        PRYM_CHECK(d.np == 0 && d.nm == 0, "branch markers on a degree-5 model");
    }
    upoly<T> r = pmod(d.b * d.b - C.f, d.a);
    PRYM_CHECK(r.is_zero(), "b^2 != f mod a");
}

template <class T>
g2div<T> g2_from_mumford(const g2curve<T>& C, const upoly<T>& a, const upoly<T>& b, int np = 0,
                         int nm = 0, int ni = 0) {
    g2div<T> d(C.f.zr);
    PRYM_CHECK(!a.is_zero(), "mumford a must be nonzero");
    d.a = a.monic();
    d.b = pmod(b, d.a);
    d.np = np;
    d.nm = nm;
    d.ni = ni;
    g2_validate(C, d);
    return d;
}

template <class T>
g2div<T> g2_from_points(const g2curve<T>& C, const T& x1, const T& y1, const T& x2, const T& y2) {
    T one = dom<T>::one(C.f.zr);
    upoly<T> a = (upoly<T>::x_power(1, C.f.zr) - upoly<T>::constant(x1)) *
                 (upoly<T>::x_power(1, C.f.zr) - upoly<T>::constant(x2));
    upoly<T> b(C.f.zr);
    if (!dom<T>::is_zero(x1 - x2)) {
        T m = (y1 - y2) / (x1 - x2);
        b = upoly<T>::x_power(1, C.f.zr) * m + upoly<T>::constant(y1 - m * x1);
    } else {
        PRYM_CHECK(dom<T>::is_zero(y1 - y2), "P + conj(P) is not a reduced divisor");
        PRYM_CHECK(!dom<T>::is_zero(y1), "doubled ramification point is not a reduced divisor");
        // double point: b(x1) = y1, 2 b b' = f' mod (x-x1)^2
        T fp = C.f.derivative().eval(x1);
        T b1 = fp / (dom<T>::from_int(2, one) * y1);
        b = upoly<T>::x_power(1, C.f.zr) * b1 + upoly<T>::constant(y1 - b1 * x1);
    }
    return g2_from_mumford(C, a, b);
}

template <class T>
g2div<T> g2_neg(const g2curve<T>& C, const g2div<T>& d) {
    g2div<T> r = d;
    r.b = -r.b;
    if (C.deg6) std::swap(r.np, r.nm);
    return r;
}

template <class T>
bool g2_equal(const g2div<T>& x, const g2div<T>& y) {
    return x.a == y.a && x.b == y.b && x.np == y.np && x.nm == y.nm && x.ni == y.ni;
}

namespace detail {

// Composition step (Cantor): combine the affine parts into (A, B) with
// B^2 = f mod A, stripping pairs P + conj(P); markers are combined and
// opposite pairs at infinity cancel against the canonical class.
template <class T>
struct composed {
    upoly<T> A, B;
    int np = 0, nm = 0, ni = 0;
    explicit composed(const T& sample) : A(sample), B(sample) {}
};

template <class T>
composed<T> g2_compose(const g2curve<T>& C, const g2div<T>& d1, const g2div<T>& d2) {
    auto [g, u1, u2] = xgcd_poly(d1.a, d2.a);
    auto [d, w1, w2] = xgcd_poly(g, d1.b + d2.b);
    // d = w1*u1*a1 + w1*u2*a2 + w2*(b1+b2)
    upoly<T> h1 = w1 * u1, h2 = w1 * u2, h3 = w2;
    upoly<T> A = d1.a * d2.a;
    if (d.deg() > 0 || !dom<T>::is_zero(d.lead() - dom<T>::one(C.f.zr))) {
        auto [q, r] = divrem(A, d * d);
        PRYM_CHECK(r.is_zero(), "composition: d^2 does not divide a1*a2");
        A = q;
    }
    upoly<T> num = d1.a * d2.b * h1 + d2.a * d1.b * h2 + (d1.b * d2.b + C.f) * h3;
    upoly<T> B(C.f.zr);
    if (!num.is_zero()) {
        auto [q, r] = divrem(num, d);
        PRYM_CHECK(r.is_zero(), "composition: d does not divide the b numerator");
        B = pmod(q, A);
    }
    composed<T> out(C.f.zr);
    out.A = A.deg() >= 0 ? A.monic() : A;
    out.B = B;
    out.np = d1.np + d2.np;
    out.nm = d1.nm + d2.nm;
    out.ni = d1.ni + d2.ni;
    int k = std::min(out.np, out.nm);
    out.np -= k;
    out.nm -= k;
    out.ni %= 2;
    return out;
}

// Reduction step: find the cubic y = c(x) through the composed divisor
// (c = B mod A, plus branch conditions at infinity), then read the residual
// divisor off c^2 - f and negate.
template <class T>
g2div<T> g2_reduce4(const g2curve<T>& C, const composed<T>& E) {
    int degA = E.A.deg();
    int m = E.np + E.nm + E.ni;
    PRYM_CHECK(degA + m == 4, "reduction expects a degree-4 divisor");
    T one = dom<T>::one(C.f.zr);
    int sigma = E.np > 0 ? 1 : (E.nm > 0 ? -1 : 0);
    if (C.deg6 && m > 0) PRYM_CHECK(C.s.has_value(), "branch markers need the stored sqrt(f6)");

    // Target top coefficients gamma_j for c_{3-j}, j = 0..m-1.
    std::vector<T> gamma;
    for (int j = 0; j < m; ++j) {
        if (C.deg6) {
            T e = C.ser[(size_t)j];
            gamma.push_back(sigma > 0 ? e : -e);
        } else {
            PRYM_CHECK(j == 0, "degree-5 model carries at most one leftover infinity");
            gamma.push_back(C.f.zr);  // just forces deg c <= 2
        }
    }

    upoly<T> c = E.B;
    if (degA < 4) {
        // c = B + A * t with deg t = 3 - degA = m - 1; the j-th condition
        // fixes coefficient c_{3-j}.
        std::vector<T> t(m, C.f.zr);
        for (int j = 0; j < m; ++j) {
            // c_{3-j} = B_{3-j} + sum_{i} t_i A_{3-j-i}; t_i with i = deg t .. 0.
            T acc = E.B[3 - j];
            for (int i = 0; i < j; ++i) {
                int ai = 3 - j - (m - 1 - i);  // exponent in A hit by t_{m-1-i}
                acc = acc + t[(size_t)i] * E.A[ai];
            }
            t[(size_t)j] = gamma[(size_t)j] - acc;
        }
        upoly<T> tp(C.f.zr);
        for (int i = 0; i < m; ++i) tp.set(m - 1 - i, t[(size_t)i]);
        c = E.B + E.A * tp;
    }

    upoly<T> r = c * c - C.f;
    PRYM_CHECK(!r.is_zero(), "degenerate reduction: c^2 = f");
    auto [quo, rem] = divrem(r, E.A);
    PRYM_CHECK(rem.is_zero(), "reduction: A does not divide c^2 - f");
    // Residual infinite multiplicities from matched branch coefficients.
    int ap = 0, am = 0;
    if (C.deg6) {
        if (C.s.has_value()) {
            auto matches = [&](int sg) {
                int cnt = 0;
                for (int j = 0; j <= 5; ++j) {
                    T e = C.ser[(size_t)j];
                    T target = sg > 0 ? e : -e;
                    if (!dom<T>::is_zero(c[3 - j] - target)) break;
                    cnt++;
                }
                return cnt;
            };
            ap = matches(+1);
            am = matches(-1);
        }
        PRYM_CHECK(ap + am == 6 - r.deg(), "reduction: infinity bookkeeping mismatch");
    } else {
        ap = 0;
        am = 0;
    }
    g2div<T> out(C.f.zr);
    out.a = quo.monic();
    out.b = pmod(-c, out.a);
    if (C.deg6) {
        int rp = ap - E.np, rm = am - E.nm;
        PRYM_CHECK(rp >= 0 && rm >= 0, "reduction: residual infinity multiplicity negative");
        // negation swaps the branches
        out.np = rm;
        out.nm = rp;
    } else {
        int ri = 6 - r.deg() - E.ni;
        PRYM_CHECK(ri >= 0 && ri <= 2, "reduction: residual infinity multiplicity out of range");
        out.ni = ri;
    }
    PRYM_CHECK(out.a.deg() + out.inf_count() == 2, "reduction: output degree mismatch");
    return out;
}

}  // namespace detail

template <class T>
g2div<T> g2_add(const g2curve<T>& C, const g2div<T>& d1, const g2div<T>& d2) {
    auto E = detail::g2_compose(C, d1, d2);
    int total = E.A.deg() + E.np + E.nm + E.ni;
    if (total == 0) return g2_identity(C);
    if (total == 2) {
        g2div<T> out(C.f.zr);
        out.a = E.A;
        out.b = E.B;
        out.np = E.np;
        out.nm = E.nm;
        out.ni = E.ni;
        return out;
    }
    PRYM_CHECK(total == 4, "composition produced an unexpected degree");
    return detail::g2_reduce4(C, E);
}

template <class T>
g2div<T> g2_sub(const g2curve<T>& C, const g2div<T>& d1, const g2div<T>& d2) {
    return g2_add(C, d1, g2_neg(C, d2));
}

template <class T>
g2div<T> g2_mul(const g2curve<T>& C, Int n, const g2div<T>& d) {
    g2div<T> base = d;
    if (n < 0) {
        base = g2_neg(C, d);
        n = -n;
    }
    g2div<T> acc = g2_identity(C);
    // left-to-right double and add
    if (n == 0) return acc;
    long bits = (long)mpz_sizeinbase(n.get_mpz_t(), 2);
    for (long i = bits - 1; i >= 0; --i) {
        acc = g2_add(C, acc, acc);
        if (mpz_tstbit(n.get_mpz_t(), (mp_bitcnt_t)i)) acc = g2_add(C, acc, base);
    }
    return acc;
}

// Reduce a rational curve / divisor mod p (good odd p not dividing any
// denominator or the leading coefficient).
inline g2curve<fpelem> g2_reduce_curve(const g2curve<Rat>& C, uint64_t p) {
    upoly<fpelem> f = reduce_poly(C.f, p);
    PRYM_CHECK(f.deg() == C.f.deg(), "bad reduction: leading coefficient vanishes mod p");
    return make_g2(f);
}

inline g2div<fpelem> g2_reduce_div(const g2curve<fpelem>& Cp, const g2div<Rat>& d, uint64_t p) {
    g2div<fpelem> r(Cp.f.zr);
    r.a = reduce_poly(d.a, p);
    PRYM_CHECK(r.a.deg() == d.a.deg(), "divisor has bad reduction at p (a degree drops)");
    r.b = reduce_poly(d.b, p);
    r.np = d.np;
    r.nm = d.nm;
    r.ni = d.ni;
    g2_validate(Cp, r);
    return r;
}

}  // namespace prym

#pragma once
#include <vector>
#include <utility>
#include "prym/domain.hpp"

namespace prym {

// Dense univariate polynomial over a coefficient domain T.  Keeps a zero
// element of the domain so degree -1 (the zero polynomial) still knows its
// context.
template <class T>
struct upoly {
    std::vector<T> c;  // c[i] multiplies x^i; trailing zeros stripped
    T zr;

    explicit upoly(const T& zero_sample) : zr(dom<T>::zero(zero_sample)) {}
    upoly(std::vector<T> cc, const T& zero_sample) : c(std::move(cc)), zr(dom<T>::zero(zero_sample)) {
        normalize();
    }

    static upoly constant(const T& v) {
        upoly r(v);
        r.c = {v};
        r.normalize();
        return r;
    }
    static upoly x_power(unsigned k, const T& sample) {
        upoly r(sample);
        r.c.assign(k + 1, dom<T>::zero(sample));
        r.c[k] = dom<T>::one(sample);
        return r;
    }

    void normalize() {
        while (!c.empty() && dom<T>::is_zero(c.back())) c.pop_back();
    }
    int deg() const { return (int)c.size() - 1; }
    bool is_zero() const { return c.empty(); }
    const T& operator[](int i) const {
        if (i < 0 || i >= (int)c.size()) return zr;
        return c[i];
    }
    void set(int i, const T& v) {
        if (i >= (int)c.size()) c.resize(i + 1, zr);
        c[i] = v;
        normalize();
    }
    const T& lead() const {
        PRYM_CHECK(!c.empty(), "lead of zero polynomial");
        return c.back();
    }

    bool operator==(const upoly& o) const {
        if (deg() != o.deg()) return false;
        for (size_t i = 0; i < c.size(); ++i)
            if (!(c[i] == o.c[i])) return false;
        return true;
    }
    bool operator!=(const upoly& o) const { return !(*this == o); }

    upoly operator+(const upoly& o) const {
        upoly r(zr);
        r.c.assign(std::max(c.size(), o.c.size()), zr);
        for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = (*this)[(int)i] + o[(int)i];
        r.normalize();
        return r;
    }
    upoly operator-(const upoly& o) const {
        upoly r(zr);
        r.c.assign(std::max(c.size(), o.c.size()), zr);
        for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = (*this)[(int)i] - o[(int)i];
        r.normalize();
        return r;
    }
    upoly operator-() const {
        upoly r = *this;
        for (auto& x : r.c) x = -x;
        return r;
    }
    upoly operator*(const upoly& o) const {
        upoly r(zr);
        if (is_zero() || o.is_zero()) return r;
        r.c.assign(c.size() + o.c.size() - 1, zr);
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = 0; j < o.c.size(); ++j) r.c[i + j] = r.c[i + j] + c[i] * o.c[j];
        r.normalize();
        return r;
    }
    upoly operator*(const T& s) const {
        upoly r = *this;
        for (auto& x : r.c) x = x * s;
        r.normalize();
        return r;
    }
    upoly shifted(unsigned k) const {  // multiply by x^k
        if (is_zero()) return *this;
        upoly r(zr);
        r.c.assign(c.size() + k, zr);
        for (size_t i = 0; i < c.size(); ++i) r.c[i + k] = c[i];
        return r;
    }

    T eval(const T& x) const {
        T r = zr;
        for (int i = deg(); i >= 0; --i) r = r * x + c[i];
        return r;
    }

    upoly derivative() const {
        upoly r(zr);
        if (deg() < 1) return r;
        r.c.assign(c.size() - 1, zr);
        for (size_t i = 1; i < c.size(); ++i)
            r.c[i - 1] = c[i] * dom<T>::from_int((long)i, zr);
        r.normalize();
        return r;
    }

    upoly monic() const {
        PRYM_CHECK(!is_zero(), "monic of zero polynomial");
        return *this * dom<T>::inv(lead());
    }
};

// Division with remainder; requires invertible leading coefficient of g.
template <class T>
std::pair<upoly<T>, upoly<T>> divrem(const upoly<T>& f, const upoly<T>& g) {
    PRYM_CHECK(!g.is_zero(), "division by zero polynomial");
    upoly<T> q(f.zr), r = f;
    T gl = dom<T>::inv(g.lead());
    int dg = g.deg();
    if (r.deg() >= dg) q.c.assign(r.deg() - dg + 1, q.zr);
    while (r.deg() >= dg) {
        int k = r.deg() - dg;
        T t = r.lead() * gl;
        q.c[k] = t;
        // r -= t * x^k * g
        for (int i = 0; i <= dg; ++i) r.c[i + k] = r.c[i + k] - t * g.c[i];
        r.normalize();
    }
    q.normalize();
    return {q, r};
}

template <class T>
upoly<T> pmod(const upoly<T>& f, const upoly<T>& g) {
    return divrem(f, g).second;
}

template <class T>
upoly<T> gcd_poly(upoly<T> a, upoly<T> b) {
    while (!b.is_zero()) {
        upoly<T> r = pmod(a, b);
        a = b;
        b = r;
    }
    if (a.is_zero()) return a;
    return a.monic();
}

// Extended gcd: returns (g, u, v) with u*a + v*b = g, g monic (or zero).
template <class T>
std::tuple<upoly<T>, upoly<T>, upoly<T>> xgcd_poly(const upoly<T>& a, const upoly<T>& b) {
    upoly<T> r0 = a, r1 = b;
    upoly<T> s0 = upoly<T>::constant(dom<T>::one(a.zr)), s1(a.zr);
    upoly<T> t0(a.zr), t1 = upoly<T>::constant(dom<T>::one(a.zr));
    while (!r1.is_zero()) {
        auto [q, r2] = divrem(r0, r1);
        upoly<T> s2 = s0 - q * s1, t2 = t0 - q * t1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
        t0 = t1; t1 = t2;
    }
    if (r0.is_zero()) return {r0, s0, t0};
    T il = dom<T>::inv(r0.lead());
    return {r0 * il, s0 * il, t0 * il};
}

// Resultant over a field via the Euclidean remainder sequence.
template <class T>
T resultant(upoly<T> f, upoly<T> g) {
    T one = dom<T>::one(f.zr);
    if (f.is_zero() || g.is_zero()) return f.zr;
    T res = one;
    bool neg = false;
    while (g.deg() > 0) {
        upoly<T> r = pmod(f, g);
        int df = f.deg(), dg = g.deg(), dr = r.deg();
        if ((df & 1) && (dg & 1)) neg = !neg;
        T gl = g.lead();
        T powl = one;
        for (int i = 0; i < df - (dr < 0 ? 0 : dr); ++i) powl = powl * gl;
        res = res * powl;
        if (r.is_zero()) {
            if (dg > 0) return f.zr;  // common factor
            break;
        }
        f = g;
        g = r;
    }
    if (g.deg() == 0) {
        T gl = g.lead();
        for (int i = 0; i < f.deg(); ++i) res = res * gl;
    }
    if (neg) res = -res;
    return res;
}

template <class T>
T poly_disc(const upoly<T>& f) {
    PRYM_CHECK(f.deg() >= 1, "discriminant needs degree >= 1");
    T r = resultant(f, f.derivative());
    T il = dom<T>::inv(f.lead());
    r = r * il;
    int d = f.deg();
    if (((d * (d - 1)) / 2) & 1) r = -r;
    return r;
}

template <class T>
bool is_squarefree(const upoly<T>& f) {
    if (f.deg() <= 1) return f.deg() >= 0;
    return gcd_poly(f, f.derivative()).deg() == 0;
}

// Map coefficients into another domain (e.g. reduce Q[x] mod p).
template <class S, class T, class F>
upoly<T> map_poly(const upoly<S>& f, const T& sample, F&& fn) {
    upoly<T> r(sample);
    r.c.reserve(f.c.size());
    for (auto& x : f.c) r.c.push_back(fn(x));
    r.normalize();
    return r;
}

inline upoly<fpelem> reduce_poly(const upoly<Rat>& f, uint64_t p) {
    fpelem s(0, p);
    return map_poly(f, s, [&](const Rat& q) { return fpelem::from_rat(q, p); });
}

inline upoly<Rat> rat_poly(const std::vector<Rat>& c) { return upoly<Rat>(c, Rat(0)); }

// Content (gcd of numerators / lcm of denominators) and primitive part.
inline Rat poly_content(const upoly<Rat>& f) {
    if (f.is_zero()) return Rat(0);
    Int g = 0, l = 1;
    for (auto& q : f.c) {
        if (q == 0) continue;
        g = gcd(g, num(q));
        l = lcm(l, den(q));
    }
    Rat c = make_rat(abs(g), l);
    return c;
}

inline upoly<Rat> primitive_part(const upoly<Rat>& f) {
    if (f.is_zero()) return f;
    Rat c = poly_content(f);
    upoly<Rat> r = f * (1 / c);
    if (sgn(r.lead()) < 0) r = -r;
    return r;
}

}  // namespace prym

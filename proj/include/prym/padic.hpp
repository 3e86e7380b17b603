#pragma once
#include <climits>
#include "prym/zfuncs.hpp"
#include "prym/domain.hpp"

namespace prym {

constexpr long PADIC_INF = LONG_MAX / 4;

inline Int int_pow(const Int& p, long k) {
    PRYM_CHECK(k >= 0, "negative power");
    Int r;
    mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), (unsigned long)k);
    return r;
}

// Element of Q_p known to finite precision: value = u * p^v + O(p^(v+N))
// with u a unit mod p^N.  u == 0 encodes O(p^v) (v = PADIC_INF: exact zero).
struct padic {
    uint64_t p = 0;
    long v = PADIC_INF;
    Int u = 0;
    long N = 0;  // relative precision when u != 0; default target otherwise

    padic() = default;

    static padic exact_zero(uint64_t p, long rel) {
        padic x;
        x.p = p;
        x.v = PADIC_INF;
        x.N = rel;
        return x;
    }
    static padic big_o(uint64_t p, long abs, long rel) {
        padic x;
        x.p = p;
        x.v = abs;
        x.N = rel;
        return x;
    }
    static padic from_rat(const Rat& q, uint64_t p, long rel) {
        PRYM_CHECK(rel > 0, "nonpositive precision");
        if (q == 0) return exact_zero(p, rel);
        Int pp((unsigned long)p);
        Int n = num(q), d = den(q);
        long vn = 0, vd = 0;
        while (n % pp == 0) { n /= pp; vn++; }
        while (d % pp == 0) { d /= pp; vd++; }
        padic x;
        x.p = p;
        x.v = vn - vd;
        x.N = rel;
        Int pk = int_pow(pp, rel);
        x.u = mod_pos(n * invmod(mod_pos(d, pk), pk), pk);
        return x;
    }
    static padic from_int_val(const Int& n, uint64_t p, long rel) {
        return from_rat(Rat(n), p, rel);
    }

    bool apparent_zero() const { return u == 0; }
    bool exact() const { return u == 0 && v >= PADIC_INF; }
    long abs_prec() const { return u == 0 ? v : v + N; }

    padic truncated_abs(long a) const {
        if (u == 0) return big_o(p, std::min(v, a), N);
        if (v >= a) return big_o(p, a, N);
        long nn = std::min(N, a - v);
        padic x = *this;
        x.N = nn;
        x.u = mod_pos(u, int_pow(Int((unsigned long)p), nn));
        return x;
    }

    padic operator-() const {
        if (u == 0) return *this;
        padic x = *this;
        x.u = int_pow(Int((unsigned long)p), N) - u;
        return x;
    }

    padic operator+(const padic& o) const {
        PRYM_CHECK(p == o.p, "p-adic prime mismatch");
        if (u == 0) {
            if (exact()) return o;
            return o.truncated_abs(v);
        }
        if (o.u == 0) {
            if (o.exact()) return *this;
            return truncated_abs(o.v);
        }
        const padic &a = v <= o.v ? *this : o, &b = v <= o.v ? o : *this;
        long shift = b.v - a.v;
        long M = std::min(a.N, b.N + shift);
        if (M <= 0) return big_o(p, a.v, std::max(N, o.N));
        Int pp((unsigned long)p);
        Int pM = int_pow(pp, M);
        Int w = mod_pos(a.u + b.u * int_pow(pp, shift), pM);
        if (w == 0) return big_o(p, a.v + M, std::max(N, o.N));
        long k = 0;
        while (w % pp == 0) { w /= pp; k++; }
        if (k >= M) return big_o(p, a.v + M, std::max(N, o.N));
        padic x;
        x.p = p;
        x.v = a.v + k;
        x.N = M - k;
        x.u = mod_pos(w, int_pow(pp, x.N));
        return x;
    }
    padic operator-(const padic& o) const { return *this + (-o); }

    padic operator*(const padic& o) const {
        PRYM_CHECK(p == o.p, "p-adic prime mismatch");
        long rel = std::max(N, o.N);
        if (u == 0 || o.u == 0) {
            if (exact() || o.exact()) return exact_zero(p, rel);
            // O(p^a) * x = O(p^(a + val x)); O(p^a) * O(p^b) = O(p^(a+b)).
            if (u == 0 && o.u == 0) return big_o(p, v + o.v, rel);
            const padic& nz = u == 0 ? o : *this;
            long oz = u == 0 ? v : o.v;
            return big_o(p, oz + nz.v, rel);
        }
        padic x;
        x.p = p;
        x.v = v + o.v;
        x.N = std::min(N, o.N);
        x.u = mod_pos(u * o.u, int_pow(Int((unsigned long)p), x.N));
        return x;
    }

    padic inv() const {
        if (u == 0) throw precision_loss("inverting a p-adic indistinguishable from zero");
        padic x;
        x.p = p;
        x.v = -v;
        x.N = N;
        x.u = invmod(u, int_pow(Int((unsigned long)p), N));
        return x;
    }
    padic operator/(const padic& o) const { return *this * o.inv(); }

    // Value mod p^k as a plain integer; needs nonnegative valuation and
    // enough absolute precision.
    Int reduce_mod(long k) const {
        if (u == 0) {
            if (abs_prec() < k) throw precision_loss("p-adic zero with too little precision");
            return 0;
        }
        if (v < 0) throw precision_loss("negative valuation in reduce_mod");
        if (abs_prec() < k) throw precision_loss("p-adic value with too little precision");
        Int pk = int_pow(Int((unsigned long)p), k);
        return mod_pos(u * int_pow(Int((unsigned long)p), v), pk);
    }

    bool operator==(const padic& o) const {
        return p == o.p && v == o.v && u == o.u && (u != 0 ? N == o.N : true);
    }
};

inline std::optional<padic> padic_sqrt(const padic& x) {
    if (x.exact()) return x;
    if (x.u == 0) throw precision_loss("sqrt of a p-adic indistinguishable from zero");
    if (x.v % 2 != 0) return std::nullopt;
    PRYM_CHECK(x.p % 2 != 0, "p-adic sqrt wants odd p");
    auto r0 = sqrt_mod_pk(x.u, Int((unsigned long)x.p), (unsigned)x.N);
    if (!r0) return std::nullopt;
    padic r;
    r.p = x.p;
    r.v = x.v / 2;
    r.N = x.N;
    Int pk = int_pow(Int((unsigned long)x.p), x.N);
    Int root = *r0;
    if (root > pk - root) root = pk - root;
    r.u = root;
    if (mod_pos(r.u * r.u - x.u, pk) != 0) {
        // Lift was mod p^N already; any mismatch means N digits were not
        // enough to stabilize, which cannot happen for odd p.
        throw error("p-adic sqrt internal lift failure");
    }
    return r;
}

template <>
struct dom<padic> {
    static constexpr bool exact_field = false;
    static padic zero(const padic& s) { return padic::exact_zero(s.p, s.N > 0 ? s.N : 1); }
    static padic one(const padic& s) { return from_int(1, s); }
    static padic from_int(long n, const padic& s) {
        return padic::from_rat(Rat(n), s.p, s.N > 0 ? s.N : 1);
    }
    static padic from_rat(const Rat& q, const padic& s) {
        return padic::from_rat(q, s.p, s.N > 0 ? s.N : 1);
    }
    static bool is_zero(const padic& x) { return x.apparent_zero(); }
    static padic inv(const padic& x) { return x.inv(); }
    static padic divexact(const padic& a, const padic& b) { return a / b; }
    static std::optional<padic> sqrt(const padic& x) { return padic_sqrt(x); }
    static std::string str(const padic& x) {
        if (x.u == 0)
            return x.exact() ? "0" : "O(" + std::to_string(x.p) + "^" + std::to_string(x.v) + ")";
        return x.u.get_str() + "*" + std::to_string(x.p) + "^" + std::to_string(x.v) + "+O(^" +
               std::to_string(x.v + x.N) + ")";
    }
};

}  // namespace prym

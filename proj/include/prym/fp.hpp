#pragma once
#include <cstdint>
#include "prym/rational.hpp"
#include "prym/zfuncs.hpp"

namespace prym {

// Prime field element carrying its modulus (p odd prime < 2^31 unless noted).
struct fpelem {
    uint64_t v = 0;
    uint64_t p = 0;

    fpelem() = default;
    fpelem(uint64_t val, uint64_t mod) : v(val % mod), p(mod) {}

    static fpelem from_int(const Int& n, uint64_t p) {
        Int r = mod_pos(n, Int((unsigned long)p));
        return fpelem(r.get_ui(), p);
    }
    static fpelem from_rat(const Rat& q, uint64_t p) {
        Int d = mod_pos(den(q), Int((unsigned long)p));
        PRYM_CHECK(d != 0, "fp reduction: denominator divisible by p");
        Int r = mod_pos(num(q), Int((unsigned long)p));
        uint64_t dv = d.get_ui();
        fpelem x(r.get_ui(), p);
        return x / fpelem(dv, p);
    }

    bool operator==(const fpelem& o) const { return v == o.v && p == o.p; }
    bool operator!=(const fpelem& o) const { return !(*this == o); }

    fpelem operator+(const fpelem& o) const { return fpelem((v + o.v) % p, p); }
    fpelem operator-(const fpelem& o) const { return fpelem((v + p - o.v) % p, p); }
    fpelem operator-() const { return fpelem((p - v) % p, p); }
    fpelem operator*(const fpelem& o) const {
        return fpelem((uint64_t)((__uint128_t)v * o.v % p), p);
    }
    fpelem inv() const {
        PRYM_CHECK(v != 0, "fp inverse of zero");
        uint64_t r = 1, b = v;
        uint64_t e = p - 2;
        while (e) {
            if (e & 1) r = (uint64_t)((__uint128_t)r * b % p);
            b = (uint64_t)((__uint128_t)b * b % p);
            e >>= 1;
        }
        return fpelem(r, p);
    }
    fpelem operator/(const fpelem& o) const { return *this * o.inv(); }
    fpelem& operator+=(const fpelem& o) { return *this = *this + o; }
    fpelem& operator-=(const fpelem& o) { return *this = *this - o; }
    fpelem& operator*=(const fpelem& o) { return *this = *this * o; }

    fpelem pow(uint64_t e) const {
        fpelem r(1, p), b = *this;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }
    bool is_zero() const { return v == 0; }
};

inline int legendre(const fpelem& a) {
    if (a.v == 0) return 0;
    fpelem l = a.pow((a.p - 1) / 2);
    return l.v == 1 ? 1 : -1;
}

// Tonelli-Shanks square root in F_p, p odd.
inline std::optional<fpelem> fp_sqrt(const fpelem& a) {
    uint64_t p = a.p;
    if (a.v == 0) return fpelem(0, p);
    if (legendre(a) != 1) return std::nullopt;
    if (p % 4 == 3) return a.pow((p + 1) / 4);
    uint64_t q = p - 1, s = 0;
    while (q % 2 == 0) { q /= 2; s++; }
    fpelem z(2, p);
    while (legendre(z) != -1) z.v++;
    uint64_t m = s;
    fpelem c = z.pow(q), t = a.pow(q), r = a.pow((q + 1) / 2);
    while (t.v != 1) {
        uint64_t i = 0;
        fpelem tt = t;
        while (tt.v != 1) { tt *= tt; i++; }
        fpelem b = c;
        for (uint64_t j = 0; j + 1 < m - i; ++j) b *= b;
        m = i; c = b * b; t = t * c; r = r * b;
    }
    return r;
}

// Canonical square root choice used when a marker needs a pinned branch:
// the root r with r <= p - r.
inline std::optional<fpelem> fp_sqrt_canonical(const fpelem& a) {
    auto r = fp_sqrt(a);
    if (!r) return r;
    if (r->v > a.p - r->v) return fpelem(a.p - r->v, a.p);
    return r;
}

}  // namespace prym

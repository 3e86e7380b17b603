#pragma once
#include <vector>
#include <map>
#include <optional>
#include <algorithm>
#include "prym/rational.hpp"

namespace prym {

inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

inline Int next_prime(const Int& n) {
    Int r;
    mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline std::vector<uint64_t> primes_up_to(uint64_t n) {
    std::vector<bool> comp(n + 1, false);
    std::vector<uint64_t> ps;
    for (uint64_t i = 2; i <= n; ++i) {
        if (!comp[i]) {
            ps.push_back(i);
            for (uint64_t j = i * i; j <= n; j += i) comp[j] = true;
        }
    }
    return ps;
}

inline Int powmod(Int b, Int e, const Int& m) {
    Int r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int invmod(const Int& a, const Int& m) {
    Int r;
    int ok = mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    PRYM_CHECK(ok != 0, "invmod: not invertible");
    return r;
}

inline Int mod_pos(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

namespace detail {
inline Int pollard_brent(const Int& n, rng_t& rng) {
    // Brent's cycle variant; n odd composite, not a prime power obstacle.
    while (true) {
        Int y = Int(rng() % 1000003) % n, c = Int(rng() % 1000003) % n, m = 128;
        if (c == 0) c = 1;
        Int g = 1, r = 1, q = 1, x, ys;
        while (g == 1) {
            x = y;
            for (Int i = 0; i < r; ++i) y = (y * y + c) % n;
            Int k = 0;
            while (k < r && g == 1) {
                ys = y;
                Int lim = (r - k < m) ? Int(r - k) : m;
                for (Int i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                g = gcd(abs(x - ys), n);
            }
        }
        if (g != n) return g;
    }
}
}  // namespace detail

// Full factorization n = prod p^e, n > 0.  Trial division then Pollard-Brent.
inline std::map<Int, unsigned> factorize(Int n) {
    PRYM_CHECK(n > 0, "factorize expects n > 0");
    std::map<Int, unsigned> f;
    for (uint64_t p : {2, 3, 5, 7, 11, 13}) {
        while (n % p == 0) { f[Int(p)]++; n /= p; }
    }
    for (uint64_t p = 17; p < 100000 && n > 1; p += 2) {
        while (n % p == 0) { f[Int(p)]++; n /= p; }
    }
    std::vector<Int> stack;
    if (n > 1) stack.push_back(n);
    rng_t rng = make_rng(0x5eed);
    while (!stack.empty()) {
        Int m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (is_prime(m)) { f[m]++; continue; }
        Int d = detail::pollard_brent(m, rng);
        stack.push_back(d);
        stack.push_back(m / d);
    }
    return f;
}

inline std::vector<Int> prime_divisors(const Int& n) {
    std::vector<Int> ps;
    for (auto& [p, e] : factorize(abs(n))) ps.push_back(p);
    return ps;
}

// Largest s with s^2 | n (n != 0).
inline Int square_part(const Int& n) {
    Int s = 1;
    for (auto& [p, e] : factorize(abs(n)))
        for (unsigned i = 0; i + 1 < e; i += 2) s *= p;
    return s;
}

inline Int squarefree_part(const Int& n) {
    PRYM_CHECK(n != 0, "squarefree_part of zero");
    Int s = square_part(n);
    return n / (s * s);
}

// CRT for coprime moduli: x = r1 mod m1, x = r2 mod m2.
inline std::pair<Int, Int> crt_pair(const Int& r1, const Int& m1, const Int& r2, const Int& m2) {
    Int u = invmod(m1 % m2, m2);
    Int x = r1 + m1 * mod_pos((r2 - r1) * u, m2);
    return {mod_pos(x, m1 * m2), m1 * m2};
}

inline std::pair<Int, Int> crt_list(const std::vector<std::pair<Int, Int>>& rm) {
    PRYM_CHECK(!rm.empty(), "crt_list: empty");
    Int r = rm[0].first, m = rm[0].second;
    for (size_t i = 1; i < rm.size(); ++i)
        std::tie(r, m) = crt_pair(r, m, rm[i].first, rm[i].second);
    return {r, m};
}

// Wang's rational reconstruction: find p/q = a mod m with |p|, q <= sqrt(m/2).
inline std::optional<Rat> rational_reconstruct(const Int& a0, const Int& m) {
    Int bound = floor_sqrt(m / 2);
    Int u0 = m, u1 = mod_pos(a0, m);
    Int v0 = 0, v1 = 1;
    while (u1 > bound) {
        Int q = u0 / u1;
        Int u2 = u0 - q * u1, v2 = v0 - q * v1;
        u0 = u1; u1 = u2; v0 = v1; v1 = v2;
    }
    if (abs(v1) > bound || v1 == 0) return std::nullopt;
    if (gcd(u1, v1) != 1) return std::nullopt;
    Rat r = make_rat(u1, v1);
    return r;
}

// Square root of a mod p^k (p odd, a a unit square mod p), Hensel-lifted.
inline std::optional<Int> sqrt_mod_pk(const Int& a, const Int& p, unsigned k) {
    Int pk = 1;
    for (unsigned i = 0; i < k; ++i) pk *= p;
    Int am = mod_pos(a, pk);
    PRYM_CHECK(p % 2 != 0, "sqrt_mod_pk wants odd p");
    PRYM_CHECK(am % p != 0, "sqrt_mod_pk wants a unit");
    if (powmod(am, (p - 1) / 2, p) != 1) return std::nullopt;
    // Tonelli-Shanks mod p.
    Int q = p - 1;
    unsigned s = 0;
    while (q % 2 == 0) { q /= 2; s++; }
    Int z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) z += 1;
    Int m = s, c = powmod(z, q, p), t = powmod(am, q, p), r = powmod(am, (q + 1) / 2, p);
    while (t != 1) {
        Int tt = t;
        unsigned i = 0;
        while (tt != 1) { tt = tt * tt % p; i++; }
        Int b = c;
        for (Int j = 0; j + 1 < m - i; ++j) b = b * b % p;
        m = i; c = b * b % p; t = t * c % p; r = r * b % p;
    }
    // Lift to p^k: r -> r - (r^2 - a)/(2r) at doubling precision.
    Int mod = p;
    while (mod < pk) {
        mod = mod * mod;
        if (mod > pk) mod = pk;
        Int num = mod_pos(r * r - am, mod);
        Int den = mod_pos(2 * r, mod);
        r = mod_pos(r - num * invmod(den, mod), mod);
    }
    return mod_pos(r, pk);
}

}  // namespace prym

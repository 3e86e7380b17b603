#pragma once
#include <array>

#include "prym/genus2.hpp"
#include "prym/jacenum.hpp"
#include "prym/linalg.hpp"
#include "prym/mpoly.hpp"

namespace prym {

// Image of a divisor class on the Kummer surface, as a projective 4-tuple
// normalized so that the first nonzero coordinate is 1.
template <class T>
std::array<T, 4> kummer_map(const g2curve<T>& C, const g2div<T>& d) {
    const T zr = C.f.zr;
    T one = dom<T>::one(zr);
    T two = dom<T>::from_int(2, zr);
    auto F = [&](int i) { return C.f[i]; };
    if (g2_is_identity(C, d)) return {zr, zr, zr, one};
    int da = d.a.deg();
    if (da == 2) {
        T a1 = d.a[1], a0 = d.a[0];
        T s1 = -a1, s2 = a0;
        T disc = a1 * a1 - dom<T>::from_int(4, zr) * a0;
        T k4{zr};
        if (!dom<T>::is_zero(disc)) {
            T F0 = two * F(0) + F(1) * s1 + two * F(2) * s2 + F(3) * s1 * s2 +
                   two * F(4) * s2 * s2 + F(5) * s1 * s2 * s2 + two * F(6) * s2 * s2 * s2;
            T y1y2 = d.b[0] * d.b[0] - d.b[0] * d.b[1] * a1 + d.b[1] * d.b[1] * a0;
            k4 = (F0 - two * y1y2) / disc;
        } else {
            // doubled point x1 with y1 = b(x1) != 0
            T x1 = -a1 / two;
            T fx = C.f.eval(x1);
            T fpx = C.f.derivative().eval(x1);
            T fppx = C.f.derivative().derivative().eval(x1);
            k4 = F(3) * x1 + two * F(4) * x1 * x1 + dom<T>::from_int(4, zr) * F(5) * x1 * x1 * x1 +
                 dom<T>::from_int(6, zr) * F(6) * x1 * x1 * x1 * x1 - fppx / two +
                 fpx * fpx / (dom<T>::from_int(4, zr) * fx);
        }
        return {one, s1, s2, k4};
    }
    if (da == 1) {
        T x1 = -d.a[0];
        T y1 = d.b[0];
        T k4{zr};
        if (C.deg6) {
            PRYM_CHECK(C.s.has_value(), "marker class needs the stored sqrt(f6)");
            T s = *C.s;
            T sy = (d.np == 1 ? s : -s);
            k4 = F(5) * x1 * x1 + two * F(6) * x1 * x1 * x1 - two * sy * y1;
        } else {
            k4 = F(5) * x1 * x1;
        }
        return {zr, one, x1, k4};
    }
    // deg a == 0, non-identity: {2*oo+} or {2*oo-} on a degree-6 model
    PRYM_CHECK(C.deg6 && (d.np == 2 || d.nm == 2), "unexpected divisor shape in kummer_map");
    T c34 = F(5) * F(5) - dom<T>::from_int(4, zr) * F(4) * F(6);
    return {zr, zr, one, c34 / (dom<T>::from_int(4, zr) * F(6))};
}

struct kummer_surface {
    mpoly K;  // quartic in k1..k4
    static const std::vector<std::string>& names() {
        static std::vector<std::string> n{"k1", "k2", "k3", "k4"};
        return n;
    }
};

namespace detail {

// Rewrite a symmetric polynomial in x1, x2 (mpoly vars 0, 1) in terms of
// s1 = x1 + x2 and s2 = x1 x2 (returned as vars 0, 1).
inline mpoly symmetrize2(mpoly g) {
    mpoly out(2);
    mpoly s1 = mpoly::var(2, 0) + mpoly::var(2, 1);
    mpoly s2 = mpoly::var(2, 0) * mpoly::var(2, 1);
    while (!g.t.empty()) {
        auto it = g.t.rbegin();  // grevlex-largest
        expv e = it->first;
        Rat c = it->second;
        int a = e.e[0], b = e.e[1];
        PRYM_CHECK(a >= b, "symmetrize: polynomial is not symmetric");
        mpoly m = mpoly::constant(2, c);
        for (int i = 0; i < a - b; ++i) m = m * s1;
        for (int i = 0; i < b; ++i) m = m * s2;
        g = g - m;
        out.add_term(expv{{(uint8_t)(a - b), (uint8_t)b}, 2}, c);
    }
    return out;
}

inline uint64_t next_prime_u64(uint64_t n) {
    Int q = next_prime(Int((unsigned long)n));
    return mpz_get_ui(q.get_mpz_t());
}

}  // namespace detail

// The quartic model of the Kummer surface of y^2 = f(x):
//   (k2^2 - 4 k1 k3) k4^2 + K1(k1,k2,k3) k4 + K0(k1,k2,k3) = 0.
// Exact derivation: over a generic surface point (1 : s1 : s2) the two k4
// values are roots of t^2 - (2 F0/D) t + (F0^2 - 4 f(x1) f(x2))/D^2 = 0
// with D = (x1 - x2)^2; clearing denominators gives the quartic.
inline kummer_surface kummer_surface_exact(const g2curve<Rat>& C) {
    mpoly x1 = mpoly::var(2, 0), x2 = mpoly::var(2, 1);
    auto fc = [&](int i) { return mpoly::constant(2, C.f[i]); };
    mpoly s1 = x1 + x2, s2 = x1 * x2;
    mpoly F0 = fc(0) * Rat(2) + fc(1) * s1 + fc(2) * s2 * Rat(2) + fc(3) * s1 * s2 +
               fc(4) * s2.pow(2) * Rat(2) + fc(5) * s1 * s2.pow(2) + fc(6) * s2.pow(3) * Rat(2);
    mpoly fx1 = mpoly::constant(2, Rat(0)), fx2 = mpoly::constant(2, Rat(0));
    for (int i = 6; i >= 0; --i) {
        fx1 = fx1 * x1 + fc(i);
        fx2 = fx2 * x2 + fc(i);
    }
    mpoly D = (x1 - x2) * (x1 - x2);
    mpoly G = F0 * F0 - fx1 * fx2 * Rat(4);
    mpoly K0s = detail::symmetrize2(G.divexact(D));  // in s1, s2
    mpoly F0s = detail::symmetrize2(F0);             // in s1, s2
    // Homogenize with k1; s1 -> k2/k1, s2 -> k3/k1.
    auto homog = [&](const mpoly& m, int degtot) {
        mpoly out(4);
        for (auto& [e, c] : m.t) {
            int i = e.e[0], j = e.e[1];
            PRYM_CHECK(i + j <= degtot, "homogenization degree overflow");
            expv ne{{}, 4};
            ne.e[0] = (uint8_t)(degtot - i - j);
            ne.e[1] = (uint8_t)i;
            ne.e[2] = (uint8_t)j;
            out.add_term(ne, c);
        }
        return out;
    };
    mpoly K0 = homog(K0s, 4);
    mpoly K1 = homog(F0s, 3) * Rat(-2);
    mpoly k1 = mpoly::var(4, 0), k2 = mpoly::var(4, 1), k3 = mpoly::var(4, 2),
          k4 = mpoly::var(4, 3);
    mpoly K = (k2 * k2 - k1 * k3 * Rat(4)) * k4 * k4 + K1 * k4 + K0;
    return kummer_surface{K};
}

namespace detail {

inline std::vector<expv> quartic_monomials4() {
    std::vector<expv> out;
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 4; ++b)
            for (int c = 0; a + b + c <= 4; ++c) {
                int d = 4 - a - b - c;
                out.push_back(expv{{(uint8_t)a, (uint8_t)b, (uint8_t)c, (uint8_t)d}, 4});
            }
    return out;
}

}  // namespace detail

// Recover the Kummer quartic by sampling images of random classes over F_p
// for several primes and reconstructing the rational coefficients; a fully
// independent check of kummer_surface_exact.
inline kummer_surface derive_kummer_surface(const g2curve<Rat>& C, uint64_t seed = 101) {
    auto mons = detail::quartic_monomials4();
    const size_t M = mons.size();
    PRYM_CHECK(M == 35, "expected 35 quartic monomials");
    size_t inorm = M;  // position of k2^2 k4^2, used for normalization
    for (size_t i = 0; i < M; ++i)
        if (mons[i].e[0] == 0 && mons[i].e[1] == 2 && mons[i].e[2] == 0 && mons[i].e[3] == 2)
            inorm = i;
    PRYM_CHECK(inorm < M, "normalization monomial not found");

    Int bad(2);
    for (int i = 0; i <= C.f.deg(); ++i) bad *= den(C.f[i]);
    bad *= num(C.f.lead());
    bad *= num(poly_disc(C.f)) * den(poly_disc(C.f));

    rng_t rng = make_rng(seed);
    Int modulus(1);
    std::vector<Int> accum(M, Int(0));
    std::vector<Rat> coeffs(M);
    uint64_t p = 40;
    int used = 0;
    bool done = false;
    auto sample_row = [&](const g2curve<fpelem>& Cp, rng_t& r, std::vector<fpelem>& row) -> bool {
        uint64_t pp = Cp.f.zr.p;
        std::uniform_int_distribution<uint64_t> U(0, pp - 1);
        uint64_t xa = U(r), xb = U(r);
        if (xa == xb) return false;
        fpelem fxa = Cp.f.eval(fpelem{xa, pp}), fxb = Cp.f.eval(fpelem{xb, pp});
        if (fxa.v == 0 || fxb.v == 0) return false;
        auto ya = fp_sqrt(fxa), yb = fp_sqrt(fxb);
        if (!ya || !yb) return false;
        if (U(r) % 2) *ya = -*ya;
        if (U(r) % 2) *yb = -*yb;
        auto d = g2_from_points(Cp, fpelem{xa, pp}, *ya, fpelem{xb, pp}, *yb);
        auto k = kummer_map(Cp, d);
        row.clear();
        row.reserve(M);
        for (auto& e : mons) {
            fpelem v{1, pp};
            for (int j = 0; j < 4; ++j)
                for (int tt = 0; tt < e.e[j]; ++tt) v = v * k[(size_t)j];
            row.push_back(v);
        }
        return true;
    };
    while (!done) {
        p = detail::next_prime_u64(p);
        if (bad % Int((unsigned long)p) == 0) continue;
        g2curve<fpelem> Cp = g2_reduce_curve(C, p);
        std::vector<std::vector<fpelem>> rows;
        int want = (int)M + 10;
        int guard = 0;
        std::vector<fpelem> row;
        while ((int)rows.size() < want && guard < 20000) {
            ++guard;
            if (sample_row(Cp, rng, row)) rows.push_back(row);
        }
        if ((int)rows.size() != want) continue;
        matrix<fpelem> S(rows.size(), M, fpelem{0, p});
        for (size_t r = 0; r < rows.size(); ++r)
            for (size_t c = 0; c < M; ++c) S.at(r, c) = rows[r][c];
        auto ker = kernel_basis(S);
        if (ker.size() != 1) continue;  // unlucky prime or samples
        auto& v = ker[0];
        if (v[inorm].v == 0) continue;
        fpelem inv = v[inorm].inv();
        std::vector<Int> res(M);
        for (size_t i = 0; i < M; ++i) res[i] = Int((unsigned long)(v[i] * inv).v);
        if (used == 0) {
            accum = res;
            modulus = Int((unsigned long)p);
        } else {
            for (size_t i = 0; i < M; ++i)
                accum[i] = crt_pair(accum[i], modulus, res[i], Int((unsigned long)p)).first;
            modulus *= Int((unsigned long)p);
        }
        ++used;
        if (used < 2) continue;
        bool ok = true;
        for (size_t i = 0; i < M && ok; ++i) {
            auto r = rational_reconstruct(accum[i], modulus);
            if (!r)
                ok = false;
            else
                coeffs[i] = *r;
        }
        if (!ok) continue;
        // verify against fresh samples at a fresh prime
        uint64_t q = detail::next_prime_u64(p + 1);
        while (bad % Int((unsigned long)q) == 0) q = detail::next_prime_u64(q + 1);
        g2curve<fpelem> Cq = g2_reduce_curve(C, q);
        bool verified = true;
        int got = 0, guard2 = 0;
        while (got < 12 && guard2 < 20000 && verified) {
            ++guard2;
            if (!sample_row(Cq, rng, row)) continue;
            fpelem acc{0, q};
            for (size_t i = 0; i < M; ++i)
                acc = acc + dom<fpelem>::from_rat(coeffs[i], fpelem{0, q}) * row[i];
            if (acc.v != 0) verified = false;
            ++got;
        }
        if (verified && got == 12) done = true;
    }
    mpoly K(4);
    for (size_t i = 0; i < M; ++i)
        if (coeffs[i] != Rat(0)) K.add_term(mons[i], coeffs[i]);
    return kummer_surface{K};
}

}  // namespace prym

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "prym/rational.hpp"
#include "prym/zfuncs.hpp"
#include "prym/fp.hpp"
#include "prym/upoly.hpp"
#include "prym/linalg.hpp"
#include "prym/mpoly.hpp"
#include "prym/padic.hpp"

using namespace prym;

TEST_CASE("rational text round trip and canonical form") {
    CHECK(rat_str(rat_parse("22/7")) == "22/7");
    CHECK(rat_str(rat_parse("-6/4")) == "-3/2");
    CHECK(rat_str(rat_parse("0/5")) == "0");
    CHECK(rat_str(rat_parse("17")) == "17");
    CHECK(rat_parse("3/6") == rat_parse("1/2"));
    CHECK_THROWS_AS(rat_parse("1/0"), input_error);
    CHECK_THROWS_AS(rat_parse("x"), input_error);
}

TEST_CASE("square detection and square parts") {
    CHECK(is_square_rat(rat_parse("49/121")));
    CHECK(!is_square_rat(rat_parse("-4")));
    CHECK(!is_square_rat(rat_parse("8")));
    CHECK(*sqrt_rat(rat_parse("49/121")) == rat_parse("7/11"));
    CHECK(square_part(Int(48)) == 4);
    CHECK(squarefree_part(Int(48)) == 3);
    CHECK(squarefree_part(Int(-50)) == -2);
}

TEST_CASE("factorization rebuilds the input from prime powers") {
    rng_t rng = make_rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Int n = Int(rng() % 1000000) + 2;
        auto f = factorize(n);
        Int prod = 1;
        for (auto& [p, e] : f) {
            CHECK(is_prime(p));
            for (unsigned i = 0; i < e; ++i) prod *= p;
        }
        CHECK(prod == n);
    }
    auto f = factorize(Int("600851475143"));
    CHECK(f.size() == 4);
}

TEST_CASE("crt and rational reconstruction round trip") {
    rng_t rng = make_rng(11);
    std::vector<Int> ps = {1009, 2003, 3001, 4001, 5003};
    for (int trial = 0; trial < 25; ++trial) {
        Int a = Int(rng() % 2000) - 1000;
        Int b = Int(rng() % 50) + 1;
        Rat q = make_rat(a, b);
        std::vector<std::pair<Int, Int>> rm;
        for (auto& p : ps) {
            Int r = mod_pos(num(q) * invmod(den(q), p), p);
            rm.push_back({r, p});
        }
        auto [r, m] = crt_list(rm);
        auto rec = rational_reconstruct(r, m);
        REQUIRE(rec.has_value());
        CHECK(*rec == q);
    }
}

TEST_CASE("prime field square roots") {
    for (uint64_t p : {11, 13, 10007, 1000003}) {
        rng_t rng = make_rng(p);
        int squares = 0;
        for (int trial = 0; trial < 30; ++trial) {
            fpelem a(rng() % p, p);
            auto r = fp_sqrt(a);
            if (a.v == 0) {
                CHECK(r->v == 0);
                continue;
            }
            if (legendre(a) == 1) {
                REQUIRE(r.has_value());
                CHECK((*r) * (*r) == a);
                squares++;
            } else {
                CHECK(!r.has_value());
            }
        }
        CHECK(squares > 0);
    }
}

TEST_CASE("hensel-lifted square roots mod p^k") {
    Int p = 13;
    for (Int a : {Int(3), Int(10), Int(22)}) {
        auto r = sqrt_mod_pk(a, p, 6);
        Int pk = 1;
        for (int i = 0; i < 6; ++i) pk *= p;
        if (r) CHECK(mod_pos(*r * *r - a, pk) == 0);
    }
    CHECK(sqrt_mod_pk(Int(3), p, 6).has_value());
    CHECK(!sqrt_mod_pk(Int(2), p, 6).has_value());
}

static upoly<Rat> rnd_poly(rng_t& rng, int deg) {
    std::vector<Rat> c;
    for (int i = 0; i <= deg; ++i) c.push_back(Rat((long)(rng() % 19) - 9));
    return rat_poly(c);
}

TEST_CASE("polynomial division invariant f = q*g + r") {
    rng_t rng = make_rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        auto f = rnd_poly(rng, 6), g = rnd_poly(rng, 3);
        if (g.is_zero()) continue;
        auto [q, r] = divrem(f, g);
        CHECK(q * g + r == f);
        CHECK(r.deg() < g.deg());
    }
}

TEST_CASE("gcd recovers a planted common factor") {
    rng_t rng = make_rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        auto h = rnd_poly(rng, 2);
        if (h.deg() < 1) continue;
        auto a = rnd_poly(rng, 3), b = rnd_poly(rng, 3);
        auto g = gcd_poly(a * h, b * h);
        if (gcd_poly(a, b).deg() == 0) {
            CHECK(g == h.monic());
        } else {
            CHECK(pmod(g, h.monic()).is_zero());
        }
    }
}

// The Sylvester determinant is the independent oracle for the remainder
// sequence resultant.
static Rat sylvester_res(const upoly<Rat>& f, const upoly<Rat>& g) {
    int m = f.deg(), n = g.deg();
    REQUIRE(m >= 0);
    REQUIRE(n >= 0);
    if (m == 0 && n == 0) return Rat(1);
    matrix<Rat> s(m + n, m + n, Rat(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) s.at(i, i + j) = f[m - j];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) s.at(n + i, i + j) = g[n - j];
    return det(s);
}

TEST_CASE("resultant matches the Sylvester determinant") {
    rng_t rng = make_rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        auto f = rnd_poly(rng, 1 + (int)(rng() % 4));
        auto g = rnd_poly(rng, 1 + (int)(rng() % 4));
        if (f.deg() < 1 || g.deg() < 1) continue;
        CHECK(resultant(f, g) == sylvester_res(f, g));
    }
}

TEST_CASE("discriminant of a quadratic is b^2 - 4ac") {
    auto f = rat_poly({Rat(5), Rat(-3), Rat(2)});  // 2x^2 - 3x + 5
    CHECK(poly_disc(f) == Rat(9 - 40));
    auto g = rat_poly({Rat(-1), Rat(0), Rat(1)});  // x^2 - 1
    CHECK(poly_disc(g) == Rat(4));
    CHECK(is_squarefree(g));
    CHECK(!is_squarefree(g * g));
}

TEST_CASE("xgcd bezout identity") {
    rng_t rng = make_rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = rnd_poly(rng, 4), b = rnd_poly(rng, 3);
        if (a.is_zero() || b.is_zero()) continue;
        auto [g, u, v] = xgcd_poly(a, b);
        CHECK(u * a + v * b == g);
    }
}

TEST_CASE("linear algebra invariants over F_p") {
    rng_t rng = make_rng(41);
    uint64_t p = 10007;
    for (int trial = 0; trial < 10; ++trial) {
        matrix<fpelem> m(4, 6, fpelem(0, p));
        for (size_t i = 0; i < 4; ++i)
            for (size_t j = 0; j < 6; ++j) m.at(i, j) = fpelem(rng() % p, p);
        auto ker = kernel_basis(m);
        CHECK(ker.size() >= 2);
        for (auto& v : ker) {
            for (size_t i = 0; i < 4; ++i) {
                fpelem acc(0, p);
                for (size_t j = 0; j < 6; ++j) acc += m.at(i, j) * v[j];
                CHECK(acc.is_zero());
            }
        }
    }
}

TEST_CASE("determinant and solve over the rationals") {
    matrix<Rat> m(3, 3, Rat(0));
    long vals[3][3] = {{2, 1, -1}, {-3, -1, 2}, {-2, 1, 2}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.at(i, j) = Rat(vals[i][j]);
    CHECK(det(m) == Rat(-1));
    auto x = solve_linear(m, {Rat(8), Rat(-11), Rat(-3)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == Rat(2));
    CHECK((*x)[1] == Rat(3));
    CHECK((*x)[2] == Rat(-1));
}

TEST_CASE("mpoly text round trip") {
    std::vector<std::string> uvw = {"u", "v", "w"};
    auto f = mpoly_parse("3*u^2*v - 7/2*w^4 + 1", uvw);
    CHECK(mpoly_str(f, uvw) == "-7/2*w^4 + 3*u^2*v + 1");
    CHECK(mpoly_parse(mpoly_str(f, uvw), uvw) == f);
    auto g = mpoly_parse("u*v - u*v + w", uvw);
    CHECK(g == mpoly::var(3, 2));
    CHECK_THROWS_AS(mpoly_parse("2*z", uvw), input_error);
}

TEST_CASE("mpoly product division round trip") {
    std::vector<std::string> uvw = {"u", "v", "w"};
    auto a = mpoly_parse("u^2 + 3*v*w - 2", uvw);
    auto b = mpoly_parse("5*u*w - v^2 + 1", uvw);
    CHECK((a * b).divexact(b) == a);
    CHECK((a * b).divexact(a) == b);
    CHECK_THROWS((a * b + mpoly::constant(3, Rat(1))).divexact(a));
}

TEST_CASE("mpoly substitution agrees with evaluation") {
    std::vector<std::string> uvw = {"u", "v", "w"};
    auto f = mpoly_parse("u^2*v - 3*w^2 + u", uvw);
    auto g = mpoly_parse("v + 2*w", uvw);
    auto h = f.subst(0, g);
    std::vector<Rat> pt = {Rat(99), Rat(2), Rat(5)};
    std::vector<Rat> pt2 = {g.eval_rat(pt), Rat(2), Rat(5)};
    CHECK(h.eval_rat(pt) == f.eval_rat(pt2));
}

TEST_CASE("mpoly coefficient extraction reassembles the polynomial") {
    std::vector<std::string> uvw = {"u", "v", "w"};
    auto f = mpoly_parse("u^2*v - 3*u*w^2 + 4*v*w - 7", uvw);
    auto cs = f.coeff_list(0);
    mpoly back(3);
    for (size_t k = 0; k < cs.size(); ++k) back = back + cs[k] * mpoly::var(3, 0).pow((unsigned)k);
    CHECK(back == f);
    CHECK(f.is_homogeneous(3) == false);
    CHECK(mpoly_parse("u^2*v - w^3", uvw).is_homogeneous(3));
}

TEST_CASE("mpoly normalization gives integral content-one positive lead") {
    std::vector<std::string> uvw = {"u", "v", "w"};
    auto f = mpoly_parse("-2/3*u^2 - 4/3*v*w", uvw);
    auto [g, s] = f.normalized_primitive();
    CHECK(mpoly_str(g, uvw) == "u^2 + 2*v*w");
    CHECK(f * s == g);
}

TEST_CASE("p-adic arithmetic round-trips rationals") {
    uint64_t p = 13;
    long N = 8;
    auto enc = [&](long a, long b) { return padic::from_rat(Rat(a, b), p, N); };
    // field ops agree with exact rational results
    auto x = enc(22, 7), y = enc(-5, 169);
    auto z = (x * y + x) / y;
    auto want = padic::from_rat((Rat(22, 7) * Rat(-5, 169) + Rat(22, 7)) / Rat(-5, 169), p, N);
    CHECK(z.v == want.v);
    CHECK(z.p == want.p);
    Int pk = int_pow(Int((unsigned long)p), std::min(z.N, want.N));
    CHECK(mod_pos(z.u - want.u, pk) == 0);
    // valuations
    CHECK(enc(26, 1).v == 1);
    CHECK(enc(1, 26).v == -1);
    CHECK(enc(169, 3).v == 2);
    // reduce_mod matches plain modular arithmetic
    CHECK(enc(22, 7).reduce_mod(3) == mod_pos(22 * invmod(7, Int(13 * 13 * 13)), Int(13 * 13 * 13)));
}

TEST_CASE("p-adic precision tracking and apparent zeros") {
    uint64_t p = 7;
    auto a = padic::from_rat(Rat(3), p, 4);
    auto b = padic::from_rat(Rat(3), p, 4);
    auto d = a - b;  // cancels to an apparent zero O(7^4)
    CHECK(d.apparent_zero());
    CHECK(!d.exact());
    CHECK(d.abs_prec() == 4);
    CHECK_THROWS_AS(d.inv(), precision_loss);
    CHECK_THROWS_AS(padic_sqrt(d), precision_loss);
    // exact zero propagates through multiplication
    auto ez = padic::exact_zero(p, 4);
    CHECK((ez * a).exact());
    // loss of relative precision when valuations collide partially
    auto u1 = padic::from_rat(Rat(1 + 49), p, 4);
    auto u2 = padic::from_rat(Rat(1), p, 4);
    auto diff = u1 - u2;  // = 49, known to O(7^4)
    CHECK(diff.v == 2);
    CHECK(diff.N == 2);
    CHECK(diff.u == 1);
}

TEST_CASE("p-adic square roots") {
    uint64_t p = 13;
    auto x = padic::from_rat(Rat(4 * 13 * 13), p, 6);
    auto r = padic_sqrt(x);
    REQUIRE(r.has_value());
    CHECK(r->v == 1);
    Int pk = int_pow(Int((unsigned long)p), r->N);
    CHECK(mod_pos(r->u * r->u - 4, pk) == 0);
    // odd valuation has no square root
    CHECK(!padic_sqrt(padic::from_rat(Rat(13), p, 6)).has_value());
    // non-residue unit has no square root
    Int nr = 2;
    while (legendre(fpelem{mod_pos(nr, Int((long)p)).get_ui(), p}) != -1) nr += 1;
    CHECK(!padic_sqrt(padic::from_rat(Rat(nr), p, 6)).has_value());
    // residue round-trip at higher precision
    auto s = padic_sqrt(padic::from_rat(Rat(10), p, 9));
    REQUIRE(s.has_value());
    Int pk9 = int_pow(Int((unsigned long)p), 9);
    CHECK(mod_pos(s->u * s->u - 10, pk9) == 0);
}

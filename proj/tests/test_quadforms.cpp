#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <map>
#include <random>

#include "doctest.h"
#include "prym/numfield.hpp"
#include "prym/qfactor.hpp"
#include "prym/quadext.hpp"
#include "prym/quadforms.hpp"
#include "prym/sturm.hpp"

using namespace prym;

namespace {

upoly<Rat> qpoly(const std::vector<Rat>& asc) {
    upoly<Rat> f{Rat(0)};
    for (size_t i = 0; i < asc.size(); ++i) f.set((int)i, asc[i]);
    return f;
}

upoly<Rat> reconstruct(const qfactorization& fac) {
    upoly<Rat> acc = upoly<Rat>::constant(fac.unit);
    for (auto& [f, m] : fac.factors)
        for (int i = 0; i < m; ++i) acc = acc * f;
    return acc;
}

bool same_poly(const upoly<Rat>& a, const upoly<Rat>& b) { return (a - b).is_zero(); }

bool has_factor(const qfactorization& fac, const upoly<Rat>& f, int mult) {
    for (auto& [g, m] : fac.factors)
        if (same_poly(f, g)) return m == mult;
    return false;
}

}  // namespace

TEST_CASE("rational polynomial factorization recovers known factors") {
    // x^5 + x^4 - 7x^3 - x^2 + 6x = x (x-2)(x-1)(x+1)(x+3)
    upoly<Rat> f = qpoly({0, 6, -1, -7, 1, 1});
    auto fac = factor_q(f);
    CHECK(fac.unit == 1);
    CHECK(fac.factors.size() == 5);
    CHECK(has_factor(fac, qpoly({0, 1}), 1));
    CHECK(has_factor(fac, qpoly({-2, 1}), 1));
    CHECK(has_factor(fac, qpoly({-1, 1}), 1));
    CHECK(has_factor(fac, qpoly({1, 1}), 1));
    CHECK(has_factor(fac, qpoly({3, 1}), 1));
    CHECK(same_poly(reconstruct(fac), f));

    // Swinnerton-Dyer quartic: irreducible over Q, reducible mod every prime
    upoly<Rat> sd = qpoly({1, 0, -10, 0, 1});
    auto fac2 = factor_q(sd);
    CHECK(fac2.factors.size() == 1);
    CHECK(fac2.factors[0].second == 1);
    CHECK(same_poly(reconstruct(fac2), sd));

    // seventh cyclotomic polynomial
    upoly<Rat> c7 = qpoly({1, 1, 1, 1, 1, 1, 1});
    CHECK(factor_q(c7).factors.size() == 1);

    // four quadratic factors needing recombination
    upoly<Rat> g = qpoly({1, 0, 1}) * qpoly({-2, 0, 1}) * qpoly({2, 0, 1}) * qpoly({-3, 0, 1});
    auto fac3 = factor_q(g);
    CHECK(fac3.factors.size() == 4);
    CHECK(has_factor(fac3, qpoly({1, 0, 1}), 1));
    CHECK(has_factor(fac3, qpoly({-2, 0, 1}), 1));
    CHECK(has_factor(fac3, qpoly({2, 0, 1}), 1));
    CHECK(has_factor(fac3, qpoly({-3, 0, 1}), 1));
    CHECK(same_poly(reconstruct(fac3), g));

    // repeated factors and a unit
    upoly<Rat> h = (qpoly({1, 0, 1}) * qpoly({1, 0, 1}) * qpoly({3, 1})) * Rat(6);
    auto fac4 = factor_q(h);
    CHECK(fac4.unit == 6);
    CHECK(has_factor(fac4, qpoly({1, 0, 1}), 2));
    CHECK(has_factor(fac4, qpoly({3, 1}), 1));
    CHECK(same_poly(reconstruct(fac4), h));
}

TEST_CASE("random products round-trip through the factorizer") {
    std::vector<upoly<Rat>> pool{qpoly({1, 1}),    qpoly({-1, 1}),      qpoly({-2, 1}),
                                 qpoly({1, 0, 1}), qpoly({-2, 0, 1}),   qpoly({1, 1, 1}),
                                 qpoly({-2, 0, 0, 1}), qpoly({1, 1, 0, 1})};
    std::vector<Rat> units{Rat(1), Rat(-2), make_rat(3, 2)};
    auto rng = make_rng(20240817);
    std::uniform_int_distribution<int> npick(2, 4), ppick(0, (int)pool.size() - 1), mpick(1, 2),
        upick(0, (int)units.size() - 1);
    for (int round = 0; round < 12; ++round) {
        std::vector<std::pair<upoly<Rat>, int>> chosen;
        int n = npick(rng);
        upoly<Rat> prod = upoly<Rat>::constant(units[(size_t)upick(rng)]);
        Rat unit = prod[0];
        for (int i = 0; i < n; ++i) {
            auto& f = pool[(size_t)ppick(rng)];
            int m = mpick(rng);
            bool merged = false;
            for (auto& [g, mm] : chosen)
                if (same_poly(f, g)) {
                    mm += m;
                    merged = true;
                }
            if (!merged) chosen.push_back({f, m});
            for (int k = 0; k < m; ++k) prod = prod * f;
        }
        auto fac = factor_q(prod);
        CHECK(fac.unit == unit);
        REQUIRE(fac.factors.size() == chosen.size());
        for (auto& [f, m] : chosen) CHECK(has_factor(fac, f, m));
        CHECK(same_poly(reconstruct(fac), prod));
    }
}

TEST_CASE("rational root extraction handles multiplicities and denominators") {
    upoly<Rat> f = qpoly({make_rat(-1, 2), 1}) * qpoly({make_rat(-1, 2), 1}) * qpoly({3, 1}) *
                   qpoly({0, 1}) * Rat(4);
    auto roots = rational_roots(f);
    REQUIRE(roots.size() == 3);
    std::map<std::string, int> seen;
    for (auto& [r, m] : roots) seen[rat_str(r)] = m;
    CHECK(seen["1/2"] == 2);
    CHECK(seen["-3"] == 1);
    CHECK(seen["0"] == 1);

    // no rational roots on an irreducible quadratic
    CHECK(rational_roots(qpoly({1, 0, 1})).empty());
}

TEST_CASE("sturm chains count real roots exactly") {
    upoly<Rat> f = qpoly({-1, 1}) * qpoly({-3, 1}) * qpoly({2, 1});
    auto ch = sturm_chain(f);
    CHECK(real_root_count(f) == 3);
    CHECK(real_roots_in(ch, Rat(0), Rat(2)) == 1);
    CHECK(real_roots_in(ch, Rat(-3), Rat(4)) == 3);
    CHECK(real_roots_in(ch, Rat(1), Rat(3)) == 1);  // half-open: 3 counted, 1 not

    CHECK(real_root_count(qpoly({1, 0, 1})) == 0);
    CHECK(real_root_count(qpoly({1, 0, 0, 0, 1})) == 0);
    // distinct roots of a non-squarefree polynomial
    upoly<Rat> g = qpoly({-1, 1}) * qpoly({-1, 1}) * qpoly({4, 1});
    CHECK(real_root_count(g) == 2);
    // roots 0, ±sqrt(2), ±sqrt(3)
    upoly<Rat> h = qpoly({0, 6, 0, -5, 0, 1});
    CHECK(real_root_count(h) == 5);
}

TEST_CASE("real root isolation produces disjoint bracketing intervals") {
    upoly<Rat> h = qpoly({0, 6, 0, -5, 0, 1});
    auto ch = sturm_chain(h);
    auto ivs = isolate_real_roots(h);
    REQUIRE(ivs.size() == 5);
    for (size_t i = 0; i < ivs.size(); ++i) {
        CHECK(real_roots_in(ch, ivs[i].first, ivs[i].second) == 1);
        if (i + 1 < ivs.size()) CHECK(!(ivs[i + 1].first < ivs[i].second));
    }
    // bracketing: sign change or exact rational root at the right endpoint
    for (auto& [a, b] : ivs) {
        Rat fa = h.eval(a), fb = h.eval(b);
        CHECK(fa != 0);
        CHECK(fa * fb <= 0);
    }
}

TEST_CASE("polynomial signs are decidable at algebraic points") {
    upoly<Rat> f = qpoly({-2, 0, 1});  // roots ±sqrt(2)
    auto ivs = isolate_real_roots(f);
    REQUIRE(ivs.size() == 2);
    auto pos = ivs[1];  // sqrt(2)
    CHECK(sign_at_root(f, pos, qpoly({-1, 1})) == 1);    // sqrt(2) - 1 > 0
    CHECK(sign_at_root(f, pos, qpoly({-2, 1})) == -1);   // sqrt(2) - 2 < 0
    CHECK(sign_at_root(f, pos, qpoly({-2, 0, 1})) == 0);  // shares the root
    CHECK(sign_at_root(f, pos, qpoly({0, -3, 0, 1})) == -1);  // x^3-3x at sqrt(2)
    auto neg = ivs[0];
    CHECK(sign_at_root(f, neg, qpoly({0, -3, 0, 1})) == 1);
}

TEST_CASE("quadratic extension arithmetic") {
    using qx = quadext<Rat>;
    qx z{3, 2, 5}, w{1, -1, 5};
    qx p = z * w;
    CHECK(p.a == -7);
    CHECK(p.b == -1);
    CHECK(p.e == 5);
    CHECK(z * z.inv() == qx::embed(1, 5));
    CHECK(z * z.conj() == qx::embed(z.norm(), 5));
    CHECK(z.norm() == 9 - 4 * 5);
    qx r = qx::root(5);
    CHECK(r * r == qx::embed(5, 5));
    auto s = dom<qx>::sqrt(qx::embed(4, 5));
    REQUIRE(s.has_value());
    CHECK(*s == qx::embed(2, 5));
    auto s2 = dom<qx>::sqrt(qx::embed(5, 5));
    REQUIRE(s2.has_value());
    CHECK(*s2 * *s2 == qx::embed(5, 5));

    // nested tower Q(sqrt(2), sqrt(3))
    using q2 = quadext<Rat>;
    using q4 = quadext<q2>;
    q2 i2{1, 1, 2}, j2{2, -1, 2}, e3{3, 0, 2};
    q4 x{i2, j2, e3};
    q4 one4 = dom<q4>::one(x);
    CHECK(x * x.inv() == one4);
    CHECK((x + x.conj()) == q4{i2 + i2, dom<q2>::zero(i2), e3});
    CHECK((x * x.conj()) == q4{x.norm(), dom<q2>::zero(i2), e3});
}

TEST_CASE("number field arithmetic") {
    upoly<Rat> m = qpoly({-2, 0, 0, 1});  // x^3 - 2
    nfelem th = nfelem::theta(m);
    CHECK(th * th * th == nfelem::embed(2, m));
    nfelem a = nfelem::embed(1, m) + th;
    CHECK(a * a.inv() == nfelem::embed(1, m));
    CHECK(a.norm() == 3);
    nfelem b = nfelem::embed(2, m) - th + th * th;
    CHECK((a * b).norm() == a.norm() * b.norm());
    CHECK_THROWS_AS(dom<nfelem>::zero(th).inv(), error);
    // reducible modulus exposes zero divisors
    upoly<Rat> bad = qpoly({-1, 0, 1});
    nfelem zd = nfelem::theta(bad) - nfelem::embed(1, bad);
    CHECK_THROWS_AS(zd.inv(), error);
}

TEST_CASE("symmetric matrices and the pencil determinant") {
    auto rng = make_rng(77);
    std::uniform_int_distribution<long> small(-3, 3);
    std::array<Rat, 6> cs{1, 2, -3, make_rat(1, 2), 0, 4};
    symmat<Rat> Q = ternary_form(cs);
    CHECK(form_coeffs(Q) == cs);
    mpoly qm = form_mpoly(Q);
    for (int k = 0; k < 5; ++k) {
        std::vector<Rat> x{small(rng), small(rng), small(rng)};
        CHECK(Q.eval(x) == qm.eval_rat(x));
    }
    // det is a congruence invariant up to the square of det(A)
    for (int k = 0; k < 20; ++k) {
        matrix<Rat> A(3, 3, Rat(0));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) A.at(i, j) = small(rng);
        matrix<Rat> Ac = A;
        Rat dA = det(Ac);
        CHECK(symmat_det(Q.congruent(A)) == dA * dA * symmat_det(Q));
    }

    symmat<Rat> Q1 = ternary_form({1, 0, 0, 1, 0, 1});
    symmat<Rat> Q2 = ternary_form({0, 1, 0, 0, 0, 0});
    symmat<Rat> Q3w = ternary_form({0, 0, 0, 0, 0, 1});
    upoly<Rat> pd = pencil_det(quad_triple(Q1, Q2, Q3w));
    CHECK(same_poly(pd, qpoly({1, 0, 0, 0, -1})));  // (1 - x^2)(1 + x^2)
    CHECK(pd.deg() == 4);                           // deg < 6 exactly when det Q3 = 0

    upoly<Rat> pd2 = pencil_det(quad_triple(Q1, Q2, Q1));
    CHECK(pd2.deg() == 6);
    CHECK(pd2.lead() == symmat_det(Q1));
    CHECK(pd2[0] == symmat_det(Q1));

    // pointwise agreement with the determinant, and congruence invariance
    for (int k = 0; k < 10; ++k) {
        auto rnd6 = [&]() {
            std::array<Rat, 6> c;
            for (auto& v : c) v = small(rng);
            return c;
        };
        quad_triple T(ternary_form(rnd6()), ternary_form(rnd6()), ternary_form(rnd6()));
        upoly<Rat> p = pencil_det(T);
        for (long x0 : {-2L, 1L, 3L}) {
            symmat<Rat> M = T.Q1 + T.Q2.scaled(Rat(2 * x0)) + T.Q3.scaled(Rat(x0 * x0));
            CHECK(p.eval(Rat(x0)) == symmat_det(M));
        }
        matrix<Rat> A(3, 3, Rat(0));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) A.at(i, j) = small(rng);
        matrix<Rat> Ac = A;
        Rat dA = det(Ac);
        if (dA == 0) continue;
        quad_triple Tc(T.Q1.congruent(A), T.Q2.congruent(A), T.Q3.congruent(A));
        CHECK(same_poly(pencil_det(Tc), pencil_det(T) * (dA * dA)));
    }
}

TEST_CASE("rank-2 conics split into two lines") {
    auto line_matches = [](const std::array<quadext<Rat>, 3>& l, std::array<Rat, 3> t) {
        for (auto& c : l)
            if (!(c.b == 0)) return false;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (l[(size_t)i].a * t[(size_t)j] != l[(size_t)j].a * t[(size_t)i]) return false;
        return true;
    };

    {
        auto sp = split_conic(ternary_form({0, 1, 0, 0, 0, 0}));  // uv
        CHECK(sp.split_over_base);
        bool order1 = line_matches(sp.l1, {1, 0, 0}) && line_matches(sp.l2, {0, 1, 0});
        bool order2 = line_matches(sp.l1, {0, 1, 0}) && line_matches(sp.l2, {1, 0, 0});
        CHECK((order1 || order2));
    }
    {
        auto sp = split_conic(ternary_form({1, 4, 0, 3, 0, 0}));  // (u+v)(u+3v)
        CHECK(sp.split_over_base);
        bool order1 = line_matches(sp.l1, {1, 1, 0}) && line_matches(sp.l2, {1, 3, 0});
        bool order2 = line_matches(sp.l1, {1, 3, 0}) && line_matches(sp.l2, {1, 1, 0});
        CHECK((order1 || order2));
    }
    {
        auto sp = split_conic(ternary_form({1, 0, 0, 1, 0, 0}));  // u^2 + v^2
        CHECK(!sp.split_over_base);
        CHECK(sp.disc == -1);
    }
    {
        auto sp = split_conic(ternary_form({1, 0, 0, -2, 0, 0}));  // u^2 - 2v^2
        CHECK(!sp.split_over_base);
        CHECK(sp.disc == 2);
        CHECK(!(sp.l1[1].b == 0));
    }
    CHECK_THROWS_AS(split_conic(ternary_form({1, 0, 0, 0, 0, 0})), error);

    // over a finite field: -1 is a square mod 13 but not mod 7
    auto fp_conic = [](uint64_t p) {
        fpelem one{1, p};
        symmat<fpelem> Q(3, one);
        Q.set(0, 0, one);
        Q.set(1, 1, one);
        return split_conic(Q);
    };
    CHECK(fp_conic(13).split_over_base);
    CHECK(!fp_conic(7).split_over_base);
}

TEST_CASE("involution conic classification") {
    auto bform = [](Rat a, Rat b, Rat c) {  // a r^2 + 2b rs + c s^2
        symmat<Rat> q(2, Rat(0));
        q.set(0, 0, a);
        q.set(0, 1, b);
        q.set(1, 1, c);
        return q;
    };
    // r^2, rs, s^2: the discriminant conic is nonsingular
    auto cl = classify_gamma_minus(bform(1, 0, 0), bform(0, make_rat(1, 2), 0), bform(0, 0, 1));
    CHECK(cl.tag == pencil_case::nonsingular);

    // r^2, s^2, r^2+s^2: conic (l1+l3)(l2+l3), two rational lines
    auto cl2 = classify_gamma_minus(bform(1, 0, 0), bform(0, 0, 1), bform(1, 0, 1));
    CHECK(cl2.tag == pencil_case::split_singular);

    // r^2-s^2, 2rs, 0: conic -l1^2-l2^2, conjugate lines over Q(i)
    auto cl3 = classify_gamma_minus(bform(1, 0, -1), bform(0, 1, 0), bform(0, 0, 0));
    CHECK(cl3.tag == pencil_case::nonsplit_singular);
    CHECK(cl3.disc == -1);

    // stability under congruence of the binary forms
    auto rng = make_rng(4242);
    std::uniform_int_distribution<long> small(-2, 2);
    for (int k = 0; k < 10; ++k) {
        matrix<Rat> B(2, 2, Rat(0));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) B.at(i, j) = small(rng);
        matrix<Rat> Bc = B;
        if (det(Bc) == 0) continue;
        auto cl4 = classify_gamma_minus(bform(1, 0, -1).congruent(B), bform(0, 1, 0).congruent(B),
                                        bform(0, 0, 0).congruent(B));
        CHECK(cl4.tag == pencil_case::nonsplit_singular);
        CHECK(cl4.disc == -1);
    }

    // double line: the involution would be ramified
    CHECK_THROWS_AS(classify_gamma_minus(bform(1, 0, 1), bform(0, 0, 0), bform(0, 0, 0)), error);
}

TEST_CASE("plane quartic smoothness is decided exactly") {
    auto U = mpoly::var(3, 0), V = mpoly::var(3, 1), W = mpoly::var(3, 2);
    mpoly fermat = U.pow(4) + V.pow(4) + W.pow(4);
    CHECK(plane_quartic_smooth(fermat));
    mpoly klein = U.pow(3) * V + V.pow(3) * W + W.pow(3) * U;
    CHECK(plane_quartic_smooth(klein));
    // smooth example from a genus-3 model: (v^2+vw-w^2)(uv+w^2) - (u^2-v^2-w^2)^2
    mpoly p1 = V * V + V * W - W * W, p2 = U * V + W * W, p3 = U * U - V * V - W * W;
    CHECK(plane_quartic_smooth(p1 * p2 - p3 * p3));

    CHECK(!plane_quartic_smooth(U.pow(2) * V.pow(2)));
    CHECK(!plane_quartic_smooth(U.pow(4) + V.pow(4)));  // misses a variable
    CHECK(!plane_quartic_smooth((U * U + V * W).pow(2)));  // double conic
    // nodal quartic
    CHECK(!plane_quartic_smooth(V * V * W * W - U.pow(3) * W - U.pow(4)));
    // singular only at points with an irrational coordinate
    mpoly s1 = (U * U - W * W * 2).pow(2) + V.pow(3) * W;
    CHECK(!plane_quartic_smooth(s1));
    mpoly s2 = (V * V - U * U * 2).pow(2) + W.pow(3) * U;
    CHECK(!plane_quartic_smooth(s2));

    // triple validity wiring
    symmat<Rat> Q1 = ternary_form({1, 0, 0, 1, 0, 1});
    symmat<Rat> Q2 = ternary_form({0, 1, 0, 0, 0, 0});
    symmat<Rat> Q3 = ternary_form({0, 0, 0, 0, 0, 1});
    CHECK(!triple_valid(quad_triple(Q1, Q2, Q3)));
}

TEST_CASE("four-dimensional quadric ruling test") {
    auto diag4 = [](Rat a, Rat b, Rat c, Rat d) {
        symmat<Rat> M(4, Rat(0));
        M.set(0, 0, a);
        M.set(1, 1, b);
        M.set(2, 2, c);
        M.set(3, 3, d);
        return M;
    };
    CHECK(quadric_ruling_split(diag4(1, 1, 1, 1)));
    CHECK(!quadric_ruling_split(diag4(1, 1, 1, 2)));
    CHECK(quadric_ruling_split(diag4(1, -1, 1, -1)));
    // hyperbolic pairs uv + wz
    symmat<Rat> H(4, Rat(0));
    H.set(0, 1, make_rat(1, 2));
    H.set(2, 3, make_rat(1, 2));
    CHECK(quadric_ruling_split(H));
    CHECK_THROWS_AS(quadric_ruling_split(diag4(1, 1, 1, 0)), error);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "prym/genus2.hpp"
#include "prym/jacenum.hpp"
#include "prym/kummer.hpp"

using namespace prym;

namespace {

upoly<Rat> qpoly(std::vector<Rat> cs) {
    upoly<Rat> f{Rat(0)};
    for (size_t i = 0; i < cs.size(); ++i) f.set((int)i, cs[i]);
    return f;
}

// y^2 = x^5 + 8x^4 - 7x^3 - 7/2 x^2 + 5x - 1
g2curve<Rat> curve_a() {
    return make_g2(qpoly({Rat(-1), Rat(5), Rat(-7, 2), Rat(-7), Rat(8), Rat(1)}));
}

// y^2 = x^6 + 2x^5 + 15x^4 + 40x^3 - 10x
g2curve<Rat> curve_b() {
    return make_g2(qpoly({Rat(0), Rat(-10), Rat(0), Rat(40), Rat(15), Rat(2), Rat(1)}));
}

// y^2 = x(x-2)(x-1)(x+1)(x+3) = x^5 + x^4 - 7x^3 - x^2 + 6x
g2curve<Rat> curve_c() {
    return make_g2(qpoly({Rat(0), Rat(6), Rat(-1), Rat(-7), Rat(1), Rat(1)}));
}

g2div<Rat> div_a(const g2curve<Rat>& C) {
    return g2_from_mumford(C, qpoly({Rat(-4), Rat(4), Rat(1)}), qpoly({Rat(-8), Rat(17, 2)}));
}

const std::vector<std::string>& kvars() { return kummer_surface::names(); }

bool proportional(const mpoly& A, const mpoly& B) {
    if (A.t.empty() || B.t.empty()) return A.t.empty() && B.t.empty();
    auto a = A.normalized_primitive().first;
    auto b = B.normalized_primitive().first;
    return a == b;
}

// tabulated reference surface for curve_a
mpoly surface_a() {
    return mpoly_parse(
        "11*k1^4 - 28*k1^3*k2 + 70*k1^3*k3 + 4*k1^3*k4 + 32*k1^2*k2^2 - 164*k1^2*k2*k3"
        " - 10*k1^2*k2*k4 + 171*k1^2*k3^2 + 14*k1^2*k3*k4 + 4*k1*k2^3 - 20*k1*k2^2*k3"
        " + 14*k1*k2*k3^2 + 14*k1*k2*k3*k4 + 14*k1*k3^3 - 32*k1*k3^2*k4 - 4*k1*k3*k4^2"
        " + k2^2*k4^2 - 2*k2*k3^2*k4 + k3^4",
        kvars());
}

// tabulated reference surface for curve_c
mpoly surface_c() {
    return mpoly_parse(
        "36*k1^4 + 84*k1^3*k3 - 24*k1^2*k2*k3 - 12*k1^2*k2*k4 + 65*k1^2*k3^2"
        " + 4*k1^2*k3*k4 - 24*k1*k2^2*k3 + 4*k1*k2*k3^2 + 14*k1*k2*k3*k4 + 14*k1*k3^3"
        " - 4*k1*k3^2*k4 - 4*k1*k3*k4^2 + k2^2*k4^2 - 2*k2*k3^2*k4 + k3^4",
        kvars());
}

}  // namespace

TEST_CASE("closed-form kummer surface matches the tabulated examples") {
    auto Ka = kummer_surface_exact(curve_a());
    CHECK(proportional(Ka.K, surface_a()));
    CHECK(Ka.K == surface_a());  // same normalization: k2^2 k4^2 coefficient 1
    auto Kc = kummer_surface_exact(curve_c());
    CHECK(proportional(Kc.K, surface_c()));
    CHECK(Kc.K == surface_c());
}

TEST_CASE("surface structure invariants") {
    for (auto& C : {curve_a(), curve_b(), curve_c()}) {
        auto K = kummer_surface_exact(C).K;
        CHECK(K.is_homogeneous(4));
        mpoly k1 = mpoly::var(4, 0), k2 = mpoly::var(4, 1), k3 = mpoly::var(4, 2);
        CHECK(K.coeff_of(3, 2) == k2 * k2 - k1 * k3 * Rat(4));
        // the k3^4 coefficient records the discriminant-like combination f5^2 - 4 f4 f6
        Rat want = C.f[5] * C.f[5] - Rat(4) * C.f[4] * C.f[6];
        CHECK(K.coeff(expv{{0, 0, 4, 0}, 4}) == want);
    }
}

TEST_CASE("sampled derivation agrees with the closed form") {
    for (auto& C : {curve_a(), curve_b()}) {
        auto exact = kummer_surface_exact(C);
        auto derived = derive_kummer_surface(C);
        CHECK(proportional(exact.K, derived.K));
    }
}

TEST_CASE("kummer images of every jacobian class lie on the surface") {
    struct combo {
        g2curve<Rat> C;
        uint64_t p;
    };
    std::vector<combo> combos{{curve_a(), 11}, {curve_a(), 13}, {curve_b(), 7},
                              {curve_b(), 11}, {curve_c(), 11}};
    for (auto& [C, p] : combos) {
        auto K = kummer_surface_exact(C).K;
        auto Cp = g2_reduce_curve(C, p);
        auto J = jacobian_table(Cp);
        size_t on_surface = 0, inv_match = 0, two_torsion = 0;
        std::set<std::array<uint64_t, 4>> distinct;
        for (auto& d : J.elems) {
            auto img = kummer_map(Cp, d);
            std::vector<fpelem> vals(img.begin(), img.end());
            fpelem v = K.eval<fpelem>(vals, fpelem{0, p});
            if (v.v == 0) ++on_surface;
            auto img2 = kummer_map(Cp, g2_neg(Cp, d));
            if (img == img2) ++inv_match;
            if (g2_equal(d, g2_neg(Cp, d))) ++two_torsion;
            distinct.insert({img[0].v, img[1].v, img[2].v, img[3].v});
        }
        CHECK(on_surface == J.elems.size());
        CHECK(inv_match == J.elems.size());
        // the map identifies d with -d and nothing else
        CHECK(distinct.size() == (J.elems.size() + two_torsion) / 2);
    }
}

TEST_CASE("kummer image of the worked generator") {
    auto C = curve_a();
    auto K = kummer_surface_exact(C);
    auto img = kummer_map<Rat>(C, div_a(C));
    CHECK(img[0] == Rat(1));
    CHECK(img[1] == Rat(-4));
    CHECK(img[2] == Rat(-4));
    std::vector<Rat> vals(img.begin(), img.end());
    CHECK(K.K.eval_rat(vals) == Rat(0));
    // the identity goes to the distinguished point (0:0:0:1)
    auto id = kummer_map<Rat>(C, g2_identity(C));
    CHECK(id == std::array<Rat, 4>{Rat(0), Rat(0), Rat(0), Rat(1)});
    std::vector<Rat> iv(id.begin(), id.end());
    CHECK(K.K.eval_rat(iv) == Rat(0));
}

TEST_CASE("kummer images stay consistent under exact arithmetic") {
    auto C = curve_b();
    auto K = kummer_surface_exact(C);
    auto D1 = g2div<Rat>(Rat(0));
    D1.a = upoly<Rat>::constant(Rat(1));
    D1.np = 2;
    D1.nm = 0;
    D1.ni = 0;
    g2_validate(C, D1);
    auto D2 = g2_from_mumford(C, qpoly({Rat(1, 41), Rat(2, 5), Rat(1)}),
                              qpoly({Rat(-281, 410), Rat(4683, 2050)}));
    for (auto& d : {D1, D2, g2_add(C, D1, D2), g2_sub(C, D2, D1), g2_mul(C, 3, D2)}) {
        auto img = kummer_map(C, d);
        std::vector<Rat> vals(img.begin(), img.end());
        CHECK(K.K.eval_rat(vals) == Rat(0));
    }
}

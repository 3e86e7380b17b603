#pragma once
// Models for an unramified double cover of a smooth plane quartic and the
// attached genus-2 machinery: the cover D in P^4 cut by three quadrics, its
// plane quotient C, the twisted genus-2 curve F, classification of the
// degenerate (hyperelliptic) inputs, the map sending cover points to Kummer
// coordinates, and interpolation of the quartic psi cutting out the image of
// the cover on the Kummer surface.

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <vector>

#include "fppoly.hpp"
#include "genus2.hpp"
#include "jacenum.hpp"
#include "kummer.hpp"
#include "quadext.hpp"
#include "quadforms.hpp"

namespace prym {

// ---------------------------------------------------------------------------
// cover models
//
// C : Q1*Q3 = Q2^2 in P^2(u,v,w)
// D : Q1 = delta r^2, Q2 = delta rs, Q3 = delta s^2 in P^4(u,v,w,r,s)
// F : y^2 = -delta * det(Q1 + 2x Q2 + x^2 Q3), square content cleared.

struct cover_models {
    quad_triple T;     // integral representatives of the three ternary forms
    Rat delta;         // square-free twist label
    mpoly C;           // the plane quartic Q1*Q3 - Q2^2
    upoly<Rat> f;      // normalized right-hand side of F
    g2curve<Rat> F;    // F : y^2 = f(x)
    std::array<std::array<Int, 6>, 3> zc;  // integral form coefficients
};

// Scaling all three forms by m while scaling the twist by m describes the
// same cover, so denominators can always be cleared; the twist label is then
// reduced to its square-free part (r, s rescaling).
inline cover_models build_models(const quad_triple& Tin, const Rat& delta_in,
                                 bool check_smooth = true) {
    PRYM_INPUT(delta_in != 0, "twist label must be nonzero");
    std::array<std::array<Rat, 6>, 3> cf{form_coeffs(Tin.Q1), form_coeffs(Tin.Q2),
                                         form_coeffs(Tin.Q3)};
    Int l(1);
    for (auto& row : cf)
        for (auto& q : row) l = lcm(l, den(q));
    Rat lam{l};
    quad_triple T{Tin.Q1.scaled(lam), Tin.Q2.scaled(lam), Tin.Q3.scaled(lam)};
    Rat dl = delta_in * lam;
    Rat delta{squarefree_part(num(dl) * den(dl))};
    mpoly C = triple_quartic(T);
    if (check_smooth) PRYM_INPUT(plane_quartic_smooth(C), "plane quartic is singular");
    upoly<Rat> f0 = pencil_det(T) * (-delta);
    PRYM_INPUT(f0.deg() == 5 || f0.deg() == 6, "pencil determinant is degenerate");
    Rat c = poly_content(f0);
    if (sgn(f0.lead()) < 0) c = -c;
    upoly<Rat> f = primitive_part(f0) * Rat{squarefree_part(num(c) * den(c))};
    cover_models M{T, delta, C, f, make_g2(f), {}};
    for (int i = 0; i < 3; ++i) {
        auto row = form_coeffs(i == 0 ? T.Q1 : i == 1 ? T.Q2 : T.Q3);
        for (int j = 0; j < 6; ++j) {
            PRYM_CHECK(den(row[j]) == 1, "integral scaling failed");
            M.zc[(size_t)i][(size_t)j] = num(row[j]);
        }
    }
    return M;
}

// The three quadrics cutting out D, as polynomials in (u, v, w, r, s).
inline std::array<mpoly, 3> cover_equations(const cover_models& M) {
    auto lift = [](const mpoly& q) {
        mpoly out(5);
        for (auto& [e, c] : q.t) {
            expv ne{{}, 5};
            for (int i = 0; i < 3; ++i) ne.e[i] = e.e[i];
            out.add_term(ne, c);
        }
        return out;
    };
    mpoly r = mpoly::var(5, 3), s = mpoly::var(5, 4);
    return {lift(form_mpoly(M.T.Q1)) - r * r * M.delta,
            lift(form_mpoly(M.T.Q2)) - r * s * M.delta,
            lift(form_mpoly(M.T.Q3)) - s * s * M.delta};
}

// Symmetric 5x5 matrices of the three cover quadrics.
inline std::array<symmat<Rat>, 3> cover_symmats(const cover_models& M) {
    std::array<symmat<Rat>, 3> out{symmat<Rat>(5, Rat(0)), symmat<Rat>(5, Rat(0)),
                                   symmat<Rat>(5, Rat(0))};
    for (int k = 0; k < 3; ++k) {
        const symmat<Rat>& Q = k == 0 ? M.T.Q1 : k == 1 ? M.T.Q2 : M.T.Q3;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) out[(size_t)k].set(i, j, Q.at(i, j));
    }
    out[0].set(3, 3, -M.delta);
    out[1].set(3, 4, -M.delta / 2);
    out[2].set(4, 4, -M.delta);
    return out;
}

template <class T>
std::array<matrix<T>, 3> cover_matrices(const cover_models& M, const T& sample) {
    auto S = cover_symmats(M);
    T zero = dom<T>::zero(sample);
    std::array<matrix<T>, 3> out{matrix<T>(5, 5, zero), matrix<T>(5, 5, zero),
                                 matrix<T>(5, 5, zero)};
    for (size_t k = 0; k < 3; ++k)
        for (size_t i = 0; i < 5; ++i)
            for (size_t j = 0; j < 5; ++j)
                out[k].at(i, j) = dom<T>::from_rat(S[k].at(i, j), sample);
    return out;
}

// ---------------------------------------------------------------------------
// classification of the Prym structure
//
// A triple input always carries the nonsingular involution conic and yields
// the genus-2 Jacobian case; hyperelliptic inputs split by factor degrees:
// a (2,6) factorization keeps a genus-2 Jacobian, a rational (4,4) split
// gives a product of two elliptic curves, and a conjugate pair of quartics
// over a quadratic field gives the Weil restriction of one elliptic curve.

struct prym_descriptor {
    int case_tag = 0;
    std::optional<g2curve<Rat>> F;                        // cases 1 and 4
    std::vector<upoly<Rat>> elliptic_quartics;            // case 2
    std::optional<upoly<quadext<Rat>>> twisted_quartic;   // case 3
    Rat disc_d = Rat(0);                                  // case 3
};

inline prym_descriptor classify_cover(const quad_triple& T) {
    cover_models M = build_models(T, Rat(1));
    prym_descriptor d;
    d.case_tag = 4;
    d.F = M.F;
    return d;
}

inline prym_descriptor classify_cover(const upoly<Rat>& f1, const upoly<Rat>& f2) {
    int d1 = f1.deg(), d2 = f2.deg();
    PRYM_INPUT(d1 >= 1 && d2 >= 1, "hyperelliptic data needs two nonconstant factors");
    upoly<Rat> prod = f1 * f2;
    PRYM_CHECK(is_squarefree(prod), "cover degenerates: the involution would be ramified");
    prym_descriptor out;
    if ((d1 == 2 && d2 == 6) || (d1 == 6 && d2 == 2)) {
        out.case_tag = 1;
        out.F = make_g2(d1 == 6 ? f1 : f2);
    } else if (d1 == 4 && d2 == 4) {
        out.case_tag = 2;
        out.elliptic_quartics = {f1, f2};
    } else {
        PRYM_INPUT(false, "hyperelliptic factor degrees must split as 2+6 or 4+4");
    }
    return out;
}

// Conjugate-quartic input: f = R * conj(R) over Q(sqrt(d)).
inline prym_descriptor classify_cover(const upoly<quadext<Rat>>& R) {
    PRYM_INPUT(R.deg() == 4, "twisted input must be a quartic");
    Rat e(0);
    for (int i = 0; i <= 4; ++i)
        if (R[i].b != 0) e = R[i].e;
    PRYM_INPUT(e != 0, "twisted quartic has rational coefficients; use the rational overload");
    upoly<quadext<Rat>> Rc(quadext<Rat>{Rat(0), Rat(0), e});
    for (int i = 0; i <= 4; ++i) Rc.set(i, R[i].conj());
    upoly<Rat> norm{Rat(0)};
    upoly<quadext<Rat>> prod = R * Rc;
    for (int i = 0; i <= prod.deg(); ++i) {
        PRYM_CHECK(prod[i].b == 0, "norm form is not rational");
        norm.set(i, prod[i].a);
    }
    PRYM_INPUT(norm.deg() == 8, "norm form must have degree 8");
    PRYM_CHECK(is_squarefree(norm), "cover degenerates: the involution would be ramified");
    prym_descriptor out;
    out.case_tag = 3;
    out.twisted_quartic = R;
    out.disc_d = Rat{squarefree_part(num(e) * den(e))};
    return out;
}

// ---------------------------------------------------------------------------
// the map from cover points to Kummer coordinates
//
// At a smooth point P of D the tangent line meets each cover quadric in a
// binary quadratic; its two roots pick out the two degree-2 divisor classes
// on F lying over P.  Their common (k1 : k2 : k3) come from evaluating the
// quadrics on any tangent representative, and the admissible fourth
// coordinates are roots of the Kummer quartic, quadratic in k4.

template <class T>
struct phi_result {
    std::array<T, 3> k123;
    std::vector<T> k4;
    bool ambiguous = false;
};

namespace detail {

template <class T>
T bilin(const matrix<T>& A, const std::array<T, 5>& x, const std::array<T, 5>& y,
        const T& sample) {
    T acc = dom<T>::zero(sample);
    for (size_t i = 0; i < 5; ++i) {
        T row = dom<T>::zero(sample);
        for (size_t j = 0; j < 5; ++j) row = row + A.at(i, j) * y[j];
        acc = acc + x[i] * row;
    }
    return acc;
}

template <class T>
bool proportional5(const std::array<T, 5>& a, const std::array<T, 5>& b) {
    for (size_t i = 0; i < 5; ++i)
        for (size_t j = i + 1; j < 5; ++j)
            if (!dom<T>::is_zero(a[i] * b[j] - a[j] * b[i])) return false;
    return true;
}

// Distinct roots of A t^2 + B t + C over the coefficient field.
template <class T>
std::vector<T> quadratic_roots(const T& A, const T& B, const T& C, const T& sample) {
    T two = dom<T>::from_int(2, sample);
    if (dom<T>::is_zero(A)) {
        if (dom<T>::is_zero(B)) {
            PRYM_CHECK(dom<T>::is_zero(C), "inconsistent binary quadratic");
            throw error("fourth coordinate is undetermined at this point");
        }
        return {dom<T>::inv(B) * (dom<T>::zero(sample) - C)};
    }
    T disc = B * B - dom<T>::from_int(4, sample) * A * C;
    T half = dom<T>::inv(two * A);
    if (dom<T>::is_zero(disc)) return {(dom<T>::zero(sample) - B) * half};
    auto sq = dom<T>::sqrt(disc);
    if (!sq) return {};
    return {((dom<T>::zero(sample) - B) + *sq) * half,
            ((dom<T>::zero(sample) - B) - *sq) * half};
}

}  // namespace detail

// Tangent representative at P: a kernel vector of the Jacobian of the three
// cover quadrics, independent of P itself.
template <class T>
std::array<T, 5> phi_tangent(const std::array<matrix<T>, 3>& mats,
                             const std::array<T, 5>& P, const T& sample) {
    T zero = dom<T>::zero(sample);
    matrix<T> J(3, 5, zero);
    for (size_t k = 0; k < 3; ++k) {
        std::array<T, 5> row{zero, zero, zero, zero, zero};
        for (size_t i = 0; i < 5; ++i) {
            T acc = zero;
            for (size_t j = 0; j < 5; ++j) acc = acc + mats[k].at(i, j) * P[j];
            row[i] = acc;
        }
        T onq = zero;
        for (size_t i = 0; i < 5; ++i) onq = onq + P[i] * row[i];
        PRYM_INPUT(dom<T>::is_zero(onq), "point does not lie on the cover");
        for (size_t i = 0; i < 5; ++i) J.at(k, i) = row[i];
    }
    auto ker = kernel_basis(J);
    PRYM_CHECK(ker.size() >= 2, "tangent computation failed");
    PRYM_CHECK(ker.size() == 2, "cover point is singular");
    for (auto& b : ker) {
        std::array<T, 5> cand{b[0], b[1], b[2], b[3], b[4]};
        if (!detail::proportional5(cand, P)) return cand;
    }
    throw error("tangent space degenerates to the point itself");
}

// (k1, k2, k3) plus the raw k4 candidates (no rationality filtering beyond
// root extraction over the coefficient field).
template <class T>
phi_result<T> phi_image_raw(const cover_models& M, const kummer_surface& KS,
                            const std::array<T, 5>& P) {
    const T& sample = P[0];
    auto mats = cover_matrices<T>(M, sample);
    auto tang = phi_tangent(mats, P, sample);
    T k1 = detail::bilin(mats[2], tang, tang, sample);
    T k2 = dom<T>::zero(sample) - dom<T>::from_int(2, sample) *
                                      detail::bilin(mats[1], tang, tang, sample);
    T k3 = detail::bilin(mats[0], tang, tang, sample);
    if (dom<T>::is_zero(k1) && dom<T>::is_zero(k2) && dom<T>::is_zero(k3))
        throw error("tangent line lies on the cover");
    std::vector<T> vals{k1, k2, k3, dom<T>::zero(sample)};
    mpoly A = KS.K.coeff_of(3, 2), B = KS.K.coeff_of(3, 1), C = KS.K.coeff_of(3, 0);
    phi_result<T> out;
    out.k123 = {k1, k2, k3};
    out.k4 = detail::quadratic_roots(A.template eval<T>(vals, sample),
                                     B.template eval<T>(vals, sample),
                                     C.template eval<T>(vals, sample), sample);
    out.ambiguous = out.k4.size() >= 2;
    return out;
}

template <class T>
phi_result<T> phi_image_raw(const cover_models& M, const std::array<T, 5>& P) {
    return phi_image_raw(M, kummer_surface_exact(M.F), P);
}

// ---------------------------------------------------------------------------
// mod-p machinery: enumerate cover points, filter k4 candidates through the
// enumerated Kummer images of rational Jacobian classes.

inline std::array<uint64_t, 4> normalize_proj4(std::array<fpelem, 4> k) {
    size_t lead = 4;
    for (size_t i = 0; i < 4 && lead == 4; ++i)
        if (k[i].v != 0) lead = i;
    PRYM_CHECK(lead < 4, "cannot normalize the zero tuple");
    fpelem s = k[lead].inv();
    std::array<uint64_t, 4> out{};
    for (size_t i = 0; i < 4; ++i) out[i] = (k[i] * s).v;
    return out;
}

struct phi_fp_context {
    uint64_t p;
    g2curve<fpelem> Fp;
    jacobian_table tab;
    std::set<std::array<uint64_t, 4>> kimages;
};

inline phi_fp_context make_phi_fp_context(const cover_models& M, uint64_t p) {
    PRYM_CHECK(p % 2 == 1 && p > 2, "context needs an odd prime");
    g2curve<fpelem> Fp = g2_reduce_curve(M.F, p);
    jacobian_table tab = enumerate_jacobian_fp(Fp);
    phi_fp_context ctx{p, Fp, std::move(tab), {}};
    for (auto& d : ctx.tab.elems) ctx.kimages.insert(normalize_proj4(kummer_map(Fp, d)));
    return ctx;
}

// All points of D(F_p), found by lifting the plane points of C(F_p): over a
// plane point the fiber is (r, s) with delta r^2 = Q1, delta rs = Q2,
// delta s^2 = Q3, rational exactly when Q1/delta (equivalently Q3/delta) is
// a square.
inline std::vector<std::array<fpelem, 5>> cover_points_fp(const cover_models& M,
                                                          uint64_t p) {
    PRYM_CHECK(p % 2 == 1 && p > 2, "enumeration needs an odd prime");
    fpelem zero{0, p}, one{1, p};
    uint64_t dmod = mod_pos(num(M.delta), Int((unsigned long)p)).get_ui();
    PRYM_CHECK(dmod != 0, "twist label degenerates mod p");
    fpelem dinv = fpelem{dmod, p}.inv();
    std::array<std::array<uint64_t, 6>, 3> zc{};
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 6; ++j)
            zc[i][j] = mod_pos(M.zc[i][j], Int((unsigned long)p)).get_ui();
    auto evalq = [&](size_t k, fpelem u, fpelem v, fpelem w) -> fpelem {
        const auto& z = zc[k];
        fpelem acc = fpelem{z[0], p} * u * u + fpelem{z[1], p} * u * v +
                     fpelem{z[2], p} * u * w + fpelem{z[3], p} * v * v +
                     fpelem{z[4], p} * v * w + fpelem{z[5], p} * w * w;
        return acc;
    };
    std::vector<std::array<fpelem, 5>> out;
    auto consider = [&](fpelem u, fpelem v, fpelem w) {
        fpelem q1 = evalq(0, u, v, w), q2 = evalq(1, u, v, w), q3 = evalq(2, u, v, w);
        if (!(q1 * q3 == q2 * q2)) return;
        fpelem a = q1 * dinv, b = q2 * dinv, c = q3 * dinv;
        PRYM_CHECK(a.v != 0 || b.v != 0 || c.v != 0,
                   "cover is singular mod p (base point of the net on C)");
        if (a.v != 0) {
            auto ra = fp_sqrt(a);
            if (!ra) return;
            fpelem r = *ra, s = b * ra->inv();
            PRYM_CHECK(s * s == c, "fiber arithmetic is inconsistent");
            out.push_back({u, v, w, r, s});
            out.push_back({u, v, w, -r, -s});
        } else {
            auto sc = fp_sqrt(c);
            if (!sc) return;
            out.push_back({u, v, w, zero, *sc});
            out.push_back({u, v, w, zero, -*sc});
        }
    };
    for (uint64_t v = 0; v < p; ++v)
        for (uint64_t w = 0; w < p; ++w) consider(one, fpelem{v, p}, fpelem{w, p});
    for (uint64_t w = 0; w < p; ++w) consider(zero, one, fpelem{w, p});
    consider(zero, zero, one);
    return out;
}

// Full filtered map over F_p: k4 candidates must be Kummer images of
// rational classes; an irreducible x-quadratic leaves exactly one.
inline phi_result<fpelem> phi_image_fp(const cover_models& M, const kummer_surface& KS,
                                       const std::array<fpelem, 5>& P,
                                       const phi_fp_context& ctx) {
    phi_result<fpelem> raw = phi_image_raw<fpelem>(M, KS, P);
    std::vector<fpelem> keep;
    for (auto& r : raw.k4) {
        auto key = normalize_proj4({raw.k123[0], raw.k123[1], raw.k123[2], r});
        if (ctx.kimages.count(key)) keep.push_back(r);
    }
    PRYM_CHECK(!keep.empty(), "no admissible fourth coordinate at a rational point");
    raw.k4 = keep;
    raw.ambiguous = keep.size() >= 2;
    return raw;
}

inline phi_result<fpelem> phi_image_fp(const cover_models& M,
                                       const std::array<fpelem, 5>& P,
                                       const phi_fp_context& ctx) {
    return phi_image_fp(M, kummer_surface_exact(M.F), P, ctx);
}

// ---------------------------------------------------------------------------
// interpolation of psi

namespace detail {

inline size_t psi_norm_index(const std::vector<expv>& mons) {
    for (size_t i = 0; i < mons.size(); ++i)
        if (mons[i].e[0] == 0 && mons[i].e[1] == 2 && mons[i].e[2] == 0 && mons[i].e[3] == 2)
            return i;
    PRYM_CHECK(false, "normalization monomial not found");
    return mons.size();
}

inline std::vector<Rat> mpoly_coeff_vector(const mpoly& q, const std::vector<expv>& mons) {
    std::vector<Rat> out(mons.size(), Rat(0));
    for (size_t i = 0; i < mons.size(); ++i) {
        auto it = q.t.find(mons[i]);
        if (it != q.t.end()) out[i] = it->second;
    }
    return out;
}

}  // namespace detail

// Canonical representative of psi modulo the surface quartic: the k2^2 k4^2
// coefficient is eliminated against K, then content is cleared and the first
// nonzero coefficient in the fixed monomial order is made positive.
inline mpoly reduce_mod_surface(const mpoly& q, const mpoly& K) {
    auto mons = detail::quartic_monomials4();
    size_t idx = detail::psi_norm_index(mons);
    auto Kv = detail::mpoly_coeff_vector(K, mons);
    PRYM_CHECK(Kv[idx] == 1, "surface quartic is not normalized");
    auto qv = detail::mpoly_coeff_vector(q, mons);
    mpoly r = q - K * qv[idx];
    PRYM_CHECK(!r.is_zero(), "quartic reduces to zero against the surface");
    auto rv = detail::mpoly_coeff_vector(r, mons);
    Int g(0), l(1);
    for (auto& c : rv) {
        if (c == 0) continue;
        g = gcd(g, num(c));
        l = lcm(l, den(c));
    }
    Rat scale = make_rat(l, abs(g));
    for (auto& c : rv)
        if (c != 0) { scale = (sgn(c) < 0 ? -scale : scale); break; }
    mpoly out(4);
    for (size_t i = 0; i < mons.size(); ++i)
        if (rv[i] != 0) out.add_term(mons[i], rv[i] * scale);
    return out;
}

struct psi_options {
    uint64_t first_prime = 20;   // scan starts at the next prime above this
    uint64_t last_prime = 1009;  // hard cap for the adaptive extension
    int min_primes = 3;
    size_t min_rows = 35;        // fewer unambiguous images cannot reach corank 2
};

// Unambiguous Kummer images of D(F_p), or nullopt when the prime is unusable
// (bad reduction, or the evaluation matrix does not have corank exactly 2).
inline std::optional<std::vector<std::array<uint64_t, 4>>> psi_images_fp(
    const cover_models& M, const kummer_surface& KS, uint64_t p) {
    std::optional<phi_fp_context> ctx;
    std::vector<std::array<fpelem, 5>> pts;
    try {
        ctx = make_phi_fp_context(M, p);
        pts = cover_points_fp(M, p);
    } catch (const error&) {
        return std::nullopt;
    }
    std::set<std::array<uint64_t, 4>> images;
    for (auto& P : pts) {
        phi_result<fpelem> r{};
        try {
            r = phi_image_fp(M, KS, P, *ctx);
        } catch (const error&) {
            continue;  // degenerate tangent: skip the point
        }
        if (r.k4.size() != 1) continue;  // ambiguous images are excluded
        images.insert(normalize_proj4({r.k123[0], r.k123[1], r.k123[2], r.k4[0]}));
    }
    return std::vector<std::array<uint64_t, 4>>(images.begin(), images.end());
}

namespace detail {

inline std::vector<fpelem> monomial_row(const std::array<uint64_t, 4>& img,
                                        const std::vector<expv>& mons, uint64_t p) {
    std::array<fpelem, 4> k{fpelem{img[0], p}, fpelem{img[1], p}, fpelem{img[2], p},
                            fpelem{img[3], p}};
    std::vector<fpelem> row;
    row.reserve(mons.size());
    for (auto& e : mons) {
        fpelem v{1, p};
        for (size_t j = 0; j < 4; ++j)
            for (int t = 0; t < e.e[j]; ++t) v = v * k[j];
        row.push_back(v);
    }
    return row;
}

}  // namespace detail

// Interpolate the quartic psi vanishing on the image of the cover: for each
// usable prime the 35-monomial evaluation matrix on the unambiguous images
// has kernel spanned by K and psi; the direction transverse to K (normalized
// by killing the k2^2 k4^2 coefficient) is lifted by CRT and rational
// reconstruction, then verified at a fresh prime.
//
// Small primes rarely carry enough images: the curve has about p points, half
// of them lift to the cover and half of those are ambiguous, so corank 2
// needs p in the mid-hundreds; the scan simply extends upward until enough
// usable primes have accumulated.
inline mpoly interpolate_psi(const cover_models& M, const psi_options& opt = {}) {
    auto mons = detail::quartic_monomials4();
    const size_t NM = mons.size();
    size_t idx = detail::psi_norm_index(mons);
    kummer_surface KS = kummer_surface_exact(M.F);
    auto Kv = detail::mpoly_coeff_vector(KS.K, mons);
    PRYM_CHECK(Kv[idx] == 1, "surface quartic is not normalized");

    std::vector<Int> acc(NM, Int(0));
    Int modulus(1);
    int used = 0;
    size_t lead_used = NM;
    std::vector<Rat> cand(NM);
    uint64_t p = opt.first_prime;
    while (p <= opt.last_prime) {
        p = detail::next_prime_u64(p);
        if (p > opt.last_prime) break;
        auto images = psi_images_fp(M, KS, p);
        if (!images || images->size() < opt.min_rows) continue;
        matrix<fpelem> S(images->size(), NM, fpelem{0, p});
        for (size_t r = 0; r < images->size(); ++r) {
            auto row = detail::monomial_row((*images)[r], mons, p);
            for (size_t c = 0; c < NM; ++c) S.at(r, c) = row[c];
        }
        auto ker = kernel_basis(S);
        if (ker.size() != 2) continue;
        std::vector<fpelem> Kp;
        Kp.reserve(NM);
        for (size_t i = 0; i < NM; ++i) Kp.push_back(fpelem::from_rat(Kv[i], p));
        // the direction transverse to K with vanishing k2^2 k4^2 coefficient
        std::vector<fpelem> w(NM, fpelem{0, p});
        for (auto& b : ker) {
            bool nonzero = false;
            for (size_t i = 0; i < NM; ++i) {
                w[i] = b[i] - b[idx] * Kp[i];
                nonzero = nonzero || w[i].v != 0;
            }
            if (nonzero) break;
        }
        size_t lead = NM;
        for (size_t i = 0; i < NM && lead == NM; ++i)
            if (w[i].v != 0) lead = i;
        if (lead == NM) continue;
        // Normalization divides by the leading coefficient, so all primes must
        // agree on which coefficient leads; a prime where the true lead
        // coefficient vanishes sees a later one and cannot be combined.
        if (used > 0 && lead > lead_used) continue;
        fpelem inv = w[lead].inv();
        std::vector<Int> res(NM);
        for (size_t i = 0; i < NM; ++i) res[i] = Int((unsigned long)(w[i] * inv).v);
        if (used == 0 || lead < lead_used) {
            used = 0;
            lead_used = lead;
            acc = res;
            modulus = Int((unsigned long)p);
        } else {
            for (size_t i = 0; i < NM; ++i)
                acc[i] = crt_pair(acc[i], modulus, res[i], Int((unsigned long)p)).first;
            modulus *= Int((unsigned long)p);
        }
        ++used;
        if (used < opt.min_primes) continue;
        bool ok = true;
        for (size_t i = 0; i < NM && ok; ++i) {
            auto r = rational_reconstruct(acc[i], modulus);
            if (!r)
                ok = false;
            else
                cand[i] = *r;
        }
        if (!ok) continue;
        // fresh-prime verification: psi must vanish at every unambiguous image
        uint64_t q = p;
        bool verified = false;
        while (q < opt.last_prime * 2) {
            q = detail::next_prime_u64(q);
            try {
                auto vimg = psi_images_fp(M, KS, q);
                if (!vimg || vimg->size() < 5) continue;
                verified = true;
                for (auto& img : *vimg) {
                    auto row = detail::monomial_row(img, mons, q);
                    fpelem s{0, q};
                    for (size_t i = 0; i < NM; ++i)
                        s = s + fpelem::from_rat(cand[i], q) * row[i];
                    if (s.v != 0) {
                        verified = false;
                        break;
                    }
                }
            } catch (const error&) {
                continue;  // coefficient denominators hit q: try the next prime
            }
            break;
        }
        if (!verified) continue;
        mpoly psi(4);
        for (size_t i = 0; i < NM; ++i)
            if (cand[i] != 0) psi.add_term(mons[i], cand[i]);
        return reduce_mod_surface(psi, KS.K);
    }
    PRYM_CHECK(used >= opt.min_primes, "fewer than 3 usable interpolation primes");
    throw error("interpolation did not stabilize within the prime bound");
}

// ---------------------------------------------------------------------------
// checks on the interpolated image curve

// Jacobian criterion for K = psi = 0 at every F_p point of the intersection.
inline bool image_scheme_nonsingular_fp(const cover_models& M, const mpoly& psi,
                                        uint64_t p) {
    kummer_surface KS = kummer_surface_exact(M.F);
    std::array<mpoly, 4> dK, dP;
    for (int i = 0; i < 4; ++i) {
        dK[(size_t)i] = KS.K.derivative(i);
        dP[(size_t)i] = psi.derivative(i);
    }
    fpelem zero{0, p}, one{1, p};
    auto check_pt = [&](const std::vector<fpelem>& k) -> bool {
        if (!(KS.K.eval<fpelem>(k, zero).v == 0)) return true;
        if (!(psi.eval<fpelem>(k, zero).v == 0)) return true;
        std::array<fpelem, 4> a{}, b{};
        for (size_t i = 0; i < 4; ++i) {
            a[i] = dK[i].eval<fpelem>(k, zero);
            b[i] = dP[i].eval<fpelem>(k, zero);
        }
        for (size_t i = 0; i < 4; ++i)
            for (size_t j = i + 1; j < 4; ++j)
                if (!( (a[i] * b[j] - a[j] * b[i]).v == 0)) return true;
        return false;  // singular point of the intersection scheme
    };
    std::vector<fpelem> k(4, zero);
    for (uint64_t a = 0; a < p; ++a)
        for (uint64_t b = 0; b < p; ++b)
            for (uint64_t c = 0; c < p; ++c) {
                k = {one, fpelem{a, p}, fpelem{b, p}, fpelem{c, p}};
                if (!check_pt(k)) return false;
            }
    for (uint64_t b = 0; b < p; ++b)
        for (uint64_t c = 0; c < p; ++c) {
            k = {zero, one, fpelem{b, p}, fpelem{c, p}};
            if (!check_pt(k)) return false;
        }
    for (uint64_t c = 0; c < p; ++c) {
        k = {zero, zero, one, fpelem{c, p}};
        if (!check_pt(k)) return false;
    }
    k = {zero, zero, zero, one};
    return check_pt(k);
}

// Count data for the soundness property: every computed unambiguous image
// lies on K and psi, and the F_p points of the intersection curve dominate
// the computed image count.
struct image_count_data {
    size_t curve_points = 0;
    size_t unambiguous_images = 0;
    size_t ambiguous_points = 0;
    bool images_on_curve = true;
};

inline image_count_data count_image_points_fp(const cover_models& M, const mpoly& psi,
                                              uint64_t p) {
    kummer_surface KS = kummer_surface_exact(M.F);
    image_count_data out;
    fpelem zero{0, p}, one{1, p};
    auto on_curve = [&](const std::array<uint64_t, 4>& img) -> bool {
        std::vector<fpelem> k{fpelem{img[0], p}, fpelem{img[1], p}, fpelem{img[2], p},
                              fpelem{img[3], p}};
        return KS.K.eval<fpelem>(k, zero).v == 0 && psi.eval<fpelem>(k, zero).v == 0;
    };
    auto scan_pt = [&](const std::vector<fpelem>& k) {
        if (KS.K.eval<fpelem>(k, zero).v == 0 && psi.eval<fpelem>(k, zero).v == 0)
            ++out.curve_points;
    };
    for (uint64_t a = 0; a < p; ++a)
        for (uint64_t b = 0; b < p; ++b)
            for (uint64_t c = 0; c < p; ++c)
                scan_pt({one, fpelem{a, p}, fpelem{b, p}, fpelem{c, p}});
    for (uint64_t b = 0; b < p; ++b)
        for (uint64_t c = 0; c < p; ++c) scan_pt({zero, one, fpelem{b, p}, fpelem{c, p}});
    for (uint64_t c = 0; c < p; ++c) scan_pt({zero, zero, one, fpelem{c, p}});
    scan_pt({zero, zero, zero, one});
    auto ctx = make_phi_fp_context(M, p);
    std::set<std::array<uint64_t, 4>> images;
    for (auto& P : cover_points_fp(M, p)) {
        phi_result<fpelem> r{};
        try {
            r = phi_image_fp(M, KS, P, ctx);
        } catch (const error&) {
            continue;
        }
        if (r.k4.size() == 1) {
            auto img = normalize_proj4({r.k123[0], r.k123[1], r.k123[2], r.k4[0]});
            if (images.insert(img).second && !on_curve(img)) out.images_on_curve = false;
        } else {
            ++out.ambiguous_points;
        }
    }
    out.unambiguous_images = images.size();
    return out;
}

}  // namespace prym

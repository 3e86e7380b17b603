#pragma once
#include "prym/domain.hpp"
#include "prym/upoly.hpp"

namespace prym {

// Element of Q[x]/(m(x)) with m monic irreducible over Q: a polynomial of
// degree < deg(m) plus a copy of m.  Small fixed degrees only (<= 6 here),
// so the by-value minimal polynomial is cheap.
struct nfelem {
    upoly<Rat> v;
    upoly<Rat> m;

    nfelem(upoly<Rat> v_, upoly<Rat> m_) : v(pmod(std::move(v_), m_)), m(std::move(m_)) {
        PRYM_CHECK(m.deg() >= 1, "number field needs a nonconstant minimal polynomial");
    }
    explicit nfelem(const Rat&) : v{Rat(0)}, m{Rat(0)} {}

    static nfelem theta(const upoly<Rat>& m_) {
        return nfelem(upoly<Rat>::x_power(1, Rat(0)), m_);
    }
    static nfelem embed(const Rat& c, const upoly<Rat>& m_) {
        return nfelem(upoly<Rat>::constant(c), m_);
    }

    bool degenerate() const { return m.deg() < 1; }
    const upoly<Rat>& minpoly() const { return m; }

    nfelem operator-() const { return raw(-v); }
    nfelem operator+(const nfelem& o) const { return raw(v + o.v, o); }
    nfelem operator-(const nfelem& o) const { return raw(v - o.v, o); }
    nfelem operator*(const nfelem& o) const { return raw(pmod(v * o.v, pick_m(o)), o); }
    nfelem operator/(const nfelem& o) const { return *this * o.inv(); }
    bool operator==(const nfelem& o) const { return (v - o.v).deg() < 0; }

    nfelem inv() const {
        PRYM_CHECK(v.deg() >= 0, "inverse of zero in number field");
        auto [g, u, w] = xgcd_poly(v, m);
        (void)w;
        PRYM_CHECK(g.deg() == 0, "minimal polynomial not irreducible: zero divisor found");
        return raw(u * upoly<Rat>::constant(dom<Rat>::inv(g[0])));
    }

    // field norm N(x) = resultant(m, v) / lc(m)^deg(v)
    Rat norm() const {
        if (v.deg() < 0) return Rat(0);
        return resultant(m, v);
    }

private:
    nfelem raw(upoly<Rat> nv) const {
        nfelem r(Rat(0));
        r.v = pmod(std::move(nv), m);
        r.m = m;
        return r;
    }
    nfelem raw(upoly<Rat> nv, const nfelem& o) const {
        const upoly<Rat>& mm = pick_m(o);
        nfelem r(Rat(0));
        r.v = pmod(std::move(nv), mm);
        r.m = mm;
        return r;
    }
    const upoly<Rat>& pick_m(const nfelem& o) const { return degenerate() ? o.m : m; }
};

template <>
struct dom<nfelem> {
    static constexpr bool exact_field = true;
    static nfelem zero(const nfelem& s) {
        PRYM_CHECK(!s.degenerate(), "number field sample lacks a minimal polynomial");
        return nfelem(upoly<Rat>{Rat(0)}, s.m);
    }
    static nfelem one(const nfelem& s) { return from_int(1, s); }
    static nfelem from_int(long n, const nfelem& s) {
        PRYM_CHECK(!s.degenerate(), "number field sample lacks a minimal polynomial");
        return nfelem::embed(Rat(n), s.m);
    }
    static nfelem from_rat(const Rat& q, const nfelem& s) {
        PRYM_CHECK(!s.degenerate(), "number field sample lacks a minimal polynomial");
        return nfelem::embed(q, s.m);
    }
    static bool is_zero(const nfelem& x) { return x.v.deg() < 0; }
    static nfelem inv(const nfelem& x) { return x.inv(); }
    static nfelem divexact(const nfelem& a, const nfelem& b) { return a / b; }
    static std::optional<nfelem> sqrt(const nfelem&) { return std::nullopt; }
    static std::string str(const nfelem& x) {
        std::string body = "0";
        bool first = true;
        for (int i = 0; i <= x.v.deg(); ++i) {
            if (x.v[i] == Rat(0)) continue;
            std::string term = rat_str(x.v[i]);
            if (i >= 1) term += "*theta";
            if (i >= 2) term += "^" + std::to_string(i);
            if (first) {
                body = term;
                first = false;
            } else {
                body += " + " + term;
            }
        }
        return body;
    }
};

}  // namespace prym

#pragma once
#include <array>
#include <map>
#include <vector>
#include <string>
#include <sstream>
#include <cctype>
#include "prym/domain.hpp"
#include "prym/upoly.hpp"

namespace prym {

constexpr int MPOLY_MAXV = 6;

struct expv {
    std::array<uint8_t, MPOLY_MAXV> e{};
    uint8_t nv = 0;

    unsigned total() const {
        unsigned t = 0;
        for (int i = 0; i < nv; ++i) t += e[i];
        return t;
    }
};

// Graded reverse lexicographic order (ascending for std::map).
struct grevlex_less {
    bool operator()(const expv& a, const expv& b) const {
        unsigned ta = a.total(), tb = b.total();
        if (ta != tb) return ta < tb;
        for (int i = a.nv - 1; i >= 0; --i) {
            if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
        }
        return false;
    }
};

// Sparse multivariate polynomial with exact rational coefficients.
struct mpoly {
    uint8_t nv = 0;
    std::map<expv, Rat, grevlex_less> t;

    mpoly() = default;
    explicit mpoly(uint8_t nvars) : nv(nvars) { PRYM_CHECK(nvars <= MPOLY_MAXV, "too many variables"); }

    static mpoly constant(uint8_t nv, const Rat& c) {
        mpoly r(nv);
        if (c != 0) r.t[expv{{}, nv}] = c;
        return r;
    }
    static mpoly var(uint8_t nv, int i, unsigned pow = 1) {
        PRYM_CHECK(i >= 0 && i < nv, "variable index out of range");
        mpoly r(nv);
        expv m{{}, nv};
        m.e[i] = (uint8_t)pow;
        r.t[m] = 1;
        return r;
    }

    bool is_zero() const { return t.empty(); }
    void add_term(const expv& m, const Rat& c) {
        if (c == 0) return;
        auto it = t.find(m);
        if (it == t.end()) {
            t.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) t.erase(it);
        }
    }
    Rat coeff(const expv& m) const {
        auto it = t.find(m);
        return it == t.end() ? Rat(0) : it->second;
    }

    mpoly operator+(const mpoly& o) const {
        PRYM_CHECK(nv == o.nv, "mpoly arity mismatch");
        mpoly r = *this;
        for (auto& [m, c] : o.t) r.add_term(m, c);
        return r;
    }
    mpoly operator-(const mpoly& o) const {
        PRYM_CHECK(nv == o.nv, "mpoly arity mismatch");
        mpoly r = *this;
        for (auto& [m, c] : o.t) r.add_term(m, -c);
        return r;
    }
    mpoly operator-() const {
        mpoly r = *this;
        for (auto& [m, c] : r.t) c = -c;
        return r;
    }
    mpoly operator*(const mpoly& o) const {
        PRYM_CHECK(nv == o.nv, "mpoly arity mismatch");
        mpoly r(nv);
        for (auto& [m1, c1] : t)
            for (auto& [m2, c2] : o.t) {
                expv m = m1;
                for (int i = 0; i < nv; ++i) {
                    unsigned s = m1.e[i] + m2.e[i];
                    PRYM_CHECK(s < 256, "exponent overflow");
                    m.e[i] = (uint8_t)s;
                }
                r.add_term(m, c1 * c2);
            }
        return r;
    }
    mpoly operator*(const Rat& s) const {
        if (s == 0) return mpoly(nv);
        mpoly r = *this;
        for (auto& [m, c] : r.t) c *= s;
        return r;
    }
    bool operator==(const mpoly& o) const {
        if (nv != o.nv || t.size() != o.t.size()) return false;
        auto i = t.begin();
        auto j = o.t.begin();
        for (; i != t.end(); ++i, ++j)
            if (grevlex_less{}(i->first, j->first) || grevlex_less{}(j->first, i->first) ||
                i->second != j->second)
                return false;
        return true;
    }
    bool operator!=(const mpoly& o) const { return !(*this == o); }

    mpoly pow(unsigned k) const {
        mpoly r = constant(nv, 1), b = *this;
        while (k) {
            if (k & 1) r = r * b;
            if (k > 1) b = b * b;
            k >>= 1;
        }
        return r;
    }

    int total_deg() const {
        int d = -1;
        for (auto& [m, c] : t) d = std::max(d, (int)m.total());
        return d;
    }
    int deg_in(int i) const {
        int d = -1;
        for (auto& [m, c] : t) d = std::max(d, (int)m.e[i]);
        return d;
    }
    bool is_homogeneous(unsigned d) const {
        for (auto& [m, c] : t)
            if (m.total() != d) return false;
        return true;
    }

    mpoly derivative(int i) const {
        mpoly r(nv);
        for (auto& [m, c] : t) {
            if (m.e[i] == 0) continue;
            expv m2 = m;
            m2.e[i]--;
            r.add_term(m2, c * (int)m.e[i]);
        }
        return r;
    }

    // Coefficient of var_i^k, as a polynomial in the remaining variables
    // (arity preserved, exponent of var_i zeroed).
    mpoly coeff_of(int i, unsigned k) const {
        mpoly r(nv);
        for (auto& [m, c] : t) {
            if (m.e[i] != k) continue;
            expv m2 = m;
            m2.e[i] = 0;
            r.add_term(m2, c);
        }
        return r;
    }

    // Substitute var_i := g.
    mpoly subst(int i, const mpoly& g) const {
        PRYM_CHECK(g.nv == nv, "subst arity mismatch");
        std::vector<mpoly> powers{constant(nv, 1)};
        mpoly r(nv);
        for (auto& [m, c] : t) {
            unsigned k = m.e[i];
            while (powers.size() <= k) powers.push_back(powers.back() * g);
            expv m2 = m;
            m2.e[i] = 0;
            mpoly base(nv);
            base.t[m2] = c;
            r = r + base * powers[k];
        }
        return r;
    }

    template <class T>
    T eval(const std::vector<T>& vals, const T& sample) const {
        PRYM_CHECK((int)vals.size() == nv, "eval arity mismatch");
        T acc = dom<T>::zero(sample);
        for (auto& [m, c] : t) {
            T term = dom<T>::from_rat(c, sample);
            for (int i = 0; i < nv; ++i)
                for (unsigned k = 0; k < m.e[i]; ++k) term = term * vals[i];
            acc = acc + term;
        }
        return acc;
    }
    Rat eval_rat(const std::vector<Rat>& vals) const { return eval<Rat>(vals, Rat(0)); }

    // Exact division (throws if not exact).
    mpoly divexact(const mpoly& d) const {
        PRYM_CHECK(!d.is_zero(), "mpoly division by zero");
        mpoly r = *this, q(nv);
        const auto& [dm, dc] = *d.t.rbegin();
        while (!r.is_zero()) {
            const auto& [rm, rc] = *r.t.rbegin();
            expv qm{{}, nv};
            bool ok = true;
            for (int i = 0; i < nv; ++i) {
                if (rm.e[i] < dm.e[i]) { ok = false; break; }
                qm.e[i] = (uint8_t)(rm.e[i] - dm.e[i]);
            }
            PRYM_CHECK(ok, "mpoly division not exact");
            Rat qc = rc / dc;
            mpoly term(nv);
            term.t[qm] = qc;
            q = q + term;
            r = r - term * d;
        }
        return q;
    }

    // View as a univariate polynomial in var_i with mpoly coefficients.
    std::vector<mpoly> coeff_list(int i) const {
        int d = deg_in(i);
        std::vector<mpoly> out;
        for (int k = 0; k <= std::max(d, 0); ++k) out.push_back(coeff_of(i, (unsigned)k));
        if (d < 0) out.assign(1, mpoly(nv));
        return out;
    }

    Rat content() const {
        Int g = 0, l = 1;
        for (auto& [m, c] : t) {
            g = gcd(g, num(c));
            l = lcm(l, den(c));
        }
        if (g == 0) return Rat(0);
        return make_rat(g, l);
    }

    // Scale to integer coefficients with content 1 and positive leading
    // (grevlex-greatest) coefficient; returns the applied scalar s with
    // result = (*this) * s.
    std::pair<mpoly, Rat> normalized_primitive() const {
        PRYM_CHECK(!is_zero(), "normalizing zero polynomial");
        Rat c = content();
        Rat s = 1 / c;
        if (sgn(t.rbegin()->second) < 0) s = -s;
        return {*this * s, s};
    }
};

inline std::string mono_str(const expv& m, const std::vector<std::string>& vars) {
    std::string s;
    for (int i = 0; i < m.nv; ++i) {
        if (m.e[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += vars[i];
        if (m.e[i] > 1) s += "^" + std::to_string((int)m.e[i]);
    }
    return s;
}

// Decreasing grevlex, e.g. "3*u^2*v - 7/2*w^4 + 1".
inline std::string mpoly_str(const mpoly& f, const std::vector<std::string>& vars) {
    PRYM_CHECK((int)vars.size() == f.nv, "mpoly_str arity mismatch");
    if (f.is_zero()) return "0";
    std::string out;
    for (auto it = f.t.rbegin(); it != f.t.rend(); ++it) {
        const auto& [m, c] = *it;
        Rat a = c;
        if (out.empty()) {
            if (sgn(a) < 0) { out += "-"; a = -a; }
        } else {
            out += sgn(a) < 0 ? " - " : " + ";
            if (sgn(a) < 0) a = -a;
        }
        std::string ms = mono_str(m, vars);
        if (ms.empty()) {
            out += rat_str(a);
        } else if (a == 1) {
            out += ms;
        } else {
            out += rat_str(a) + "*" + ms;
        }
    }
    return out;
}

// Parser for the same format; accepts optional '*' between coefficient and
// monomial and between variable powers.
inline mpoly mpoly_parse(const std::string& text, const std::vector<std::string>& vars) {
    uint8_t nv = (uint8_t)vars.size();
    mpoly out(nv);
    std::string s;
    for (char ch : text)
        if (!isspace((unsigned char)ch)) s += ch;
    PRYM_INPUT(!s.empty(), "empty polynomial text");
    size_t i = 0;
    auto var_at = [&](size_t pos, int& len) -> int {
        for (size_t vi = 0; vi < vars.size(); ++vi) {
            if (s.compare(pos, vars[vi].size(), vars[vi]) == 0) {
                len = (int)vars[vi].size();
                return (int)vi;
            }
        }
        return -1;
    };
    while (i < s.size()) {
        int sign = 1;
        while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-') sign = -sign;
            ++i;
        }
        PRYM_INPUT(i < s.size(), "dangling sign in polynomial text");
        Rat coeff(1);
        bool saw_num = false;
        if (isdigit((unsigned char)s[i])) {
            size_t j = i;
            while (j < s.size() && (isdigit((unsigned char)s[j]))) ++j;
            if (j < s.size() && s[j] == '/') {
                size_t k = j + 1;
                while (k < s.size() && isdigit((unsigned char)s[k])) ++k;
                coeff = rat_parse(s.substr(i, k - i));
                i = k;
            } else {
                coeff = rat_parse(s.substr(i, j - i));
                i = j;
            }
            saw_num = true;
        }
        expv m{{}, nv};
        bool saw_var = false;
        while (i < s.size() && s[i] != '+' && s[i] != '-') {
            if (s[i] == '*') { ++i; continue; }
            int len = 0;
            int vi = var_at(i, len);
            PRYM_INPUT(vi >= 0, "unknown symbol in polynomial text at '" + s.substr(i) + "'");
            i += len;
            unsigned e = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                size_t j = i;
                while (j < s.size() && isdigit((unsigned char)s[j])) ++j;
                PRYM_INPUT(j > i, "missing exponent");
                e = (unsigned)std::stoul(s.substr(i, j - i));
                i = j;
            }
            unsigned tot = m.e[vi] + e;
            PRYM_INPUT(tot < 256, "exponent too large");
            m.e[vi] = (uint8_t)tot;
            saw_var = true;
        }
        PRYM_INPUT(saw_num || saw_var, "empty term in polynomial text");
        out.add_term(m, coeff * sign);
    }
    return out;
}

}  // namespace prym

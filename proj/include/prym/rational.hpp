#pragma once
#include <gmpxx.h>
#include <string>
#include <vector>
#include <optional>
#include "prym/common.hpp"

namespace prym {

using Int = mpz_class;
using Rat = mpq_class;

inline Int num(const Rat& q) { return Int(q.get_num()); }
inline Int den(const Rat& q) { return Int(q.get_den()); }

inline Rat make_rat(const Int& p, const Int& q) {
    PRYM_INPUT(q != 0, "rational with zero denominator");
    Rat r(p, q);
    r.canonicalize();
    return r;
}

// Text form: "p/q" with q > 0 omitted when 1; no spaces.
inline std::string rat_str(const Rat& q) {
    std::string s = q.get_num().get_str();
    if (q.get_den() != 1) s += "/" + q.get_den().get_str();
    return s;
}

inline Rat rat_parse(const std::string& s) {
    PRYM_INPUT(!s.empty(), "empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            Int n(s);
            return Rat(n);
        }
        Int p(s.substr(0, slash));
        Int q(s.substr(slash + 1));
        return make_rat(p, q);
    } catch (const std::invalid_argument&) {
        throw input_error("bad rational literal: " + s);
    }
}

inline int sgn(const Rat& q) { return sgn(q.get_num()); }

inline Int floor_sqrt(const Int& n) {
    PRYM_CHECK(n >= 0, "floor_sqrt of negative");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_square_int(const Int& n) {
    if (n < 0) return false;
    return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline bool is_square_rat(const Rat& q) {
    return q >= 0 && is_square_int(num(q)) && is_square_int(den(q));
}

inline std::optional<Rat> sqrt_rat(const Rat& q) {
    if (!is_square_rat(q)) return std::nullopt;
    return make_rat(floor_sqrt(num(q)), floor_sqrt(den(q)));
}

// max(|num|, den) as a crude height for search bounds.
inline Int rat_height(const Rat& q) {
    Int a = abs(num(q)), b = den(q);
    return a > b ? a : b;
}

}  // namespace prym

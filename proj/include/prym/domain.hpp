#pragma once
#include <optional>
#include "prym/rational.hpp"
#include "prym/fp.hpp"

namespace prym {

// Coefficient-domain traits.  Values are self-describing (a sample element
// carries any context such as the prime), so generic code builds constants
// from a sample rather than from the bare type.
template <class T>
struct dom;

template <>
struct dom<Rat> {
    static constexpr bool exact_field = true;
    static Rat zero(const Rat&) { return Rat(0); }
    static Rat one(const Rat&) { return Rat(1); }
    static Rat from_int(long n, const Rat&) { return Rat(n); }
    static Rat from_rat(const Rat& q, const Rat&) { return q; }
    static bool is_zero(const Rat& x) { return x == 0; }
    static Rat inv(const Rat& x) {
        PRYM_CHECK(x != 0, "inverse of zero rational");
        return 1 / x;
    }
    static Rat divexact(const Rat& a, const Rat& b) { return a / b; }
    static std::optional<Rat> sqrt(const Rat& x) { return sqrt_rat(x); }
    static std::string str(const Rat& x) { return rat_str(x); }
};

template <>
struct dom<fpelem> {
    static constexpr bool exact_field = true;
    static fpelem zero(const fpelem& s) { return fpelem(0, s.p); }
    static fpelem one(const fpelem& s) { return fpelem(1, s.p); }
    static fpelem from_int(long n, const fpelem& s) {
        return fpelem::from_int(Int(n), s.p);
    }
    static fpelem from_rat(const Rat& q, const fpelem& s) {
        return fpelem::from_rat(q, s.p);
    }
    static bool is_zero(const fpelem& x) { return x.v == 0; }
    static fpelem inv(const fpelem& x) { return x.inv(); }
    static fpelem divexact(const fpelem& a, const fpelem& b) { return a / b; }
    static std::optional<fpelem> sqrt(const fpelem& x) { return fp_sqrt_canonical(x); }
    static std::string str(const fpelem& x) { return std::to_string(x.v); }
};

}  // namespace prym

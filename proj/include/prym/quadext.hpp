#pragma once
#include "prym/domain.hpp"
#include "prym/rational.hpp"

namespace prym {

// Quadratic extension T(sqrt(e)) of a coefficient field T: values a + b*sqrt(e).
// e is carried by every element; operations require matching e.  Nested towers
// (quadext<quadext<Rat>> etc.) work because only dom<T> operations are used.
template <class T>
struct quadext {
    T a, b, e;

    quadext(const T& a_, const T& b_, const T& e_) : a(a_), b(b_), e(e_) {}
    explicit quadext(const T& sample)
        : a(dom<T>::zero(sample)), b(dom<T>::zero(sample)), e(dom<T>::zero(sample)) {}

    static quadext embed(const T& x, const T& e_) { return {x, dom<T>::zero(x), e_}; }
    static quadext root(const T& e_) { return {dom<T>::zero(e_), dom<T>::one(e_), e_}; }

    bool is_rational_part_only() const { return dom<T>::is_zero(b); }

    quadext conj() const { return {a, -b, e}; }

    quadext operator-() const { return {-a, -b, e}; }
    quadext operator+(const quadext& o) const { return {a + o.a, b + o.b, pick_e(o)}; }
    quadext operator-(const quadext& o) const { return {a - o.a, b - o.b, pick_e(o)}; }
    quadext operator*(const quadext& o) const {
        T ee = pick_e(o);
        return {a * o.a + b * o.b * ee, a * o.b + b * o.a, ee};
    }
    quadext operator/(const quadext& o) const { return *this * o.inv(); }
    bool operator==(const quadext& o) const {
        return dom<T>::is_zero(a - o.a) && dom<T>::is_zero(b - o.b);
    }

    T norm() const { return a * a - b * b * e; }

    quadext inv() const {
        T n = norm();
        PRYM_CHECK(!dom<T>::is_zero(n), "inverse of zero in quadratic extension");
        T ni = dom<T>::inv(n);
        return {a * ni, -b * ni, e};
    }

private:
    T pick_e(const quadext& o) const {
        if (dom<T>::is_zero(b) && dom<T>::is_zero(a)) return o.e;
        return e;
    }
};

template <class T>
struct dom<quadext<T>> {
    static constexpr bool exact_field = dom<T>::exact_field;
    static quadext<T> zero(const quadext<T>& s) {
        return {dom<T>::zero(s.e), dom<T>::zero(s.e), s.e};
    }
    static quadext<T> one(const quadext<T>& s) {
        return {dom<T>::one(s.e), dom<T>::zero(s.e), s.e};
    }
    static quadext<T> from_int(long n, const quadext<T>& s) {
        return {dom<T>::from_int(n, s.e), dom<T>::zero(s.e), s.e};
    }
    static quadext<T> from_rat(const Rat& q, const quadext<T>& s) {
        return {dom<T>::from_rat(q, s.e), dom<T>::zero(s.e), s.e};
    }
    static bool is_zero(const quadext<T>& x) {
        return dom<T>::is_zero(x.a) && dom<T>::is_zero(x.b);
    }
    static quadext<T> inv(const quadext<T>& x) { return x.inv(); }
    static quadext<T> divexact(const quadext<T>& x, const quadext<T>& y) { return x / y; }
    static std::optional<quadext<T>> sqrt(const quadext<T>& x) {
        // sqrt of a base-field value t: either sqrt(t) in T, or sqrt(t/e)*sqrt(e)
        if (!dom<T>::is_zero(x.b)) return std::nullopt;
        if (auto r = dom<T>::sqrt(x.a)) return quadext<T>{*r, dom<T>::zero(x.e), x.e};
        if (!dom<T>::is_zero(x.e))
            if (auto r = dom<T>::sqrt(dom<T>::divexact(x.a, x.e)))
                return quadext<T>{dom<T>::zero(x.e), *r, x.e};
        return std::nullopt;
    }
    static std::string str(const quadext<T>& x) {
        if (dom<T>::is_zero(x.b)) return dom<T>::str(x.a);
        std::string s = "(" + dom<T>::str(x.a) + " + " + dom<T>::str(x.b) + "*sqrt(" +
                        dom<T>::str(x.e) + "))";
        return s;
    }
};

}  // namespace prym

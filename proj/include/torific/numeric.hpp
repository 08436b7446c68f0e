#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace torific {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int int_gcd(Int a, Int b) { return boost::multiprecision::gcd(a, b); }
inline Int int_lcm(Int a, Int b) { return boost::multiprecision::lcm(a, b); }

inline int sign_of(const Int& a) { return a.sign(); }
inline int sign_of(const Rat& a) { return a.sign(); }

/// Exact n-th root of an integer, if it exists.
inline bool exact_nth_root(const Int& a, unsigned n, Int& out)
{
    if (n == 0) throw std::invalid_argument("exact_nth_root: n == 0");
    if (n == 1) {
        out = a;
        return true;
    }
    if (a < 0) {
        if (n % 2 == 0) return false;
        Int r;
        if (!exact_nth_root(-a, n, r)) return false;
        out = -r;
        return true;
    }
    if (a == 0 || a == 1) {
        out = a;
        return true;
    }
    // bisection on r^n = a
    Int lo = 1, hi = a;
    while (lo <= hi) {
        Int mid = (lo + hi) / 2;
        Int p = boost::multiprecision::pow(mid, n);
        if (p == a) {
            out = mid;
            return true;
        }
        if (p < a)
            lo = mid + 1;
        else
            hi = mid - 1;
    }
    return false;
}

/// Exact n-th root of a rational, if one exists in Q.
inline bool exact_nth_root(const Rat& a, unsigned n, Rat& out)
{
    Int num, den;
    if (!exact_nth_root(Int(boost::multiprecision::numerator(a)), n, num)) return false;
    if (!exact_nth_root(Int(boost::multiprecision::denominator(a)), n, den)) return false;
    out = Rat(num, den);
    return true;
}

inline Rat rat_pow(const Rat& a, long e)
{
    if (e == 0) return Rat(1);
    if (e < 0) {
        if (a == 0) throw std::domain_error("rat_pow: zero to negative power");
        return Rat(1) / rat_pow(a, -e);
    }
    Rat r(1), base = a;
    long k = e;
    while (k > 0) {
        if (k & 1) r *= base;
        base *= base;
        k >>= 1;
    }
    return r;
}

inline std::string to_string(const Rat& a)
{
    return a.str();
}

inline Rat rat_from_string(const std::string& s)
{
    return Rat(s);
}

} // namespace torific

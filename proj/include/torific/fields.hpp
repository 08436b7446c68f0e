#pragma once

#include <torific/numeric.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace torific {

struct field_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Prime field F_p with runtime modulus. Elements remember their modulus;
/// mixing moduli is an error.
class Fp {
public:
    Fp() : v_(0), p_(0) {}
    Fp(long long v, long long p) : p_(p)
    {
        if (p < 2) throw field_error("Fp: modulus must be >= 2");
        v_ = v % p;
        if (v_ < 0) v_ += p;
    }

    long long value() const { return v_; }
    long long modulus() const { return p_; }

    bool is_zero() const { return v_ == 0; }

    friend Fp operator+(const Fp& a, const Fp& b)
    {
        a.require_compatible(b);
        return Fp(a.v_ + b.v_, a.mod_or(b));
    }
    friend Fp operator-(const Fp& a, const Fp& b)
    {
        a.require_compatible(b);
        return Fp(a.v_ - b.v_, a.mod_or(b));
    }
    friend Fp operator*(const Fp& a, const Fp& b)
    {
        a.require_compatible(b);
        return Fp(a.v_ * b.v_, a.mod_or(b));
    }
    friend Fp operator-(const Fp& a) { return Fp(-a.v_, a.p_); }

    Fp inverse() const
    {
        if (v_ == 0) throw field_error("Fp: inverse of zero");
        // extended Euclid
        long long a = v_, b = p_, x0 = 1, x1 = 0;
        while (b != 0) {
            long long q = a / b;
            long long t = a - q * b;
            a = b;
            b = t;
            t = x0 - q * x1;
            x0 = x1;
            x1 = t;
        }
        if (a != 1) throw field_error("Fp: modulus not prime or element not invertible");
        return Fp(x0, p_);
    }

    friend bool operator==(const Fp& a, const Fp& b)
    {
        if (a.p_ != 0 && b.p_ != 0 && a.p_ != b.p_) return false;
        return a.v_ == b.v_;
    }
    friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

    std::string str() const { return std::to_string(v_); }

private:
    // Default-constructed zero (p_ == 0) is compatible with anything.
    void require_compatible(const Fp& o) const
    {
        if (p_ != 0 && o.p_ != 0 && p_ != o.p_) throw field_error("Fp: modulus mismatch");
    }
    long long mod_or(const Fp& o) const { return p_ != 0 ? p_ : o.p_; }

    long long v_;
    long long p_;
};

// ---- uniform field operations used by the generic series/polynomial code ----

inline bool is_zero(const Rat& a) { return a == 0; }
inline bool is_zero(const Fp& a) { return a.is_zero(); }

inline Rat inverse(const Rat& a)
{
    if (a == 0) throw field_error("Rat: inverse of zero");
    return Rat(1) / a;
}
inline Fp inverse(const Fp& a) { return a.inverse(); }

inline Rat one_like(const Rat&) { return Rat(1); }
inline Fp one_like(const Fp& a)
{
    if (a.modulus() == 0) throw field_error("Fp: one_like on uninitialized element");
    return Fp(1, a.modulus());
}

inline Rat zero_like(const Rat&) { return Rat(0); }
inline Fp zero_like(const Fp& a) { return Fp(0, a.modulus() == 0 ? 2 : a.modulus()); }

inline Rat int_to(const Rat&, long long n) { return Rat(n); }
inline Fp int_to(const Fp& a, long long n)
{
    if (a.modulus() == 0) throw field_error("Fp: int_to on uninitialized element");
    return Fp(n, a.modulus());
}

template <class K>
K field_pow(const K& a, long long e)
{
    if (e < 0) return field_pow(inverse(a), -e);
    K r = one_like(a);
    K base = a;
    long long k = e;
    while (k > 0) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

inline std::string coeff_str(const Rat& a) { return a.str(); }
inline std::string coeff_str(const Fp& a) { return a.str(); }

/// Solve the square linear system A x = b over the field K by Gaussian
/// elimination. Throws if A is singular.
template <class K>
std::vector<K> solve_linear(std::vector<std::vector<K>> A, std::vector<K> b)
{
    const size_t n = A.size();
    if (n == 0) return {};
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && is_zero(A[piv][col])) ++piv;
        if (piv == n) throw field_error("solve_linear: singular matrix");
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        K inv = inverse(A[col][col]);
        for (size_t j = col; j < n; ++j) A[col][j] = A[col][j] * inv;
        b[col] = b[col] * inv;
        for (size_t row = 0; row < n; ++row) {
            if (row == col || is_zero(A[row][col])) continue;
            K f = A[row][col];
            for (size_t j = col; j < n; ++j) A[row][j] = A[row][j] - f * A[col][j];
            b[row] = b[row] - f * b[col];
        }
    }
    return b;
}

} // namespace torific

#pragma once

#include <torific/hahn_series.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

namespace torific {

/// Multivariate polynomial with exponent vectors in Z_{>=0}^n and exact
/// field coefficients. Term order: graded lexicographic, used only for
/// canonical storage.
template <class K>
class Polynomial {
public:
    using Exp = std::vector<long long>;
    using Term = std::pair<Exp, K>;

    explicit Polynomial(int nvars) : nvars_(nvars) {}
    Polynomial(int nvars, std::vector<Term> terms) : nvars_(nvars)
    {
        for (auto& t : terms) add_term(t.first, t.second);
    }

    static Polynomial constant(int nvars, const K& c)
    {
        Polynomial p(nvars);
        p.add_term(Exp(nvars, 0), c);
        return p;
    }

    static Polynomial variable(int nvars, int i, const K& one)
    {
        Polynomial p(nvars);
        Exp e(nvars, 0);
        e[i] = 1;
        p.add_term(e, one);
        return p;
    }

    static Polynomial monomial(int nvars, Exp e, const K& c)
    {
        Polynomial p(nvars);
        p.add_term(std::move(e), c);
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    std::vector<Term> terms() const
    {
        std::vector<Term> out(terms_.begin(), terms_.end());
        return out;
    }

    void add_term(Exp e, const K& c)
    {
        if (static_cast<int>(e.size()) != nvars_)
            throw std::invalid_argument("Polynomial: exponent arity mismatch");
        for (long long x : e)
            if (x < 0) throw std::invalid_argument("Polynomial: negative exponent");
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (!torific::is_zero(c)) terms_.emplace(std::move(e), c);
        } else {
            it->second = it->second + c;
            if (torific::is_zero(it->second)) terms_.erase(it);
        }
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b)
    {
        a.require_same(b);
        Polynomial r = a;
        for (const auto& t : b.terms_) r.add_term(t.first, t.second);
        return r;
    }
    friend Polynomial operator-(const Polynomial& a)
    {
        Polynomial r(a.nvars_);
        for (const auto& t : a.terms_) r.add_term(t.first, -t.second);
        return r;
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        a.require_same(b);
        Polynomial r(a.nvars_);
        for (const auto& x : a.terms_)
            for (const auto& y : b.terms_) {
                Exp e(x.first);
                for (int i = 0; i < a.nvars_; ++i) e[i] += y.first[i];
                r.add_term(std::move(e), x.second * y.second);
            }
        return r;
    }

    Polynomial scaled(const K& k) const
    {
        Polynomial r(nvars_);
        for (const auto& t : terms_) r.add_term(t.first, t.second * k);
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b)
    {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    Polynomial derivative(int var) const
    {
        Polynomial r(nvars_);
        for (const auto& t : terms_) {
            if (t.first[var] == 0) continue;
            Exp e(t.first);
            long long k = e[var]--;
            K sample = t.second;
            r.add_term(std::move(e), t.second * int_to(sample, k));
        }
        return r;
    }

private:
    struct GrlexLess {
        bool operator()(const Exp& a, const Exp& b) const
        {
            long long da = 0, db = 0;
            for (long long x : a) da += x;
            for (long long x : b) db += x;
            if (da != db) return da < db;
            return a < b;
        }
    };

    void require_same(const Polynomial& o) const
    {
        if (nvars_ != o.nvars_) throw std::invalid_argument("Polynomial: arity mismatch");
    }

    int nvars_;
    std::map<Exp, K, GrlexLess> terms_;
};

/// Evaluate f at the given Hahn-series images of its variables. Exact below
/// the induced cutoff, which the series arithmetic tracks.
template <class K>
HahnSeries<K> substitute(const Polynomial<K>& f, const std::vector<HahnSeries<K>>& images)
{
    if (static_cast<int>(images.size()) != f.nvars())
        throw series_error("substitute: image count != variable count");
    if (images.empty()) throw series_error("substitute: no variables");
    const auto& ctx = images.front().context();
    GroupElement cutoff = images.front().cutoff();
    for (const auto& s : images) {
        if (s.context() != ctx) throw series_error("substitute: image context mismatch");
        cutoff = min_element(cutoff, s.cutoff());
    }
    HahnSeries<K> acc = HahnSeries<K>::zero(ctx, cutoff);
    for (const auto& [exp, coeff] : f.terms()) {
        HahnSeries<K> term =
            HahnSeries<K>::monomial(coeff, GroupElement::zero(ctx), cutoff);
        for (size_t i = 0; i < images.size(); ++i)
            if (exp[i] != 0) term = term * series_pow(images[i], exp[i]);
        acc = acc + term;
    }
    return acc;
}

/// Determinant of a square matrix of polynomials, by minor expansion with
/// memoization over column subsets (exact, no division).
template <class K>
Polynomial<K> poly_det(const std::vector<std::vector<Polynomial<K>>>& m)
{
    const size_t n = m.size();
    if (n == 0) throw std::invalid_argument("poly_det: empty matrix");
    const int nv = m[0][0].nvars();
    if (n > 20) throw std::invalid_argument("poly_det: matrix too large");
    struct Rec {
        const std::vector<std::vector<Polynomial<K>>>& m;
        size_t n;
        int nv;
        std::map<std::pair<size_t, unsigned>, Polynomial<K>> memo;
        // det of rows [row..n) on columns not in colmask
        Polynomial<K> det(size_t row, unsigned colmask)
        {
            auto key = std::make_pair(row, colmask);
            auto it = memo.find(key);
            if (it != memo.end()) return it->second;
            Polynomial<K> acc(nv);
            int sign = 1; // (-1)^(position of c among unused columns)
            for (size_t c = 0; c < n; ++c) {
                if (colmask & (1u << c)) continue;
                if (!m[row][c].is_zero()) {
                    Polynomial<K> contrib = (row + 1 == n)
                                                ? m[row][c]
                                                : m[row][c] * det(row + 1, colmask | (1u << c));
                    if (sign < 0) contrib = -contrib;
                    acc = acc + contrib;
                }
                sign = -sign;
            }
            memo.emplace(key, acc);
            return acc;
        }
    };
    Rec rec{m, n, nv, {}};
    return rec.det(0, 0);
}

} // namespace torific

#pragma once

#include <torific/fields.hpp>
#include <torific/ordered_group.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace torific {

struct series_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Valuation value: a group element, or infinity for the zero series.
struct Valuation {
    std::optional<GroupElement> value; // nullopt == INFINITY

    bool is_infinity() const { return !value.has_value(); }

    friend bool operator==(const Valuation& a, const Valuation& b)
    {
        if (a.is_infinity() || b.is_infinity()) return a.is_infinity() == b.is_infinity();
        return *a.value == *b.value;
    }
};

/// >= comparison where infinity dominates every group element.
inline bool valuation_geq(const Valuation& v, const GroupElement& bound)
{
    if (v.is_infinity()) return true;
    return !less(*v.value, bound);
}
inline bool valuation_gt(const Valuation& v, const GroupElement& bound)
{
    if (v.is_infinity()) return true;
    return less(bound, *v.value);
}

/// Truncated Hahn series: finitely many terms with exponents in Phi_{>=0},
/// all strictly below an exclusive cutoff. Every operation computes the
/// tightest cutoff under which the retained coefficients are exact.
template <class K>
class HahnSeries {
public:
    using Term = std::pair<GroupElement, K>;

    HahnSeries(GroupContextPtr ctx, std::vector<Term> terms, GroupElement cutoff)
        : ctx_(std::move(ctx)), cutoff_(std::move(cutoff))
    {
        if (cutoff_.context() != ctx_) throw series_error("HahnSeries: cutoff context mismatch");
        normalize(std::move(terms));
    }

    static HahnSeries zero(const GroupContextPtr& ctx, const GroupElement& cutoff)
    {
        return HahnSeries(ctx, {}, cutoff);
    }

    static HahnSeries monomial(const K& coeff, const GroupElement& exp, const GroupElement& cutoff)
    {
        return HahnSeries(exp.context(), {{exp, coeff}}, cutoff);
    }

    const GroupContextPtr& context() const { return ctx_; }
    const std::vector<Term>& terms() const { return terms_; }
    const GroupElement& cutoff() const { return cutoff_; }

    bool is_zero() const { return terms_.empty(); }

    Valuation valuation() const
    {
        if (terms_.empty()) return Valuation{std::nullopt};
        return Valuation{terms_.front().first};
    }

    /// Leading coefficient and exponent; errors on the zero series.
    std::pair<K, GroupElement> initial_form() const
    {
        if (terms_.empty()) throw series_error("initial_form: zero series");
        return {terms_.front().second, terms_.front().first};
    }

    K coefficient(const GroupElement& e) const
    {
        for (const auto& t : terms_)
            if (t.first == e) return t.second;
        if (terms_.empty()) throw series_error("coefficient: no sample coefficient available");
        return zero_like(terms_.front().second);
    }

    HahnSeries truncated(const GroupElement& new_cutoff) const
    {
        GroupElement c = min_element(cutoff_, new_cutoff);
        return HahnSeries(ctx_, terms_, c);
    }

    friend HahnSeries operator+(const HahnSeries& a, const HahnSeries& b)
    {
        a.require_same(b);
        std::vector<Term> t(a.terms_);
        t.insert(t.end(), b.terms_.begin(), b.terms_.end());
        return HahnSeries(a.ctx_, std::move(t), min_element(a.cutoff_, b.cutoff_));
    }

    friend HahnSeries operator-(const HahnSeries& a)
    {
        std::vector<Term> t(a.terms_);
        for (auto& x : t) x.second = -x.second;
        return HahnSeries(a.ctx_, std::move(t), a.cutoff_);
    }

    friend HahnSeries operator-(const HahnSeries& a, const HahnSeries& b) { return a + (-b); }

    friend HahnSeries operator*(const HahnSeries& a, const HahnSeries& b)
    {
        a.require_same(b);
        GroupElement c = min_element(a.cutoff_, b.cutoff_);
        if (!a.terms_.empty() && !b.terms_.empty()) {
            // every retained coefficient of the convolution is exact below
            // min(val(a)+cutoff(b), val(b)+cutoff(a), cutoffs)
            c = min_element(c, a.terms_.front().first + b.cutoff_);
            c = min_element(c, b.terms_.front().first + a.cutoff_);
        }
        std::vector<Term> t;
        t.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& x : a.terms_)
            for (const auto& y : b.terms_) {
                GroupElement e = x.first + y.first;
                if (!less(e, c)) continue;
                t.emplace_back(std::move(e), x.second * y.second);
            }
        return HahnSeries(a.ctx_, std::move(t), c);
    }

    HahnSeries scaled(const K& k) const
    {
        std::vector<Term> t(terms_);
        for (auto& x : t) x.second = x.second * k;
        return HahnSeries(ctx_, std::move(t), cutoff_);
    }

private:
    void require_same(const HahnSeries& o) const
    {
        if (ctx_ != o.ctx_) throw series_error("HahnSeries: context mismatch");
    }

    void normalize(std::vector<Term> raw)
    {
        std::sort(raw.begin(), raw.end(),
                  [](const Term& x, const Term& y) { return less(x.first, y.first); });
        terms_.clear();
        for (auto& t : raw) {
            if (!is_nonnegative(t.first))
                throw series_error("HahnSeries: negative exponent in support");
            if (!less(t.first, cutoff_)) continue;
            if (!terms_.empty() && terms_.back().first == t.first)
                terms_.back().second = terms_.back().second + t.second;
            else
                terms_.push_back(std::move(t));
        }
        terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                                    [](const Term& t) { return torific::is_zero(t.second); }),
                     terms_.end());
    }

    GroupContextPtr ctx_;
    std::vector<Term> terms_;
    GroupElement cutoff_;
};

template <class K>
Valuation valuation(const HahnSeries<K>& s)
{
    return s.valuation();
}

/// Inverse of a unit (nonzero constant term), by geometric-series iteration.
template <class K>
HahnSeries<K> series_inv_unit(const HahnSeries<K>& a)
{
    auto zero_exp = GroupElement::zero(a.context());
    if (a.is_zero() || !(a.terms().front().first == zero_exp))
        throw series_error("series_inv_unit: input is not a unit");
    K c = a.terms().front().second;
    K cinv = inverse(c);
    // a = c (1 + h), nu(h) > 0
    HahnSeries<K> one = HahnSeries<K>::monomial(one_like(c), zero_exp, a.cutoff());
    HahnSeries<K> h = a.scaled(cinv) - one;
    HahnSeries<K> acc = one;
    HahnSeries<K> power = one;
    while (true) {
        power = power * (-h);
        if (power.is_zero()) break;
        acc = acc + power;
    }
    return acc.scaled(cinv).truncated(a.cutoff());
}

template <class K>
HahnSeries<K> series_pow(const HahnSeries<K>& a, long long e)
{
    if (e < 0) return series_pow(series_inv_unit(a), -e);
    if (a.is_zero() && e == 0) throw series_error("series_pow: 0^0 on zero series");
    K one = a.is_zero() ? K{} : one_like(a.terms().front().second);
    if (a.is_zero()) return a; // e > 0
    HahnSeries<K> r = HahnSeries<K>::monomial(one, GroupElement::zero(a.context()), a.cutoff());
    HahnSeries<K> base = a;
    long long k = e;
    while (k > 0) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

/// a == b on all exponents strictly below `bound`; requires both cutoffs >= bound.
template <class K>
bool equal_below(const HahnSeries<K>& a, const HahnSeries<K>& b, const GroupElement& bound)
{
    if (less(a.cutoff(), bound) || less(b.cutoff(), bound))
        throw series_error("equal_below: cutoff below requested bound");
    HahnSeries<K> d = (a - b).truncated(bound);
    return d.is_zero();
}

/// Apply the group automorphism induced by a morphism u: Phi -> units,
/// given on the coordinate generators of the group; acts by
/// sum c_phi t^phi  |->  sum c_phi u(phi) t^phi.
template <class K>
HahnSeries<K> apply_group_automorphism(const std::vector<HahnSeries<K>>& generator_units,
                                       const HahnSeries<K>& s)
{
    const auto& ctx = s.context();
    if (static_cast<int>(generator_units.size()) != ctx->rank())
        throw series_error("apply_group_automorphism: need one unit per group generator");
    auto zero_exp = GroupElement::zero(ctx);
    for (const auto& u : generator_units) {
        if (u.is_zero() || !(u.terms().front().first == zero_exp))
            throw series_error("apply_group_automorphism: generator image is not a unit");
    }
    if (s.is_zero()) return s;
    HahnSeries<K> acc = HahnSeries<K>::zero(ctx, s.cutoff());
    for (const auto& [exp, coeff] : s.terms()) {
        // u(phi) = prod u_i^{phi_i}
        HahnSeries<K> u_phi =
            HahnSeries<K>::monomial(one_like(coeff), zero_exp, s.cutoff());
        for (int i = 0; i < ctx->rank(); ++i) {
            long long e = exp.coords()[i];
            if (e != 0) u_phi = u_phi * series_pow(generator_units[i], e);
        }
        acc = acc + (u_phi * HahnSeries<K>::monomial(coeff, exp, s.cutoff()));
    }
    return acc;
}

} // namespace torific

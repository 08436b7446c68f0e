#pragma once

#include <torific/numeric.hpp>

#include <algorithm>
#include <compare>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace torific {

struct context_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Ordering { LT, EQ, GT };

/// A weight of the order embedding: an exact positive rational, or the
/// certified constant pi with an adaptive-precision rational interval oracle.
struct Weight {
    enum class Kind { Rational, Pi } kind;
    Rat value; // used when kind == Rational

    static Weight rational(const Rat& v) { return Weight{Kind::Rational, v}; }
    static Weight pi() { return Weight{Kind::Pi, Rat(0)}; }
};

namespace detail {

/// Certified rational interval enclosing pi, computed by Machin's formula with
/// alternating-series tail bounds. Thread safe; refinement doubles precision.
class PiOracle {
public:
    struct Interval {
        Rat lo, hi;
    };

    static Interval enclosure(unsigned bits)
    {
        static PiOracle oracle;
        std::lock_guard<std::mutex> lock(oracle.mu_);
        if (oracle.bits_ < bits) {
            oracle.compute(bits);
            oracle.bits_ = bits;
        }
        return oracle.cached_;
    }

private:
    std::mutex mu_;
    unsigned bits_ = 0;
    Interval cached_;

    // Alternating series for arctan(1/x), x >= 2: value lies between any two
    // consecutive partial sums.
    static Interval atan_inv(long x, unsigned bits)
    {
        Rat term(1, x);
        Rat inv_x2 = Rat(1, Int(x) * x);
        Rat sum(0);
        Rat eps = Rat(1, boost::multiprecision::pow(Int(2), bits + 4));
        long k = 0;
        bool plus = true;
        while (true) {
            Rat contrib = term / Rat(2 * k + 1);
            if (plus)
                sum += contrib;
            else
                sum -= contrib;
            term *= inv_x2;
            ++k;
            plus = !plus;
            Rat next = term / Rat(2 * k + 1);
            if (next < eps) {
                // sum and sum -/+ next bracket the value
                if (plus)
                    return Interval{sum, sum + next};
                else
                    return Interval{sum - next, sum};
            }
        }
    }

    void compute(unsigned bits)
    {
        Interval a = atan_inv(5, bits + 6);
        Interval b = atan_inv(239, bits + 6);
        cached_.lo = Rat(16) * a.lo - Rat(4) * b.hi;
        cached_.hi = Rat(16) * a.hi - Rat(4) * b.lo;
    }
};

} // namespace detail

/// Totally ordered abelian group Z^r with the order induced by a weight
/// vector. Weights must be Q-linearly independent so that element equality is
/// purely coordinatewise; this limits the supported weight sets to at most one
/// rational and at most one occurrence of pi (extension point for further
/// certified constants).
class GroupContext {
public:
    static std::shared_ptr<const GroupContext> create(std::vector<Weight> weights,
                                                      unsigned precision_ceiling_bits = 4096)
    {
        return std::shared_ptr<const GroupContext>(
            new GroupContext(std::move(weights), precision_ceiling_bits));
    }

    static std::shared_ptr<const GroupContext> integers()
    {
        return create({Weight::rational(Rat(1))});
    }

    static std::shared_ptr<const GroupContext> z_plus_z_pi()
    {
        return create({Weight::rational(Rat(1)), Weight::pi()});
    }

    int rank() const { return static_cast<int>(weights_.size()); }
    const std::vector<Weight>& weights() const { return weights_; }
    unsigned precision_ceiling() const { return precision_ceiling_; }

    /// Certified sign of sum_i coeffs[i] * weight[i]. Exact: the value is
    /// p + q*pi with p, q rational; a sign decision involving pi refines the
    /// interval enclosure until certified (termination guaranteed by the
    /// Q-independence of the weights).
    int certified_sign(const std::vector<Rat>& coeffs) const
    {
        if (coeffs.size() != weights_.size())
            throw context_error("certified_sign: coefficient count mismatch");
        Rat p(0), q(0);
        for (size_t i = 0; i < coeffs.size(); ++i) {
            if (weights_[i].kind == Weight::Kind::Rational)
                p += coeffs[i] * weights_[i].value;
            else
                q += coeffs[i];
        }
        if (q == 0) return sign_of(p);
        if (p == 0) return sign_of(q);
        if ((p > 0 && q > 0)) return 1;
        if ((p < 0 && q < 0)) return -1;
        // p and q have opposite signs; refine the pi enclosure.
        unsigned bits = 64;
        while (bits <= precision_ceiling_) {
            auto iv = detail::PiOracle::enclosure(bits);
            Rat lo = p + (q > 0 ? q * iv.lo : q * iv.hi);
            Rat hi = p + (q > 0 ? q * iv.hi : q * iv.lo);
            if (lo > 0) return 1;
            if (hi < 0) return -1;
            bits *= 2;
        }
        throw precision_error("certified_sign: precision ceiling reached");
    }

    /// True iff sum coeffs[i]*weight[i] == 0 exactly; decided algebraically,
    /// never by interval refinement.
    bool exact_zero(const std::vector<Rat>& coeffs) const
    {
        Rat p(0), q(0);
        for (size_t i = 0; i < coeffs.size(); ++i) {
            if (weights_[i].kind == Weight::Kind::Rational)
                p += coeffs[i] * weights_[i].value;
            else
                q += coeffs[i];
        }
        return p == 0 && q == 0;
    }

private:
    GroupContext(std::vector<Weight> weights, unsigned ceiling)
        : weights_(std::move(weights)), precision_ceiling_(ceiling)
    {
        if (weights_.empty()) throw context_error("group rank must be >= 1");
        int rational_count = 0, pi_count = 0;
        for (const auto& w : weights_) {
            if (w.kind == Weight::Kind::Rational) {
                if (w.value <= 0) throw context_error("weights must be strictly positive");
                ++rational_count;
            } else {
                ++pi_count;
            }
        }
        // Q-linear independence is required for coordinatewise equality.
        if (rational_count > 1)
            throw context_error("two rational weights are Q-linearly dependent; rejected");
        if (pi_count > 1)
            throw context_error("two pi weights are Q-linearly dependent; rejected");
    }

    std::vector<Weight> weights_;
    unsigned precision_ceiling_;
};

using GroupContextPtr = std::shared_ptr<const GroupContext>;

/// Element of the ordered group: an integer coordinate vector interpreted as
/// sum coords[i] * weight[i].
class GroupElement {
public:
    GroupElement() = default;
    GroupElement(GroupContextPtr ctx, std::vector<long long> coords)
        : ctx_(std::move(ctx)), coords_(std::move(coords))
    {
        if (!ctx_) throw context_error("GroupElement: null context");
        if (static_cast<int>(coords_.size()) != ctx_->rank())
            throw context_error("GroupElement: coordinate count != rank");
    }

    static GroupElement zero(const GroupContextPtr& ctx)
    {
        return GroupElement(ctx, std::vector<long long>(ctx->rank(), 0));
    }

    const GroupContextPtr& context() const { return ctx_; }
    const std::vector<long long>& coords() const { return coords_; }

    bool same_context(const GroupElement& o) const { return ctx_ == o.ctx_; }

    friend GroupElement operator+(const GroupElement& a, const GroupElement& b)
    {
        a.require_same(b);
        std::vector<long long> c(a.coords_);
        for (size_t i = 0; i < c.size(); ++i) c[i] += b.coords_[i];
        return GroupElement(a.ctx_, std::move(c));
    }

    friend GroupElement operator-(const GroupElement& a, const GroupElement& b)
    {
        a.require_same(b);
        std::vector<long long> c(a.coords_);
        for (size_t i = 0; i < c.size(); ++i) c[i] -= b.coords_[i];
        return GroupElement(a.ctx_, std::move(c));
    }

    friend GroupElement operator-(const GroupElement& a)
    {
        std::vector<long long> c(a.coords_);
        for (auto& x : c) x = -x;
        return GroupElement(a.ctx_, std::move(c));
    }

    friend GroupElement operator*(long long k, const GroupElement& a)
    {
        std::vector<long long> c(a.coords_);
        for (auto& x : c) x *= k;
        return GroupElement(a.ctx_, std::move(c));
    }

    bool is_zero() const
    {
        return std::all_of(coords_.begin(), coords_.end(), [](long long x) { return x == 0; });
    }

    friend bool operator==(const GroupElement& a, const GroupElement& b)
    {
        a.require_same(b);
        return a.coords_ == b.coords_;
    }
    friend bool operator!=(const GroupElement& a, const GroupElement& b) { return !(a == b); }

private:
    void require_same(const GroupElement& o) const
    {
        if (ctx_ != o.ctx_) throw context_error("GroupElement: context mismatch");
    }

    GroupContextPtr ctx_;
    std::vector<long long> coords_;
};

inline Ordering compare(const GroupElement& a, const GroupElement& b)
{
    if (a.coords() == b.coords()) {
        if (a.context() != b.context()) throw context_error("compare: context mismatch");
        return Ordering::EQ;
    }
    std::vector<Rat> diff(a.coords().size());
    for (size_t i = 0; i < diff.size(); ++i)
        diff[i] = Rat(a.coords()[i]) - Rat(b.coords()[i]);
    int s = a.context()->certified_sign(diff);
    if (s > 0) return Ordering::GT;
    if (s < 0) return Ordering::LT;
    // A certified zero with distinct coordinates contradicts Q-independence.
    throw context_error("compare: zero value on distinct coordinates");
}

inline bool less(const GroupElement& a, const GroupElement& b)
{
    return compare(a, b) == Ordering::LT;
}
inline bool leq(const GroupElement& a, const GroupElement& b)
{
    return compare(a, b) != Ordering::GT;
}
inline bool is_nonnegative(const GroupElement& a)
{
    return a.is_zero() || compare(a, GroupElement::zero(a.context())) == Ordering::GT;
}
inline bool is_positive(const GroupElement& a)
{
    return !a.is_zero() && compare(a, GroupElement::zero(a.context())) == Ordering::GT;
}

inline const GroupElement& min_element(const GroupElement& a, const GroupElement& b)
{
    return less(b, a) ? b : a;
}

/// Sign of an integer linear combination of group elements; used for
/// certified dot products of weight vectors with integer vectors.
inline int combination_sign(const std::vector<GroupElement>& elems,
                            const std::vector<Int>& coeffs)
{
    if (elems.empty()) throw context_error("combination_sign: empty");
    if (elems.size() != coeffs.size()) throw context_error("combination_sign: size mismatch");
    const auto& ctx = elems.front().context();
    std::vector<Rat> acc(ctx->rank(), Rat(0));
    for (size_t i = 0; i < elems.size(); ++i) {
        if (elems[i].context() != ctx) throw context_error("combination_sign: context mismatch");
        for (int m = 0; m < ctx->rank(); ++m)
            acc[m] += Rat(coeffs[i]) * Rat(elems[i].coords()[m]);
    }
    bool all_zero = std::all_of(acc.begin(), acc.end(), [](const Rat& x) { return x == 0; });
    if (all_zero) return 0;
    // Nonzero coordinate vector: if independence held it cannot evaluate to 0,
    // and exact_zero would have caught the rational-only degenerate case.
    if (ctx->exact_zero(acc)) return 0;
    return ctx->certified_sign(acc);
}

} // namespace torific

#pragma once

#include <torific/hahn_series.hpp>
#include <torific/lattice.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace torific {

struct semigroup_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Finitely generated sub-semigroup of Phi_{>=0}, generators listed in
/// increasing order.
struct Semigroup {
    GroupContextPtr ctx;
    std::vector<GroupElement> generators;
};

/// Integer lattice of relations sum m_i * gamma_i == 0, basis rows in HNF.
struct RelationLattice {
    IMat basis;
    size_t b = 0; // generator count
    int r = 0;    // group rank
};

struct MembershipResult {
    bool member = false;
    std::vector<long long> witness; // coefficients when member
};

/// gamma == sum k_i * gens[i] with k_i >= 0? Depth-first search with
/// memoization; termination follows from positivity of the generators in an
/// archimedean order.
inline MembershipResult membership(const std::vector<GroupElement>& gens, const GroupElement& gamma)
{
    if (!is_nonnegative(gamma)) return {};
    struct Search {
        const std::vector<GroupElement>& gens;
        std::map<std::vector<long long>, std::optional<std::vector<long long>>> memo;
        std::optional<std::vector<long long>> run(const GroupElement& g)
        {
            if (g.is_zero()) return std::vector<long long>(gens.size(), 0);
            auto it = memo.find(g.coords());
            if (it != memo.end()) return it->second;
            memo[g.coords()] = std::nullopt; // cut cycles (none arise: values decrease)
            std::optional<std::vector<long long>> found;
            for (size_t i = 0; i < gens.size(); ++i) {
                GroupElement rest = g - gens[i];
                if (!is_nonnegative(rest)) continue;
                auto sub = run(rest);
                if (sub) {
                    found = *sub;
                    ++(*found)[i];
                    break;
                }
            }
            memo[g.coords()] = found;
            return found;
        }
    };
    Search s{gens, {}};
    auto w = s.run(gamma);
    if (!w) return {};
    return {true, *w};
}

inline MembershipResult membership(const Semigroup& s, const GroupElement& gamma)
{
    return membership(s.generators, gamma);
}

/// Greedy minimal generating set: scan the values in increasing order and
/// keep those not generated by the previously kept ones.
inline Semigroup minimal_generators(std::vector<GroupElement> values)
{
    if (values.empty()) throw semigroup_error("minimal_generators: empty input");
    const auto& ctx = values.front().context();
    std::sort(values.begin(), values.end(),
              [](const GroupElement& a, const GroupElement& b) { return less(a, b); });
    Semigroup s{ctx, {}};
    for (const auto& v : values) {
        if (v.context() != ctx) throw semigroup_error("minimal_generators: context mismatch");
        if (!is_positive(v)) {
            if (v.is_zero()) continue;
            throw semigroup_error("minimal_generators: negative value");
        }
        if (!s.generators.empty() && v == s.generators.back()) continue;
        if (!membership(s.generators, v).member) s.generators.push_back(v);
    }
    if (s.generators.empty()) throw semigroup_error("minimal_generators: no positive values");
    return s;
}

/// Kernel of Z^b -> Phi, e_i -> gamma_i, as an HNF row basis. Saturation
/// (unit elementary divisors) is verified.
inline RelationLattice relation_lattice(const Semigroup& s)
{
    RelationLattice L;
    L.b = s.generators.size();
    L.r = s.ctx->rank();
    IMat gam;
    for (const auto& g : s.generators) {
        IVec row;
        for (long long c : g.coords()) row.push_back(c);
        gam.push_back(std::move(row));
    }
    L.basis = left_kernel(gam);
    for (const auto& row : L.basis) {
        std::vector<Int> coeffs(row.begin(), row.end());
        if (combination_sign(s.generators, coeffs) != 0)
            throw semigroup_error("relation_lattice: basis row does not annihilate generators");
    }
    if (!L.basis.empty()) {
        auto d = snf(L.basis).divisors;
        for (const auto& x : d)
            if (x != 1) throw semigroup_error("relation_lattice: lattice not saturated");
    }
    return L;
}

/// L_big cap (Z^{b_small} x 0) == L_small, for a coordinate-prefix extension.
inline bool lattice_restriction_check(const RelationLattice& L_small, const RelationLattice& L_big)
{
    if (L_small.b > L_big.b)
        throw semigroup_error("lattice_restriction_check: small lattice has more coordinates");
    std::vector<size_t> keep;
    for (size_t j = 0; j < L_small.b; ++j) keep.push_back(j);
    IMat inter = L_big.basis.empty() ? IMat{}
                                     : intersect_coordinate_sublattice(L_big.basis, keep);
    // drop the (zero) trailing coordinates
    IMat inter_small;
    for (const auto& row : inter) {
        for (size_t j = L_small.b; j < L_big.b; ++j)
            if (row[j] != 0)
                throw semigroup_error("lattice_restriction_check: intersection escapes prefix");
        inter_small.emplace_back(row.begin(), row.begin() + L_small.b);
    }
    IMat small = L_small.basis;
    return span_equal(inter_small, small);
}

/// Guarded variant: the small semigroup's generators must be a prefix of the
/// big one's.
inline bool lattice_restriction_check(const Semigroup& small, const Semigroup& big)
{
    if (small.generators.size() > big.generators.size())
        throw semigroup_error("lattice_restriction_check: not a coordinate extension");
    for (size_t i = 0; i < small.generators.size(); ++i)
        if (!(small.generators[i] == big.generators[i]))
            throw semigroup_error("lattice_restriction_check: not a coordinate extension");
    return lattice_restriction_check(relation_lattice(small), relation_lattice(big));
}

/// Minimal generators of the numerical semigroup of a plane branch with
/// characteristic exponents beta_0 < beta_1 < ... < beta_g:
///   bbar_0 = beta_0,  bbar_{i+1} = n_i*bbar_i + beta_{i+1} - beta_i,
/// with e_i = gcd(beta_0..beta_i) and n_i = e_{i-1}/e_i.
inline Semigroup branch_semigroup_from_char_exponents(const std::vector<long long>& beta)
{
    if (beta.empty()) throw semigroup_error("char exponents: empty");
    for (size_t i = 0; i + 1 < beta.size(); ++i)
        if (beta[i] >= beta[i + 1])
            throw semigroup_error("char exponents: not strictly increasing");
    std::vector<Int> e(beta.size());
    e[0] = beta[0];
    for (size_t i = 1; i < beta.size(); ++i) {
        e[i] = int_gcd(e[i - 1], Int(beta[i]));
        if (e[i] == e[i - 1]) throw semigroup_error("char exponents: e_i must strictly decrease");
    }
    if (e.back() != 1) throw semigroup_error("char exponents: gcd must be 1");
    std::vector<Int> bbar(beta.size());
    bbar[0] = beta[0];
    for (size_t i = 0; i + 1 < beta.size(); ++i) {
        Int n_i = e[i == 0 ? 0 : i - 1] / e[i];
        if (i == 0) n_i = 1; // bbar_1 = beta_1
        bbar[i + 1] = n_i * bbar[i] + Int(beta[i + 1]) - Int(beta[i]);
    }
    auto ctx = GroupContext::integers();
    std::vector<GroupElement> gens;
    for (const auto& x : bbar)
        gens.push_back(GroupElement(ctx, {static_cast<long long>(x)}));
    // the recursion already yields the minimal system; normalize defensively
    return minimal_generators(gens);
}

/// Values nu_t(P(x(t), y(t))) for polynomials P of total degree <= degree_bound,
/// restricted to [0, value_bound], by a Gaussian staircase over the monomial
/// images x^i y^j. Requires integer exponents (rank-one integer context) and
/// cutoffs beyond value_bound.
template <class K>
std::set<long long> branch_values_oracle(const HahnSeries<K>& x_t, const HahnSeries<K>& y_t,
                                         int degree_bound, long long value_bound)
{
    const auto& ctx = x_t.context();
    if (ctx->rank() != 1) throw semigroup_error("branch_values_oracle: rank-one context required");
    GroupElement bound_el(ctx, {value_bound});
    if (!less(bound_el, x_t.cutoff()) || !less(bound_el, y_t.cutoff()))
        throw semigroup_error("branch_values_oracle: cutoff insufficiency");
    if (!x_t.is_zero() && !is_positive(*x_t.valuation().value))
        throw semigroup_error("branch_values_oracle: nu(x) must be positive");
    if (!y_t.is_zero() && !is_positive(*y_t.valuation().value))
        throw semigroup_error("branch_values_oracle: nu(y) must be positive");

    // dense coefficient vectors over exponents 0..value_bound
    auto to_vec = [&](const HahnSeries<K>& s) {
        std::vector<K> v(static_cast<size_t>(value_bound) + 1);
        bool have = false;
        K sample{};
        for (const auto& t : s.terms()) {
            long long e = t.first.coords()[0];
            if (e <= value_bound) v[static_cast<size_t>(e)] = t.second;
            sample = t.second;
            have = true;
        }
        if (have)
            for (auto& c : v)
                if (is_zero(c)) c = zero_like(sample);
        return v;
    };

    std::map<long long, std::vector<K>> staircase; // leading exponent -> reduced vector
    std::set<long long> values;

    auto reduce_insert = [&](std::vector<K> v) {
        while (true) {
            long long lead = -1;
            for (long long e = 0; e <= value_bound; ++e)
                if (!is_zero(v[static_cast<size_t>(e)])) {
                    lead = e;
                    break;
                }
            if (lead < 0) return;
            auto it = staircase.find(lead);
            if (it == staircase.end()) {
                K inv = inverse(v[static_cast<size_t>(lead)]);
                for (auto& c : v) c = c * inv;
                values.insert(lead);
                staircase.emplace(lead, std::move(v));
                return;
            }
            K f = v[static_cast<size_t>(lead)];
            for (long long e = lead; e <= value_bound; ++e)
                v[static_cast<size_t>(e)] =
                    v[static_cast<size_t>(e)] - f * it->second[static_cast<size_t>(e)];
        }
    };

    GroupElement oracle_cutoff(ctx, {value_bound + 1});
    for (int i = 0; i <= degree_bound; ++i) {
        HahnSeries<K> xi = series_pow(x_t.truncated(oracle_cutoff), i);
        for (int j = 0; i + j <= degree_bound; ++j) {
            HahnSeries<K> m = xi * series_pow(y_t.truncated(oracle_cutoff), j);
            if (m.is_zero()) continue;
            reduce_insert(to_vec(m));
        }
    }
    return values;
}

/// Frobenius number of a gcd-1 numerical semigroup (largest gap), by scan.
inline long long frobenius_number(const Semigroup& s)
{
    if (s.ctx->rank() != 1) throw semigroup_error("frobenius_number: rank-one required");
    std::vector<long long> g;
    Int d = 0;
    for (const auto& x : s.generators) {
        g.push_back(x.coords()[0]);
        d = int_gcd(d, Int(x.coords()[0]));
    }
    if (d != 1) throw semigroup_error("frobenius_number: gcd != 1");
    long long lo = *std::min_element(g.begin(), g.end());
    if (lo == 1) return -1;
    // membership is eventually true; scan until min-generator many consecutive hits
    long long last_gap = 0;
    long long run = 0;
    std::vector<char> member;
    member.push_back(1); // 0
    long long n = 1;
    while (run < lo) {
        bool m = false;
        for (long long gi : g)
            if (n >= gi && member[static_cast<size_t>(n - gi)]) {
                m = true;
                break;
            }
        member.push_back(m ? 1 : 0);
        if (m)
            ++run;
        else {
            last_gap = n;
            run = 0;
        }
        ++n;
    }
    return last_gap;
}

} // namespace torific

#pragma once

#include <torific/cone.hpp>
#include <torific/polynomial.hpp>
#include <torific/pseudo_convergence.hpp>
#include <torific/semigroup.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace torific {

struct tower_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One term c x^q of a generalized Puiseux series (characteristic zero).
struct PuiseuxTerm {
    Rat exponent;
    Rat coeff;
};

struct TowerLevel {
    long long D = 1;                   // common denominator of the truncation
    std::vector<PuiseuxTerm> truncation;
    Polynomial<Rat> equation{2};       // f_a(x, y), vars (x, y)
    std::optional<Rat> gamma;          // ord_x f_a(x, y_full(x)); nullopt == infinity
    std::vector<long long> semigroup;  // minimal generators at scale D (x = t^D)
    std::optional<long long> new_generator; // generator not inherited from the previous level
    bool theorem_a_ok = true;          // gamma_{a-1} * D == new_generator
};

struct TowerReport {
    std::vector<TowerLevel> levels;
    std::vector<HahnSeries<Rat>> xi;   // level-equation images f_a(x(t), y_full(t))
    bool gauges_increasing = true;
    bool pc_ok = true;                 // nu(xi^{(a+1)} - xi^{(a)}) >= gamma_a * D_full
    bool stabilizes = true;            // finite input: the last level is an exact root
    std::vector<std::string> defects;
    bool ok() const { return gauges_increasing && pc_ok && defects.empty(); }
};

namespace detail {

/// Multiplication-by-y matrix on Q[x][z]/(z^D - x) for y = sum c_q z^{q D},
/// then f(x, y) = det(y I - P): the product of the conjugate equations.
inline Polynomial<Rat> level_equation(const std::vector<PuiseuxTerm>& terms, long long D)
{
    if (D > 8) throw resource_error("level_equation: denominator lcm capped at 8");
    size_t n = static_cast<size_t>(D);
    // entries of P as univariate polynomials in x, P[row][col]
    std::vector<std::vector<std::vector<Rat>>> P(
        n, std::vector<std::vector<Rat>>(n, std::vector<Rat>{}));
    auto add_x_pow = [](std::vector<Rat>& poly, long long e, const Rat& c) {
        if (static_cast<long long>(poly.size()) <= e) poly.resize(e + 1, Rat(0));
        poly[static_cast<size_t>(e)] += c;
    };
    for (const auto& t : terms) {
        Rat ez = t.exponent * Rat(D);
        if (boost::multiprecision::denominator(ez) != 1)
            throw tower_error("level_equation: exponent denominator does not divide D");
        long long e = static_cast<long long>(Int(boost::multiprecision::numerator(ez)));
        for (long long k = 0; k < D; ++k) {
            long long tot = e + k;
            add_x_pow(P[tot % D][k], tot / D, t.coeff);
        }
    }
    // det(y I - P) with bivariate entries, vars (x, y)
    std::vector<std::vector<Polynomial<Rat>>> M(n, std::vector<Polynomial<Rat>>(n, Polynomial<Rat>(2)));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Polynomial<Rat> entry(2);
            if (i == j) entry.add_term({0, 1}, Rat(1));
            for (size_t e = 0; e < P[i][j].size(); ++e)
                if (P[i][j][e] != 0)
                    entry.add_term({static_cast<long long>(e), 0}, -P[i][j][e]);
            M[i][j] = std::move(entry);
        }
    return poly_det(M);
}

/// Series image at integer scale: x = t^S, terms c t^{q S}.
inline HahnSeries<Rat> puiseux_series_at_scale(const std::vector<PuiseuxTerm>& terms,
                                               long long scale, const GroupContextPtr& ctx,
                                               const GroupElement& cutoff)
{
    std::vector<std::pair<GroupElement, Rat>> ts;
    for (const auto& t : terms) {
        Rat e = t.exponent * Rat(scale);
        if (boost::multiprecision::denominator(e) != 1)
            throw tower_error("puiseux_series_at_scale: non-integral exponent at this scale");
        ts.emplace_back(
            GroupElement(ctx, {static_cast<long long>(Int(boost::multiprecision::numerator(e)))}),
            t.coeff);
    }
    return HahnSeries<Rat>(ctx, std::move(ts), cutoff);
}

} // namespace detail

/// Approximation tower for a finite generalized Puiseux series: levels are the
/// bounded-denominator truncations, each carrying the conjugate-product
/// equation, its gamma-gauge on the full series, and the level semigroup.
inline TowerReport approximation_tower(const std::vector<PuiseuxTerm>& terms,
                                       int degree_bound = 0, long long value_bound = 0)
{
    TowerReport rep;
    if (terms.empty()) throw tower_error("approximation_tower: empty series");
    for (size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].coeff == 0) throw tower_error("approximation_tower: zero coefficient");
        if (terms[i].exponent <= 0) throw tower_error("approximation_tower: exponent must be positive");
        if (i > 0 && terms[i].exponent <= terms[i - 1].exponent)
            throw tower_error("approximation_tower: exponents must strictly increase");
    }
    // level denominators: running lcm over term denominators, one level per jump
    std::vector<long long> Ds;
    Int running = 1;
    for (const auto& t : terms) {
        Int d = Int(boost::multiprecision::denominator(t.exponent));
        Int next = int_lcm(running, d);
        if (next != running || Ds.empty()) {
            running = next;
            Ds.push_back(static_cast<long long>(running));
        }
    }
    long long D_full = Ds.back();
    if (value_bound == 0) value_bound = 2 * D_full * D_full;
    auto ctx = GroupContext::integers();
    GroupElement cutoff(ctx, {value_bound * 2 + 1});
    HahnSeries<Rat> y_full = detail::puiseux_series_at_scale(terms, D_full, ctx, cutoff);
    HahnSeries<Rat> x_full = HahnSeries<Rat>::monomial(Rat(1), GroupElement(ctx, {D_full}), cutoff);

    std::vector<long long> prev_gens;
    long long prev_D = 1;
    for (size_t a = 0; a < Ds.size(); ++a) {
        TowerLevel lvl;
        lvl.D = Ds[a];
        for (const auto& t : terms) {
            Rat scaled = t.exponent * Rat(lvl.D);
            if (boost::multiprecision::denominator(scaled) == 1) lvl.truncation.push_back(t);
        }
        lvl.equation = detail::level_equation(lvl.truncation, lvl.D);
        HahnSeries<Rat> image = substitute(lvl.equation, {x_full, y_full});
        rep.xi.push_back(image);
        if (image.is_zero())
            lvl.gamma = std::nullopt;
        else
            lvl.gamma = Rat(image.valuation().value->coords()[0], D_full);
        // level semigroup at scale D
        int deg = degree_bound > 0 ? degree_bound : static_cast<int>(lvl.D) + 4;
        long long vb = std::min<long long>(value_bound, 2 * lvl.D * lvl.D);
        GroupElement lcut(ctx, {vb * 2 + 1});
        HahnSeries<Rat> xa = HahnSeries<Rat>::monomial(Rat(1), GroupElement(ctx, {lvl.D}), lcut);
        HahnSeries<Rat> ya = detail::puiseux_series_at_scale(lvl.truncation, lvl.D, ctx, lcut);
        auto values = branch_values_oracle(xa, ya, deg, vb);
        std::vector<GroupElement> vals;
        for (long long v : values)
            if (v > 0) vals.emplace_back(ctx, std::vector<long long>{v});
        Semigroup sg = minimal_generators(vals);
        for (const auto& g : sg.generators) lvl.semigroup.push_back(g.coords()[0]);
        // the generator not inherited from the previous level (scaled by D/prev_D)
        if (a > 0) {
            long long f = lvl.D / prev_D;
            std::vector<long long> inherited;
            for (long long g : prev_gens) inherited.push_back(g * f);
            for (long long g : lvl.semigroup)
                if (std::find(inherited.begin(), inherited.end(), g) == inherited.end()) {
                    if (lvl.new_generator) {
                        rep.defects.push_back("level " + std::to_string(a + 1) +
                                              ": more than one new semigroup generator");
                        break;
                    }
                    lvl.new_generator = g;
                }
            // Theorem-A identity: gamma_{a-1} * D_a == new generator
            const auto& prev_gamma = rep.levels.back().gamma;
            if (!prev_gamma || !lvl.new_generator)
                lvl.theorem_a_ok = false;
            else
                lvl.theorem_a_ok = (*prev_gamma * Rat(lvl.D) == Rat(*lvl.new_generator));
            if (!lvl.theorem_a_ok)
                rep.defects.push_back("level " + std::to_string(a + 1) +
                                      ": gamma * D does not equal the new generator");
        }
        prev_gens = lvl.semigroup;
        prev_D = lvl.D;
        rep.levels.push_back(std::move(lvl));
    }
    // the last level equation must vanish exactly on the full series
    if (!rep.xi.back().is_zero()) {
        rep.stabilizes = false;
        rep.defects.push_back("final level equation does not annihilate the series");
    }
    // gauges and (PC) inclusions on the level-equation images
    if (rep.xi.size() >= 2) {
        auto chk = check_pseudo_convergent(rep.xi);
        if (!chk.ok()) {
            rep.gauges_increasing = false;
            rep.defects.push_back("level images are not pseudo-convergent: " +
                                  chk.violation->message);
        }
        for (size_t a = 0; a + 1 < rep.xi.size(); ++a) {
            HahnSeries<Rat> d = rep.xi[a + 1] - rep.xi[a];
            const auto& g = rep.levels[a].gamma;
            if (!g) {
                rep.pc_ok = false;
                rep.defects.push_back("gamma gauge missing before the last level");
                continue;
            }
            Rat thr = *g * Rat(D_full);
            if (boost::multiprecision::denominator(thr) != 1)
                throw tower_error("approximation_tower: non-integral gauge at full scale");
            GroupElement bound(
                ctx, {static_cast<long long>(Int(boost::multiprecision::numerator(thr)))});
            if (!valuation_geq(d.valuation(), bound)) {
                rep.pc_ok = false;
                rep.defects.push_back("(PC) inclusion fails at level " + std::to_string(a + 1));
            }
        }
    }
    return rep;
}

} // namespace torific

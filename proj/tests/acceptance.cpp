// Acceptance gate: one PASS/FAIL line per criterion, exit code = number of
// failures. All checks are exact (zero tolerance).

#include <torific/torific_embed.hpp>
#include <torific/tower.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace torific;

namespace {

struct Gate {
    int failures = 0;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void run(int n, const std::string& name, const std::function<void()>& body)
    {
        try {
            body();
            std::cout << "PASS criterion " << n << ": " << name << "\n";
        } catch (const std::exception& e) {
            ++failures;
            std::cout << "FAIL criterion " << n << ": " << name << " -- " << e.what() << "\n";
        }
    }
};

void require(bool cond, const std::string& what)
{
    if (!cond) throw std::runtime_error(what);
}

// ---------------------------------------------------------------------------
// Shared fixtures
// ---------------------------------------------------------------------------

TorificPresentation<Rat> pi_presentation()
{
    auto ctx = GroupContext::z_plus_z_pi();
    TorificPresentation<Rat> p;
    p.ctx = ctx;
    p.gamma = {GroupElement(ctx, {2, 0}), GroupElement(ctx, {3, 0}), GroupElement(ctx, {6, 1})};
    TorificRelation<Rat> rel{{3, 0, 0}, {0, 2, 0}, Rat(1), Polynomial<Rat>(3)};
    rel.tail.add_term({0, 0, 1}, Rat(1)); // u1^3 - u2^2 + u3
    p.relations.push_back(rel);
    return p;
}

Fan single_cone_fan(IMat rays)
{
    Fan f;
    f.b = rays.front().size();
    f.maximal = {Cone::from_rays(std::move(rays), f.b)};
    return f;
}

HahnSeries<Rat> one_plus_tpi(const GroupContextPtr& ctx, const GroupElement& cutoff)
{
    return HahnSeries<Rat>(
        ctx, {{GroupElement::zero(ctx), Rat(1)}, {GroupElement(ctx, {0, 1}), Rat(1)}}, cutoff);
}

void check_equal_series(const HahnSeries<Rat>& a, const HahnSeries<Rat>& b,
                        const std::string& what)
{
    GroupElement bound = min_element(a.cutoff(), b.cutoff());
    if (!equal_below(a, b, bound)) throw std::runtime_error(what);
}

// ---------------------------------------------------------------------------
// Criterion 1: the pi example, end to end
// ---------------------------------------------------------------------------

void criterion1()
{
    auto p = pi_presentation();
    auto ctx = p.ctx;
    GroupElement cutoff(ctx, {10, 3}); // 10 + 3 pi
    IMat chart{{2, 3, 9}, {1, 2, 3}, {2, 3, 10}};
    require(mat_det(chart) == 1, "det(v1,v2,v3) != 1");
    auto e = kaplansky_embed_fg(p, single_cone_fan(chart), cutoff);

    require(e.map.rays == chart, "monomial map does not match the chart");
    require(e.map.y_values[0].coords() == std::vector<long long>{4, -1}, "nu(y1) != 4 - pi");
    require(e.map.y_values[1].is_zero(), "nu(y2) != 0");
    require(e.map.y_values[2].coords() == std::vector<long long>{-3, 1}, "nu(y3) != pi - 3");

    // strict transform of the initial binomial u1^3 - u2^2
    Polynomial<Rat> binom(3);
    binom.add_term({3, 0, 0}, Rat(1));
    binom.add_term({0, 2, 0}, Rat(-1));
    auto [factor, g] = strict_transform(binom, e.map);
    require(factor == std::vector<long long>{6, 3, 6}, "monomial factor != y1^6 y2^3 y3^6");
    Polynomial<Rat> y2_minus_1(3);
    y2_minus_1.add_term({0, 1, 0}, Rat(1));
    y2_minus_1.add_term({0, 0, 0}, Rat(-1));
    require(g == y2_minus_1, "strict transform of u1^3 - u2^2 != y2 - 1");

    auto unit = one_plus_tpi(ctx, cutoff);
    auto t = [&](long long a, long long b) {
        return HahnSeries<Rat>::monomial(Rat(1), GroupElement(ctx, {a, b}), cutoff);
    };
    check_equal_series(e.xi[0], unit * t(2, 0), "xi_1 != (1 + t^pi) t^2");
    check_equal_series(e.xi[1], series_pow(unit, 2) * t(3, 0), "xi_2 != (1 + t^pi)^2 t^3");
    auto lhs = series_pow(e.xi[0], 3) - series_pow(e.xi[1], 2);
    auto rhs = -(series_pow(unit, 3) * t(6, 1));
    GroupElement bound = min_element(lhs.cutoff(), rhs.cutoff());
    require(less(GroupElement(ctx, {6, 1}), bound), "cutoff too small to certify the identity");
    require(equal_below(lhs, rhs, bound), "xi_1^3 - xi_2^2 != -(1 + t^pi)^3 t^{6+pi}");

    auto rep = verify_embedding(p, e);
    require(rep.ok(), rep.defects.empty() ? "verification failed" : rep.defects.front());
}

// ---------------------------------------------------------------------------
// Criterion 2: the automorphism intertwines the two charts
// ---------------------------------------------------------------------------

void criterion2()
{
    auto p = pi_presentation();
    auto ctx = p.ctx;
    GroupElement cutoff(ctx, {10, 3});
    auto e1 = kaplansky_embed_fg(p, single_cone_fan({{2, 3, 9}, {1, 2, 3}, {2, 3, 10}}), cutoff);
    // second chart: (a', b') = (3, 5)
    auto e2 = kaplansky_embed_fg(p, single_cone_fan({{2, 3, 9}, {3, 5, 9}, {2, 3, 10}}), cutoff);

    auto unit = one_plus_tpi(ctx, cutoff);
    auto triv = HahnSeries<Rat>::monomial(Rat(1), GroupElement::zero(ctx), cutoff);
    // u(1) = 1 + t^pi, u(pi) = 1
    auto rep = automorphism_intertwine_check(e1, e2, {unit, triv});
    require(rep.ok(), rep.defects.empty() ? "intertwine check failed" : rep.defects.front());

    // the three displayed unit equations: (1 + u(pi) t^pi)^a u(l) t^l
    // == (1 + t^pi)^{a'} t^l for (a, l, a') in {(1,2,3),(2,3,5),(3,6+pi,9)}
    auto t = [&](long long a, long long b) {
        return HahnSeries<Rat>::monomial(Rat(1), GroupElement(ctx, {a, b}), cutoff);
    };
    auto u_of = [&](long long m, long long k) {
        // u(m + k pi) = u(1)^m u(pi)^k = (1 + t^pi)^m
        (void)k;
        return series_pow(unit, m);
    };
    check_equal_series(series_pow(unit, 1) * u_of(2, 0) * t(2, 0), series_pow(unit, 3) * t(2, 0),
                       "unit equation for a = 1 fails");
    check_equal_series(series_pow(unit, 2) * u_of(3, 0) * t(3, 0), series_pow(unit, 5) * t(3, 0),
                       "unit equation for b = 2 fails");
    check_equal_series(series_pow(unit, 3) * u_of(6, 1) * t(6, 1), series_pow(unit, 9) * t(6, 1),
                       "unit equation for aq = 3 fails");

    // and the images really are the second chart's xi
    for (size_t i = 0; i < 3; ++i) {
        auto img = apply_group_automorphism({unit, triv}, e1.xi[i]);
        check_equal_series(img, e2.xi[i], "automorphism image differs from the second chart");
    }
}

// ---------------------------------------------------------------------------
// Criterion 3: Artin-Schreier over F_2 and F_3
// ---------------------------------------------------------------------------

void criterion3()
{
    for (long long p : {2, 3}) {
        auto ctx = GroupContext::integers();
        GroupElement cutoff(ctx, {64});
        Fp one(1, p);
        GroupElement e0 = GroupElement::zero(ctx);
        auto unit = HahnSeries<Fp>::monomial(one, e0, cutoff) -
                    HahnSeries<Fp>::monomial(one, GroupElement(ctx, {p - 1}), cutoff);
        auto inv = series_inv_unit(unit);
        auto x = HahnSeries<Fp>::monomial(one, GroupElement(ctx, {p}), cutoff) * inv;
        auto y = HahnSeries<Fp>::monomial(one, GroupElement(ctx, {p - 1}), cutoff) * inv;
        auto ones = HahnSeries<Fp>::monomial(one, e0, cutoff);
        auto resid = series_pow(y, p) - series_pow(x, p - 1) * (ones + y);
        require(resid.is_zero(),
                "y^p - x^{p-1}(1+y) does not vanish below t^64 for p = " + std::to_string(p));

        // zeta truncations in Z[1/p^6]
        const int K = 6;
        long long pK = 1;
        for (int i = 0; i < K; ++i) pK *= p;
        auto zctx = GroupContext::create({Weight::rational(Rat(1, pK))});
        GroupElement zcut(zctx, {pK});
        std::vector<HahnSeries<Fp>> partial;
        std::vector<std::pair<GroupElement, Fp>> acc;
        long long q = 1;
        for (int i = 1; i <= K; ++i) {
            q *= p;
            acc.emplace_back(GroupElement(zctx, {pK - pK / q}), one);
            partial.emplace_back(zctx, acc, zcut);
        }
        auto chk = check_pseudo_convergent(partial);
        require(chk.ok(), "zeta truncations are not pseudo-convergent");
        long long qq = p;
        for (size_t tau = 0; tau + 1 < partial.size(); ++tau) {
            qq *= p;
            require(chk.sequence->gauges[tau].coords()[0] == pK - pK / qq,
                    "gauge != 1 - 1/p^i at tau = " + std::to_string(tau));
        }
        // breadth threshold approaches 1: the last gauge is 1 - 1/p^6
        require(chk.sequence->gauges.back().coords()[0] == pK - 1,
                "final gauge != 1 - 1/p^6");
    }
}

// ---------------------------------------------------------------------------
// Criterion 4: semigroup suite
// ---------------------------------------------------------------------------

void criterion4()
{
    auto ctx = GroupContext::integers();
    // characteristic-exponent route
    auto s1 = branch_semigroup_from_char_exponents({4, 6, 7});
    std::vector<long long> g1;
    for (const auto& g : s1.generators) g1.push_back(g.coords()[0]);
    require(g1 == std::vector<long long>{4, 6, 13}, "char-exponent route != <4,6,13>");

    // oracle route with bounds (degree 8, value 30)
    GroupElement cutoff(ctx, {40});
    HahnSeries<Rat> x(ctx, {{GroupElement(ctx, {4}), Rat(1)}}, cutoff);
    HahnSeries<Rat> y(ctx, {{GroupElement(ctx, {6}), Rat(1)}, {GroupElement(ctx, {7}), Rat(1)}},
                      cutoff);
    auto values = branch_values_oracle(x, y, 8, 30);
    std::vector<GroupElement> vals;
    for (long long v : values)
        if (v > 0) vals.emplace_back(ctx, std::vector<long long>{v});
    auto s2 = minimal_generators(vals);
    std::vector<long long> g2;
    for (const auto& g : s2.generators) g2.push_back(g.coords()[0]);
    require(g2 == g1, "oracle route disagrees with the char-exponent route");

    // relation lattices
    Semigroup cusp{ctx, {GroupElement(ctx, {2}), GroupElement(ctx, {3})}};
    require(relation_lattice(cusp).basis == IMat{{3, -2}}, "L(<2,3>) != {(3,-2)}");
    auto L = relation_lattice(s2);
    require(span_equal(L.basis, IMat{{3, -2, 0}, {5, 1, -2}}),
            "L(<4,6,13>) != span{(3,-2,0),(5,1,-2)}");
    for (const auto& d : snf(L.basis).divisors)
        require(d == 1, "SNF divisors of the relation lattice are not all 1");
}

// ---------------------------------------------------------------------------
// Criterion 5: fan suite
// ---------------------------------------------------------------------------

void criterion5()
{
    FanConstraints fc;
    fc.hyperplane_normals = {{3, -2, 0}, {5, 1, -2}};
    fc.rays = {{4, 6, 13}};
    Fan fan = regular_subdivision(3, fc);
    auto audit = fan_audit(fan, fc);
    require(audit.ok(), audit.defects.empty() ? "fan audit failed" : audit.defects.front());
    for (const auto& c : fan.maximal) {
        Int d = mat_det(c.rays);
        require(d == 1 || d == -1, "non-unimodular cone in the subdivision");
    }
    auto ctx = GroupContext::integers();
    WeightVector w{{GroupElement(ctx, {4}), GroupElement(ctx, {6}), GroupElement(ctx, {13})}};
    Cone sw = find_sigma_w(fan, w, 1);
    require(sw.rays == IMat{{4, 6, 13}}, "sigma_w != ray (4,6,13)");

    // Jacobi-Perron for w = (1, pi): 5 nested regular cones
    auto ctx2 = GroupContext::z_plus_z_pi();
    WeightVector wpi{{GroupElement(ctx2, {1, 0}), GroupElement(ctx2, {0, 1})}};
    auto cones = jacobi_perron_refine(Cone::from_rays({{1, 0}, {0, 1}}, 2), wpi, 5);
    require(cones.size() == 6, "Jacobi-Perron step count mismatch");
    for (const auto& c : cones) {
        require(is_regular(c), "Jacobi-Perron produced a non-regular cone");
        auto dec = decompose_weight(wpi, c.rays);
        require(dec.has_value(), "w escaped a Jacobi-Perron cone");
        for (const auto& a : *dec)
            require(is_positive(a), "w not interior to a Jacobi-Perron cone");
    }
    std::vector<IVec> targets{{1, 0}, {0, 1}, {4, -1}, {-3, 1}, {1, 1}};
    for (const auto& m : targets)
        require(dual_contains(cones.back(), m), "dual of the refined cone misses a target");
}

// ---------------------------------------------------------------------------
// Criterion 6: tower suite
// ---------------------------------------------------------------------------

void criterion6()
{
    std::vector<PuiseuxTerm> terms{{Rat(3, 2), Rat(1)}, {Rat(7, 4), Rat(1)}, {Rat(15, 8), Rat(1)}};
    TowerReport rep = approximation_tower(terms);
    require(rep.levels.size() == 3, "expected 3 tower levels");
    require(rep.gauges_increasing, "gamma-gauges are not strictly increasing");
    require(rep.pc_ok, "(PC) inclusion fails");
    require(rep.stabilizes, "the last level is not an exact root");
    require(rep.ok(), rep.defects.empty() ? "tower report not ok" : rep.defects.front());
    require(rep.levels[1].theorem_a_ok && rep.levels[2].theorem_a_ok,
            "gamma * D does not match the new semigroup generator");

    // negative control: reordered input is rejected
    bool rejected = false;
    try {
        approximation_tower({{Rat(7, 4), Rat(1)}, {Rat(3, 2), Rat(1)}, {Rat(15, 8), Rat(1)}});
    } catch (const tower_error&) {
        rejected = true;
    }
    require(rejected, "reordered sequence was not rejected");
}

// ---------------------------------------------------------------------------
// Criterion 7: randomized property suites
// ---------------------------------------------------------------------------

void criterion7()
{
    auto ctx = GroupContext::integers();
    std::mt19937 rng(20240913u);
    std::uniform_int_distribution<long long> exp_d(0, 11), coeff_d(-5, 5);
    std::uniform_int_distribution<int> len_d(0, 4);
    GroupElement cutoff(ctx, {12});
    auto rand_series = [&]() {
        std::vector<std::pair<GroupElement, Rat>> ts;
        int n = len_d(rng);
        for (int i = 0; i < n; ++i)
            ts.emplace_back(GroupElement(ctx, {exp_d(rng)}), Rat(coeff_d(rng)));
        return HahnSeries<Rat>(ctx, std::move(ts), cutoff);
    };
    for (int it = 0; it < 1000; ++it) {
        auto a = rand_series(), b = rand_series(), c = rand_series();
        require(((a + b) + c).terms() == (a + (b + c)).terms(), "addition not associative");
        require((a * b).terms() == (b * a).terms(), "multiplication not commutative");
        auto dl = a * (b + c), dr = a * b + a * c;
        require(equal_below(dl, dr, min_element(dl.cutoff(), dr.cutoff())),
                "multiplication not distributive");
        // nu multiplicativity
        auto va = a.valuation(), vb = b.valuation();
        auto prod = a * b;
        if (!va.is_infinity() && !vb.is_infinity()) {
            GroupElement sum = *va.value + *vb.value;
            if (less(sum, prod.cutoff()))
                require(!prod.valuation().is_infinity() && *prod.valuation().value == sum,
                        "nu(ab) != nu(a) + nu(b)");
        }
    }
    // inverse round-trips
    GroupElement zero_exp = GroupElement::zero(ctx);
    for (int it = 0; it < 200; ++it) {
        std::vector<std::pair<GroupElement, Rat>> ts{{zero_exp, Rat(1 + (it % 7))}};
        for (int i = 0; i < 3; ++i) {
            long long e = 1 + (exp_d(rng) % 10);
            ts.emplace_back(GroupElement(ctx, {e}), Rat(coeff_d(rng)));
        }
        HahnSeries<Rat> u(ctx, std::move(ts), cutoff);
        auto prod = u * series_inv_unit(u);
        auto one = HahnSeries<Rat>::monomial(Rat(1), zero_exp, prod.cutoff());
        require(equal_below(prod, one, prod.cutoff()), "inverse round-trip failed");
    }
    // ordered-group axioms over Z + Z pi
    auto gctx = GroupContext::z_plus_z_pi();
    std::uniform_int_distribution<long long> cd(-15, 15);
    for (int it = 0; it < 300; ++it) {
        GroupElement a(gctx, {cd(rng), cd(rng)}), b(gctx, {cd(rng), cd(rng)}),
            c(gctx, {cd(rng), cd(rng)});
        int cnt = (less(a, b) ? 1 : 0) + (less(b, a) ? 1 : 0) + (a == b ? 1 : 0);
        require(cnt == 1, "trichotomy failed");
        if (less(a, b) && less(b, c)) require(less(a, c), "transitivity failed");
        require(less(a, b) == less(a + c, b + c), "translation invariance failed");
    }
    // HNF/SNF round-trips
    std::uniform_int_distribution<int> md(-9, 9);
    std::uniform_int_distribution<size_t> dim(1, 4);
    for (int it = 0; it < 100; ++it) {
        size_t n = dim(rng), m = dim(rng);
        IMat a(n, IVec(m, 0));
        for (auto& row : a)
            for (auto& x : row) x = md(rng);
        auto h = hnf_rows(a);
        require(mat_mul(h.u, a) == h.h, "U A != H");
        auto s = snf(a);
        require(mat_mul(mat_mul(s.u, a), s.v) == s.d, "U A V != D");
        Int du = mat_det(s.u), dv = mat_det(s.v);
        require((du == 1 || du == -1) && (dv == 1 || dv == -1), "transforms not unimodular");
        for (size_t i = 0; i + 1 < s.divisors.size(); ++i)
            require(s.divisors[i + 1] % s.divisors[i] == 0, "divisibility chain broken");
    }
    // strict-transform multiplicativity of the monomial factor, and the
    // rho-binomial identity on the pi example
    auto p = pi_presentation();
    auto e = kaplansky_embed_fg(p, single_cone_fan({{2, 3, 9}, {1, 2, 3}, {2, 3, 10}}),
                                GroupElement(p.ctx, {10, 3}));
    std::uniform_int_distribution<int> pe(0, 2);
    for (int it = 0; it < 50; ++it) {
        Polynomial<Rat> f(3), g(3);
        for (int k = 0; k < 3; ++k) {
            f.add_term({pe(rng), pe(rng), pe(rng)}, Rat(coeff_d(rng)));
            g.add_term({pe(rng), pe(rng), pe(rng)}, Rat(coeff_d(rng)));
        }
        if (f.is_zero() || g.is_zero()) continue;
        auto ff = strict_transform(f, e.map).first;
        auto gf = strict_transform(g, e.map).first;
        auto pf = strict_transform(f * g, e.map).first;
        for (size_t j = 0; j < 3; ++j)
            require(pf[j] == ff[j] + gf[j], "monomial factors not additive under products");
    }
    for (const auto& rel : p.relations) {
        Rat lm(1), ln = rel.lambda;
        for (size_t i = 0; i < 3; ++i) {
            lm = lm * field_pow(e.rho_values[i], rel.m[i]);
            ln = ln * field_pow(e.rho_values[i], rel.n[i]);
        }
        require(lm == ln, "rho^m != lambda rho^n");
    }
}

} // namespace

int main()
{
    Gate gate;
    gate.run(1, "pi example end to end", criterion1);
    gate.run(2, "pi example automorphism intertwine", criterion2);
    gate.run(3, "Artin-Schreier over F_2 and F_3", criterion3);
    gate.run(4, "semigroup suite", criterion4);
    gate.run(5, "fan suite", criterion5);
    gate.run(6, "tower suite", criterion6);
    gate.run(7, "randomized property suites", criterion7);
    auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - gate.start)
                  .count();
    std::cout << (gate.failures == 0 ? "ALL PASS" : "FAILURES PRESENT") << " (" << dt
              << " ms)\n";
    if (dt > 120000) {
        std::cout << "FAIL runtime: full suite exceeded 2 minutes\n";
        return gate.failures + 1;
    }
    return gate.failures;
}

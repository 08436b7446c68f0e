#include <torific/torific_embed.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace torific;

namespace {

TorificPresentation<Rat> cusp_presentation()
{
    auto ctx = GroupContext::integers();
    TorificPresentation<Rat> p;
    p.ctx = ctx;
    p.gamma = {GroupElement(ctx, {2}), GroupElement(ctx, {3})};
    TorificRelation<Rat> rel{{0, 2}, {3, 0}, Rat(1), Polynomial<Rat>(2)};
    p.relations.push_back(rel);
    return p;
}

TorificPresentation<Rat> branch4613_presentation()
{
    auto ctx = GroupContext::integers();
    TorificPresentation<Rat> p;
    p.ctx = ctx;
    p.gamma = {GroupElement(ctx, {4}), GroupElement(ctx, {6}), GroupElement(ctx, {13})};
    TorificRelation<Rat> f1{{0, 2, 0}, {3, 0, 0}, Rat(1), Polynomial<Rat>(3)};
    f1.tail.add_term({0, 0, 1}, Rat(-1)); // u2^2 - u1^3 - u3
    TorificRelation<Rat> f2{{5, 1, 0}, {0, 0, 2}, Rat(1, 4), Polynomial<Rat>(3)};
    f2.tail.add_term({7, 0, 0}, Rat(1, 4)); // u1^5 u2 - 1/4 u3^2 + 1/4 u1^7
    p.relations.push_back(f1);
    p.relations.push_back(f2);
    return p;
}

} // namespace

TEST_CASE("strict transform in the cusp chart")
{
    auto p = cusp_presentation();
    MonomialMap m = monomial_map_from_cone(Cone::from_rays({{1, 1}, {2, 3}}, 2), p.gamma);
    CHECK(m.y_values[0].coords() == std::vector<long long>{0});
    CHECK(m.y_values[1].coords() == std::vector<long long>{1});
    CHECK(m.center_rows == std::vector<size_t>{0});
    CHECK(m.sigma_w_rows == std::vector<size_t>{1});

    auto [factor, g] = strict_transform(relation_polynomial(p.relations[0], 2), m);
    CHECK(factor == std::vector<long long>{2, 6});
    Polynomial<Rat> expected(2);
    expected.add_term({1, 0}, Rat(1));
    expected.add_term({0, 0}, Rat(-1)); // y1 - 1 after sign normalization
    CHECK(g == expected);
}

TEST_CASE("strict transform is multiplicative")
{
    auto p = branch4613_presentation();
    Fan fan;
    {
        FanConstraints fc;
        fc.hyperplane_normals = {{3, -2, 0}, {5, 1, -2}};
        fc.rays = {{4, 6, 13}};
        fan = regular_subdivision(3, fc);
    }
    WeightVector w{p.gamma};
    Cone sw = find_sigma_w(fan, w, 1);
    const Cone* chart = nullptr;
    for (const auto& c : fan.maximal) {
        std::set<IVec> rs(c.rays.begin(), c.rays.end());
        if (rs.count(sw.rays[0])) {
            chart = &c;
            break;
        }
    }
    REQUIRE(chart != nullptr);
    MonomialMap m = monomial_map_from_cone(*chart, p.gamma);

    std::mt19937 rng(2024u);
    std::uniform_int_distribution<int> exp_d(0, 2), coeff_d(-3, 3);
    for (int it = 0; it < 60; ++it) {
        Polynomial<Rat> f(3), g(3);
        for (int k = 0; k < 3; ++k) {
            f.add_term({exp_d(rng), exp_d(rng), exp_d(rng)}, Rat(coeff_d(rng)));
            g.add_term({exp_d(rng), exp_d(rng), exp_d(rng)}, Rat(coeff_d(rng)));
        }
        if (f.is_zero() || g.is_zero()) continue;
        auto [ff, fs] = strict_transform(f, m);
        auto [gf, gs] = strict_transform(g, m);
        auto [pf, ps] = strict_transform(f * g, m);
        for (size_t j = 0; j < 3; ++j) CHECK(pf[j] == ff[j] + gf[j]);
        // strict transforms multiply up to the sign normalization scalar
        auto prod = fs * gs;
        bool found_scalar = false;
        for (const auto& [e, c] : ps.terms()) {
            // compare coefficient ratios on a common monomial
            for (const auto& [e2, c2] : prod.terms())
                if (e == e2) {
                    Rat scale = c2 / c;
                    CHECK(prod == ps.scaled(scale));
                    found_scalar = true;
                    break;
                }
            if (found_scalar) break;
        }
        CHECK(found_scalar);
    }
}

TEST_CASE("center coordinates and rho")
{
    auto p = cusp_presentation();
    MonomialMap m = monomial_map_from_cone(Cone::from_rays({{1, 1}, {2, 3}}, 2), p.gamma);
    auto c = center_coordinates(p, m);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == Rat(1));
    auto r = rho(m, c, Rat(1));
    CHECK(r == std::vector<Rat>{Rat(1), Rat(1)});
    // rho^m == lambda rho^n
    Rat lm = field_pow(r[0], 0) * field_pow(r[1], 2);
    Rat ln = p.relations[0].lambda * field_pow(r[0], 3);
    CHECK(lm == ln);
}

TEST_CASE("center coordinates over F_p")
{
    // c^2 = 1 in F_7: the lex-smallest torus solution is c = 1
    auto ctx = GroupContext::integers();
    TorificPresentation<Fp> p;
    p.ctx = ctx;
    p.gamma = {GroupElement(ctx, {2}), GroupElement(ctx, {3})};
    TorificRelation<Fp> rel{{0, 2}, {3, 0}, Fp(1, 7), Polynomial<Fp>(2)};
    p.relations.push_back(rel);
    MonomialMap m = monomial_map_from_cone(Cone::from_rays({{1, 1}, {2, 3}}, 2), p.gamma);
    auto c = center_coordinates(p, m);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == Fp(1, 7));

    // delta for this chart is -1, so lambda = 3 over F_5 asks for c^{-1} = 3
    TorificPresentation<Fp> q = p;
    q.relations[0].lambda = Fp(3, 5);
    auto c2 = center_coordinates(q, m);
    REQUIRE(c2.size() == 1);
    CHECK(field_pow(c2[0], -1) == Fp(3, 5));
}

TEST_CASE("cusp embedding end to end")
{
    auto p = cusp_presentation();
    Fan fan;
    fan.b = 2;
    fan.maximal = {Cone::from_rays({{1, 0}, {1, 1}}, 2), Cone::from_rays({{1, 1}, {2, 3}}, 2),
                   Cone::from_rays({{2, 3}, {1, 2}}, 2), Cone::from_rays({{1, 2}, {0, 1}}, 2)};
    auto ctx = p.ctx;
    GroupElement cutoff(ctx, {20});
    auto e = kaplansky_embed_fg(p, fan, cutoff);
    REQUIRE(e.xi.size() == 2);
    // xi_1 = t^2, xi_2 = t^3 exactly
    CHECK(e.xi[0].terms().size() == 1);
    CHECK(e.xi[0].terms()[0].first == GroupElement(ctx, {2}));
    CHECK(e.xi[1].terms().size() == 1);
    CHECK(e.xi[1].terms()[0].first == GroupElement(ctx, {3}));
    CHECK(e.residuals[0].is_infinity());
    auto rep = verify_embedding(p, e);
    INFO((rep.defects.empty() ? "no defects" : rep.defects.front()));
    CHECK(rep.ok());
}

TEST_CASE("branch (4,6,13) embedding end to end")
{
    auto p = branch4613_presentation();
    FanConstraints fc;
    fc.hyperplane_normals = {{3, -2, 0}, {5, 1, -2}};
    fc.rays = {{4, 6, 13}};
    Fan fan = regular_subdivision(3, fc);
    GroupElement cutoff(p.ctx, {30});
    auto e = kaplansky_embed_fg(p, fan, cutoff);
    REQUIRE(e.xi.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        REQUIRE_FALSE(e.xi[i].is_zero());
        auto [c, g] = e.xi[i].initial_form();
        CHECK(g == p.gamma[i]);
        CHECK(c == e.rho_values[i]);
    }
    for (const auto& r : e.residuals) CHECK(r.is_infinity());
    auto rep = verify_embedding(p, e);
    INFO((rep.defects.empty() ? "no defects" : rep.defects.front()));
    CHECK(rep.ok());
}

TEST_CASE("presentation validation")
{
    auto p = cusp_presentation();
    auto bad = p;
    bad.relations[0].n = {2, 0}; // 2*gamma_1 != 2*gamma_2
    CHECK_THROWS_AS(validate_presentation(bad), embed_error);
    auto bad2 = p;
    bad2.relations[0].tail.add_term({1, 0}, Rat(1)); // tail weight 2 < 6
    CHECK_THROWS_AS(validate_presentation(bad2), embed_error);
    auto bad3 = p;
    bad3.relations[0].lambda = Rat(0);
    CHECK_THROWS_AS(validate_presentation(bad3), embed_error);
}

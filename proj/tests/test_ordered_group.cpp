#include <torific/ordered_group.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace torific;

TEST_CASE("integer context total order")
{
    auto ctx = GroupContext::integers();
    GroupElement a(ctx, {3}), b(ctx, {5});
    CHECK(less(a, b));
    CHECK_FALSE(less(b, a));
    CHECK(compare(a, a) == Ordering::EQ);
    CHECK(is_positive(a));
    CHECK(is_nonnegative(GroupElement::zero(ctx)));
    CHECK_FALSE(is_positive(GroupElement::zero(ctx)));
    CHECK_FALSE(is_nonnegative(GroupElement(ctx, {-1})));
}

TEST_CASE("certified pi comparisons")
{
    auto ctx = GroupContext::z_plus_z_pi();
    GroupElement zero = GroupElement::zero(ctx);
    // 3 < pi < 4
    CHECK(is_positive(GroupElement(ctx, {-3, 1})));
    CHECK(less(GroupElement(ctx, {0, 1}), GroupElement(ctx, {4, 0})));
    CHECK(less(GroupElement(ctx, {3, 0}), GroupElement(ctx, {0, 1})));
    // 22/7 is an upper bound, 333/106 a lower bound, 355/113 an upper bound
    CHECK(less(GroupElement(ctx, {22, -7}), zero) == false);
    CHECK(is_positive(GroupElement(ctx, {22, -7})));
    CHECK(less(GroupElement(ctx, {333, -106}), zero));
    CHECK(is_positive(GroupElement(ctx, {355, -113})));
    // equality is coordinatewise only
    CHECK(GroupElement(ctx, {1, 2}) == GroupElement(ctx, {1, 2}));
    CHECK(GroupElement(ctx, {1, 2}) != GroupElement(ctx, {2, 1}));
}

TEST_CASE("order axioms on random elements")
{
    auto ctx = GroupContext::z_plus_z_pi();
    std::mt19937 rng(7u);
    std::uniform_int_distribution<long long> d(-20, 20);
    for (int it = 0; it < 300; ++it) {
        GroupElement a(ctx, {d(rng), d(rng)});
        GroupElement b(ctx, {d(rng), d(rng)});
        GroupElement c(ctx, {d(rng), d(rng)});
        // trichotomy
        int cnt = (less(a, b) ? 1 : 0) + (less(b, a) ? 1 : 0) + (a == b ? 1 : 0);
        CHECK(cnt == 1);
        // transitivity
        if (less(a, b) && less(b, c)) CHECK(less(a, c));
        // translation invariance
        CHECK(less(a, b) == less(a + c, b + c));
        // compatibility of negation
        if (less(a, b)) CHECK(less(-b, -a));
    }
}

TEST_CASE("combination_sign")
{
    auto ctx = GroupContext::z_plus_z_pi();
    GroupElement one(ctx, {1, 0}), pi(ctx, {0, 1});
    CHECK(combination_sign({one, pi}, {Int(3), Int(-1)}) < 0);  // 3 - pi < 0
    CHECK(combination_sign({one, pi}, {Int(4), Int(-1)}) > 0);  // 4 - pi > 0
    CHECK(combination_sign({one, pi}, {Int(0), Int(0)}) == 0);
    CHECK(combination_sign({one, one}, {Int(2), Int(-2)}) == 0);
}

TEST_CASE("context rejects dependent weight sets")
{
    CHECK_THROWS_AS(GroupContext::create({Weight::rational(Rat(1)), Weight::rational(Rat(2))}),
                    context_error);
    CHECK_THROWS_AS(GroupContext::create({Weight::pi(), Weight::pi()}), context_error);
    CHECK_THROWS_AS(GroupContext::create({Weight::rational(Rat(-1))}), context_error);
    CHECK_THROWS_AS(GroupContext::create({}), context_error);
}

TEST_CASE("precision ceiling is enforced")
{
    auto tight = GroupContext::create({Weight::rational(Rat(1)), Weight::pi()}, 8);
    // 355/113 - pi is ~2.7e-7: no decision possible without refinement
    GroupElement close(tight, {355, -113});
    CHECK_THROWS_AS(is_positive(close), precision_error);
    // algebraically decidable cases still work at any ceiling
    CHECK(is_positive(GroupElement(tight, {1, 1})));
    CHECK(less(GroupElement(tight, {-1, -1}), GroupElement::zero(tight)));
}

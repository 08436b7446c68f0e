#include <torific/pseudo_convergence.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace torific;

namespace {

// Partial sums of sum_{i=1..K} t^{1 - 1/p^i}, realized in Z[1/p^K].
std::vector<HahnSeries<Fp>> zeta_truncations(long long p, int K)
{
    long long pK = 1;
    for (int i = 0; i < K; ++i) pK *= p;
    auto ctx = GroupContext::create({Weight::rational(Rat(1, pK))});
    GroupElement cutoff(ctx, {pK}); // threshold 1
    std::vector<HahnSeries<Fp>> out;
    std::vector<std::pair<GroupElement, Fp>> acc;
    long long q = 1;
    for (int i = 1; i <= K; ++i) {
        q *= p;
        acc.emplace_back(GroupElement(ctx, {pK - pK / q}), Fp(1, p));
        out.emplace_back(ctx, acc, cutoff);
    }
    return out;
}

} // namespace

TEST_CASE("zeta truncations are pseudo-convergent")
{
    for (long long p : {2, 3}) {
        auto ys = zeta_truncations(p, 6);
        auto res = check_pseudo_convergent(ys);
        REQUIRE(res.ok());
        REQUIRE(res.sequence->gauges.size() == 5);
        long long pK = 1;
        for (int i = 0; i < 6; ++i) pK *= p;
        long long q = p;
        for (size_t tau = 0; tau < 5; ++tau) {
            q *= p;
            // gauge w_tau = 1 - 1/p^{tau+2}, scaled by p^6
            CHECK(res.sequence->gauges[tau].coords()[0] == pK - pK / q);
        }
        // the full sum is a limit, with exact gauge equality
        CHECK(is_limit(*res.sequence, ys.back()));
        CHECK(limit_difference_check(*res.sequence, ys.back()));
    }
}

TEST_CASE("negative controls")
{
    auto ctx = GroupContext::integers();
    GroupElement cutoff(ctx, {20});
    auto mono = [&](long long e) {
        return HahnSeries<Rat>::monomial(Rat(1), GroupElement(ctx, {e}), cutoff);
    };
    // too short
    CHECK_FALSE(check_pseudo_convergent<Rat>({mono(1)}).ok());
    // a repeated element: the difference vanishes, no gauge witnessed
    auto rep = check_pseudo_convergent<Rat>({mono(1), mono(1), mono(2)});
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.violation->index == 0);
    // non-increasing gauges
    auto y0 = mono(1);
    auto y1 = y0 + mono(5);
    auto y2 = y1 + mono(3); // gauge drops from 5 to 3
    auto bad = check_pseudo_convergent<Rat>({y0, y1, y2});
    REQUIRE_FALSE(bad.ok());
    CHECK(bad.violation->index == 1);
}

TEST_CASE("limits and non-limits")
{
    auto ctx = GroupContext::integers();
    GroupElement cutoff(ctx, {20});
    auto mono = [&](long long e) {
        return HahnSeries<Rat>::monomial(Rat(1), GroupElement(ctx, {e}), cutoff);
    };
    auto y0 = mono(1);
    auto y1 = y0 + mono(2);
    auto y2 = y1 + mono(4);
    auto seq = check_pseudo_convergent<Rat>({y0, y1, y2});
    REQUIRE(seq.ok());
    CHECK(is_limit(*seq.sequence, y2));
    // adding something above every gauge keeps the limit property
    CHECK(is_limit(*seq.sequence, y2 + mono(9)));
    // an element missing the first jump is not a limit
    CHECK_FALSE(is_limit(*seq.sequence, mono(1) + mono(3)));
    // insufficient cutoff is an error, not a silent pass
    HahnSeries<Rat> coarse = y2.truncated(GroupElement(ctx, {2}));
    CHECK_THROWS_AS(is_limit(*seq.sequence, coarse), series_error);
}

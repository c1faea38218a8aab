#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "normord/moments.hpp"

using namespace normord;

TEST_CASE("partial_sums hand values") {
    PartialSums phi = partial_sums(FunctionId::phi(), {10});
    REQUIRE(phi.checkpoints.size() == 1);
    CHECK(phi.checkpoints[0].s1_exact == u128(32));
    CHECK(phi.checkpoints[0].s2_exact == u128(134));
    CHECK(phi.checkpoints[0].a_hat == Catch::Approx(0.64));

    PartialSums id = partial_sums(FunctionId::power_alpha(1), {10});
    CHECK(id.checkpoints[0].s1 == Catch::Approx(55.0));
    CHECK(id.checkpoints[0].s2 == Catch::Approx(385.0));
}

TEST_CASE("euler product for A matches 1/zeta(2)") {
    EulerProductEstimate a = euler_product_A(1'000'000);
    const double six_over_pi2 = 6.0 / (M_PI * M_PI);
    CHECK(std::abs(a.partial_product - six_over_pi2) <= a.tail_bound);
    CHECK(a.tail_bound < 2e-6);
    CHECK(a.lower() <= six_over_pi2);
    CHECK(six_over_pi2 <= a.upper());
}

TEST_CASE("euler product for trivial factor") {
    EulerProductEstimate one = euler_product([](u64) { return 1.0; }, 1000, 0.0);
    CHECK(one.partial_product == 1.0);
    CHECK(one.tail_bound == 0.0);
}

TEST_CASE("euler product rejects nonpositive factors") {
    CHECK_THROWS_AS(euler_product([](u64 p) { return p == 2 ? -1.0 : 0.5; }, 100, 1.0), Error);
}

TEST_CASE("euler product stability in P") {
    for (u64 P : {1000ull, 10'000ull, 100'000ull, 1'000'000ull}) {
        EulerProductEstimate a = euler_product_A(P);
        EulerProductEstimate a2 = euler_product_A(2 * P);
        CHECK(std::abs(a.partial_product - a2.partial_product) <= a.tail_bound);
        EulerProductEstimate b = euler_product_B(P);
        EulerProductEstimate b2 = euler_product_B(2 * P);
        CHECK(std::abs(b.partial_product - b2.partial_product) <= b.tail_bound);
        CHECK(b2.tail_bound < b.tail_bound);
    }
}

TEST_CASE("Cauchy-Schwarz: S1(x)^2 <= x S2(x)") {
    PartialSums phi = partial_sums(FunctionId::phi(), {10, 100, 1000, 10'000, 100'000});
    for (const auto& cp : phi.checkpoints) {
        REQUIRE(cp.exact);
        REQUIRE(cp.s1_exact * cp.s1_exact <= u128(cp.x) * cp.s2_exact);
    }
}

TEST_CASE("identity function has A = B = 1") {
    EulerProductEstimate one = euler_product([](u64) { return 1.0; }, 10'000, 0.0);
    MomentFit fit = shiu_criterion(FunctionId::power_alpha(1), 100'000, one, one);
    CHECK(fit.verdict == ShiuVerdict::criterion_satisfied);
    const auto& last = fit.sums.checkpoints.back();
    CHECK(last.a_hat == Catch::Approx(1.0).margin(0.01));
    CHECK(last.b_hat == Catch::Approx(1.0).margin(0.01));
}

TEST_CASE("shiu criterion violated for phi at moderate x") {
    EulerProductEstimate A = euler_product_A(1'000'000);
    EulerProductEstimate B = euler_product_B(1'000'000);
    MomentFit fit = shiu_criterion(FunctionId::phi(), 100'000, A, B);
    CHECK(fit.verdict == ShiuVerdict::criterion_violated);
    CHECK(fit.a * fit.a == Catch::Approx(0.3696).margin(0.001));
    CHECK(fit.b == Catch::Approx(0.4282).margin(0.001));
    CHECK(fit.margin > 0.05);
    // Convergence gap at small x is reported, not an error.
    MomentFit small = shiu_criterion(FunctionId::phi(), 1000, A, B);
    CHECK(small.a_hat_drift < 0.05);
}

TEST_CASE("checkpoint monotonicity of S1, S2") {
    PartialSums tau = partial_sums(FunctionId::tau(), {100, 1000, 10'000});
    for (std::size_t i = 1; i < tau.checkpoints.size(); ++i) {
        CHECK(tau.checkpoints[i].s1 > tau.checkpoints[i - 1].s1);
        CHECK(tau.checkpoints[i].s2 > tau.checkpoints[i - 1].s2);
    }
}

TEST_CASE("growth warning for fast-growing functions") {
    PartialSums sig = partial_sums(FunctionId::sigma_k(3), {2000});
    CHECK(sig.growth_warning);
    PartialSums phi = partial_sums(FunctionId::phi(), {2000});
    CHECK_FALSE(phi.growth_warning);
}

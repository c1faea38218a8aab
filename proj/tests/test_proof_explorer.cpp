#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "normord/proof_explorer.hpp"

using namespace normord;

namespace {

const ResidualOracle kAdmitAll = ResidualOracle::admit_all(0.1);

ProofParams params_236(double eta = 0.3, u128 S = 100) {
    ProofParams p;
    p.m = 2;
    p.n = 3;
    p.eps = 0.1;
    p.eta = eta;
    p.S = S;
    return p;
}

// Brute-force oracle for rational_above: smallest k, then smallest h.
std::pair<u64, u64> brute_rational_above(double x, double delta, u64 k_max) {
    for (u64 k = 1; k <= k_max; ++k) {
        for (u64 h = 1; h <= k * static_cast<u64>(x + delta + 2); ++h) {
            double r = static_cast<double>(h) / static_cast<double>(k);
            if (r > x && r <= x + delta) return {h, k};
        }
    }
    return {0, 0};
}

}  // namespace

TEST_CASE("find_window_rep enumeration examples") {
    // Candidates = 1 (mod 6) in (70, 100): 73, 79, 85, 91, 97.
    CHECK(find_window_rep(params_236(), 100, WindowSide::below, kAdmitAll, 2) == u128(97));
    // Smallest = 1 (mod 6) in (100, 130).
    CHECK(find_window_rep(params_236(), 100, WindowSide::above, kAdmitAll, 3) == u128(103));
}

TEST_CASE("window shorter than mn is empty") {
    ProofParams p = params_236(0.01);
    try {
        find_window_rep(p, 100, WindowSide::below, kAdmitAll, 2);
        FAIL("expected WindowEmpty");
    } catch (const Error& e) {
        CHECK(e.code() == "WindowEmpty");
    }
}

TEST_CASE("all-exceptional window reports NoAdmissibleRep") {
    ResidualOracle reject{0.1, [](u128) { return true; }};
    try {
        find_window_rep(params_236(), 100, WindowSide::below, reject, 2);
        FAIL("expected NoAdmissibleRep");
    } catch (const Error& e) {
        CHECK(e.code() == "NoAdmissibleRep");
    }
}

TEST_CASE("build_chains reproduces the enumerated chain") {
    LogContext ctx = power_log_context(1.0);
    ProofTrace trace = build_chains(params_236(), 1, 1, ctx, kAdmitAll);
    REQUIRE(trace.s_chain.size() == 2);
    CHECK(trace.s_chain[0].value == u128(97));
    // Largest = 1 (mod 6) in (135.8, 194).
    CHECK(trace.s_chain[1].value == u128(193));
    REQUIRE(trace.t_chain.size() == 2);
    CHECK(trace.t_chain[0].value == u128(103));
    // Smallest = 1 (mod 6) in (309, 401.7).
    CHECK(trace.t_chain[1].value == u128(313));
    // f = g: all residuals vanish.
    for (const auto& st : trace.s_chain) {
        CHECK(st.residual == 0.0);
        CHECK(st.residual_mult == 0.0);
    }
}

TEST_CASE("chain invariants for f = g across parameters") {
    LogContext ctx = power_log_context(1.0);
    for (u64 m : {2, 3, 5}) {
        for (u64 n : {2, 3, 7}) {
            for (double eta : {0.1, 0.3, 0.45}) {
                ProofParams p;
                p.m = m;
                p.n = n;
                p.eps = 0.05;
                p.eta = eta;
                double mn = static_cast<double>(m * n);
                p.S = static_cast<u128>(4.0 * mn / eta);  // window nonempty condition
                ProofTrace trace = build_chains(p, 3, 2, ctx, kAdmitAll);
                ChainReport rep = chain_inequalities_check(trace);
                for (const auto& c : rep.checks) {
                    INFO(c.name << ": lhs " << c.lhs << " rhs " << c.rhs);
                    REQUIRE(c.holds);
                }
                u128 mod = u128(m) * n;
                for (const auto& st : trace.s_chain) REQUIRE(st.value % mod == u128(1));
                for (const auto& st : trace.t_chain) REQUIRE(st.value % mod == u128(1));
            }
        }
    }
}

TEST_CASE("vacuous chain of length zero passes") {
    LogContext ctx = power_log_context(1.0);
    ProofTrace trace = build_chains(params_236(), 0, 0, ctx, kAdmitAll);
    CHECK(chain_inequalities_check(trace).all_hold);
}

TEST_CASE("corrupted trace is flagged") {
    LogContext ctx = power_log_context(1.0);
    ProofTrace trace = build_chains(params_236(), 1, 1, ctx, kAdmitAll);
    // Push s_1 below (1-eta) m s_0 = 135.8.
    trace.s_chain[1].value = u128(127);
    ChainReport rep = chain_inequalities_check(trace);
    CHECK_FALSE(rep.all_hold);
}

TEST_CASE("eta_select examples") {
    double eta = eta_select(2, 3, 2, 1);
    CHECK(eta == Catch::Approx(0.057).margin(0.002));
    // Defining strict inequality re-verified post hoc.
    CHECK(4.0 * std::pow(1 - eta, 3) > 3.0 * std::pow(1 + eta, 2));
    // Hand check at eta = 0.02 from the same family.
    CHECK(4.0 * std::pow(0.98, 3) > 3.0 * std::pow(1.02, 2));

    double eta2 = eta_select(2, 2, 2, 1);
    CHECK(std::pow(1 - eta2, 3) * 4.0 > std::pow(1 + eta2, 2) * 2.0);
    // Sanity stated in the spec family: eta = 0.1 also works there.
    CHECK(std::pow(0.9, 3) * 4.0 > std::pow(1.1, 2) * 2.0);

    CHECK_THROWS_AS(eta_select(2, 4, 1, 1), Error);
    CHECK_THROWS_AS(eta_select(2, 3, 1, 0), Error);
}

TEST_CASE("eta_select post-hoc property over a grid") {
    for (u64 m : {2, 3, 5, 10}) {
        for (u64 n : {2, 3, 5}) {
            for (std::size_t h = 1; h <= 6; ++h) {
                for (std::size_t k = 1; k <= 6; ++k) {
                    if (!(h * std::log(double(m)) > k * std::log(double(n)))) continue;
                    double eta = eta_select(m, n, h, k);
                    REQUIRE(eta > 0);
                    REQUIRE(eta < 0.5);
                    REQUIRE((h + 1) * std::log1p(-eta) + h * std::log(double(m)) >
                            (k + 1) * std::log1p(eta) + k * std::log(double(n)));
                }
            }
        }
    }
}

TEST_CASE("exponent_bound_check on the acceptance instance") {
    LogContext ctx = power_log_context(1.0);
    double eta = eta_select(2, 3, 2, 1);
    ProofParams p = params_236(eta, 0);
    p.S = auto_select_S(p, 2, 1, ctx, kAdmitAll);
    ProofTrace trace = build_chains(p, 2, 1, ctx, kAdmitAll);
    ExponentBoundReport rep = exponent_bound_check(trace);
    CHECK(rep.chain_order_ok);  // s_2 > t_1
    CHECK(rep.c_order_ok);
    CHECK(rep.ratio == 2.0);
    CHECK(rep.holds);

    ProofTrace zero_k = build_chains(params_236(), 1, 0, ctx, kAdmitAll);
    zero_k.k = 0;
    CHECK_THROWS_AS(exponent_bound_check(zero_k), Error);
}

TEST_CASE("rational_above examples") {
    auto [h1, k1] = rational_above(std::log(3.0) / std::log(2.0), 0.01);
    CHECK(h1 == 27);
    CHECK(k1 == 17);
    auto [h2, k2] = rational_above(1.5, 1.0);
    CHECK(h2 == 2);
    CHECK(k2 == 1);
    auto [h3, k3] = rational_above(2.0, 0.25);
    CHECK(h3 == 9);
    CHECK(k3 == 4);
}

TEST_CASE("rational_above matches brute force and is k-minimal") {
    const double xs[] = {std::log(3.0) / std::log(2.0), 0.7, 1.0, 2.0, 3.14159,
                         std::sqrt(2.0)};
    const double deltas[] = {0.5, 0.1, 0.01, 0.003};
    for (double x : xs) {
        for (double d : deltas) {
            auto [h, k] = rational_above(x, d);
            double r = static_cast<double>(h) / static_cast<double>(k);
            REQUIRE(r > x);
            REQUIRE(r <= x + d);
            auto [bh, bk] = brute_rational_above(x, d, 1000);
            REQUIRE(k == bk);
            REQUIRE(h == bh);
        }
    }
}

TEST_CASE("limit_bound_check slack shrinks with delta") {
    LogContext ctx = power_log_context(1.0);
    LimitBoundReport rep = limit_bound_check(2, 3, 0.05, ctx, kAdmitAll, {0.1, 0.01, 0.001});
    REQUIRE(rep.steps.size() == 3);
    CHECK(rep.all_hold);
    for (const auto& step : rep.steps) {
        CHECK(step.approx_gap > 0);
        CHECK(step.approx_gap <= step.delta);
        CHECK(step.limit_holds);
        CHECK(step.exponent.holds);
    }
    CHECK(rep.steps[0].approx_gap > rep.steps[1].approx_gap);
    CHECK(rep.steps[1].approx_gap > rep.steps[2].approx_gap);

    // m = n: ratio 1 vs (c - 3 eps)/(c + 3 eps) < 1 always holds.
    LogContext ctx2 = power_log_context(2.0);
    LimitBoundReport same = limit_bound_check(2, 2, 0.05, ctx2, kAdmitAll, {0.5});
    CHECK(same.all_hold);

    // log n / log m = 0.5 vs (2 log 2 - 3 eps)/(4 log 2 + 3 eps).
    LimitBoundReport half = limit_bound_check(4, 2, 0.01, ctx2, kAdmitAll, {0.1});
    CHECK(half.all_hold);
}

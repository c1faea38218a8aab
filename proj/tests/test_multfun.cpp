#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>

#include "normord/multfun.hpp"

using namespace normord;

namespace {

// Independent oracle: f(n) via plain trial-division factorization, no
// shared code with sieve_range.
double brute_eval(const FunctionId& f, u64 n) {
    double v = 1.0;
    for (u64 p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            unsigned e = 0;
            while (n % p == 0) { n /= p; ++e; }
            v *= f.prime_power_value(p, e);
        }
    }
    if (n > 1) v *= f.prime_power_value(n, 1);
    return v;
}

}  // namespace

TEST_CASE("eval_at on stated examples") {
    CHECK(eval_at(FunctionId::phi(), 1) == 1.0);
    CHECK(eval_at(FunctionId::phi(), 12) == 4.0);
    CHECK(eval_at(FunctionId::phi(), 1'000'000) == 400'000.0);
    CHECK(eval_at(FunctionId::power_alpha(0.5), 4) == Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("sieve_range matches hand values") {
    SieveSegment phi = sieve_range(FunctionId::phi(), 1, 10);
    std::vector<double> expect{1, 1, 2, 2, 4, 2, 6, 4, 6, 4};
    CHECK(phi.values == expect);

    SieveSegment tau = sieve_range(FunctionId::tau(), 1, 6);
    CHECK(tau.values == std::vector<double>{1, 2, 2, 3, 2, 4});

    SieveSegment id = sieve_range(FunctionId::power_alpha(1), 5, 7);
    REQUIRE(id.values.size() == 3);
    CHECK(id.values[0] == Catch::Approx(5.0));
    CHECK(id.values[1] == Catch::Approx(6.0));
    CHECK(id.values[2] == Catch::Approx(7.0));
}

TEST_CASE("sieve smallest prime factors") {
    SieveSegment seg = sieve_range(FunctionId::tau(), 1, 12);
    CHECK(seg.spf == std::vector<u64>{1, 2, 3, 2, 5, 2, 7, 2, 3, 2, 11, 2});
}

TEST_CASE("oracle equivalence: sieve vs independent factorization") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<u64> dist(1, 1'000'000);
    std::vector<FunctionId> fns{FunctionId::phi(), FunctionId::tau(), FunctionId::sigma_k(1),
                                FunctionId::mu_squared(), FunctionId::power_alpha(0.5)};
    SieveSegment segs[5];
    for (int j = 0; j < 5; ++j) segs[j] = sieve_range(fns[j], 1, 1'000'000);
    for (int i = 0; i < 10'000; ++i) {
        u64 n = dist(rng);
        for (int j = 0; j < 5; ++j) {
            double expect = brute_eval(fns[j], n);
            double got = segs[j].at(n);
            if (fns[j].value_kind() == ValueKind::exact_integer) {
                REQUIRE(got == expect);
            } else {
                REQUIRE(got == Catch::Approx(expect).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("multiplicativity on random coprime pairs") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<u64> dist(2, 30'000);
    std::vector<FunctionId> fns{FunctionId::phi(), FunctionId::tau(), FunctionId::power_alpha(0.7)};
    int done = 0;
    while (done < 1000) {
        u64 m = dist(rng), n = dist(rng);
        if (std::gcd(m, n) != 1) continue;
        ++done;
        for (const auto& f : fns) {
            double fmn = eval_at(f, m * n);
            double prod = eval_at(f, m) * eval_at(f, n);
            if (f.value_kind() == ValueKind::exact_integer) {
                REQUIRE(fmn == prod);
            } else {
                REQUIRE(fmn == Catch::Approx(prod).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("segment independence") {
    const u64 k = 5000;
    FunctionId f = FunctionId::phi();
    SieveSegment a = sieve_range(f, 1, k);
    SieveSegment b = sieve_range(f, k + 1, 2 * k);
    SieveSegment whole = sieve_range(f, 1, 2 * k);
    for (u64 n = 1; n <= 2 * k; ++n) {
        REQUIRE(whole.at(n) == (n <= k ? a.at(n) : b.at(n)));
    }
}

TEST_CASE("log_transform") {
    SieveSegment seg = sieve_range(FunctionId::phi(), 1, 2);
    auto logs = log_transform(seg);
    CHECK(logs == std::vector<double>{0.0, 0.0});

    CHECK(std::log(eval_at(FunctionId::power_alpha(2), 10)) ==
          Catch::Approx(2 * std::log(10.0)).epsilon(1e-12));
    CHECK(std::log(eval_at(FunctionId::phi(), 7)) == Catch::Approx(std::log(6.0)).epsilon(1e-12));

    SieveSegment mu = sieve_range(FunctionId::mu_squared(), 1, 8);  // mu^2(4) = 0
    CHECK_THROWS_AS(log_transform(mu), Error);
}

TEST_CASE("eval_at factors large semiprimes via rho") {
    // 1000003 * 1000033 needs Pollard rho once trial division is capped low.
    FactorizationBudget tight;
    tight.trial_limit = 1000;
    u64 n = 1000003ull * 1000033ull;
    CHECK(eval_at(FunctionId::phi(), n, tight) == 1000002.0 * 1000032.0);
}

TEST_CASE("custom spec: unspecified higher power is an error unless completely multiplicative") {
    std::map<std::pair<u64, unsigned>, double> table{{{2, 1}, 3.0}, {{3, 1}, 4.0}};
    FunctionId strict = FunctionId::custom(spec_from_table("strict", table, false));
    CHECK(eval_at(strict, 6) == Catch::Approx(12.0));
    CHECK_THROWS_AS(eval_at(strict, 4), Error);

    FunctionId cm = FunctionId::custom(spec_from_table("cm", table, true));
    CHECK(eval_at(cm, 4) == Catch::Approx(9.0));
}

TEST_CASE("range and budget errors") {
    CHECK_THROWS_AS(sieve_range(FunctionId::phi(), 10, 5), Error);
    CHECK_THROWS_AS(sieve_range(FunctionId::phi(), 1, 100, /*segment_budget=*/10), Error);
    CHECK_THROWS_AS(eval_at(FunctionId::phi(), 0), Error);
}

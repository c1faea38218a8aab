#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "normord/effective_phi.hpp"

using namespace normord;

TEST_CASE("truncated_phi_ratio hand values") {
    CHECK(truncated_phi_ratio(30030, 10) == Catch::Approx(8.0 / 35.0).epsilon(1e-12));
    CHECK(truncated_phi_ratio(1009, 100) == 1.0);  // prime above the bound
    CHECK(truncated_phi_ratio(1024, 2) == Catch::Approx(0.5));
}

TEST_CASE("truncated ratio dominates phi(n)/n") {
    FunctionId phi = FunctionId::phi();
    SieveSegment seg = sieve_range(phi, 2, 10'000);
    for (u64 b : {2ull, 10ull, 100ull}) {
        for (u64 n = 2; n <= 10'000; ++n) {
            double truncated = truncated_phi_ratio(n, b);
            double exact = seg.at(n) / static_cast<double>(n);
            REQUIRE(truncated >= exact - 1e-12);
            // Equality exactly when all prime factors are <= b.
            u64 x = n;
            for (u64 d = 2; d <= b; ++d)
                while (x % d == 0) x /= d;
            if (x == 1) REQUIRE(truncated == Catch::Approx(exact).epsilon(1e-12));
            else REQUIRE(truncated > exact + 1e-15);
        }
    }
}

TEST_CASE("cost meter is deterministic") {
    EffectiveCandidate cand = truncated_phi_candidate(2);
    for (u64 n : {100ull, 4057ull, 99'991ull}) {
        CostMeter m1, m2;
        double v1 = cand.evaluate(n, m1);
        double v2 = cand.evaluate(n, m2);
        CHECK(v1 == v2);
        CHECK(m1.total() == m2.total());
        CHECK(m1.total() > 0);
    }
}

TEST_CASE("identity candidate: flat cost, phi-like density at eps 0.5") {
    CandidateDensityReport rep =
        candidate_density_experiment(identity_candidate(), 0.5, {1000, 10'000});
    CHECK(rep.density.checkpoints.back().density == Catch::Approx(0.51).margin(0.02));
    CHECK_FALSE(rep.budget_exceeded);

    CostAudit audit = cost_audit(identity_candidate(), {100, 1000, 10'000, 100'000});
    CHECK(audit.fitted_exponent == Catch::Approx(0.0).margin(0.1));
}

TEST_CASE("truncated candidate cost exponent near its k") {
    EffectiveCandidate cand = truncated_phi_candidate(2);
    std::vector<u64> sample;
    for (u64 n = 51; n < 3'000'000; n = n * 2 + 1) sample.push_back(n);
    CostAudit audit = cost_audit(cand, sample);
    CHECK(audit.fitted_exponent > 1.0);
    CHECK(audit.fitted_exponent < 2.5);
}

TEST_CASE("exact phi by factorization blows the polylog budget") {
    EffectiveCandidate cand = exact_phi_candidate();
    // Semiprimes with two large factors force ~sqrt(n) trial divisions.
    const u64 n = 10'000'019ull * 10'000'079ull;
    CostMeter meter;
    cand.evaluate(n, meter);
    CHECK(static_cast<double>(meter.total()) > cand.budget_for(n));
}

TEST_CASE("g = phi itself has density zero for every eps") {
    EffectiveCandidate self;
    self.name = "phi-self";
    self.cost_exponent_budget = 100;  // budget irrelevant here
    self.cost_constant = 1e18;
    self.evaluate = [](u64 n, CostMeter&) { return eval_at(FunctionId::phi(), n); };
    for (double eps : {1e-6, 0.01, 0.5}) {
        CandidateDensityReport rep = candidate_density_experiment(self, eps, {500, 2000});
        for (const auto& cp : rep.density.checkpoints) CHECK(cp.count == 0);
    }
}

TEST_CASE("density report contract for the trunc family") {
    CandidateDensityReport rep =
        candidate_density_experiment(truncated_phi_candidate(2), 0.1, {10'000, 100'000});
    REQUIRE(rep.density.checkpoints.size() == 2);
    for (const auto& cp : rep.density.checkpoints) {
        CHECK(cp.density >= 0.0);
        CHECK(cp.density <= 1.0);
    }
    CHECK_FALSE(rep.budget_exceeded);
}

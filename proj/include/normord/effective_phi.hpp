#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "normord/core.hpp"
#include "normord/factor.hpp"
#include "normord/multfun.hpp"
#include "normord/normal_order.hpp"

namespace normord {

// Machine-independent cost model for "time polynomial in log n": counts
// divisibility tests and multiplications instead of wall-clock.
struct CostMeter {
    u64 divisions = 0;
    u64 multiplications = 0;
    u64 total() const { return divisions + multiplications; }
};

// A candidate normal order for phi whose evaluation must fit the budget
// allowed_ops <= C (log n)^k.
struct EffectiveCandidate {
    std::string name;
    std::function<double(u64 n, CostMeter&)> evaluate;
    double cost_constant = 8.0;
    double cost_exponent_budget = 3.0;

    double budget_for(u64 n) const {
        return cost_constant * std::pow(std::log(static_cast<double>(n)), cost_exponent_budget);
    }
};

// prod_{p <= B, p | n} (1 - 1/p) by trial division up to B. Dividing the
// running residual keeps every dividing d prime. Cost O(B) divisibility
// tests, polylog in n for B = (log n)^k.
inline double truncated_phi_ratio(u64 n, u64 bound, CostMeter& meter) {
    if (n < 2 || bound < 2) throw precondition_error("BadArgument", "need n >= 2 and B >= 2");
    double ratio = 1.0;
    u64 x = n;
    for (u64 d = 2; d <= bound; ++d) {
        ++meter.divisions;
        if (x % d == 0) {
            ratio *= 1.0 - 1.0 / static_cast<double>(d);
            while (x % d == 0) {
                ++meter.divisions;
                x /= d;
            }
        }
    }
    return ratio;
}

inline double truncated_phi_ratio(u64 n, u64 bound) {
    CostMeter meter;
    return truncated_phi_ratio(n, bound, meter);
}

// g(n) = n * prod_{p <= (log n)^k, p | n} (1 - 1/p).
inline EffectiveCandidate truncated_phi_candidate(unsigned k, double cost_constant = 8.0) {
    EffectiveCandidate c;
    c.name = "trunc:k=" + std::to_string(k);
    c.cost_exponent_budget = static_cast<double>(k) + 0.5;
    c.cost_constant = cost_constant;
    c.evaluate = [k](u64 n, CostMeter& meter) {
        double bound = std::pow(std::log(static_cast<double>(n)), static_cast<double>(k));
        u64 b = std::max<u64>(2, static_cast<u64>(bound));
        return static_cast<double>(n) * truncated_phi_ratio(n, b, meter);
    };
    return c;
}

inline EffectiveCandidate identity_candidate() {
    EffectiveCandidate c;
    c.name = "identity";
    c.cost_exponent_budget = 1.0;
    c.evaluate = [](u64 n, CostMeter& meter) {
        ++meter.multiplications;
        return static_cast<double>(n);
    };
    return c;
}

// phi by full factorization: correct but not effective; the meter charges
// one division per trial step and exposes the blow-up on hard inputs.
inline EffectiveCandidate exact_phi_candidate() {
    EffectiveCandidate c;
    c.name = "phi-exact";
    c.cost_exponent_budget = 3.0;
    c.evaluate = [](u64 n, CostMeter& meter) {
        double v = 1.0;
        u64 x = n;
        for (u64 p = 2; p * p <= x; p += (p == 2 ? 1 : 2)) {
            ++meter.divisions;
            if (x % p == 0) {
                unsigned e = 0;
                while (x % p == 0) {
                    ++meter.divisions;
                    x /= p;
                    ++e;
                }
                v *= std::pow(static_cast<double>(p), e - 1.0) * (static_cast<double>(p) - 1.0);
            }
        }
        if (x > 1) v *= static_cast<double>(x) - 1.0;
        return v;
    };
    return c;
}

struct CandidateDensityReport {
    DensityReport density;
    u64 max_ops = 0;
    u64 max_ops_n = 0;
    double max_budget = 0;
    bool budget_exceeded = false;
};

// Densities of {n <= x : phi(n)/g(n) outside (1-eps, 1+eps)} plus the
// cost-meter audit. A blown budget is reported, never silently accepted.
inline CandidateDensityReport candidate_density_experiment(const EffectiveCandidate& candidate,
                                                           double eps,
                                                           const std::vector<u64>& checkpoints,
                                                           u64 segment_size = 1'000'000) {
    if (eps <= 0) throw precondition_error("BadEpsilon", "epsilon must be positive");
    for (std::size_t i = 1; i < checkpoints.size(); ++i)
        if (checkpoints[i] <= checkpoints[i - 1])
            throw precondition_error("BadCheckpoints", "checkpoints must be strictly increasing");

    CandidateDensityReport rep;
    rep.density.epsilon = eps;
    FunctionId phi = FunctionId::phi();
    u64 count = 0;
    std::size_t next_cp = 0;
    const u64 x_max = checkpoints.back();
    for (u64 lo = 2; lo <= x_max; lo += segment_size) {
        u64 hi = std::min(x_max, lo + segment_size - 1);
        SieveSegment seg = sieve_range(phi, lo, hi);
        for (u64 n = lo; n <= hi; ++n) {
            CostMeter meter;
            double g = candidate.evaluate(n, meter);
            if (!(g > 0)) throw precondition_error("NonpositiveValue", "candidate g(n) <= 0");
            if (static_cast<double>(meter.total()) > candidate.budget_for(n)) {
                rep.budget_exceeded = true;
            }
            if (meter.total() > rep.max_ops) {
                rep.max_ops = meter.total();
                rep.max_ops_n = n;
            }
            rep.max_budget = std::max(rep.max_budget, candidate.budget_for(n));
            if (ratio_exceptional(seg.values[n - lo] / g, eps)) ++count;
            while (next_cp < checkpoints.size() && n == checkpoints[next_cp]) {
                rep.density.checkpoints.push_back(
                    {n, count, static_cast<double>(count) / static_cast<double>(n)});
                ++next_cp;
            }
        }
    }
    rep.density.verdict = density_verdict(rep.density.checkpoints);
    return rep;
}

struct CostAudit {
    u64 max_ops = 0;
    double fitted_exponent = 0;   // slope of log(ops) vs log(log n)
    double exponent_ci95 = 0;     // half-width
    std::size_t sample_size = 0;
};

// Least-squares fit of log(ops) against log(log n) over the sample.
inline CostAudit cost_audit(const EffectiveCandidate& candidate, const std::vector<u64>& sample) {
    if (sample.empty()) throw precondition_error("EmptyInput", "cost audit needs a sample");
    std::vector<double> xs, ys;
    CostAudit audit;
    for (u64 n : sample) {
        if (n < 3) continue;
        CostMeter meter;
        candidate.evaluate(n, meter);
        u64 ops = std::max<u64>(1, meter.total());
        audit.max_ops = std::max(audit.max_ops, ops);
        xs.push_back(std::log(std::log(static_cast<double>(n))));
        ys.push_back(std::log(static_cast<double>(ops)));
    }
    audit.sample_size = xs.size();
    if (xs.size() < 2) {
        audit.fitted_exponent = 0;
        return audit;
    }
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom <= 0) return audit;
    double slope = (n * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / n;
    double sse = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - slope * xs[i] - intercept;
        sse += r * r;
    }
    double se = xs.size() > 2 ? std::sqrt(sse / (n - 2) / (denom / n)) : 0.0;
    audit.fitted_exponent = slope;
    audit.exponent_ci95 = 1.96 * se;
    return audit;
}

}  // namespace normord

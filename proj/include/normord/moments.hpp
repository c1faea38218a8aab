#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "normord/core.hpp"
#include "normord/factor.hpp"
#include "normord/multfun.hpp"

namespace normord {

struct MomentCheckpoint {
    u64 x = 0;
    double s1 = 0, s2 = 0;
    u128 s1_exact = 0, s2_exact = 0;  // populated for exact-integer functions
    bool exact = false;
    double a_hat = 0;  // 2 S1 / x^2
    double b_hat = 0;  // 3 S2 / x^3
};

// S1(x) = sum f(n), S2(x) = sum f(n)^2 at each checkpoint, in one
// streaming pass. Exact-integer functions accumulate in 128 bits;
// real-valued ones use Kahan summation. Values with f(n)/n > 10^3 are
// flagged since the Shiu-Segal theorem assumes f(n) = O(n).
struct PartialSums {
    std::vector<MomentCheckpoint> checkpoints;
    double max_ratio_sampled = 0;  // max f(n)/n seen
    bool growth_warning = false;
    bool overflow_fallback = false;
};

inline PartialSums partial_sums(const FunctionId& f, const std::vector<u64>& checkpoints,
                                u64 segment_size = 1'000'000) {
    if (checkpoints.empty()) throw precondition_error("BadCheckpoints", "no checkpoints");
    for (std::size_t i = 1; i < checkpoints.size(); ++i)
        if (checkpoints[i] <= checkpoints[i - 1])
            throw precondition_error("BadCheckpoints", "checkpoints must be strictly increasing");

    const bool exact = f.value_kind() == ValueKind::exact_integer;
    PartialSums out;
    u128 s1i = 0, s2i = 0;
    double s1 = 0, s2 = 0, comp1 = 0, comp2 = 0;
    auto kahan = [](double& sum, double& comp, double v) {
        double y = v - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };

    const u64 x_max = checkpoints.back();
    std::size_t next_cp = 0;
    for (u64 lo = 1; lo <= x_max; lo += segment_size) {
        u64 hi = std::min(x_max, lo + segment_size - 1);
        SieveSegment seg = sieve_range(f, lo, hi);
        for (u64 n = lo; n <= hi; ++n) {
            double v = seg.values[n - lo];
            out.max_ratio_sampled = std::max(out.max_ratio_sampled, v / static_cast<double>(n));
            if (exact && !out.overflow_fallback) {
                u128 iv = static_cast<u128>(v + 0.5);
                u128 sq = iv * iv;
                if (s2i > ~u128(0) - sq || s1i > ~u128(0) - iv) {
                    out.overflow_fallback = true;
                    s1 = to_ld(s1i);
                    s2 = to_ld(s2i);
                } else {
                    s1i += iv;
                    s2i += sq;
                }
            }
            if (!exact || out.overflow_fallback) {
                kahan(s1, comp1, v);
                kahan(s2, comp2, v * v);
            }
            while (next_cp < checkpoints.size() && n == checkpoints[next_cp]) {
                MomentCheckpoint cp;
                cp.x = n;
                cp.exact = exact && !out.overflow_fallback;
                if (cp.exact) {
                    cp.s1_exact = s1i;
                    cp.s2_exact = s2i;
                    cp.s1 = static_cast<double>(to_ld(s1i));
                    cp.s2 = static_cast<double>(to_ld(s2i));
                } else {
                    cp.s1 = s1;
                    cp.s2 = s2;
                }
                double xd = static_cast<double>(n);
                cp.a_hat = 2.0 * cp.s1 / (xd * xd);
                cp.b_hat = 3.0 * cp.s2 / (xd * xd * xd);
                out.checkpoints.push_back(cp);
                ++next_cp;
            }
        }
    }
    out.growth_warning = out.max_ratio_sampled > 1e3;
    return out;
}

// Partial Euler product over primes <= P with a rigorous tail bound on
// |log(full/partial)|: each local factor satisfies
// |log factor(p)| <= tail_coefficient / p^2 for p > P, and
// sum_{p > P} p^{-2} < 1/(P-1).
struct EulerProductEstimate {
    u64 prime_limit = 0;
    double partial_product = 1;
    double tail_bound = 0;
    double lower() const { return partial_product * std::exp(-tail_bound); }
    double upper() const { return partial_product * std::exp(tail_bound); }
};

inline EulerProductEstimate euler_product(const std::function<double(u64)>& local_factor, u64 P,
                                          double tail_coefficient) {
    long double log_sum = 0;
    for (u64 p : primes_up_to(P)) {
        double fp = local_factor(p);
        if (!(fp > 0) || fp > 1.0)
            throw precondition_error("NonpositiveFactor", "local factor must lie in (0, 1]");
        log_sum += std::log(static_cast<long double>(fp));
    }
    EulerProductEstimate est;
    est.prime_limit = P;
    est.partial_product = static_cast<double>(std::exp(log_sum));
    est.tail_bound = tail_coefficient / static_cast<double>(P - 1);
    return est;
}

// A = prod_p (1 - p^-2): -log(1-x) <= x/(1-x) with x <= P^-2.
inline EulerProductEstimate euler_product_A(u64 P) {
    double x = 1.0 / (static_cast<double>(P) * static_cast<double>(P));
    return euler_product([](u64 p) { return 1.0 - 1.0 / (static_cast<double>(p) * p); }, P,
                         1.0 / (1.0 - x));
}

// B = prod_p (1 - 2 p^-2 + p^-3): the deficit is below 2 p^-2.
inline EulerProductEstimate euler_product_B(u64 P) {
    double y = 2.0 / (static_cast<double>(P) * static_cast<double>(P));
    return euler_product(
        [](u64 p) {
            double pd = static_cast<double>(p);
            return 1.0 - 2.0 / (pd * pd) + 1.0 / (pd * pd * pd);
        },
        P, 2.0 / (1.0 - y));
}

enum class ShiuVerdict { criterion_satisfied, criterion_violated };

inline const char* to_string(ShiuVerdict v) {
    return v == ShiuVerdict::criterion_violated ? "criterion_violated" : "criterion_satisfied";
}

struct MomentFit {
    PartialSums sums;
    EulerProductEstimate a_euler, b_euler;
    double a = 0, b = 0;
    double a_hat_drift = 0;  // |A_hat(x_max) - A|
    double b_hat_drift = 0;
    double tolerance = 0;    // combined tail uncertainty on A^2 vs B
    double margin = 0;       // B - A^2
    ShiuVerdict verdict = ShiuVerdict::criterion_satisfied;
};

// The criterion: a non-decreasing normal order forces A^2 >= B, so
// A^2 < B (beyond the tail-bound tolerance) rules one out. The verdict
// uses the Euler products; the empirical fits cross-validate them.
inline MomentFit shiu_criterion(const FunctionId& f, u64 x_max,
                                const EulerProductEstimate& a_product,
                                const EulerProductEstimate& b_product) {
    if (x_max < 1000) throw precondition_error("BadRange", "x_max must be >= 10^3");
    std::vector<u64> cps;
    for (u64 x = 1000; x < x_max; x *= 10) cps.push_back(x);
    cps.push_back(x_max);

    MomentFit fit;
    fit.sums = partial_sums(f, cps);
    fit.a_euler = a_product;
    fit.b_euler = b_product;
    fit.a = a_product.partial_product;
    fit.b = b_product.partial_product;
    const MomentCheckpoint& last = fit.sums.checkpoints.back();
    fit.a_hat_drift = std::abs(last.a_hat - fit.a);
    fit.b_hat_drift = std::abs(last.b_hat - fit.b);
    if (x_max >= 10'000'000 && (fit.a_hat_drift > 0.05 * fit.a || fit.b_hat_drift > 0.05 * fit.b))
        throw precondition_error("InconsistentEstimates",
                                 "empirical fit differs from Euler product by more than 5%");
    // A^2 is uncertain by about 2*tail_A relatively, B by tail_B.
    fit.tolerance = 2 * a_product.tail_bound * fit.a * fit.a + b_product.tail_bound * fit.b + 1e-9;
    fit.margin = fit.b - fit.a * fit.a;
    fit.verdict = fit.margin > fit.tolerance ? ShiuVerdict::criterion_violated
                                             : ShiuVerdict::criterion_satisfied;
    return fit;
}

}  // namespace normord

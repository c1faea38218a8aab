#pragma once

#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include "normord/core.hpp"
#include "normord/multfun.hpp"
#include "normord/normal_order.hpp"

namespace normord {

// The proof works in log coordinates: b(n) = log f(n), c(n) = log g(n).
// Callables rather than arrays so that analytic pairs (f = g = n^alpha)
// extend to the huge chain elements of the proof explorer.
struct LogContext {
    std::function<double(u128)> b;
    std::function<double(u128)> c;
};

// f = g = n^alpha in log coordinates, defined on all of N.
inline LogContext power_log_context(double alpha) {
    auto l = [alpha](u128 n) { return alpha * log_u128(n); };
    return {l, l};
}

// Log context over a sieved range: b from f, c from the candidate.
inline LogContext range_log_context(const FunctionId& f, const MonotoneCandidate& g) {
    auto segp = std::make_shared<SieveSegment>(sieve_range(f, g.lo, g.hi()));
    auto gp = std::make_shared<MonotoneCandidate>(g);
    return {
        [segp](u128 n) {
            if (n > segp->hi) throw precondition_error("RangeMismatch", "b(n) outside sieved range");
            double v = segp->at(static_cast<u64>(n));
            if (!(v > 0)) throw precondition_error("NonpositiveValue", "log of f(n) <= 0");
            return std::log(v);
        },
        [gp](u128 n) {
            if (n > gp->hi()) throw precondition_error("RangeMismatch", "c(n) outside candidate range");
            return std::log(gp->at(static_cast<u64>(n)));
        },
    };
}

// Predicate form of the exceptional set: n is exceptional when
// |b(n) - c(n)| >= epsilon.
struct ResidualOracle {
    double epsilon = 0;
    std::function<bool(u128)> is_exceptional;

    static ResidualOracle from(const LogContext& ctx, double eps) {
        return {eps, [ctx, eps](u128 n) { return std::abs(ctx.b(n) - ctx.c(n)) >= eps; }};
    }
    static ResidualOracle admit_all(double eps) {
        return {eps, [](u128) { return false; }};
    }
};

// Witness of the Lemma 2.5 contradiction for a would-be bounded g:
// f(m) > M/A together with an n making f((nm+1)m) = f(nm+1) f(m) > M.
struct UnboundednessWitness {
    u64 m = 0, n = 0;
    double f_m = 0, f_t = 0, f_tm = 0;  // t = nm + 1
};

inline UnboundednessWitness witness_unbounded_contradiction(const FunctionId& f, double A, double B,
                                                            double M, u64 search_bound) {
    if (!(0 < A && A < B && B < M))
        throw precondition_error("BadThresholds", "need 0 < A < B < M");
    for (u64 m = 1; m <= search_bound; ++m) {
        double fm = eval_at(f, m);
        if (!(fm > M / A)) continue;
        for (u64 n = 1; n <= search_bound; ++n) {
            u64 t = n * m + 1;  // t = 1 (mod m), so gcd(t, m) = 1
            double ft = eval_at(f, t);
            if (!(ft > A)) continue;
            double ftm = eval_at(f, t * m);
            if (ftm > M) return {m, n, fm, ft, ftm};
        }
    }
    throw search_error("NotFoundWithinBound",
                       "no witness within bound (search exhaustion, not mathematical failure)");
}

struct InequalityCheck {
    double lhs = 0, rhs = 0;
    bool holds = false;
    double slack = 0;  // rhs - lhs
    bool zero_residual_pair = false;
};

// |c(n)/log n - c(m)/log m| <= 3 eps (1/log m + 1/log n), valid whenever
// both m and n are non-exceptional.
inline InequalityCheck key_inequality_check(u64 m, u64 n, const LogContext& ctx, double eps,
                                            const ResidualOracle& oracle) {
    if (m < 2 || n < 2) throw precondition_error("BadArgument", "need m, n >= 2");
    if (oracle.is_exceptional(m) || oracle.is_exceptional(n))
        throw precondition_error("PreconditionViolated", "m or n is exceptional for this epsilon");
    InequalityCheck chk;
    chk.lhs = std::abs(ctx.c(n) / std::log(static_cast<double>(n)) -
                       ctx.c(m) / std::log(static_cast<double>(m)));
    chk.rhs = 3.0 * eps * (1.0 / std::log(static_cast<double>(m)) +
                           1.0 / std::log(static_cast<double>(n)));
    chk.slack = chk.rhs - chk.lhs;
    chk.holds = chk.lhs <= chk.rhs + kCheckSlack;
    return chk;
}

// Same inequality with eps = |b(m)-c(m)| + |b(n)-c(n)|, so it applies to
// every pair unconditionally. A pair with both residuals exactly zero is
// flagged; the check still runs with rhs = 0.
inline InequalityCheck unconditional_key_inequality_check(u64 m, u64 n, const LogContext& ctx) {
    if (m < 2 || n < 2) throw precondition_error("BadArgument", "need m, n >= 2");
    double rm = std::abs(ctx.b(m) - ctx.c(m));
    double rn = std::abs(ctx.b(n) - ctx.c(n));
    InequalityCheck chk;
    chk.lhs = std::abs(ctx.c(n) / std::log(static_cast<double>(n)) -
                       ctx.c(m) / std::log(static_cast<double>(m)));
    chk.rhs = (rm + rn) * (3.0 / std::log(static_cast<double>(m)) +
                           3.0 / std::log(static_cast<double>(n)));
    chk.slack = chk.rhs - chk.lhs;
    chk.holds = chk.lhs <= chk.rhs + kCheckSlack;
    chk.zero_residual_pair = (rm + rn == 0.0);
    return chk;
}

struct AlphaFit {
    double alpha = 0;
    std::vector<std::pair<u64, double>> sample;  // (n, c(n)/log n)
    double max_residual = 0;   // max |b(m) - alpha log m| over admissible m
    double mean_residual = 0;
    u64 admissible_count = 0;
};

// Alpha as the log-n-weighted mean of c(n)/log n over non-exceptional n;
// the weights make the sum telescope to sum c(n) / sum log n.
inline AlphaFit alpha_estimate(const LogContext& ctx, const ResidualOracle& oracle, u64 lo, u64 hi,
                               std::size_t sample_stride = 0) {
    if (lo < 2) lo = 2;
    if (lo > hi) throw precondition_error("BadRange", "empty range");
    double sum_c = 0, sum_log = 0;
    AlphaFit fit;
    if (sample_stride == 0) sample_stride = std::max<u64>(1, (hi - lo) / 64);
    for (u64 n = lo; n <= hi; ++n) {
        if (oracle.is_exceptional(n)) continue;
        double ln = std::log(static_cast<double>(n));
        double cn = ctx.c(n);
        sum_c += cn;
        sum_log += ln;
        ++fit.admissible_count;
        if ((n - lo) % sample_stride == 0) fit.sample.emplace_back(n, cn / ln);
    }
    if (fit.admissible_count == 0)
        throw search_error("NoAdmissibleSample", "every n in range is exceptional");
    fit.alpha = sum_c / sum_log;
    double total = 0;
    for (u64 n = lo; n <= hi; ++n) {
        if (oracle.is_exceptional(n)) continue;
        double r = std::abs(ctx.b(n) - fit.alpha * std::log(static_cast<double>(n)));
        fit.max_residual = std::max(fit.max_residual, r);
        total += r;
    }
    fit.mean_residual = total / static_cast<double>(fit.admissible_count);
    return fit;
}

struct FinalResidualCheck {
    u64 witness_n = 0;
    double residual_m = 0;      // |b(m) - alpha log m|
    double bound = 0;           // |b(mn) - alpha log mn| + |b(n) - alpha log n|
    bool holds = false;
};

// The closing step: pick n coprime to m with n and mn non-exceptional,
// then |b(m) - alpha log m| <= |b(mn) - alpha log mn| + |b(n) - alpha log n| < 2 eps.
inline FinalResidualCheck final_residual_check(u64 m, double alpha, double eps,
                                               const LogContext& ctx, const ResidualOracle& oracle,
                                               u64 search_bound = 1'000'000) {
    if (m < 1) throw precondition_error("BadArgument", "need m >= 1");
    auto alpha_residual = [&](u128 v) { return std::abs(ctx.b(v) - alpha * log_u128(v)); };
    for (u64 n = 1; n <= search_bound; ++n) {
        if (std::gcd(n, m) != 1) continue;
        u128 mn = static_cast<u128>(m) * n;
        bool ok;
        try {
            ok = !oracle.is_exceptional(n) && !oracle.is_exceptional(mn) &&
                 alpha_residual(n) < eps && alpha_residual(mn) < eps;
        } catch (const Error&) {
            break;  // context range exhausted
        }
        if (!ok) continue;
        FinalResidualCheck chk;
        chk.witness_n = n;
        chk.residual_m = alpha_residual(m);
        chk.bound = alpha_residual(mn) + alpha_residual(n);
        chk.holds = chk.residual_m <= chk.bound + kCheckSlack && chk.bound < 2 * eps;
        return chk;
    }
    throw search_error("NoWitnessFound", "no coprime non-exceptional witness within bound");
}

}  // namespace normord

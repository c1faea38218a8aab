#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "normord/birch.hpp"
#include "normord/core.hpp"

namespace normord {

struct ProofParams {
    u64 m = 2, n = 3;
    double eps = 0.1;
    double eta = 0.1;   // in (0, 1/2)
    u128 S = 0;         // chain start threshold; 0 = auto-select

    void validate() const {
        if (m < 2 || n < 2) throw precondition_error("BadArgument", "need m, n >= 2");
        if (!(eps > 0)) throw precondition_error("BadEpsilon", "epsilon must be positive");
        if (!(eta > 0 && eta < 0.5))
            throw precondition_error("BadEta", "eta must lie in the open interval (0, 1/2)");
    }
};

enum class WindowSide { below, above };

// Largest s in ((1-eta)R, R) (side=below) or smallest t in (R, (1+eta)R)
// (side=above) with s = 1 (mod mn) and both s and multiplier*s
// non-exceptional. Window emptiness and exceptionality are reported as
// distinct failures: the first means the window is too short to contain
// the residue class, the second that S is too small for this epsilon.
inline u128 find_window_rep(const ProofParams& params, u128 R, WindowSide side,
                            const ResidualOracle& oracle, u64 multiplier) {
    params.validate();
    const u128 mod = static_cast<u128>(params.m) * params.n;
    const long double Rl = to_ld(R);
    bool any_candidate = false;

    if (side == WindowSide::below) {
        const long double lower = (1.0L - static_cast<long double>(params.eta)) * Rl;
        u128 s = R - 1;
        s -= (s % mod == 1 ? 0 : (s % mod + mod - 1) % mod);  // largest <= R-1 with s = 1 (mod mn)
        for (; s >= 1 && to_ld(s) > lower; s -= mod) {
            any_candidate = true;
            if (!oracle.is_exceptional(s) && !oracle.is_exceptional(s * multiplier)) return s;
            if (s < mod) break;
        }
    } else {
        const long double upper = (1.0L + static_cast<long double>(params.eta)) * Rl;
        u128 t = R + 1;
        if (t % mod != 1) t += (mod + 1 - t % mod) % mod;  // smallest >= R+1 with t = 1 (mod mn)
        for (; to_ld(t) < upper; t += mod) {
            any_candidate = true;
            if (!oracle.is_exceptional(t) && !oracle.is_exceptional(t * multiplier)) return t;
        }
    }
    if (!any_candidate)
        throw search_error("WindowEmpty", "no member of the residue class 1 (mod mn) in window");
    throw search_error("NoAdmissibleRep", "all residue-class members in window are exceptional");
}

struct ChainStep {
    u128 value = 0;             // s_i or t_j
    double residual = 0;        // |b - c| at the element
    double residual_mult = 0;   // |b - c| at m*s_i (resp. n*t_j)
};

struct ProofTrace {
    ProofParams params;
    std::size_t h = 0, k = 0;
    std::vector<ChainStep> s_chain;  // s_0 .. s_h
    std::vector<ChainStep> t_chain;  // t_0 .. t_k
    // Cached log-domain values for the inequality checks.
    double c_S = 0, c_m = 0, c_n = 0;
    std::vector<double> c_s, c_ms;   // c(s_i), c(m s_i)
    std::vector<double> c_t, c_nt;   // c(t_j), c(n t_j)
};

// Builds the s and t chains: s_0 in ((1-eta)S, S), then each next element
// in ((1-eta) m s_i, m s_i); t_0 in (S, (1+eta)S), then each next in
// (n t_j, (1+eta) n t_j). Every element is 1 (mod mn) and all four
// residuals per step stay below epsilon.
inline ProofTrace build_chains(const ProofParams& params, std::size_t h, std::size_t k,
                               const LogContext& ctx, const ResidualOracle& oracle) {
    params.validate();
    if (params.S < 2) throw precondition_error("BadThreshold", "S must be >= 2 (use auto_select_S)");
    ProofTrace trace;
    trace.params = params;
    trace.h = h;
    trace.k = k;
    trace.c_S = ctx.c(params.S);
    trace.c_m = ctx.c(params.m);
    trace.c_n = ctx.c(params.n);

    auto push = [&](std::vector<ChainStep>& chain, std::vector<double>& cs, std::vector<double>& cm,
                    u128 v, u64 mult) {
        ChainStep step;
        step.value = v;
        step.residual = std::abs(ctx.b(v) - ctx.c(v));
        step.residual_mult = std::abs(ctx.b(v * mult) - ctx.c(v * mult));
        chain.push_back(step);
        cs.push_back(ctx.c(v));
        cm.push_back(ctx.c(v * mult));
    };

    u128 R = params.S;
    for (std::size_t i = 0; i <= h; ++i) {
        u128 s = find_window_rep(params, R, WindowSide::below, oracle, params.m);
        push(trace.s_chain, trace.c_s, trace.c_ms, s, params.m);
        R = s * params.m;
    }
    R = params.S;
    for (std::size_t j = 0; j <= k; ++j) {
        u128 t = find_window_rep(params, R, WindowSide::above, oracle, params.n);
        push(trace.t_chain, trace.c_t, trace.c_nt, t, params.n);
        R = t * params.n;
    }
    return trace;
}

// Smallest power-of-two-scaled S whose windows admit a full chain build.
// The existence of a workable S is only asserted abstractly by the theory,
// so the doubling search is capped.
inline u128 auto_select_S(ProofParams params, std::size_t h, std::size_t k, const LogContext& ctx,
                          const ResidualOracle& oracle, u128 cap = u128(1) << 40) {
    params.validate();
    const double mn = static_cast<double>(params.m) * static_cast<double>(params.n);
    u128 S = static_cast<u128>(mn / params.eta) + 2;  // window length eta*S must exceed mn
    for (; S <= cap; S *= 2) {
        params.S = S;
        try {
            build_chains(params, h, k, ctx, oracle);
            return S;
        } catch (const Error& e) {
            if (e.code() != "WindowEmpty" && e.code() != "NoAdmissibleRep") throw;
        }
    }
    throw search_error("AutoSelectExhausted", "no workable S up to cap");
}

struct NamedCheck {
    std::string name;
    double lhs = 0, rhs = 0;
    bool holds = false;
    bool strict = false;
    double slack = 0;
};

struct ChainReport {
    std::vector<NamedCheck> checks;
    bool all_hold = true;

    void add(std::string name, double lhs, double rhs, bool strict_less) {
        NamedCheck c{std::move(name), lhs, rhs, false, strict_less, rhs - lhs};
        c.holds = strict_less ? (lhs < rhs + kCheckSlack) : (lhs <= rhs + kCheckSlack);
        all_hold = all_hold && c.holds;
        checks.push_back(c);
    }
};

// All four chain inequality families plus the per-step triangle bounds
// and the structural window/congruence invariants, in log domain.
inline ChainReport chain_inequalities_check(const ProofTrace& trace) {
    const ProofParams& p = trace.params;
    ChainReport rep;
    const double log_m = std::log(static_cast<double>(p.m));
    const double log_n = std::log(static_cast<double>(p.n));
    const double log_S = log_u128(p.S);
    const double log_1me = std::log1p(-p.eta);
    const double log_1pe = std::log1p(p.eta);
    const u128 mod = static_cast<u128>(p.m) * p.n;

    for (std::size_t i = 0; i < trace.s_chain.size(); ++i) {
        const std::string tag = "s[" + std::to_string(i) + "]";
        double di = static_cast<double>(i);
        // c(s_i) < c(S) + i c(m) + 3 i eps
        rep.add(tag + ": c-upper", trace.c_s[i], trace.c_S + di * trace.c_m + 3 * di * p.eps, true);
        // s_i > (1-eta)^{i+1} m^i S, in logs
        rep.add(tag + ": growth", (di + 1) * log_1me + di * log_m + log_S,
                log_u128(trace.s_chain[i].value), true);
        rep.add(tag + ": triangle |c(ms)-c(m)-c(s)|",
                std::abs(trace.c_ms[i] - trace.c_m - trace.c_s[i]), 3 * p.eps, true);
        rep.add(tag + ": congruence",
                std::abs(static_cast<double>(u64(trace.s_chain[i].value % mod)) - 1.0), 0.0, false);
        if (i > 0) {
            double prev = log_u128(trace.s_chain[i - 1].value);
            double cur = log_u128(trace.s_chain[i].value);
            rep.add(tag + ": window lower", log_1me + log_m + prev, cur, true);
            rep.add(tag + ": window upper", cur, log_m + prev, true);
        }
    }
    for (std::size_t j = 0; j < trace.t_chain.size(); ++j) {
        const std::string tag = "t[" + std::to_string(j) + "]";
        double dj = static_cast<double>(j);
        // c(t_j) > c(S) + j c(n) - 3 j eps
        rep.add(tag + ": c-lower", trace.c_S + dj * trace.c_n - 3 * dj * p.eps, trace.c_t[j], true);
        // t_j < (1+eta)^{j+1} n^j S
        rep.add(tag + ": growth", log_u128(trace.t_chain[j].value),
                (dj + 1) * log_1pe + dj * log_n + log_S, true);
        rep.add(tag + ": triangle |c(nt)-c(n)-c(t)|",
                std::abs(trace.c_nt[j] - trace.c_n - trace.c_t[j]), 3 * p.eps, true);
        rep.add(tag + ": congruence",
                std::abs(static_cast<double>(u64(trace.t_chain[j].value % mod)) - 1.0), 0.0, false);
        if (j > 0) {
            double prev = log_u128(trace.t_chain[j - 1].value);
            double cur = log_u128(trace.t_chain[j].value);
            rep.add(tag + ": window lower", log_n + prev, cur, true);
            rep.add(tag + ": window upper", cur, log_1pe + log_n + prev, true);
        }
    }
    for (const ChainStep& st : trace.s_chain) {
        if (st.residual >= p.eps || st.residual_mult >= p.eps) rep.all_hold = false;
    }
    for (const ChainStep& st : trace.t_chain) {
        if (st.residual >= p.eps || st.residual_mult >= p.eps) rep.all_hold = false;
    }
    return rep;
}

// Smallest eta in (0, 1/2) margin below the root of
// (1-eta)^{h+1} m^h = (1+eta)^{k+1} n^k; the gap function is strictly
// decreasing in eta, so bisection applies. Requires m^h > n^k.
inline double eta_select(u64 m, u64 n, std::size_t h, std::size_t k) {
    if (m < 2 || n < 2 || h == 0 || k == 0)
        throw precondition_error("BadArgument", "need m, n >= 2 and h, k >= 1");
    const double hm = static_cast<double>(h) * std::log(static_cast<double>(m));
    const double kn = static_cast<double>(k) * std::log(static_cast<double>(n));
    if (!(hm > kn))
        throw precondition_error("PreconditionViolated", "need h log m > k log n strictly");
    auto gap = [&](double eta) {
        return (h + 1.0) * std::log1p(-eta) + hm - ((k + 1.0) * std::log1p(eta) + kn);
    };
    double root;
    if (gap(0.5) > 0) {
        root = 0.5;  // the inequality holds on all of (0, 1/2)
    } else {
        double lo = 0.0, hi = 0.5;
        for (int iter = 0; iter < 200; ++iter) {
            double mid = 0.5 * (lo + hi);
            (gap(mid) > 0 ? lo : hi) = mid;
        }
        root = lo;
    }
    double eta = root * (1.0 - 1e-3);
    if (!(gap(eta) > 0)) throw Error(ErrorKind::internal, "EtaSelectFailed", "selected eta invalid");
    return eta;
}

struct ExponentBoundReport {
    bool chain_order_ok = false;  // s_h > t_k
    bool c_order_ok = false;      // c(s_h) >= c(t_k)
    double ratio = 0;             // h/k
    double bound = 0;             // (c(n) - 3 eps) / (c(m) + 3 eps)
    bool holds = false;
};

// From s_h > t_k and monotonicity of c: h c(m) + 3 h eps > k c(n) - 3 k eps,
// i.e. h/k > (c(n) - 3 eps)/(c(m) + 3 eps).
inline ExponentBoundReport exponent_bound_check(const ProofTrace& trace) {
    const ProofParams& p = trace.params;
    if (trace.k == 0) throw precondition_error("BadArgument", "k must be >= 1");
    if (trace.h >= trace.s_chain.size() || trace.k >= trace.t_chain.size())
        throw precondition_error("BadTrace", "trace shorter than declared h, k");
    ExponentBoundReport rep;
    u128 s_h = trace.s_chain[trace.h].value;
    u128 t_k = trace.t_chain[trace.k].value;
    rep.chain_order_ok = s_h > t_k;
    if (!rep.chain_order_ok)
        throw search_error("ChainOrderViolated", "s_h <= t_k: eta too large or S unlucky");
    rep.c_order_ok = trace.c_s[trace.h] >= trace.c_t[trace.k] - kCheckSlack;
    rep.ratio = static_cast<double>(trace.h) / static_cast<double>(trace.k);
    rep.bound = (trace.c_n - 3 * p.eps) / (trace.c_m + 3 * p.eps);
    rep.holds = rep.c_order_ok && rep.ratio > rep.bound - kCheckSlack;
    return rep;
}

// Pair (h, k) with the smallest k such that x < h/k <= x + delta, h
// minimal for that k. Continued-fraction convergents bound the scan: once
// consecutive convergent denominators q, q' satisfy 1/(q q') <= delta,
// some fraction with denominator <= q' lands in the window.
inline std::pair<u64, u64> rational_above(double x, double delta) {
    if (!(x > 0) || !(delta > 0))
        throw precondition_error("BadArgument", "need x > 0 and delta > 0");
    u64 scan_cap = 2;
    {
        double frac = x;
        u64 q_prev = 0, q = 1;
        for (int i = 0; i < 64; ++i) {
            double integral = std::floor(frac);
            u64 q_next = static_cast<u64>(integral) * q + q_prev;
            if (i > 0 && q_next > 0) {
                q_prev = q;
                q = q_next;
            } else if (i > 0) {
                break;
            }
            scan_cap = std::max(scan_cap, q + 1);
            if (q_prev > 0 && 1.0 / (static_cast<double>(q_prev) * static_cast<double>(q)) <= delta)
                break;
            double rem = frac - integral;
            if (rem < 1e-15) {
                // x is (numerically) rational with denominator q; the best
                // upper approximations then have gap 1/(k q), so k of order
                // 1/(delta q) suffices.
                scan_cap = std::max(scan_cap,
                                    static_cast<u64>(1.0 / (delta * static_cast<double>(q))) + q + 2);
                break;
            }
            frac = 1.0 / rem;
        }
    }
    for (u64 k = 1; k <= scan_cap; ++k) {
        u64 h = static_cast<u64>(std::floor(static_cast<double>(k) * x)) + 1;
        double ratio = static_cast<double>(h) / static_cast<double>(k);
        if (ratio > x && ratio <= x + delta) return {h, k};
    }
    throw Error(ErrorKind::internal, "ScanCapExceeded", "convergent-based scan cap too small");
}

struct LimitBoundStep {
    double delta = 0;
    u64 h = 0, k = 0;
    double eta = 0;
    u128 S = 0;
    double approx_gap = 0;   // h/k - x, at most delta
    ExponentBoundReport exponent;
    bool limit_holds = false;  // log n / log m >= (c(n)-3eps)/(c(m)+3eps)
    double limit_slack = 0;
};

struct LimitBoundReport {
    double x = 0;  // log n / log m
    std::vector<LimitBoundStep> steps;
    bool all_hold = true;
};

// Constructive version of the rationals-are-dense argument: for each
// delta, pick h/k just above log n / log m, run the full chain pipeline,
// and confirm the limiting inequality; the approximation gap shrinks with
// delta.
inline LimitBoundReport limit_bound_check(u64 m, u64 n, double eps, const LogContext& ctx,
                                          const ResidualOracle& oracle,
                                          const std::vector<double>& delta_schedule) {
    if (m < 2 || n < 2) throw precondition_error("BadArgument", "need m, n >= 2");
    LimitBoundReport rep;
    rep.x = std::log(static_cast<double>(n)) / std::log(static_cast<double>(m));
    const double c_m = ctx.c(m);
    const double c_n = ctx.c(n);
    for (double delta : delta_schedule) {
        LimitBoundStep step;
        step.delta = delta;
        auto [h, k] = rational_above(rep.x, delta);
        step.h = h;
        step.k = k;
        step.approx_gap = static_cast<double>(h) / static_cast<double>(k) - rep.x;
        step.eta = eta_select(m, n, h, k);
        ProofParams params{m, n, eps, step.eta, 0};
        params.S = auto_select_S(params, h, k, ctx, oracle);
        step.S = params.S;
        ProofTrace trace = build_chains(params, h, k, ctx, oracle);
        step.exponent = exponent_bound_check(trace);
        double bound = (c_n - 3 * eps) / (c_m + 3 * eps);
        step.limit_slack = rep.x - bound;
        step.limit_holds = rep.x >= bound - kCheckSlack;
        rep.all_hold = rep.all_hold && step.limit_holds && step.exponent.holds;
        rep.steps.push_back(step);
    }
    return rep;
}

}  // namespace normord

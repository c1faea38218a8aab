#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <random>
#include <string>
#include <vector>

#include "normord/core.hpp"
#include "normord/multfun.hpp"

namespace normord {

enum class CandidateSource { running_max, running_min_reversed, isotonic_fit_of_log_f, user };

inline const char* to_string(CandidateSource s) {
    switch (s) {
        case CandidateSource::running_max: return "running-max";
        case CandidateSource::running_min_reversed: return "running-min-reversed";
        case CandidateSource::isotonic_fit_of_log_f: return "isotonic-fit-of-log-f";
        case CandidateSource::user: return "user";
    }
    return "?";
}

// A non-decreasing candidate g over a contiguous range. g > 1 everywhere
// so that c(n) = log g(n) > 0; entries at or below 1 are clamped and the
// clamp count recorded (the theorem permits changing finitely many values).
struct MonotoneCandidate {
    u64 lo = 1;
    std::vector<double> g_values;
    CandidateSource source = CandidateSource::user;
    std::size_t clamped = 0;

    u64 hi() const { return lo + g_values.size() - 1; }
    double at(u64 n) const {
        if (n < lo || n > lo + g_values.size() - 1)
            throw precondition_error("RangeMismatch", "n outside candidate range");
        return g_values[n - lo];
    }
};

inline constexpr double kClampFloor = 1.0 + 1e-9;

inline MonotoneCandidate make_candidate(u64 lo, std::vector<double> values, CandidateSource source,
                                        bool clamp = true) {
    MonotoneCandidate c;
    c.lo = lo;
    c.g_values = std::move(values);
    c.source = source;
    if (clamp) {
        for (double& v : c.g_values) {
            if (v < kClampFloor) { v = kClampFloor; ++c.clamped; }
        }
    }
    return c;
}

// Least-squares non-decreasing fit via pool-adjacent-violators.
inline std::vector<double> pava(const std::vector<double>& values) {
    if (values.empty()) throw precondition_error("EmptyInput", "isotonic fit of empty sequence");
    struct Block {
        double sum;
        std::size_t count;
    };
    std::vector<Block> blocks;
    blocks.reserve(values.size());
    for (double v : values) {
        blocks.push_back({v, 1});
        while (blocks.size() > 1) {
            Block& a = blocks[blocks.size() - 2];
            Block& b = blocks.back();
            if (a.sum * static_cast<double>(b.count) <= b.sum * static_cast<double>(a.count)) break;
            a.sum += b.sum;
            a.count += b.count;
            blocks.pop_back();
        }
    }
    std::vector<double> out;
    out.reserve(values.size());
    for (const Block& blk : blocks) {
        double mean = blk.sum / static_cast<double>(blk.count);
        out.insert(out.end(), blk.count, mean);
    }
    return out;
}

// Raw fit, no clamping: callers using the result as a candidate g apply
// the g > 1 clamp themselves (see isotonic_candidate_of).
inline MonotoneCandidate isotonic_fit(const std::vector<double>& values, u64 lo = 1) {
    return make_candidate(lo, pava(values), CandidateSource::isotonic_fit_of_log_f, false);
}

// Upper = running maximum (least non-decreasing majorant),
// lower = reversed running minimum (greatest non-decreasing minorant).
struct Envelopes {
    MonotoneCandidate lower;
    MonotoneCandidate upper;
};

inline Envelopes monotone_envelopes(const std::vector<double>& values, u64 lo = 1) {
    if (values.empty()) throw precondition_error("EmptyInput", "envelopes of empty sequence");
    std::vector<double> up(values), down(values);
    for (std::size_t i = 1; i < up.size(); ++i) up[i] = std::max(up[i], up[i - 1]);
    for (std::size_t i = down.size() - 1; i-- > 0;) down[i] = std::min(down[i], down[i + 1]);
    return {make_candidate(lo, std::move(down), CandidateSource::running_min_reversed, false),
            make_candidate(lo, std::move(up), CandidateSource::running_max, false)};
}

// Candidate g built from f over [lo,hi]: the isotonic fit of log f,
// exponentiated back.
inline MonotoneCandidate isotonic_candidate_of(const FunctionId& f, u64 lo, u64 hi) {
    SieveSegment seg = sieve_range(f, lo, hi);
    std::vector<double> logs = log_transform(seg);
    std::vector<double> fit = pava(logs);
    for (double& v : fit) v = std::exp(v);
    return make_candidate(lo, std::move(fit), CandidateSource::isotonic_fit_of_log_f);
}

// The exceptions: n with f(n)/g(n) outside the open interval (1-eps, 1+eps).
// Ratios landing exactly on 1 +- eps count as exceptional.
struct ExceptionalSet {
    u64 lo = 1, hi = 1;
    double epsilon = 0;
    std::vector<bool> membership;
    u64 count = 0;

    bool contains(u64 n) const {
        if (n < lo || n > hi) throw precondition_error("RangeMismatch", "n outside set range");
        return membership[n - lo];
    }
};

inline bool ratio_exceptional(double ratio, double eps) {
    return !(ratio > 1.0 - eps && ratio < 1.0 + eps);
}

inline ExceptionalSet exceptional_set(const FunctionId& f, const MonotoneCandidate& g,
                                      u64 lo, u64 hi, double eps) {
    if (eps <= 0) throw precondition_error("BadEpsilon", "epsilon must be positive");
    if (lo < g.lo || hi > g.hi())
        throw precondition_error("RangeMismatch", "candidate does not cover requested range");
    SieveSegment seg = sieve_range(f, lo, hi);
    ExceptionalSet set;
    set.lo = lo;
    set.hi = hi;
    set.epsilon = eps;
    set.membership.assign(seg.size(), false);
    for (std::size_t i = 0; i < seg.size(); ++i) {
        double ratio = seg.values[i] / g.at(lo + i);
        if (ratio_exceptional(ratio, eps)) {
            set.membership[i] = true;
            ++set.count;
        }
    }
    return set;
}

enum class VerdictHint { shrinking, flat, growing };

inline const char* to_string(VerdictHint v) {
    switch (v) {
        case VerdictHint::shrinking: return "shrinking";
        case VerdictHint::flat: return "flat";
        case VerdictHint::growing: return "growing";
    }
    return "?";
}

struct DensityCheckpoint {
    u64 x;
    u64 count;
    double density;
    double ci95_half_width = 0;  // nonzero only for sampled checkpoints
    bool sampled = false;
};

struct DensityReport {
    double epsilon = 0;
    std::vector<DensityCheckpoint> checkpoints;
    VerdictHint verdict = VerdictHint::flat;
};

// Sign of the least-squares slope of density vs log x, dead-band 1e-3.
inline VerdictHint density_verdict(const std::vector<DensityCheckpoint>& cps) {
    if (cps.size() < 2) return VerdictHint::flat;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = static_cast<double>(cps.size());
    for (const auto& cp : cps) {
        double x = std::log(static_cast<double>(cp.x));
        sx += x;
        sy += cp.density;
        sxx += x * x;
        sxy += x * cp.density;
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) return VerdictHint::flat;
    double slope = (n * sxy - sx * sy) / denom;
    if (slope < -1e-3) return VerdictHint::shrinking;
    if (slope > 1e-3) return VerdictHint::growing;
    return VerdictHint::flat;
}

struct DensityOptions {
    u64 full_scan_limit = 100'000'000;  // beyond this, uniform sampling
    u64 sample_size = 1'000'000;
    u64 seed = 1;
    u64 segment_size = 1'000'000;
    unsigned threads = 1;
};

// Densities of the exceptional set at increasing checkpoints. Counts come
// from a single streaming pass in segment order, so parallel segment
// evaluation with ordered reduction gives the same numbers.
inline DensityReport density_trend(const FunctionId& f, const MonotoneCandidate& g, double eps,
                                   const std::vector<u64>& checkpoints,
                                   const DensityOptions& opt = {}) {
    if (eps <= 0) throw precondition_error("BadEpsilon", "epsilon must be positive");
    for (std::size_t i = 1; i < checkpoints.size(); ++i)
        if (checkpoints[i] <= checkpoints[i - 1])
            throw precondition_error("BadCheckpoints", "checkpoints must be strictly increasing");

    DensityReport rep;
    rep.epsilon = eps;
    u64 count = 0;
    u64 next_n = g.lo;
    for (u64 x : checkpoints) {
        DensityCheckpoint cp{x, 0, 0.0};
        if (x <= opt.full_scan_limit) {
            // Segments are independent; futures are collected in segment
            // order so the reduction is deterministic.
            std::vector<std::future<u64>> futures;
            for (u64 lo = next_n; lo <= x; lo += opt.segment_size) {
                u64 hi = std::min(x, lo + opt.segment_size - 1);
                futures.push_back(std::async(
                    opt.threads > 1 ? std::launch::async : std::launch::deferred,
                    [&f, &g, lo, hi, eps] { return exceptional_set(f, g, lo, hi, eps).count; }));
                if (futures.size() >= opt.threads) {
                    count += futures.front().get();
                    futures.erase(futures.begin());
                }
            }
            for (auto& fut : futures) count += fut.get();
            next_n = x + 1;
            cp.count = count;
            cp.density = static_cast<double>(count) / static_cast<double>(x);
        } else {
            // Uniform sample over [g.lo, x] with a 95% binomial interval.
            std::mt19937_64 rng(opt.seed ^ x);
            std::uniform_int_distribution<u64> dist(g.lo, x);
            u64 hits = 0;
            for (u64 i = 0; i < opt.sample_size; ++i) {
                u64 n = dist(rng);
                double ratio = eval_at(f, n) / g.at(n);
                if (ratio_exceptional(ratio, eps)) ++hits;
            }
            double p = static_cast<double>(hits) / static_cast<double>(opt.sample_size);
            cp.sampled = true;
            cp.density = p;
            cp.count = static_cast<u64>(p * static_cast<double>(x));
            cp.ci95_half_width = 1.96 * std::sqrt(p * (1 - p) / static_cast<double>(opt.sample_size));
        }
        rep.checkpoints.push_back(cp);
    }
    rep.verdict = density_verdict(rep.checkpoints);
    return rep;
}

}  // namespace normord

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "normord/core.hpp"
#include "normord/factor.hpp"

namespace normord {

enum class ValueKind { exact_integer, real };

// A multiplicative function given by its values on prime powers.
// Unspecified (p, e) with e > 1 falls back to value(p,1)^e only when the
// spec declares itself completely multiplicative on prime powers;
// otherwise querying such a pair is an error.
struct MultiplicativeSpec {
    std::string name;
    std::function<double(u64 p, unsigned e)> prime_power_value;
    ValueKind value_kind = ValueKind::real;
};

// Loads a spec from a JSON-style map of "p^e" (or "p") keys to values.
// Kept here as data; the CLI does the actual JSON parsing.
inline MultiplicativeSpec spec_from_table(std::string name,
                                          std::map<std::pair<u64, unsigned>, double> table,
                                          bool completely_multiplicative,
                                          ValueKind kind = ValueKind::real) {
    auto tbl = std::make_shared<std::map<std::pair<u64, unsigned>, double>>(std::move(table));
    MultiplicativeSpec spec;
    spec.name = std::move(name);
    spec.value_kind = kind;
    spec.prime_power_value = [tbl, completely_multiplicative](u64 p, unsigned e) -> double {
        auto it = tbl->find({p, e});
        if (it != tbl->end()) return it->second;
        if (e > 1 && completely_multiplicative) {
            auto base = tbl->find({p, 1});
            if (base != tbl->end()) return std::pow(base->second, static_cast<double>(e));
        }
        throw precondition_error("UnspecifiedPrimePower",
                                 "custom spec has no value for p=" + std::to_string(p) +
                                     " e=" + std::to_string(e));
    };
    return spec;
}

// One of the builtin multiplicative functions or a custom spec.
class FunctionId {
public:
    static FunctionId phi() { return FunctionId(Kind::phi, 0.0, "phi"); }
    static FunctionId tau() { return FunctionId(Kind::tau, 0.0, "tau"); }
    static FunctionId sigma_k(unsigned k) {
        return FunctionId(Kind::sigma_k, static_cast<double>(k), "sigma_" + std::to_string(k));
    }
    static FunctionId power_alpha(double alpha) {
        return FunctionId(Kind::power_alpha, alpha, "power_" + std::to_string(alpha));
    }
    static FunctionId mu_squared() { return FunctionId(Kind::mu_squared, 0.0, "mu_squared"); }
    static FunctionId custom(MultiplicativeSpec spec) {
        FunctionId id(Kind::custom, 0.0, spec.name);
        id.custom_ = std::make_shared<MultiplicativeSpec>(std::move(spec));
        return id;
    }

    const std::string& name() const { return name_; }

    ValueKind value_kind() const {
        switch (kind_) {
            case Kind::power_alpha: return ValueKind::real;
            case Kind::custom: return custom_->value_kind;
            default: return ValueKind::exact_integer;
        }
    }

    double prime_power_value(u64 p, unsigned e) const {
        switch (kind_) {
            case Kind::phi: {
                double pe1 = std::pow(static_cast<double>(p), static_cast<double>(e - 1));
                return pe1 * (static_cast<double>(p) - 1.0);
            }
            case Kind::tau:
                return static_cast<double>(e + 1);
            case Kind::sigma_k: {
                // sum_{i=0..e} p^{ik}
                double pk = std::pow(static_cast<double>(p), param_);
                double s = 1.0, t = 1.0;
                for (unsigned i = 1; i <= e; ++i) { t *= pk; s += t; }
                return s;
            }
            case Kind::power_alpha:
                return std::pow(static_cast<double>(p), param_ * static_cast<double>(e));
            case Kind::mu_squared:
                return e == 1 ? 1.0 : 0.0;
            case Kind::custom:
                return custom_->prime_power_value(p, e);
        }
        return 0.0;
    }

private:
    enum class Kind { phi, tau, sigma_k, power_alpha, mu_squared, custom };
    FunctionId(Kind k, double param, std::string name)
        : kind_(k), param_(param), name_(std::move(name)) {}

    Kind kind_;
    double param_;
    std::string name_;
    std::shared_ptr<MultiplicativeSpec> custom_;
};

// f(n) by full factorization and the prime-power map. Exact for the
// exact-integer builtins as long as the value fits a double mantissa.
inline double eval_at(const FunctionId& f, u64 n, const FactorizationBudget& budget = {}) {
    if (n < 1) throw precondition_error("NonpositiveArgument", "n must be >= 1");
    double v = 1.0;
    for (const auto& pp : factorize(n, budget)) v *= f.prime_power_value(pp.p, pp.e);
    return v;
}

// f over a contiguous range, with smallest prime factors as a byproduct.
struct SieveSegment {
    u64 lo = 1, hi = 1;               // inclusive
    std::vector<double> values;       // f(lo..hi)
    std::vector<u64> spf;             // smallest prime factor (spf(1) = 1)

    std::size_t size() const { return values.size(); }
    double at(u64 n) const {
        if (n < lo || n > hi) throw precondition_error("RangeMismatch", "n outside segment");
        return values[n - lo];
    }
};

inline constexpr u64 kDefaultSegmentBudget = u64(1) << 28;

// Segmented evaluation: each base prime p <= sqrt(hi) strips its full
// power from the residuals; a residual > 1 afterwards is a prime factor
// with exponent 1.
inline SieveSegment sieve_range(const FunctionId& f, u64 lo, u64 hi,
                                u64 segment_budget = kDefaultSegmentBudget) {
    if (lo < 1 || lo > hi) throw precondition_error("BadRange", "need 1 <= lo <= hi");
    if (hi - lo + 1 > segment_budget)
        throw precondition_error("SegmentTooLarge", "segment exceeds memory budget");

    const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
    SieveSegment seg;
    seg.lo = lo;
    seg.hi = hi;
    seg.values.assign(len, 1.0);
    seg.spf.assign(len, 0);

    std::vector<u64> residual(len);
    for (std::size_t i = 0; i < len; ++i) residual[i] = lo + i;

    u64 root = static_cast<u64>(std::sqrt(static_cast<double>(hi)));
    while ((root + 1) * (root + 1) <= hi) ++root;
    for (u64 p : primes_up_to(root)) {
        u64 start = ((lo + p - 1) / p) * p;
        for (u64 n = start; n <= hi; n += p) {
            std::size_t i = static_cast<std::size_t>(n - lo);
            unsigned e = 0;
            while (residual[i] % p == 0) { residual[i] /= p; ++e; }
            if (e > 0) {
                seg.values[i] *= f.prime_power_value(p, e);
                if (seg.spf[i] == 0) seg.spf[i] = p;
            }
        }
    }
    for (std::size_t i = 0; i < len; ++i) {
        if (residual[i] > 1) {
            seg.values[i] *= f.prime_power_value(residual[i], 1);
            if (seg.spf[i] == 0) seg.spf[i] = residual[i];
        }
        if (lo + i == 1) seg.spf[i] = 1;
    }
    return seg;
}

// b(n) = log f(n) per entry. f(n) = 0 is rejected: the zero function is
// outside the multiplicative setup studied here.
inline std::vector<double> log_transform(const SieveSegment& seg) {
    std::vector<double> out(seg.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(seg.values[i] > 0.0))
            throw precondition_error("NonpositiveValue",
                                     "f(" + std::to_string(seg.lo + i) + ") <= 0");
        out[i] = std::log(seg.values[i]);
    }
    return out;
}

}  // namespace normord

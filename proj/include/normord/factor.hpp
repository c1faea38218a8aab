#pragma once

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "normord/core.hpp"

namespace normord {

struct FactorizationBudget {
    u64 trial_limit = 10'000'000;   // trial division by primes up to this
    u64 rho_iterations = 1'000'000; // Pollard-rho iteration cap per split
};

struct PrimePower {
    u64 p;
    unsigned e;
};

using Factorization = std::vector<PrimePower>;

namespace detail {

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod(u64 a, u64 d, u64 m) {
    u64 r = 1;
    a %= m;
    while (d) {
        if (d & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        d >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

// Brent's variant of Pollard rho. Returns 0 when the iteration cap is hit.
inline u64 pollard_rho(u64 n, u64 max_iter) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1; c < 64; ++c) {
        u64 x = 2, y = 2, d = 1;
        u64 iter = 0;
        u64 saved_x = x;
        u64 lam = 1, power = 1;
        while (d == 1) {
            if (iter++ > max_iter) return 0;
            if (lam == power) {
                saved_x = y;
                power <<= 1;
                lam = 0;
            }
            y = mulmod(y, y, n) + c;
            if (y >= n) y -= n;
            ++lam;
            u64 diff = saved_x > y ? saved_x - y : y - saved_x;
            d = std::gcd(diff, n);
            (void)x;
        }
        if (d != n) return d;
    }
    return 0;
}

}  // namespace detail

// Full factorization: trial division to the budget limit, then
// Miller-Rabin + Pollard rho on the residual.
inline Factorization factorize(u64 n, const FactorizationBudget& budget = {}) {
    if (n == 0) throw precondition_error("ZeroInput", "cannot factor 0");
    Factorization out;
    for (u64 p = 2; p * p <= n && p <= budget.trial_limit; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            unsigned e = 0;
            while (n % p == 0) { n /= p; ++e; }
            out.push_back({p, e});
        }
    }
    if (n > 1) {
        std::vector<u64> stack{n};
        while (!stack.empty()) {
            u64 v = stack.back();
            stack.pop_back();
            if (detail::is_prime(v)) {
                auto it = std::find_if(out.begin(), out.end(), [v](const PrimePower& pp) { return pp.p == v; });
                if (it != out.end()) ++it->e;
                else out.push_back({v, 1});
                continue;
            }
            u64 d = detail::pollard_rho(v, budget.rho_iterations);
            if (d == 0 || d == v) {
                throw search_error("FactorizationBudgetExceeded",
                                   "could not factor " + std::to_string(v) + " within budget");
            }
            stack.push_back(d);
            stack.push_back(v / d);
        }
    }
    std::sort(out.begin(), out.end(), [](const PrimePower& a, const PrimePower& b) { return a.p < b.p; });
    return out;
}

// Primes up to limit inclusive.
inline std::vector<u64> primes_up_to(u64 limit) {
    std::vector<u64> ps;
    if (limit < 2) return ps;
    std::vector<bool> comp(limit + 1, false);
    for (u64 p = 2; p <= limit; ++p) {
        if (comp[p]) continue;
        ps.push_back(p);
        for (u64 q = p * p; q <= limit; q += p) comp[q] = true;
    }
    return ps;
}

}  // namespace normord

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace normord {

// Chain elements in the proof explorer grow like m^h * S and overflow
// 64 bits for fine rational approximations, so wide integers are used
// throughout the proof machinery.
using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline long double to_ld(u128 v) {
    return static_cast<long double>(static_cast<u64>(v >> 64)) * 18446744073709551616.0L +
           static_cast<long double>(static_cast<u64>(v));
}

inline double log_u128(u128 v) {
    if (v == 0) throw std::domain_error("log of zero");
    return static_cast<double>(std::log(to_ld(v)));
}

inline std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
        v /= 10;
    }
    return {s.rbegin(), s.rend()};
}

// Error taxonomy shared by all modules. The CLI maps categories to exit
// codes: precondition -> 2, search exhaustion -> 3.
enum class ErrorKind {
    precondition,
    search_exhausted,
    internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& msg)
        : std::runtime_error(msg), kind_(kind), code_(std::move(code)) {}
    ErrorKind kind() const { return kind_; }
    const std::string& code() const { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

inline Error precondition_error(std::string code, const std::string& msg) {
    return Error(ErrorKind::precondition, std::move(code), msg);
}

inline Error search_error(std::string code, const std::string& msg) {
    return Error(ErrorKind::search_exhausted, std::move(code), msg);
}

// Absolute slack absorbing floating rounding in every inequality check.
inline constexpr double kCheckSlack = 1e-12;

}  // namespace normord

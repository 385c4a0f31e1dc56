#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qsym {

/// Malformed or out-of-range input.
struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A computation would exceed one of the configured size caps.
struct guard_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace config {

inline std::uint64_t env_or(const char* name, std::uint64_t fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    char* end = nullptr;
    unsigned long long x = std::strtoull(v, &end, 10);
    if (end == v || *end != '\0' || x == 0) return fallback;
    return x;
}

inline constexpr std::uint64_t default_max_n = 4096;
inline constexpr std::uint64_t default_max_dense = 1000000;
inline constexpr std::uint64_t default_max_sparse = 10000000;

// group order cap (QSYM_MAX_N)
inline std::uint64_t max_n() { return env_or("QSYM_MAX_N", default_max_n); }
// dense entry cap (QSYM_MAX_DENSE)
inline std::uint64_t max_dense() { return env_or("QSYM_MAX_DENSE", default_max_dense); }
// sparse nonzero cap (QSYM_MAX_SPARSE)
inline std::uint64_t max_sparse() { return env_or("QSYM_MAX_SPARSE", default_max_sparse); }

inline void require_dense(std::uint64_t entries, const std::string& what) {
    if (entries > max_dense())
        throw guard_error(what + ": " + std::to_string(entries) +
                          " dense entries exceed the cap of " + std::to_string(max_dense()));
}

inline void require_sparse(std::uint64_t entries, const std::string& what) {
    if (entries > max_sparse())
        throw guard_error(what + ": " + std::to_string(entries) +
                          " nonzeros exceed the cap of " + std::to_string(max_sparse()));
}

}  // namespace config
}  // namespace qsym

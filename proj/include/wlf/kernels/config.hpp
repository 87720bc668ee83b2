#pragma once

#include <cstdint>
#include <string>

#include "wlf/errors.hpp"

namespace wlf::kernels {

enum class Algorithm { wl, iwl, niwl, two_lwl, two_wl };

enum class HashMode { multiset, set };

inline const char *to_string(Algorithm a) {
    switch (a) {
    case Algorithm::wl: return "WL";
    case Algorithm::iwl: return "iWL";
    case Algorithm::niwl: return "niWL";
    case Algorithm::two_lwl: return "2-LWL";
    case Algorithm::two_wl: return "2-WL";
    }
    return "?";
}

inline const char *to_string(HashMode h) {
    return h == HashMode::multiset ? "mset" : "set";
}

inline Algorithm algorithm_from_string(const std::string &s) {
    if (s == "WL") return Algorithm::wl;
    if (s == "iWL") return Algorithm::iwl;
    if (s == "niWL") return Algorithm::niwl;
    if (s == "2-LWL") return Algorithm::two_lwl;
    if (s == "2-WL") return Algorithm::two_wl;
    throw ValidationError("unknown WL algorithm '" + s + "'");
}

inline HashMode hash_from_string(const std::string &s) {
    if (s == "mset") return HashMode::multiset;
    if (s == "set") return HashMode::set;
    throw ValidationError("unknown hash mode '" + s + "'");
}

struct KernelConfig {
    Algorithm algorithm = Algorithm::wl;
    int iterations = 4;
    HashMode hash = HashMode::multiset;
    // Pair-state guard for the quadratic algorithms: graphs whose
    // pair-state count exceeds this are refused rather than degraded.
    std::uint64_t max_pair_states = 4'000'000;

    bool operator==(const KernelConfig &) const = default;
};

} // namespace wlf::kernels

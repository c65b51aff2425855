#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

namespace nforge {

// Desk-scale resource bounds. Subgroup enumeration, engine dimensions and
// pairing-matrix sizes refuse (BoundExceeded) instead of grinding forever.
struct Config {
    std::int64_t max_group_order = 10000;   // full element enumeration bound
    std::int64_t max_scan_order = 2000000;  // linear scans without storage
    std::int64_t max_engine_dim = 200000;   // basis size of a double engine
    std::int64_t max_words_per_degree = 20000;
    int default_max_degree = 12;

    static Config from_env() {
        Config c;
        if (const char* s = std::getenv("NICHOLS_FORGE_MAX_GROUP_ORDER")) {
            char* end = nullptr;
            long long v = std::strtoll(s, &end, 10);
            if (end && *end == '\0' && v > 0) c.max_group_order = v;
        }
        return c;
    }
};

inline const Config& config() {
    static const Config c = Config::from_env();
    return c;
}

} // namespace nforge

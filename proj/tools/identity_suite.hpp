#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace weylab::cli {

struct Check {
    std::string name;
    double value{0.0};
    double tolerance{0.0};
    int grid{0};
    double seconds{0.0};

    bool passed() const { return value <= tolerance; }
};

struct IdentityOptions {
    int n{32};
    std::uint64_t seed{0};
    int samples{5};
    std::map<std::string, double> tolerance; // overrides by check name
    int threads{1};
};

// Grid the continuum-route checks fall back to when the requested one is too coarse.
inline constexpr int kRouteGrid = 64;

const std::map<std::string, double>& default_tolerances();

std::vector<Check> run_identity_suite(const IdentityOptions& options);

} // namespace weylab::cli

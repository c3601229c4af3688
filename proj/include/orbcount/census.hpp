#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "orbcount/poly.hpp"

namespace orbcount {

class CensusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CountKernelConfig {
    bool include_boundary = true;  // ||x|| <= T
    int threads = 1;
    std::vector<long double> schedule;  // strictly increasing checkpoints T
};

struct Checkpoint {
    long double T = 0;
    std::uint64_t count = 0;
    long double ratio = 0;  // count / T^d
};

struct CensusReport {
    std::string poly;
    int n = 0;
    int d = 0;  // n(n-1)/2
    std::vector<Checkpoint> checkpoints;
    long double slope_fit = 0;  // least squares C in count ~ C T^d over the trailing half
    std::optional<long double> reference_constant;
    std::optional<long double> relative_deviation;  // slope_fit / reference - 1
    std::uint64_t sample_checked = 0;  // counted matrices recomputed exactly
    std::uint64_t sample_failed = 0;
};

/// Geometric checkpoints t_min, t_min*factor, ... ending exactly at t_max.
std::vector<long double> geometric_schedule(long double t_min, long double t_max, long double factor = 1.4142135623730951L);

/// Integer matrices [[a,b],[c,d]] with characteristic polynomial chi and
/// a^2+b^2+c^2+d^2 <= T^2.
std::uint64_t count_points_n2(const IntPoly& chi, long double T, const CountKernelConfig& config = {});

/// Nested entry loops; n = 2 or 3 (T <= 60 for n = 3).
std::uint64_t count_points_bruteforce(const IntPoly& chi, long double T, bool include_boundary = true);

/// Counts at every checkpoint of config.schedule in one sweep.
CensusReport census_series(const IntPoly& chi, const CountKernelConfig& config,
                           std::optional<long double> reference_constant = std::nullopt);

}  // namespace orbcount

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace slowent {

/// Scale families a_chi(n), indexed by chi >= 0.
enum class ScaleFamily {
    polynomial,             // n^chi
    exponential,            // e^{chi n}
    stretched_exponential,  // e^{n^chi}
    log_polynomial,         // n (log n)^chi
};

std::string_view to_string(ScaleFamily family);
ScaleFamily parse_scale_family(std::string_view name);

/// a_chi(n). Requires n >= 1 (n >= 2 for log-polynomial, where log 1 = 0).
double scale_eval(ScaleFamily family, double chi, std::int64_t n);

struct CountPoint {
    std::int64_t n = 0;
    double count = 0.0;
};

struct EntropyEstimate {
    double exponent = 0.0;
    std::vector<CountPoint> record_subsequence;
    double fit_residual = 0.0;  // max absolute residual on the record points
    std::pair<std::int64_t, std::int64_t> n_range{0, 0};
    int iterations = 0;
};

/// Fits sup{chi : limsup count(n)/a_chi(n) > 0} from finite data.
///
/// Only the upper half of the transformed n range (at least its last 4
/// points) is used, and only record points enter the regression: a point is
/// a record when count(n)/a_s(n) comes within counting noise (sqrt(count))
/// of the running maximum at the current slope s and its count strictly
/// exceeds the previous record count. The slope starts from an ordinary fit
/// over that half and is refit on the records until the record set stops
/// changing (at most five rounds). Negative slopes are reported as 0. If the
/// records at the final slope stop before the last third of the range (in
/// transformed n), the exponent is lowered to the largest slope whose records
/// still reach it, 0 if none does.
///
/// Needs at least 8 points with strictly increasing n and positive counts
/// (counts > 1 for the stretched-exponential family).
EntropyEstimate exponent_fit(std::span<const CountPoint> counts, ScaleFamily family);

}  // namespace slowent

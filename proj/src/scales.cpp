#include "slowent/scales.hpp"

#include <algorithm>
#include <cmath>

#include "slowent/errors.hpp"

namespace slowent {

std::string_view to_string(ScaleFamily family) {
    switch (family) {
        case ScaleFamily::polynomial: return "polynomial";
        case ScaleFamily::exponential: return "exponential";
        case ScaleFamily::stretched_exponential: return "stretched-exponential";
        case ScaleFamily::log_polynomial: return "log-polynomial";
    }
    return "unknown";
}

ScaleFamily parse_scale_family(std::string_view name) {
    if (name == "polynomial") return ScaleFamily::polynomial;
    if (name == "exponential") return ScaleFamily::exponential;
    if (name == "stretched-exponential") return ScaleFamily::stretched_exponential;
    if (name == "log-polynomial") return ScaleFamily::log_polynomial;
    throw ConstructionError("unknown scale family '" + std::string(name) + "'");
}

double scale_eval(ScaleFamily family, double chi, std::int64_t n) {
    if (chi < 0) throw DomainError("scale parameter chi must be nonnegative");
    if (n < 1) throw DomainError("scale evaluated at n < 1");
    const double x = static_cast<double>(n);
    switch (family) {
        case ScaleFamily::polynomial: return std::pow(x, chi);
        case ScaleFamily::exponential: return std::exp(chi * x);
        case ScaleFamily::stretched_exponential: return std::exp(std::pow(x, chi));
        case ScaleFamily::log_polynomial:
            if (n < 2) throw DomainError("log-polynomial scale needs n >= 2");
            return x * std::pow(std::log(x), chi);
    }
    throw DomainError("unknown scale family");
}

namespace {

struct Transformed {
    double x = 0.0;
    double y = 0.0;
};

Transformed transform(ScaleFamily family, const CountPoint& p) {
    const double n = static_cast<double>(p.n);
    switch (family) {
        case ScaleFamily::polynomial: return {std::log(n), std::log(p.count)};
        case ScaleFamily::exponential: return {n, std::log(p.count)};
        case ScaleFamily::stretched_exponential:
            if (p.count <= 1.0) throw DomainError("stretched-exponential fit needs counts > 1");
            return {std::log(n), std::log(std::log(p.count))};
        case ScaleFamily::log_polynomial:
            if (p.n < 2) throw DomainError("log-polynomial fit needs n >= 2");
            return {std::log(std::log(n)), std::log(p.count) - std::log(n)};
    }
    throw DomainError("unknown scale family");
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LineFit least_squares(const std::vector<Transformed>& pts, const std::vector<std::size_t>& idx) {
    if (idx.size() < 2) return {0.0, idx.empty() ? 0.0 : pts[idx.front()].y};
    double mx = 0, my = 0;
    for (auto i : idx) {
        mx += pts[i].x;
        my += pts[i].y;
    }
    mx /= static_cast<double>(idx.size());
    my /= static_cast<double>(idx.size());
    double sxx = 0, sxy = 0;
    for (auto i : idx) {
        sxx += (pts[i].x - mx) * (pts[i].x - mx);
        sxy += (pts[i].x - mx) * (pts[i].y - my);
    }
    if (sxx <= 0) return {0.0, my};
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

// A count c is treated as uncertain by sqrt(c): a point within that band of
// the running maximum still counts as a record.
std::vector<std::size_t> records_at(const std::vector<Transformed>& pts, std::span<const CountPoint> counts,
                                    ScaleFamily family, double slope, std::size_t first) {
    std::vector<std::size_t> rec{first};
    double running_max = pts[first].y - slope * pts[first].x;
    for (std::size_t i = first + 1; i < pts.size(); ++i) {
        const double r = pts[i].y - slope * pts[i].x;
        CountPoint up = counts[i];
        up.count += std::sqrt(up.count);
        const double tol = transform(family, up).y - pts[i].y + 1e-9 * std::max(1.0, std::abs(running_max));
        if (r >= running_max - tol && counts[i].count > counts[rec.back()].count) rec.push_back(i);
        running_max = std::max(running_max, r);
    }
    return rec;
}

}  // namespace

EntropyEstimate exponent_fit(std::span<const CountPoint> counts, ScaleFamily family) {
    if (counts.size() < 8) throw InsufficientDataError("exponent fit needs at least 8 points");
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (!(counts[i].count > 0)) throw DomainError("exponent fit needs positive counts");
        if (counts[i].n < 1) throw DomainError("exponent fit needs n >= 1");
        if (i > 0 && counts[i].n <= counts[i - 1].n) throw DomainError("exponent fit needs strictly increasing n");
    }

    std::vector<Transformed> pts;
    pts.reserve(counts.size());
    for (const auto& c : counts) pts.push_back(transform(family, c));

    // the limsup only sees the tail: records start at the upper half of the
    // transformed n range
    const double mid_x = 0.5 * (pts.front().x + pts.back().x);
    std::size_t first = 0;
    while (pts[first].x < mid_x) ++first;
    first = std::min(first, pts.size() - 4);

    std::vector<std::size_t> tail;
    for (std::size_t i = first; i < pts.size(); ++i) tail.push_back(i);
    LineFit fit = least_squares(pts, tail);
    double slope = std::max(0.0, fit.slope);

    std::vector<std::size_t> rec = records_at(pts, counts, family, slope, first);
    int rounds = 0;
    for (; rounds < 5; ++rounds) {
        fit = least_squares(pts, rec);
        slope = std::max(0.0, fit.slope);
        auto next = records_at(pts, counts, family, slope, first);
        if (next == rec) {
            ++rounds;
            break;
        }
        rec = std::move(next);
    }
    fit = least_squares(pts, rec);
    slope = std::max(0.0, fit.slope);

    // records that die out before the last third of the range mean the
    // counts stopped growing at this rate; back off to the largest slope
    // whose records still reach it
    const double tail_x = pts.front().x + (pts.back().x - pts.front().x) * 2.0 / 3.0;
    auto reaches_tail = [&](double s) { return pts[records_at(pts, counts, family, s, first).back()].x >= tail_x; };
    if (!reaches_tail(slope)) {
        double lo = 0.0, hi = slope;
        if (reaches_tail(lo)) {
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (reaches_tail(mid) ? lo : hi) = mid;
            }
        }
        slope = lo;
        rec = records_at(pts, counts, family, slope, first);
    }

    double intercept = 0.0;
    for (auto i : rec) intercept += pts[i].y - slope * pts[i].x;
    intercept /= static_cast<double>(rec.size());
    double residual = 0.0;
    for (auto i : rec) residual = std::max(residual, std::abs(pts[i].y - (intercept + slope * pts[i].x)));

    EntropyEstimate out;
    out.exponent = slope;
    out.fit_residual = residual;
    out.n_range = {counts.front().n, counts.back().n};
    out.iterations = rounds;
    out.record_subsequence.reserve(rec.size());
    for (auto i : rec) out.record_subsequence.push_back(counts[i]);
    return out;
}

}  // namespace slowent

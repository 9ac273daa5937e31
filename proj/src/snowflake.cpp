#include "metriclab/errors.hpp"
#include "metriclab/fractal.hpp"
#include "metriclab/space_io.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace metriclab {

namespace {

constexpr const char* kModule = "fractal_gen";
using Vec = std::array<double, 2>;

double cross(const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b) {
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p[0] - (a[0] + t * dx), p[1] - (a[1] + t * dy));
}

bool segments_meet(const Vec& a, const Vec& b, const Vec& c, const Vec& d, double tol) {
    const double d1 = cross(a, b, c), d2 = cross(a, b, d);
    const double d3 = cross(c, d, a), d4 = cross(c, d, b);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                     point_segment_distance(c, a, b), point_segment_distance(d, a, b)}) < tol;
}

// Spatial hashing with cells as large as the longest segment; only
// non-adjacent segment pairs sharing a cell are tested.
void check_simple(const std::vector<Vec>& v, double tol) {
    const std::size_t segments = v.size() - 1;
    if (segments < 3) return;
    double cell = 0.0;
    for (std::size_t i = 0; i < segments; ++i) {
        cell = std::max(cell, std::hypot(v[i + 1][0] - v[i][0], v[i + 1][1] - v[i][1]));
    }
    if (cell <= 0.0) return;
    auto key = [](long x, long y) { return (static_cast<std::int64_t>(x) << 32) ^ static_cast<std::uint32_t>(y); };
    std::unordered_map<std::int64_t, std::vector<std::size_t>> grid;
    for (std::size_t i = 0; i < segments; ++i) {
        const long x0 = std::lround(std::floor(std::min(v[i][0], v[i + 1][0]) / cell));
        const long x1 = std::lround(std::floor(std::max(v[i][0], v[i + 1][0]) / cell));
        const long y0 = std::lround(std::floor(std::min(v[i][1], v[i + 1][1]) / cell));
        const long y1 = std::lround(std::floor(std::max(v[i][1], v[i + 1][1]) / cell));
        for (long x = x0 - 1; x <= x1 + 1; ++x) {
            for (long y = y0 - 1; y <= y1 + 1; ++y) grid[key(x, y)].push_back(i);
        }
    }
    for (const auto& [k, list] : grid) {
        for (std::size_t p = 0; p < list.size(); ++p) {
            for (std::size_t q = p + 1; q < list.size(); ++q) {
                const std::size_t i = std::min(list[p], list[q]), j = std::max(list[p], list[q]);
                if (j - i < 2) continue;
                if (segments_meet(v[i], v[i + 1], v[j], v[j + 1], tol)) {
                    fail(ErrorKind::construction, kModule,
                         "polyline self-intersects (segments " + std::to_string(i) + " and " + std::to_string(j) + ")");
                }
            }
        }
    }
}

}  // namespace

std::vector<double> flat_flatness(int stages) {
    std::vector<double> l;
    for (int k = 1; k <= stages; ++k) l.push_back(1.0 + std::ldexp(1.0, -k));
    return l;
}

SnowflakeCurve snowflake_curve(int stage, const std::vector<double>& flatness, double a, double b) {
    if (stage < 0 || stage > 11) fail(ErrorKind::domain, kModule, "snowflake stage must lie in [0, 11]");
    if (!(b > a)) fail(ErrorKind::domain, kModule, "snowflake window needs a < b");
    if (!flatness.empty() && flatness.size() < static_cast<std::size_t>(stage)) {
        fail(ErrorKind::domain, kModule, "flatness schedule shorter than the stage count");
    }
    for (int k = 0; k < stage && !flatness.empty(); ++k) {
        if (!(flatness[k] >= 1.0)) {
            fail(ErrorKind::construction, kModule,
                 "stage " + std::to_string(k + 1) + ": l = " + format_number(flatness[k]) +
                     " gives legs shorter than half the base");
        }
    }

    std::vector<Vec> v{{a, 0.0}, {b, 0.0}};
    for (int k = 0; k < stage; ++k) {
        const double l = flatness.empty() ? 2.0 : flatness[k];
        const double rise = 0.5 * std::sqrt(std::max(0.0, l * l - 1.0));  // height / base
        std::vector<Vec> next;
        next.reserve(4 * (v.size() - 1) + 1);
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            const Vec& p = v[i];
            const Vec& q = v[i + 1];
            const double dx = (q[0] - p[0]) / 3.0, dy = (q[1] - p[1]) / 3.0;
            next.push_back(p);
            next.push_back({p[0] + dx, p[1] + dy});
            // peak above the middle third, on the left of the direction p -> q
            next.push_back({p[0] + 1.5 * dx - rise * dy, p[1] + 1.5 * dy + rise * dx});
            next.push_back({p[0] + 2 * dx, p[1] + 2 * dy});
        }
        next.push_back(v.back());
        v = std::move(next);
    }
    check_simple(v, 1e-12 * (b - a));

    SnowflakeCurve curve;
    curve.stage = stage;
    curve.arc.resize(v.size());
    for (std::size_t i = 1; i < v.size(); ++i) {
        curve.arc[i] = curve.arc[i - 1] + std::hypot(v[i][0] - v[i - 1][0], v[i][1] - v[i - 1][1]);
    }
    curve.vertices = std::move(v);
    return curve;
}

FiniteMetricSpace snowflake_polyline(int stage, const std::vector<double>& flatness, double a, double b,
                                     CurveMetric metric) {
    SnowflakeCurve curve = snowflake_curve(stage, flatness, a, b);
    const std::size_t n = curve.vertices.size();
    if (n > 20000) fail(ErrorKind::domain, kModule, "snowflake vertex set too large for a dense matrix");
    std::vector<double> dist(n * n);
    std::vector<std::string> labels(n);
    const double cells = std::pow(4.0, stage);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = format_number(static_cast<double>(i) / cells);
        for (std::size_t j = 0; j < n; ++j) {
            dist[i * n + j] = metric == CurveMetric::arc_length
                                  ? std::abs(curve.arc[i] - curve.arc[j])
                                  : std::hypot(curve.vertices[i][0] - curve.vertices[j][0],
                                               curve.vertices[i][1] - curve.vertices[j][1]);
        }
    }
    return FiniteMetricSpace(std::move(labels), std::move(dist));
}

}  // namespace metriclab

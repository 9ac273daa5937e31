#include "metriclab/tangent.hpp"
#include "metriclab/errors.hpp"
#include "metriclab/space_io.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <mutex>

namespace metriclab {

namespace {

constexpr const char* kModule = "tangent_lab";

void require_center(std::span<const double> center, std::size_t dim, const std::string& kind) {
    if (center.size() != dim) {
        fail(ErrorKind::domain, kModule,
             kind + " expects a center with " + std::to_string(dim) + " coordinate" + (dim == 1 ? "" : "s"));
    }
}

void require_mesh(double radius, double h) {
    if (!(h > 0.0) || !(radius > 0.0)) fail(ErrorKind::domain, kModule, "radius and mesh must be positive");
}

/// Euclidean ball of lattice points h Z^2, optionally restricted to [0,1]^2.
PointedWindow lattice_ball(std::span<const double> center, double radius, double h, bool unit_square) {
    long ci = std::lround(center[0] / h), cj = std::lround(center[1] / h);
    long n = 0;
    if (unit_square) {
        const double inv = 1.0 / h;
        n = std::lround(inv);
        if (std::abs(inv - static_cast<double>(n)) > 1e-9 * inv) {
            fail(ErrorKind::resolution, kModule, "1/h must be an integer for the square");
        }
        ci = std::clamp(ci, 0L, n);
        cj = std::clamp(cj, 0L, n);
    }
    const long k = static_cast<long>(std::floor(radius / h + 1e-9));
    const double limit = (radius / h) * (radius / h) * (1.0 + 1e-12);
    std::vector<std::pair<long, long>> pts;
    std::size_t base = 0;
    for (long i = ci - k; i <= ci + k; ++i) {
        if (unit_square && (i < 0 || i > n)) continue;
        for (long j = cj - k; j <= cj + k; ++j) {
            if (unit_square && (j < 0 || j > n)) continue;
            const double di = static_cast<double>(i - ci), dj = static_cast<double>(j - cj);
            if (di * di + dj * dj > limit) continue;
            if (i == ci && j == cj) base = pts.size();
            pts.emplace_back(i, j);
        }
    }
    const std::size_t m = pts.size();
    if (m > 40000) fail(ErrorKind::resolution, kModule, "window of " + std::to_string(m) + " points is too large");
    std::vector<double> dist(m * m);
    std::vector<std::string> labels(m);
    for (std::size_t a = 0; a < m; ++a) {
        labels[a] = format_number(pts[a].first * h) + "," + format_number(pts[a].second * h);
        for (std::size_t b = 0; b < m; ++b) {
            dist[a * m + b] = std::hypot(static_cast<double>(pts[a].first - pts[b].first),
                                         static_cast<double>(pts[a].second - pts[b].second)) * h;
        }
    }
    return PointedWindow{FiniteMetricSpace(std::move(labels), std::move(dist)), base, 1.0, radius};
}

class SquareGenerator : public SpaceGenerator {
public:
    explicit SquareGenerator(bool bounded) : bounded_(bounded) {}
    std::string kind() const override { return bounded_ ? "square" : "plane"; }
    PointedWindow ball(std::span<const double> center, double radius, double h) const override {
        require_center(center, 2, kind());
        require_mesh(radius, h);
        return lattice_ball(center, radius, h, bounded_);
    }
    FiniteMetricSpace sample(double h) const override {
        if (!bounded_) fail(ErrorKind::domain, kModule, "the plane has no finite sample");
        const double c[2] = {0.0, 0.0};
        return lattice_ball(c, std::sqrt(2.0), h, true).space;
    }

private:
    bool bounded_;
};

class CarpetGenerator : public SpaceGenerator {
public:
    CarpetGenerator(SlitSchedule s, bool pillows) : schedule_(std::move(s)), pillows_(pillows) {
        validate_schedule(schedule_);
    }
    std::string kind() const override { return pillows_ ? "pillow-carpet" : "slit-carpet"; }
    PointedWindow ball(std::span<const double> center, double radius, double h) const override {
        require_center(center, 2, kind());
        require_mesh(radius, h);
        const Box box{center[0] - 2 * radius, center[0] + 2 * radius, center[1] - 2 * radius,
                      center[1] + 2 * radius, 2 * radius};
        CarpetGraph cg = build_carpet_graph(schedule_, h, pillows_, box);
        const int c = std::clamp(static_cast<int>(std::lround(center[0] / h)), 0, cg.n);
        const int r = std::clamp(static_cast<int>(std::lround(center[1] / h)), 0, cg.n);
        auto base = cg.node_at(c, r, false);
        if (!base) fail(ErrorKind::domain, kModule, "center lies outside the carpet");
        return graph_ball(cg.graph, *base, radius);
    }
    FiniteMetricSpace sample(double h) const override {
        return pillows_ ? pillow_carpet_space(schedule_, h) : slit_carpet_space(schedule_, h);
    }

private:
    SlitSchedule schedule_;
    bool pillows_;
};

class SnowflakeGenerator : public SpaceGenerator {
public:
    SnowflakeGenerator(std::vector<double> flatness, double a, double b, CurveMetric metric)
        : flatness_(std::move(flatness)), a_(a), b_(b), metric_(metric) {
        if (!(b > a)) fail(ErrorKind::domain, kModule, "snowflake needs a < b");
    }
    std::string kind() const override { return "snowflake"; }

    PointedWindow ball(std::span<const double> center, double radius, double h) const override {
        require_center(center, 1, kind());
        require_mesh(radius, h);
        if (!(center[0] >= 0.0 && center[0] <= 1.0)) fail(ErrorKind::domain, kModule, "curve parameter outside [0, 1]");
        auto curve = curve_for(h);
        const std::size_t count = curve->vertices.size();
        const double cells = static_cast<double>(count - 1);
        const std::size_t p = static_cast<std::size_t>(std::llround(center[0] * cells));
        auto d = [&](std::size_t i, std::size_t j) {
            if (metric_ == CurveMetric::arc_length) return std::abs(curve->arc[i] - curve->arc[j]);
            return std::hypot(curve->vertices[i][0] - curve->vertices[j][0], curve->vertices[i][1] - curve->vertices[j][1]);
        };
        std::vector<std::size_t> keep;
        std::size_t base = 0;
        for (std::size_t i = 0; i < count; ++i) {
            if (d(p, i) <= radius * (1.0 + 1e-12)) {
                if (i == p) base = keep.size();
                keep.push_back(i);
            }
        }
        const std::size_t m = keep.size();
        if (m > 40000) fail(ErrorKind::resolution, kModule, "snowflake window too large");
        std::vector<double> dist(m * m);
        std::vector<std::string> labels(m);
        for (std::size_t x = 0; x < m; ++x) {
            labels[x] = format_number(static_cast<double>(keep[x]) / cells);
            for (std::size_t y = 0; y < m; ++y) dist[x * m + y] = d(keep[x], keep[y]);
        }
        return PointedWindow{FiniteMetricSpace(std::move(labels), std::move(dist)), base, 1.0, radius};
    }

    FiniteMetricSpace sample(double h) const override {
        return snowflake_polyline(stage_for(h), flatness_, a_, b_, metric_);
    }

private:
    int stage_for(double h) const {
        double longest = b_ - a_;
        for (int n = 0; n <= 11; ++n) {
            if (longest <= h * (1.0 + 1e-12)) return n;
            if (!flatness_.empty() && static_cast<std::size_t>(n) >= flatness_.size()) break;
            const double l = flatness_.empty() ? 2.0 : flatness_[n];
            longest *= std::max(1.0, l / 2.0) / 3.0;
        }
        fail(ErrorKind::resolution, kModule,
             "mesh " + format_number(h) + " needs more snowflake stages than the schedule provides (at most 11)");
    }

    std::shared_ptr<const SnowflakeCurve> curve_for(double h) const {
        const int stage = stage_for(h);
        std::lock_guard lock(mutex_);
        auto& slot = cache_[stage];
        if (!slot) slot = std::make_shared<SnowflakeCurve>(snowflake_curve(stage, flatness_, a_, b_));
        return slot;
    }

    std::vector<double> flatness_;
    double a_, b_;
    CurveMetric metric_;
    mutable std::mutex mutex_;
    mutable std::map<int, std::shared_ptr<const SnowflakeCurve>> cache_;
};

class RugGenerator : public SpaceGenerator {
public:
    explicit RugGenerator(RugOptions o) : o_(std::move(o)) {
        if (o_.dim < 2) fail(ErrorKind::domain, kModule, "rug dimension must be at least 2");
        if (o_.line == RugLine::snowflake && !(o_.epsilon > 0.0 && o_.epsilon < 1.0)) {
            fail(ErrorKind::domain, kModule, "snowflake exponent outside (0, 1)");
        }
        if (o_.line == RugLine::wu) validate_wu_schedule(o_.wu, o_.truncation);
    }
    std::string kind() const override { return o_.line == RugLine::wu ? "wu-rug" : "rickman-rug"; }

    PointedWindow ball(std::span<const double> center, double radius, double h) const override {
        require_center(center, static_cast<std::size_t>(o_.dim), kind());
        require_mesh(radius, h);
        // |x - x'| <= radius^(1/eps) for the snowflake line; Wu's delta dominates |x - x'|
        const double reach0 = o_.line == RugLine::snowflake ? std::pow(radius, 1.0 / o_.epsilon) : radius;
        std::vector<long> lo(o_.dim), hi(o_.dim);
        double total = 1.0;
        for (int d = 0; d < o_.dim; ++d) {
            const double reach = d == 0 ? reach0 : radius;
            lo[d] = static_cast<long>(std::ceil((center[d] - reach) / h - 1e-9));
            hi[d] = static_cast<long>(std::floor((center[d] + reach) / h + 1e-9));
            total *= static_cast<double>(hi[d] - lo[d] + 1);
        }
        if (total > 40000) fail(ErrorKind::resolution, kModule, "rug window box too large");
        std::vector<std::vector<double>> pts;
        std::vector<long> idx(lo);
        for (;;) {
            std::vector<double> p(o_.dim);
            for (int d = 0; d < o_.dim; ++d) p[d] = static_cast<double>(idx[d]) * h;
            pts.push_back(std::move(p));
            int d = o_.dim - 1;
            while (d >= 0 && idx[d] == hi[d]) idx[d] = lo[d], --d;
            if (d < 0) break;
            ++idx[d];
        }
        std::vector<double> snapped(o_.dim);
        for (int d = 0; d < o_.dim; ++d) snapped[d] = static_cast<double>(std::lround(center[d] / h)) * h;
        auto metric = [&](const std::vector<double>& p, const std::vector<double>& q) {
            const double d1 = o_.line == RugLine::wu ? wu_line_metric(p[0], q[0], o_.wu, o_.truncation)
                                                     : std::pow(std::abs(p[0] - q[0]), o_.epsilon);
            double sq = d1 * d1;
            for (int d = 1; d < o_.dim; ++d) sq += (p[d] - q[d]) * (p[d] - q[d]);
            return std::sqrt(sq);
        };
        std::vector<std::size_t> keep;
        std::size_t base = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (pts[i] == snapped) base = keep.size();
            if (metric(snapped, pts[i]) <= radius * (1.0 + 1e-12)) keep.push_back(i);
        }
        const std::size_t m = keep.size();
        std::vector<double> dist(m * m);
        std::vector<std::string> labels(m);
        for (std::size_t a = 0; a < m; ++a) {
            for (int d = 0; d < o_.dim; ++d) labels[a] += (d ? "," : "") + format_number(pts[keep[a]][d]);
            for (std::size_t b = a + 1; b < m; ++b) {
                dist[a * m + b] = dist[b * m + a] = metric(pts[keep[a]], pts[keep[b]]);
            }
        }
        return PointedWindow{FiniteMetricSpace(std::move(labels), std::move(dist)), base, 1.0, radius};
    }

    FiniteMetricSpace sample(double h) const override {
        RugOptions o = o_;
        o.h = h;
        return product_rug_space(o);
    }

private:
    RugOptions o_;
};

class ModelGenerator : public SpaceGenerator {
public:
    explicit ModelGenerator(ModelKind kind) : kind_(kind) {}
    std::string kind() const override { return std::string("model-") + to_string(kind_); }
    PointedWindow ball(std::span<const double> center, double radius, double h) const override {
        for (double c : center) {
            if (c != 0.0) fail(ErrorKind::domain, kModule, "model tangents are centred at the origin");
        }
        return model_tangent_space(kind_, radius, h);
    }
    FiniteMetricSpace sample(double) const override {
        fail(ErrorKind::domain, kModule, "model tangents are unbounded; use a window");
    }

private:
    ModelKind kind_;
};

}  // namespace

const char* to_string(Trend trend) noexcept {
    switch (trend) {
        case Trend::decreasing: return "decreasing";
        case Trend::flat: return "flat";
        case Trend::increasing: return "increasing";
        case Trend::inconclusive: return "inconclusive";
    }
    return "?";
}

Trend slope_trend(std::span<const double> values, double band) {
    const std::size_t n = values.size();
    if (n < 2) return Trend::flat;
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += static_cast<double>(i);
        mean_y += values[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (static_cast<double>(i) - mean_x) * (values[i] - mean_y);
        sxx += (static_cast<double>(i) - mean_x) * (static_cast<double>(i) - mean_x);
    }
    const double slope = sxy / sxx;
    if (slope < -band) return Trend::decreasing;
    if (slope > band) return Trend::increasing;
    return Trend::flat;
}

std::unique_ptr<SpaceGenerator> make_square_generator() { return std::make_unique<SquareGenerator>(true); }
std::unique_ptr<SpaceGenerator> make_plane_generator() { return std::make_unique<SquareGenerator>(false); }
std::unique_ptr<SpaceGenerator> make_carpet_generator(SlitSchedule schedule, bool pillows) {
    return std::make_unique<CarpetGenerator>(std::move(schedule), pillows);
}
std::unique_ptr<SpaceGenerator> make_snowflake_generator(std::vector<double> flatness, double a, double b,
                                                         CurveMetric metric) {
    return std::make_unique<SnowflakeGenerator>(std::move(flatness), a, b, metric);
}
std::unique_ptr<SpaceGenerator> make_rug_generator(RugOptions options) {
    return std::make_unique<RugGenerator>(std::move(options));
}
std::unique_ptr<SpaceGenerator> make_model_generator(ModelKind kind) { return std::make_unique<ModelGenerator>(kind); }

PointedWindow extract_window(const SpaceGenerator& gen, std::span<const double> center, double lambda, double radius,
                             double h) {
    if (!(lambda > 0.0)) fail(ErrorKind::domain, kModule, "scale must be positive");
    if (!(radius > 0.0)) fail(ErrorKind::domain, kModule, "window radius must be positive");
    if (!(h > 0.0) || h >= lambda * radius) {
        fail(ErrorKind::resolution, kModule,
             "mesh " + format_number(h) + " does not resolve a window of radius " + format_number(lambda * radius));
    }
    PointedWindow w = gen.ball(center, lambda * radius, h);
    w.space = rescale(w.space, lambda);
    w.scale = lambda;
    w.radius = radius;
    return w;
}

ScanReport tangent_scan(const ScanConfig& cfg) {
    if (!cfg.generator) fail(ErrorKind::domain, kModule, "scan needs a generator");
    if (cfg.scales.empty()) fail(ErrorKind::domain, kModule, "scan needs at least one scale");
    for (std::size_t i = 0; i < cfg.scales.size(); ++i) {
        if (!(cfg.scales[i] > 0.0)) fail(ErrorKind::domain, kModule, "scales must be positive");
        if (i > 0 && !(cfg.scales[i] < cfg.scales[i - 1])) fail(ErrorKind::domain, kModule, "scales must strictly decrease");
    }
    if (cfg.models.empty()) fail(ErrorKind::domain, kModule, "scan needs at least one model");
    if (!(cfg.kappa > 1.0)) fail(ErrorKind::domain, kModule, "resolution divisor must exceed 1");

    // h(lambda)/lambda is constant, so one model window per kind serves all rows
    std::map<ModelKind, PointedWindow> models;
    for (ModelKind m : cfg.models) {
        if (!models.count(m)) models.emplace(m, model_tangent_space(m, cfg.radius, 1.0 / cfg.kappa));
    }

    ScanReport report;
    for (double lambda : cfg.scales) {
        const auto start = std::chrono::steady_clock::now();
        PointedWindow w = extract_window(*cfg.generator, cfg.center, lambda, cfg.radius, lambda / cfg.kappa);
        const double extract_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (ModelKind m : cfg.models) {
            const auto t0 = std::chrono::steady_clock::now();
            const PointedWindow& model = models.at(m);
            GhResult r = pointed_gh_bounds(w, model, cfg.gh);
            ScanRow row;
            row.lambda = lambda;
            row.model = m;
            row.lower = r.lower;
            row.upper = r.upper;
            row.points = w.space.size();
            row.model_points = model.space.size();
            row.witness_size = r.witness ? r.witness->pairs.size() : 0;
            row.warnings = r.warnings;
            row.seconds = extract_seconds / static_cast<double>(cfg.models.size()) +
                          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            report.rows.push_back(std::move(row));
        }
    }
    if (cfg.scales.size() >= 3) report.verdict = classify_tangent(report.rows);
    return report;
}

Verdict classify_tangent(const std::vector<ScanRow>& rows) {
    std::vector<double> scales;
    std::vector<ModelKind> order;
    std::map<ModelKind, std::vector<const ScanRow*>> columns;
    for (const auto& r : rows) {
        if (scales.empty() || scales.back() != r.lambda) {
            if (std::find(scales.begin(), scales.end(), r.lambda) == scales.end()) scales.push_back(r.lambda);
        }
        if (!columns.count(r.model)) order.push_back(r.model);
        columns[r.model].push_back(&r);
    }
    if (scales.size() < 3) {
        fail(ErrorKind::insufficient_data, kModule, "classification needs at least 3 scales, got " + std::to_string(scales.size()));
    }
    std::vector<std::pair<double, ModelKind>> finals;
    for (ModelKind m : order) finals.emplace_back(columns[m].back()->upper, m);
    std::stable_sort(finals.begin(), finals.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    Verdict v;
    v.model = finals.front().second;
    v.final_upper = finals.front().first;
    std::vector<double> column;
    for (const ScanRow* r : columns[v.model]) column.push_back(r->upper);
    v.trend = slope_trend(column);
    if (finals.size() > 1) {
        const ScanRow* a = columns[finals[0].second].back();
        const ScanRow* b = columns[finals[1].second].back();
        const double gaps = (a->upper - a->lower) + (b->upper - b->lower);
        if (b->upper - a->upper < gaps) {
            v.conclusive = false;
            v.trend = Trend::inconclusive;
        }
    }
    return v;
}

}  // namespace metriclab

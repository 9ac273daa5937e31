#pragma once

#include "metriclab/fractal.hpp"
#include "metriclab/gh.hpp"
#include "metriclab/metric_space.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace metriclab {

enum class Trend { decreasing, flat, increasing, inconclusive };

const char* to_string(Trend trend) noexcept;

/// Sign of the least-squares slope of values against their index, with
/// |slope| <= band reported as flat.
Trend slope_trend(std::span<const double> values, double band = 1e-3);

/// A multi-resolution family of finite approximations of one ideal space.
class SpaceGenerator {
public:
    virtual ~SpaceGenerator() = default;

    virtual std::string kind() const = 0;

    /// Closed ball of the given radius (source units) around the sample
    /// point nearest to `center`, at mesh h, with scale 1.
    virtual PointedWindow ball(std::span<const double> center, double radius, double h) const = 0;

    /// The whole approximation at mesh h (bounded spaces only).
    virtual FiniteMetricSpace sample(double h) const = 0;
};

/// [0,1]^2 with the Euclidean metric on the lattice h Z^2.
std::unique_ptr<SpaceGenerator> make_square_generator();
/// R^2 with the Euclidean metric on h Z^2.
std::unique_ptr<SpaceGenerator> make_plane_generator();
/// Slit or pillow carpet with its grid shortest-path metric. Windows only
/// build the graph inside the box of half-side 2 * radius, which contains
/// every geodesic between points of the ball.
std::unique_ptr<SpaceGenerator> make_carpet_generator(SlitSchedule schedule, bool pillows);
/// Snowflake curve over [a, b]; `flatness` lists l_k for k = 1, 2, ...
/// (empty: equilateral). The center is the curve parameter t in [0, 1]
/// (vertex i of stage n sits at t = i / 4^n). The stage is the first one
/// whose longest segment is at most h.
std::unique_ptr<SpaceGenerator> make_snowflake_generator(std::vector<double> flatness, double a, double b,
                                                         CurveMetric metric);
/// Product rug over h Z^dim (RugOptions ranges and mesh are ignored).
std::unique_ptr<SpaceGenerator> make_rug_generator(RugOptions options);
/// A model tangent; the only admissible center is the origin.
std::unique_ptr<SpaceGenerator> make_model_generator(ModelKind kind);

/// gen.ball(p, lambda * R, h) with the metric divided by lambda.
/// Resolution error when h >= lambda * R.
PointedWindow extract_window(const SpaceGenerator& gen, std::span<const double> center, double lambda, double radius,
                             double h);

struct ScanConfig {
    const SpaceGenerator* generator = nullptr;
    std::vector<double> center;
    std::vector<double> scales;  // strictly decreasing
    double radius = 1.0;
    std::vector<ModelKind> models;
    double kappa = 64.0;  // h(lambda) = lambda / kappa
    GhOptions gh;
};

struct ScanRow {
    double lambda = 0.0;
    ModelKind model = ModelKind::plane;
    double lower = 0.0;
    double upper = 0.0;
    std::size_t points = 0;
    std::size_t model_points = 0;
    std::size_t witness_size = 0;
    double seconds = 0.0;
    std::vector<std::string> warnings;
};

struct Verdict {
    ModelKind model = ModelKind::plane;
    double final_upper = 0.0;
    Trend trend = Trend::flat;
    bool conclusive = true;
};

struct ScanReport {
    std::vector<ScanRow> rows;
    Verdict verdict;
};

/// One row per (scale, model), scales in the given order.
ScanReport tangent_scan(const ScanConfig& config);

/// Best model = smallest upper bound at the last scale; trend of its upper
/// column. Inconclusive when the two best final uppers differ by less than
/// the sum of their upper-lower gaps. Fewer than 3 scales is an
/// insufficient-data error.
Verdict classify_tangent(const std::vector<ScanRow>& rows);

}  // namespace metriclab

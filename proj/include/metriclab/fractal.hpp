#pragma once

#include "metriclab/grid_graph.hpp"
#include "metriclab/metric_space.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace metriclab {

// ---------------------------------------------------------------------------
// Dyadic slit carpets and pillow carpets

/// r[i] is the relative slit length at generation i; levels = r.size().
struct SlitSchedule {
    std::vector<double> r;
};

/// r_i = 1/sqrt(i + 2), i = 0..levels-1.
SlitSchedule harmonic_schedule(std::size_t levels);

/// Throws schedule error unless every r_i lies in (0, 1).
void validate_schedule(const SlitSchedule& schedule);

/// Axis-aligned clip box in plane coordinates; `depth` bounds the depth
/// coordinate of glued sheets.
struct Box {
    double x0, x1, y0, y1;
    double depth = 1e300;
};

/// Grid graph of a slit (optionally pillow) carpet on [0,1]^2 with mesh h.
/// Plane nodes sit at integer grid positions (c, r); interior slit nodes
/// are split into an "L" and an "R" copy; pillow nodes carry depth z >= 1
/// and tags "A"/"B" for the two sheets.
struct CarpetGraph {
    Graph graph{1.0};
    int n = 0;  // grid nodes per side minus one (1/h)
    int c0 = 0, r0 = 0;
    int width = 0, height = 0;
    std::vector<std::int64_t> plain;  // node id per (c, r) in the clip, or -1 for split nodes
    std::vector<std::int64_t> left, right;

    /// Node at grid position (c, r); `right_side` picks the R copy of a
    /// split node. Returns nullopt outside the clip.
    std::optional<std::uint32_t> node_at(int c, int r, bool right_side = false) const;
};

/// Builds the carpet graph, optionally restricted to `clip` (nodes whose
/// position, with pillow depth, lies in the box). Throws resolution error
/// when 1/h is not an integer divisible by 2^levels or a slit shorter than
/// two grid steps would vanish, naming the level.
CarpetGraph build_carpet_graph(const SlitSchedule& schedule, double h, bool pillows,
                               std::optional<Box> clip = std::nullopt);

FiniteMetricSpace slit_carpet_space(const SlitSchedule& schedule, double h);
FiniteMetricSpace pillow_carpet_space(const SlitSchedule& schedule, double h);

// ---------------------------------------------------------------------------
// Snowflake curves

/// Per-stage flatness l_k (k = 1..stage): stage-k bumps have legs
/// l_k/2 times their base. An empty vector means the equilateral (Koch)
/// construction, i.e. l_k = 2.
struct SnowflakeCurve {
    std::vector<std::array<double, 2>> vertices;
    std::vector<double> arc;  // cumulative arc length at each vertex
    int stage = 0;
};

/// l_k = 1 + 2^-k.
std::vector<double> flat_flatness(int stages);

/// Stage-n polyline over [a, b]. Throws construction error for l_k < 1 or
/// when the polyline self-intersects.
SnowflakeCurve snowflake_curve(int stage, const std::vector<double>& flatness, double a = 0.0, double b = 1.0);

enum class CurveMetric { arc_length, chordal };

/// Vertex set of the stage-n polyline with the arc-length (default) or the
/// restricted Euclidean metric.
FiniteMetricSpace snowflake_polyline(int stage, const std::vector<double>& flatness, double a = 0.0,
                                     double b = 1.0, CurveMetric metric = CurveMetric::arc_length);

// ---------------------------------------------------------------------------
// Wu's line and product rugs

double wu_L(double alpha, double c);
double wu_phi(double x, double alpha, double c);

/// alpha[k], c[k], s[k] describe I_{k+1}.
struct WuSchedule {
    std::vector<double> alpha;
    std::vector<double> c;
    std::vector<double> s;
};

/// alpha_n = 1 - 1/(n+1), c_n = 2^-(n+1)^2, s_n = 2^-n / L(alpha_n, c_n).
WuSchedule default_wu_schedule(std::size_t truncation);

/// Throws schedule error naming n when the first `truncation` terms break
/// an invariant (also requires the intervals I_n to be disjoint).
void validate_wu_schedule(const WuSchedule& schedule, std::size_t truncation);

double wu_line_metric(double x, double y, const WuSchedule& schedule, std::size_t truncation);

enum class RugLine { wu, snowflake };

struct RugOptions {
    RugLine line = RugLine::snowflake;
    double epsilon = 0.5;  // snowflake exponent
    WuSchedule wu;
    std::size_t truncation = 0;
    int dim = 2;
    double x0 = 0.0, x1 = 1.0;  // range of the first coordinate
    double extent = 1.0;        // other coordinates range over [0, extent]
    double h = 0.1;
};

/// Grid sample with metric sqrt(d1(x1, x1')^2 + |rest - rest'|^2), where d1
/// is Wu's delta or |x - x'|^epsilon.
FiniteMetricSpace product_rug_space(const RugOptions& options);

// ---------------------------------------------------------------------------
// Model tangents and the square map

enum class ModelKind { plane, half, quarter, t, l, d, line };

ModelKind parse_model_kind(std::string_view name);
const char* to_string(ModelKind kind) noexcept;

/// Ball of radius R around the distinguished point, mesh h. PLANE, HALF,
/// QUARTER and LINE carry the Euclidean metric; T, L and D are grid graphs
/// with their shortest-path metric.
PointedWindow model_tangent_space(ModelKind kind, double radius, double h);

/// A point of T = closure of R^2 minus the positive real axis, in polar form
/// with angle in [0, 2 pi]. Angle 0 is the upper side R1 of the slit, angle
/// 2 pi the lower side R2.
struct TPoint {
    double rho = 0.0;
    double angle = 0.0;
};

/// (r, theta) -> (r^2, 2 theta); theta outside [0, pi] is a domain error.
TPoint square_map_phi(double r, double theta);

/// Intrinsic distance in T.
double t_distance(const TPoint& p, const TPoint& q);

/// Lattice points of the closed upper half disk of radius R at mesh h,
/// (optionally without the origin) with Euclidean metric, and their images
/// under the square map with the intrinsic metric of T. Point i of the
/// domain corresponds to point i of the codomain.
std::pair<FiniteMetricSpace, FiniteMetricSpace> phi_half_disk_sample(double radius, double h,
                                                                     bool exclude_origin = true);

}  // namespace metriclab

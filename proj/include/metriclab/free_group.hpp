#pragma once

#include "metriclab/metric_space.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace metriclab {

/// Words over a..z (generators) and A..Z (their inverses).
using Word = std::string;

/// Free reduction. Whitespace is ignored; letters beyond the first `rank`
/// generators raise an alphabet error.
Word reduce_word(std::string_view letters, int rank);
Word inverse_word(std::string_view word);
bool is_reduced(std::string_view word);

/// Truncated boundary point: a reduced prefix of a semi-infinite word.
struct BoundaryPoint {
    Word prefix;
    int depth() const noexcept { return static_cast<int>(prefix.size()); }
};

/// Validates alphabet, reducedness and depth >= 1.
BoundaryPoint make_boundary_point(std::string_view word, int rank);

struct GromovProduct {
    int value = 0;
    bool saturated = false;  // the truncated words agree entirely
};

/// Common-prefix length (x, y)_1. Depth mismatch is a domain error.
GromovProduct gromov_product_prefix(const BoundaryPoint& x, const BoundaryPoint& y);

/// base^-(x, y); 0 for equal truncations. base <= 1 is a domain error.
double visual_distance(const BoundaryPoint& x, const BoundaryPoint& y, double base = 2.0);

/// All reduced words of length `depth` starting with `prefix`, in
/// lexicographic generator order (a, A, b, B, ...).
std::vector<Word> enumerate_boundary(int rank, int depth, std::string_view prefix = {});

/// Size of U(p, m) at depth N: (2r - 1)^(N - m) for m >= 1, the whole
/// depth-N sphere for m = 0.
std::uint64_t cylinder_size(int rank, int depth, int m);

struct CylinderBall {
    std::vector<BoundaryPoint> points;
    FiniteMetricSpace space;  // visual metric
};

/// U(p, m) at p's depth, or a seeded uniform sample of `count` points.
CylinderBall cylinder_ball(const BoundaryPoint& p, int m, int rank, double base = 2.0,
                           std::optional<std::size_t> count = std::nullopt, std::uint64_t seed = 0);

struct Translation {
    BoundaryPoint point;
    int cancelled = 0;     // letters of x consumed by reduction
    int usable_depth = 0;  // length of the reliable result prefix
};

/// Reduction of g x. Throws insufficient-depth when the whole prefix of x
/// cancels.
Translation translate_boundary(std::string_view g, const BoundaryPoint& x, int rank);

struct ExpansionStats {
    std::size_t pairs = 0;
    double min = 0.0, max = 0.0, mean = 0.0;
    /// ratio = base^exponent exactly; the exponent is an integer difference
    /// of Gromov products.
    int exponent_min = 0, exponent_max = 0;
};

/// Ratios d(gx, gy)/d(x, y) over pairs of U(p, m), g the inverse of p's
/// length-m prefix.
ExpansionStats expansion_factor_probe(const BoundaryPoint& p, int m, int rank, double base = 2.0,
                                      std::optional<std::size_t> samples = std::nullopt, std::uint64_t seed = 0);

struct CoverCylinder {
    Word prefix;
    Word g;  // inverse of the prefix
};

/// All length-m prefixes; they partition the depth-N boundary.
std::vector<CoverCylinder> expanding_cover(int rank, int m, int depth);

}  // namespace metriclab

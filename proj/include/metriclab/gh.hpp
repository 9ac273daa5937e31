#pragma once

#include "metriclab/metric_space.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace metriclab {

/// A relation between the index sets of two spaces. It is "full" when every
/// index of both sides occurs in some pair.
struct Correspondence {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    bool contains(std::size_t i, std::size_t j) const;
    Correspondence transposed() const;
};

/// Gromov-Hausdorff result. `exact` is present only when the search closed
/// the gap; `witness` attains `upper` (twice upper is its distortion).
struct GhResult {
    double lower = 0.0;
    double upper = 0.0;
    std::optional<double> exact;
    std::optional<Correspondence> witness;
    std::uint64_t nodes = 0;
    std::vector<std::string> warnings;
};

struct GhOptions {
    /// Branch-and-bound node limit for exact searches.
    std::uint64_t node_budget = 20'000'000;
    /// Local-search restarts for the upper bound.
    int restarts = 200;
    std::uint64_t seed = 0;
    /// pointed_gh_bounds runs the exact search when both windows have at
    /// most this many points.
    std::size_t exact_max_points = 8;
    /// Cap on elementary operations spent on upper-bound restarts, shared
    /// evenly between them.
    double work_budget = 1e9;
};

/// max over pairs (i,j), (i',j') in R of |dX(i,i') - dY(j,j')|.
/// Throws domain error naming the first uncovered index when R is not full.
double distortion_of_correspondence(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                                    const Correspondence& r);

/// Exact d_GH = 1/2 min dis(R) by branch and bound over full correspondences.
/// When the node budget runs out, `exact` is absent and lower/upper bracket
/// the value.
GhResult gh_exact_small(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                        std::uint64_t node_budget = GhOptions{}.node_budget);

/// Certified lower bound plus a local-search upper bound; never exact.
GhResult gh_bounds(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                   const GhOptions& options = {});

/// Pointed variant: only correspondences containing (base1, base2). Small
/// windows are solved exactly.
GhResult pointed_gh_bounds(const PointedWindow& w1, const PointedWindow& w2,
                           const GhOptions& options = {});

/// Exact pointed search (both bases fixed) with a node budget.
GhResult pointed_gh_exact(const PointedWindow& w1, const PointedWindow& w2,
                          std::uint64_t node_budget = GhOptions{}.node_budget);

/// Lower bound on d_GH from diameters, distance-value sets and distance rows.
/// With `bases`, only correspondences pairing the two bases are considered.
double gh_lower_bound(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                      std::optional<std::pair<std::size_t, std::size_t>> bases = std::nullopt);

struct MapDistortion {
    double distortion = 0.0;
    double surjectivity_defect = 0.0;
};

/// Additive distortion of an index map f: X -> Y and the covering defect
/// max_y min_x dY(f(x), y).
MapDistortion map_distortion(std::span<const std::size_t> f, const FiniteMetricSpace& x,
                             const FiniteMetricSpace& y);

/// graph(f) together with each y paired to a nearest point of f(X).
Correspondence correspondence_from_map(std::span<const std::size_t> f, const FiniteMetricSpace& x,
                                       const FiniteMetricSpace& y);

}  // namespace metriclab

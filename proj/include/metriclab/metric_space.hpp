#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace metriclab {

/// Absolute tolerance used for every metric-axiom check in the library.
inline constexpr double kMetricTolerance = 1e-9;

/// A finite metric space stored as a dense row-major distance matrix with
/// one opaque label per point.
///
/// Construction only checks shape and finiteness; the metric axioms are
/// checked by validate_metric(). Instances are immutable.
class FiniteMetricSpace {
public:
    FiniteMetricSpace() = default;

    /// `dist` is row-major with labels.size()^2 entries. Throws
    /// LabError(malformed_input) on a size mismatch or a non-finite entry.
    FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> dist);

    /// Convenience constructor for nested rows; labels default to "0", "1", ...
    static FiniteMetricSpace from_rows(const std::vector<std::vector<double>>& rows,
                                       std::vector<std::string> labels = {});

    std::size_t size() const noexcept { return n_; }
    bool empty() const noexcept { return n_ == 0; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return dist_[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const noexcept { return {dist_.data() + i * n_, n_}; }
    std::span<const double> data() const noexcept { return dist_; }

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }

    double diameter() const noexcept;
    /// Largest distance from i to any point.
    double eccentricity(std::size_t i) const noexcept;

    /// Sub-space on the given indices, in the given order.
    FiniteMetricSpace subspace(std::span<const std::size_t> indices) const;

    bool operator==(const FiniteMetricSpace&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::string> labels_;
    std::vector<double> dist_;
};

/// Default labels "0".."n-1".
std::vector<std::string> index_labels(std::size_t n);

/// A finite space with a distinguished base point, extracted at `scale`
/// (the divisor applied to the source metric) and rescaled `radius`.
struct PointedWindow {
    FiniteMetricSpace space;
    std::size_t base = 0;
    double scale = 1.0;
    double radius = 0.0;
};

enum class Axiom { zero_diagonal, symmetry, positivity, triangle };

const char* to_string(Axiom axiom) noexcept;

/// One violated axiom with its worst witness. For the triangle axiom the
/// witness is (i, k, j): dist[i][j] exceeds dist[i][k] + dist[k][j] by
/// `magnitude`. For symmetry/diagonal/positivity k is unused (equal to j).
/// Positivity magnitude is -dist[i][j], so an exact zero reports 0.
struct AxiomViolation {
    Axiom axiom;
    std::size_t i = 0;
    std::size_t k = 0;
    std::size_t j = 0;
    double magnitude = 0.0;
};

struct ValidationReport {
    std::vector<AxiomViolation> violations;
    bool ok() const noexcept { return violations.empty(); }
    const AxiomViolation* find(Axiom axiom) const noexcept;
};

ValidationReport validate_metric(const FiniteMetricSpace& m, double tolerance = kMetricTolerance);

/// Checks an arbitrary (possibly non-square or NaN-bearing) matrix; throws
/// LabError(malformed_input) when it is not a square finite matrix.
ValidationReport validate_metric(const std::vector<std::vector<double>>& rows,
                                 double tolerance = kMetricTolerance);

/// Divides every distance by lambda. Throws domain error for lambda <= 0.
FiniteMetricSpace rescale(const FiniteMetricSpace& m, double lambda);

/// Closed ball of radius R around p, in original point order. The result
/// has scale 1 and radius R.
PointedWindow restrict_ball(const FiniteMetricSpace& m, std::size_t p, double radius);

struct GeometryStats {
    double diameter = 0.0;
    int doubling_estimate = 1;
    /// Infimum of the admissible uniform-perfectness constants over the
    /// sampled (point, scale) pairs; nullopt when some sampled annulus is
    /// empty for every constant.
    std::optional<double> perfectness_constant;
};

/// Doubling count is the farthest-point greedy cover of each closed ball
/// B(x, r) by balls of radius r/2, maximised over x and the sampled r.
GeometryStats geometry_stats(const FiniteMetricSpace& m, std::span<const double> scales);

/// Number of centres chosen by farthest-point insertion so that every point
/// of `points` lies within `cover_radius` of a centre. The first centre is
/// points.front().
int greedy_cover_count(const FiniteMetricSpace& m, std::span<const std::size_t> points,
                       double cover_radius);

}  // namespace metriclab

#include "metriclab/metric_space.hpp"
#include "metriclab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace metriclab {

namespace {
constexpr const char* kModule = "metric_core";
}

std::vector<std::string> index_labels(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return labels;
}

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> dist)
    : n_(labels.size()), labels_(std::move(labels)), dist_(std::move(dist)) {
    if (dist_.size() != n_ * n_) {
        fail(ErrorKind::malformed_input, kModule,
             "distance matrix has " + std::to_string(dist_.size()) + " entries, expected " +
                 std::to_string(n_ * n_));
    }
    for (std::size_t e = 0; e < dist_.size(); ++e) {
        if (!std::isfinite(dist_[e])) {
            fail(ErrorKind::malformed_input, kModule,
                 "non-finite distance at (" + std::to_string(e / n_) + ", " +
                     std::to_string(e % n_) + ")");
        }
    }
}

FiniteMetricSpace FiniteMetricSpace::from_rows(const std::vector<std::vector<double>>& rows,
                                               std::vector<std::string> labels) {
    const std::size_t n = rows.size();
    if (labels.empty()) labels = index_labels(n);
    if (labels.size() != n) {
        fail(ErrorKind::malformed_input, kModule, "label count does not match matrix size");
    }
    std::vector<double> flat;
    flat.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) {
            fail(ErrorKind::malformed_input, kModule,
                 "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                     " entries, matrix is not square");
        }
        flat.insert(flat.end(), rows[i].begin(), rows[i].end());
    }
    return FiniteMetricSpace(std::move(labels), std::move(flat));
}

double FiniteMetricSpace::diameter() const noexcept {
    double d = 0.0;
    for (double v : dist_) d = std::max(d, v);
    return d;
}

double FiniteMetricSpace::eccentricity(std::size_t i) const noexcept {
    double d = 0.0;
    for (double v : row(i)) d = std::max(d, v);
    return d;
}

FiniteMetricSpace FiniteMetricSpace::subspace(std::span<const std::size_t> indices) const {
    const std::size_t k = indices.size();
    std::vector<std::string> labels;
    labels.reserve(k);
    std::vector<double> dist(k * k);
    for (std::size_t a = 0; a < k; ++a) {
        labels.push_back(labels_.at(indices[a]));
        const double* src = dist_.data() + indices[a] * n_;
        for (std::size_t b = 0; b < k; ++b) dist[a * k + b] = src[indices[b]];
    }
    return FiniteMetricSpace(std::move(labels), std::move(dist));
}

const char* to_string(Axiom axiom) noexcept {
    switch (axiom) {
        case Axiom::zero_diagonal: return "zero-diagonal";
        case Axiom::symmetry: return "symmetry";
        case Axiom::positivity: return "positivity";
        case Axiom::triangle: return "triangle";
    }
    return "?";
}

const AxiomViolation* ValidationReport::find(Axiom axiom) const noexcept {
    for (const auto& v : violations) {
        if (v.axiom == axiom) return &v;
    }
    return nullptr;
}

ValidationReport validate_metric(const FiniteMetricSpace& m, double tolerance) {
    const std::size_t n = m.size();
    ValidationReport report;

    std::optional<AxiomViolation> diag, sym, pos, tri;
    for (std::size_t i = 0; i < n; ++i) {
        double v = std::abs(m(i, i));
        if (v > tolerance && (!diag || v > diag->magnitude)) diag = AxiomViolation{Axiom::zero_diagonal, i, i, i, v};
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double gap = std::abs(m(i, j) - m(j, i));
            if (gap > tolerance && (!sym || gap > sym->magnitude)) sym = AxiomViolation{Axiom::symmetry, i, j, j, gap};
            double shortfall = -std::min(m(i, j), m(j, i));
            if (shortfall >= 0.0 && (!pos || shortfall > pos->magnitude)) {
                pos = AxiomViolation{Axiom::positivity, i, j, j, shortfall};
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto ri = m.row(i);
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            auto rk = m.row(k);
            const double dik = ri[k];
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || j == k) continue;
                double excess = ri[j] - (dik + rk[j]);
                if (excess > tolerance && (!tri || excess > tri->magnitude)) {
                    tri = AxiomViolation{Axiom::triangle, i, k, j, excess};
                }
            }
        }
    }
    for (auto* v : {&diag, &sym, &pos, &tri}) {
        if (*v) report.violations.push_back(**v);
    }
    return report;
}

ValidationReport validate_metric(const std::vector<std::vector<double>>& rows, double tolerance) {
    return validate_metric(FiniteMetricSpace::from_rows(rows), tolerance);
}

FiniteMetricSpace rescale(const FiniteMetricSpace& m, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        fail(ErrorKind::domain, kModule, "rescale factor must be positive, got " + std::to_string(lambda));
    }
    std::vector<double> dist(m.data().begin(), m.data().end());
    if (lambda != 1.0) {
        for (double& v : dist) v /= lambda;
    }
    return FiniteMetricSpace(m.labels(), std::move(dist));
}

PointedWindow restrict_ball(const FiniteMetricSpace& m, std::size_t p, double radius) {
    if (p >= m.size()) {
        fail(ErrorKind::domain, kModule, "base index " + std::to_string(p) + " out of range");
    }
    if (!(radius > 0.0)) {
        fail(ErrorKind::domain, kModule, "ball radius must be positive");
    }
    std::vector<std::size_t> keep;
    std::size_t base = 0;
    auto row = m.row(p);
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (row[i] <= radius) {
            if (i == p) base = keep.size();
            keep.push_back(i);
        }
    }
    return PointedWindow{m.subspace(keep), base, 1.0, radius};
}

int greedy_cover_count(const FiniteMetricSpace& m, std::span<const std::size_t> points,
                       double cover_radius) {
    if (points.empty()) return 0;
    std::vector<double> nearest(points.size(), std::numeric_limits<double>::infinity());
    std::size_t centre = points.front();
    int count = 0;
    for (;;) {
        ++count;
        auto row = m.row(centre);
        double far = -1.0;
        std::size_t far_index = 0;
        for (std::size_t a = 0; a < points.size(); ++a) {
            nearest[a] = std::min(nearest[a], row[points[a]]);
            if (nearest[a] > far) {
                far = nearest[a];
                far_index = a;
            }
        }
        if (far <= cover_radius) break;
        centre = points[far_index];
    }
    return count;
}

GeometryStats geometry_stats(const FiniteMetricSpace& m, std::span<const double> scales) {
    if (m.empty()) fail(ErrorKind::domain, kModule, "geometry_stats of an empty space");
    for (std::size_t s = 0; s < scales.size(); ++s) {
        if (!(scales[s] > 0.0)) fail(ErrorKind::domain, kModule, "scales must be positive");
        if (s > 0 && scales[s] > scales[s - 1]) fail(ErrorKind::domain, kModule, "scales must be descending");
    }

    GeometryStats stats;
    stats.diameter = m.diameter();
    const std::size_t n = m.size();
    double perfectness = 1.0;
    bool perfect = true;
    std::vector<std::size_t> ball;
    for (std::size_t x = 0; x < n; ++x) {
        auto row = m.row(x);
        for (double r : scales) {
            ball.clear();
            ball.push_back(x);
            double inner_max = 0.0;    // largest distance strictly inside B(x, r)
            bool exterior = false;     // X \ B(x, r) nonempty (open ball)
            for (std::size_t y = 0; y < n; ++y) {
                if (y == x) continue;
                if (row[y] <= r) ball.push_back(y);
                if (row[y] < r) inner_max = std::max(inner_max, row[y]);
                if (row[y] >= r) exterior = true;
            }
            stats.doubling_estimate = std::max(stats.doubling_estimate, greedy_cover_count(m, ball, r / 2.0));
            if (exterior) {
                if (inner_max > 0.0) {
                    perfectness = std::max(perfectness, r / inner_max);
                } else {
                    perfect = false;
                }
            }
        }
    }
    if (perfect) stats.perfectness_constant = perfectness;
    return stats;
}

}  // namespace metriclab

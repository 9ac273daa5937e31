#pragma once

#include "metriclab/metric_space.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace metriclab {

/// A map between finite spaces: domain point i goes to codomain point
/// assignment[i].
struct SampledMap {
    FiniteMetricSpace domain;
    FiniteMetricSpace codomain;
    std::vector<std::size_t> assignment;
};

/// Identity assignment between two spaces of equal size.
SampledMap identity_map(FiniteMetricSpace domain, FiniteMetricSpace codomain);

/// Throws domain error when the assignment is not total, in range and
/// injective.
void validate_map(const SampledMap& f);

struct Breakpoint {
    double t = 0.0;
    double s = 0.0;
};

/// Right-continuous step function: eta(t) = max s over breakpoints t' <= t
/// (0 left of the first breakpoint). Breakpoints are sorted by strictly
/// increasing t with nondecreasing s; measured envelopes have strictly
/// increasing s as well.
struct DistortionEnvelope {
    std::vector<Breakpoint> points;

    double operator()(double t) const;
};

/// Minimal staircase dominating the given samples. Sample ratios within a
/// relative 1e-12 of the first ratio of their run count as equal.
DistortionEnvelope staircase(std::vector<Breakpoint> samples);

/// Envelope from ordered triples (x, y, z), x != z, of t = d(x,y)/d(x,z)
/// and s = d(fx,fy)/d(fx,fz). With no budget every triple is used;
/// otherwise `budget` triples are drawn uniformly with the given seed
/// (all triples when the budget covers them).
DistortionEnvelope distortion_envelope(const SampledMap& f, std::optional<std::uint64_t> budget = 1'000'000,
                                       std::uint64_t seed = 0);

struct EtaViolation {
    double t = 0.0;
    double envelope = 0.0;
    double eta = 0.0;
};

struct EtaCheck {
    bool ok = true;
    std::optional<EtaViolation> worst;
};

/// Compares the envelope with a candidate eta given as a piecewise-linear
/// table. Domain error when a breakpoint lies outside the table's t-range.
EtaCheck check_eta(const DistortionEnvelope& envelope, const std::vector<Breakpoint>& eta);

struct PiecewiseValue {
    double value = 0.0;
    bool extrapolated = false;
};

/// Piecewise-linear interpolation through the breakpoints; outside the
/// range the end segments are extended (constant for a single point).
PiecewiseValue evaluate_linear(const DistortionEnvelope& eta, double t);

struct AlgebraResult {
    DistortionEnvelope envelope;
    std::vector<bool> extrapolated;  // per output breakpoint
};

/// t -> 1/eta^-1(1/t) evaluated at the images of eta's breakpoints; the
/// anchor (0, 0) is dropped. Equal s on consecutive breakpoints raises a
/// degeneracy error naming the segment.
AlgebraResult invert_envelope(const DistortionEnvelope& eta);

/// theta o eta on the union of both breakpoint sets, using the
/// piecewise-linear forms.
AlgebraResult compose_envelopes(const DistortionEnvelope& theta, const DistortionEnvelope& eta);

struct DiamRatioRow {
    double ratio = 0.0;  // diam f(A) / diam f(B)
    double lower = 0.0;  // 1 / (2 eta(diam B / diam A))
    double upper = 0.0;  // eta(2 diam A / diam B)
    double lower_margin = 0.0;
    double upper_margin = 0.0;
    bool holds = true;
};

/// Checks both diameter inequalities for each nested pair A c B, with the
/// step envelope as eta.
std::vector<DiamRatioRow> diam_ratio_check(const SampledMap& f, const DistortionEnvelope& eta,
                                           const std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>& pairs);

struct QcRow {
    double radius = 0.0;
    double h = 0.0;  // max over points of sup{d(fx,fy) : d(x,y) <= r} / inf{d(fx,fy) : d(x,y) >= r}
    std::size_t evaluated = 0;
    std::size_t skipped = 0;  // points with an empty inner or outer set
};

/// Radii must be positive and descending.
std::vector<QcRow> qc_constant_probe(const SampledMap& f, const std::vector<double>& radii);

}  // namespace metriclab

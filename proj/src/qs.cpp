#include "metriclab/qs.hpp"
#include "metriclab/errors.hpp"
#include "metriclab/parallel.hpp"
#include "metriclab/space_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace metriclab {

namespace {

constexpr const char* kModule = "qs_analysis";

double tolerance_for(double v) { return 1e-12 * std::max(1.0, std::abs(v)); }

double diameter_of(const FiniteMetricSpace& m, const std::vector<std::size_t>& idx) {
    double d = 0.0;
    for (std::size_t a : idx) {
        for (std::size_t b : idx) d = std::max(d, m(a, b));
    }
    return d;
}

}  // namespace

SampledMap identity_map(FiniteMetricSpace domain, FiniteMetricSpace codomain) {
    SampledMap f{std::move(domain), std::move(codomain), {}};
    f.assignment.resize(f.domain.size());
    for (std::size_t i = 0; i < f.assignment.size(); ++i) f.assignment[i] = i;
    return f;
}

void validate_map(const SampledMap& f) {
    if (f.assignment.size() != f.domain.size()) {
        fail(ErrorKind::domain, kModule, "map assigns " + std::to_string(f.assignment.size()) + " images to " +
                                             std::to_string(f.domain.size()) + " points");
    }
    std::vector<std::size_t> seen(f.codomain.size(), std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < f.assignment.size(); ++i) {
        const std::size_t j = f.assignment[i];
        if (j >= f.codomain.size()) fail(ErrorKind::domain, kModule, "image of point " + std::to_string(i) + " out of range");
        if (seen[j] != std::numeric_limits<std::size_t>::max()) {
            fail(ErrorKind::domain, kModule,
                 "map is not injective: points " + std::to_string(seen[j]) + " and " + std::to_string(i) + " share an image");
        }
        seen[j] = i;
    }
    for (std::size_t i = 0; i < f.assignment.size(); ++i) {
        for (std::size_t k = i + 1; k < f.assignment.size(); ++k) {
            if (f.codomain(f.assignment[i], f.assignment[k]) <= 0.0) {
                fail(ErrorKind::domain, kModule,
                     "images of points " + std::to_string(i) + " and " + std::to_string(k) + " are at distance 0");
            }
        }
    }
}

double DistortionEnvelope::operator()(double t) const {
    auto it = std::upper_bound(points.begin(), points.end(), t, [](double v, const Breakpoint& b) { return v < b.t; });
    if (it == points.begin()) return 0.0;
    return std::prev(it)->s;
}

DistortionEnvelope staircase(std::vector<Breakpoint> samples) {
    std::sort(samples.begin(), samples.end(), [](const Breakpoint& a, const Breakpoint& b) {
        return a.t != b.t ? a.t < b.t : a.s > b.s;
    });
    DistortionEnvelope env;
    double running = -std::numeric_limits<double>::infinity();
    // ratios within 1e-12 (relative) are one ratio computed two ways
    double group = -std::numeric_limits<double>::infinity();
    for (const auto& p : samples) {
        if (!(p.t - group <= 1e-12 * std::abs(p.t))) group = p.t;
        if (p.s > running) {
            if (!env.points.empty() && env.points.back().t == group) {
                env.points.back().s = p.s;
            } else {
                env.points.push_back({group, p.s});
            }
            running = p.s;
        }
    }
    return env;
}

DistortionEnvelope distortion_envelope(const SampledMap& f, std::optional<std::uint64_t> budget, std::uint64_t seed) {
    validate_map(f);
    const std::size_t n = f.domain.size();
    if (n < 3) fail(ErrorKind::domain, kModule, "distortion envelope needs at least 3 points");
    const auto& X = f.domain;
    const auto& Y = f.codomain;
    const auto& a = f.assignment;
    const double total = static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n - 1);

    if (!budget || static_cast<double>(*budget) >= total) {
        std::vector<std::vector<Breakpoint>> per_x(n);
        parallel_for(n, [&](std::size_t x) {
            std::vector<Breakpoint> samples;
            samples.reserve(n * (n - 1));
            for (std::size_t z = 0; z < n; ++z) {
                if (z == x) continue;
                const double dxz = X(x, z), ixz = Y(a[x], a[z]);
                for (std::size_t y = 0; y < n; ++y) samples.push_back({X(x, y) / dxz, Y(a[x], a[y]) / ixz});
            }
            per_x[x] = staircase(std::move(samples)).points;
        });
        std::vector<Breakpoint> merged;
        for (auto& v : per_x) merged.insert(merged.end(), v.begin(), v.end());
        return staircase(std::move(merged));
    }

    std::mt19937_64 rng(seed);
    std::vector<Breakpoint> samples;
    samples.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(*budget, 1u << 22)));
    DistortionEnvelope env;
    for (std::uint64_t k = 0; k < *budget; ++k) {
        const std::size_t x = rng() % n;
        std::size_t z = rng() % (n - 1);
        if (z >= x) ++z;
        const std::size_t y = rng() % n;
        samples.push_back({X(x, y) / X(x, z), Y(a[x], a[y]) / Y(a[x], a[z])});
        if (samples.size() == (1u << 22)) {
            samples.insert(samples.end(), env.points.begin(), env.points.end());
            env = staircase(std::move(samples));
            samples.clear();
        }
    }
    samples.insert(samples.end(), env.points.begin(), env.points.end());
    return staircase(std::move(samples));
}

PiecewiseValue evaluate_linear(const DistortionEnvelope& eta, double t) {
    const auto& p = eta.points;
    if (p.empty()) fail(ErrorKind::domain, kModule, "empty distortion function");
    if (p.size() == 1) return {p[0].s, t != p[0].t};
    std::size_t i;
    bool outside = false;
    if (t < p.front().t) {
        i = 0;
        outside = true;
    } else if (t > p.back().t) {
        i = p.size() - 2;
        outside = true;
    } else {
        auto it = std::upper_bound(p.begin(), p.end(), t, [](double v, const Breakpoint& b) { return v < b.t; });
        i = it == p.end() ? p.size() - 2 : static_cast<std::size_t>(it - p.begin()) - 1;
        if (p[i].t == t) return {p[i].s, false};
    }
    const double w = (t - p[i].t) / (p[i + 1].t - p[i].t);
    return {p[i].s + w * (p[i + 1].s - p[i].s), outside};
}

EtaCheck check_eta(const DistortionEnvelope& envelope, const std::vector<Breakpoint>& eta) {
    if (eta.empty()) fail(ErrorKind::domain, kModule, "empty eta table");
    for (std::size_t i = 1; i < eta.size(); ++i) {
        if (!(eta[i].t > eta[i - 1].t)) fail(ErrorKind::domain, kModule, "eta table t values must increase");
        if (eta[i].s < eta[i - 1].s) fail(ErrorKind::domain, kModule, "eta table must be nondecreasing");
    }
    DistortionEnvelope table{eta};
    EtaCheck result;
    double worst_gap = 0.0;
    for (const auto& b : envelope.points) {
        if (b.t < eta.front().t - tolerance_for(b.t) || b.t > eta.back().t + tolerance_for(b.t)) {
            fail(ErrorKind::domain, kModule, "eta is undefined at t = " + format_number(b.t));
        }
        const double value = evaluate_linear(table, std::clamp(b.t, eta.front().t, eta.back().t)).value;
        const double gap = b.s - value;
        if (gap > tolerance_for(b.s) && gap > worst_gap) {
            worst_gap = gap;
            result.ok = false;
            result.worst = EtaViolation{b.t, b.s, value};
        }
    }
    return result;
}

AlgebraResult invert_envelope(const DistortionEnvelope& eta) {
    std::vector<Breakpoint> p;
    // breakpoints whose t differ only by rounding collapse to the larger step
    for (const auto& b : eta.points) {
        if (!(b.t > 0.0 && b.s > 0.0)) continue;
        if (!p.empty() && b.t - p.back().t <= 1e-12 * b.t) {
            p.back().s = std::max(p.back().s, b.s);
            continue;
        }
        p.push_back(b);
    }
    if (p.empty()) fail(ErrorKind::degeneracy, kModule, "no positive breakpoints to invert");
    for (std::size_t i = 1; i < p.size(); ++i) {
        if (!(p[i].s > p[i - 1].s)) {
            fail(ErrorKind::degeneracy, kModule,
                 "flat segment between t = " + format_number(p[i - 1].t) + " and t = " + format_number(p[i].t));
        }
    }
    AlgebraResult r;
    for (auto it = p.rbegin(); it != p.rend(); ++it) r.envelope.points.push_back({1.0 / it->s, 1.0 / it->t});
    r.extrapolated.assign(r.envelope.points.size(), false);
    return r;
}

AlgebraResult compose_envelopes(const DistortionEnvelope& theta, const DistortionEnvelope& eta) {
    std::vector<double> ts;
    for (const auto& b : eta.points) ts.push_back(b.t);
    for (const auto& b : theta.points) ts.push_back(b.t);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    AlgebraResult r;
    for (double t : ts) {
        const PiecewiseValue inner = evaluate_linear(eta, t);
        const PiecewiseValue outer = evaluate_linear(theta, inner.value);
        r.envelope.points.push_back({t, outer.value});
        r.extrapolated.push_back(inner.extrapolated || outer.extrapolated);
    }
    return r;
}

std::vector<DiamRatioRow> diam_ratio_check(
    const SampledMap& f, const DistortionEnvelope& eta,
    const std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>& pairs) {
    validate_map(f);
    std::vector<DiamRatioRow> rows;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& [A, B] = pairs[k];
        for (std::size_t i : A) {
            if (i >= f.domain.size()) fail(ErrorKind::domain, kModule, "subset index out of range");
            if (std::find(B.begin(), B.end(), i) == B.end()) {
                fail(ErrorKind::domain, kModule, "pair " + std::to_string(k) + ": A is not contained in B");
            }
        }
        const double da = diameter_of(f.domain, A);
        const double db = diameter_of(f.domain, B);
        if (A.size() < 2 || da <= 0.0) {
            fail(ErrorKind::degeneracy, kModule, "pair " + std::to_string(k) + ": A has zero diameter");
        }
        std::vector<std::size_t> fa, fb;
        for (std::size_t i : A) fa.push_back(f.assignment[i]);
        for (std::size_t i : B) fb.push_back(f.assignment[i]);
        DiamRatioRow row;
        row.ratio = diameter_of(f.codomain, fa) / diameter_of(f.codomain, fb);
        row.lower = 1.0 / (2.0 * eta(db / da));
        row.upper = eta(2.0 * da / db);
        row.lower_margin = row.ratio - row.lower;
        row.upper_margin = row.upper - row.ratio;
        row.holds = row.lower_margin >= -tolerance_for(row.ratio) && row.upper_margin >= -tolerance_for(row.ratio);
        rows.push_back(row);
    }
    return rows;
}

std::vector<QcRow> qc_constant_probe(const SampledMap& f, const std::vector<double>& radii) {
    validate_map(f);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) fail(ErrorKind::domain, kModule, "radii must be positive");
        if (i > 0 && radii[i] > radii[i - 1]) fail(ErrorKind::domain, kModule, "radii must be descending");
    }
    const std::size_t n = f.domain.size();
    std::vector<QcRow> rows;
    for (double r : radii) {
        QcRow row;
        row.radius = r;
        for (std::size_t x = 0; x < n; ++x) {
            double sup = -1.0, inf = std::numeric_limits<double>::infinity();
            for (std::size_t y = 0; y < n; ++y) {
                if (y == x) continue;
                const double d = f.domain(x, y);
                const double image = f.codomain(f.assignment[x], f.assignment[y]);
                if (d <= r) sup = std::max(sup, image);
                if (d >= r) inf = std::min(inf, image);
            }
            if (sup < 0.0 || !std::isfinite(inf)) {
                ++row.skipped;
                continue;
            }
            ++row.evaluated;
            row.h = std::max(row.h, sup / inf);
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace metriclab

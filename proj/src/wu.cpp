#include "metriclab/errors.hpp"
#include "metriclab/fractal.hpp"
#include "metriclab/space_io.hpp"

#include <cmath>

namespace metriclab {

namespace {

constexpr const char* kModule = "fractal_gen";

struct Interval {
    std::size_t n = 0;  // 1-based; 0 when the point avoids every I_n
    double lo = 0.0, hi = 0.0;
};

Interval locate(double x, const WuSchedule& w, std::size_t truncation) {
    for (std::size_t n = 1; n <= truncation; ++n) {
        const double hi = 1.0 / static_cast<double>(n);
        const double lo = hi - w.s[n - 1];
        if (x >= lo && x <= hi) return {n, lo, hi};
        if (x > hi) break;  // intervals are ordered right to left
    }
    return {};
}

double delta_n(double x, double y, const WuSchedule& w, std::size_t n) {
    const double s = w.s[n - 1];
    const double t = std::min(1.0, std::abs(x - y) / s);
    return s * wu_phi(t, w.alpha[n - 1], w.c[n - 1]);
}

}  // namespace

double wu_L(double alpha, double c) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(c > 0.0 && c < 1.0)) {
        fail(ErrorKind::domain, kModule, "L(alpha, c) needs alpha and c in (0, 1)");
    }
    // log form keeps tiny c from overflowing 1/c
    const double log_l = (alpha - 1.0) * std::log(c) + alpha * std::log(alpha / (1.0 - c * (1.0 - alpha)));
    return std::exp(log_l);
}

double wu_phi(double x, double alpha, double c) {
    if (x <= c) return wu_L(alpha, c) * x;
    const double shift = c * (1.0 - alpha);
    return std::pow((x - shift) / (1.0 - shift), alpha);
}

WuSchedule default_wu_schedule(std::size_t truncation) {
    if (truncation > 30) fail(ErrorKind::domain, kModule, "default Wu schedule supports at most 30 intervals");
    WuSchedule w;
    for (std::size_t n = 1; n <= truncation; ++n) {
        const double nn = static_cast<double>(n);
        const double alpha = 1.0 - 1.0 / (nn + 1.0);
        const double c = std::ldexp(1.0, -static_cast<int>((n + 1) * (n + 1)));
        w.alpha.push_back(alpha);
        w.c.push_back(c);
        w.s.push_back(std::ldexp(1.0, -static_cast<int>(n)) / wu_L(alpha, c));
    }
    return w;
}

void validate_wu_schedule(const WuSchedule& w, std::size_t truncation) {
    if (w.alpha.size() < truncation || w.c.size() < truncation || w.s.size() < truncation) {
        fail(ErrorKind::schedule, kModule, "Wu schedule has fewer than " + std::to_string(truncation) + " terms");
    }
    double previous_mass = INFINITY;
    for (std::size_t n = 1; n <= truncation; ++n) {
        const double alpha = w.alpha[n - 1], c = w.c[n - 1], s = w.s[n - 1];
        const double nn = static_cast<double>(n);
        const std::string where = "n = " + std::to_string(n) + ": ";
        if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::schedule, kModule, where + "alpha outside (0, 1)");
        if (n > 1 && !(alpha > w.alpha[n - 2])) fail(ErrorKind::schedule, kModule, where + "alpha not increasing");
        if (!(c > 0.0 && c < 1.0)) fail(ErrorKind::schedule, kModule, where + "c outside (0, 1)");
        if (!(s > 0.0)) fail(ErrorKind::schedule, kModule, where + "s must be positive");
        if (!(s < 2.0 * (1.0 / nn - 1.0 / (nn + 1.0)))) {
            fail(ErrorKind::schedule, kModule, where + "s >= 2(1/n - 1/(n+1))");
        }
        if (!(s < 1.0 / nn - 1.0 / (nn + 1.0))) {
            fail(ErrorKind::schedule, kModule, where + "I_n overlaps I_(n+1)");
        }
        const double mass = s * wu_L(alpha, c);
        if (!(mass < previous_mass)) fail(ErrorKind::schedule, kModule, where + "s_n L(alpha_n, c_n) not decreasing");
        previous_mass = mass;
    }
}

double wu_line_metric(double x, double y, const WuSchedule& w, std::size_t truncation) {
    if (w.s.size() < truncation) fail(ErrorKind::schedule, kModule, "Wu schedule shorter than truncation");
    if (x == y) return 0.0;
    if (x > y) std::swap(x, y);
    const Interval ix = locate(x, w, truncation);
    const Interval iy = locate(y, w, truncation);
    if (ix.n == 0 && iy.n == 0) return y - x;
    if (ix.n != 0 && ix.n == iy.n) return delta_n(x, y, w, ix.n);
    if (ix.n == 0) return (iy.lo - x) + delta_n(iy.lo, y, w, iy.n);
    if (iy.n == 0) return delta_n(x, ix.hi, w, ix.n) + (y - ix.hi);
    return delta_n(x, ix.hi, w, ix.n) + (iy.lo - ix.hi) + delta_n(iy.lo, y, w, iy.n);
}

}  // namespace metriclab

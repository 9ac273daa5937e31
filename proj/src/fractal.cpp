#include "metriclab/fractal.hpp"
#include "metriclab/errors.hpp"
#include "metriclab/parallel.hpp"
#include "metriclab/space_io.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace metriclab {

namespace {

constexpr const char* kModule = "fractal_gen";

int grid_count(double h) {
    if (!(h > 0.0) || h > 1.0) fail(ErrorKind::resolution, kModule, "mesh h must lie in (0, 1]");
    const double inv = 1.0 / h;
    const double n = std::round(inv);
    if (std::abs(inv - n) > 1e-9 * inv) {
        fail(ErrorKind::resolution, kModule, "1/h = " + format_number(inv) + " is not an integer");
    }
    if (n > 1 << 20) fail(ErrorKind::resolution, kModule, "mesh h below 2^-20 is not supported");
    return static_cast<int>(n);
}

struct Slit {
    int column;
    int centre;
    int half;  // half length in grid steps
};

}  // namespace

SlitSchedule harmonic_schedule(std::size_t levels) {
    SlitSchedule s;
    for (std::size_t i = 0; i < levels; ++i) s.r.push_back(1.0 / std::sqrt(static_cast<double>(i) + 2.0));
    return s;
}

void validate_schedule(const SlitSchedule& schedule) {
    for (std::size_t i = 0; i < schedule.r.size(); ++i) {
        const double r = schedule.r[i];
        if (!(r > 0.0 && r < 1.0)) {
            fail(ErrorKind::schedule, kModule, "r_" + std::to_string(i) + " = " + format_number(r) + " outside (0, 1)");
        }
    }
}

std::optional<std::uint32_t> CarpetGraph::node_at(int c, int r, bool right_side) const {
    if (c < c0 || r < r0 || c >= c0 + width || r >= r0 + height) return std::nullopt;
    const std::size_t k = static_cast<std::size_t>(c - c0) * height + (r - r0);
    if (plain[k] >= 0) return static_cast<std::uint32_t>(plain[k]);
    const std::int64_t id = right_side ? right[k] : left[k];
    if (id < 0) return std::nullopt;
    return static_cast<std::uint32_t>(id);
}

CarpetGraph build_carpet_graph(const SlitSchedule& schedule, double h, bool pillows, std::optional<Box> clip) {
    validate_schedule(schedule);
    const int n = grid_count(h);

    CarpetGraph cg;
    cg.graph = Graph(h);
    cg.n = n;
    int c_lo = 0, c_hi = n, r_lo = 0, r_hi = n;
    double depth_limit = 1e300;
    if (clip) {
        c_lo = std::max(0, static_cast<int>(std::ceil(clip->x0 / h - 1e-9)));
        c_hi = std::min(n, static_cast<int>(std::floor(clip->x1 / h + 1e-9)));
        r_lo = std::max(0, static_cast<int>(std::ceil(clip->y0 / h - 1e-9)));
        r_hi = std::min(n, static_cast<int>(std::floor(clip->y1 / h + 1e-9)));
        depth_limit = clip->depth / h + 1e-9;
        if (c_lo > c_hi || r_lo > r_hi) fail(ErrorKind::domain, kModule, "clip box misses the unit square");
    }
    cg.c0 = c_lo;
    cg.r0 = r_lo;
    cg.width = c_hi - c_lo + 1;
    cg.height = r_hi - r_lo + 1;
    const std::size_t cells = static_cast<std::size_t>(cg.width) * cg.height;
    auto cell = [&](int c, int r) { return static_cast<std::size_t>(c - c_lo) * cg.height + (r - r_lo); };
    auto inside = [&](int c, int r) { return c >= c_lo && c <= c_hi && r >= r_lo && r <= r_hi; };

    // slits meeting the clip
    std::vector<Slit> slits;
    for (std::size_t g = 0; g < schedule.r.size(); ++g) {
        if (g >= 30 || n % (1 << (g + 1)) != 0) {
            fail(ErrorKind::resolution, kModule,
                 "level " + std::to_string(g) + ": 1/h = " + std::to_string(n) + " is not divisible by 2^" +
                     std::to_string(g + 1));
        }
        const int step = n >> (g + 1);
        const int half = static_cast<int>(std::lround(schedule.r[g] * step));
        if (half < 1) {
            fail(ErrorKind::resolution, kModule,
                 "level " + std::to_string(g) + ": slit of length " + format_number(schedule.r[g] / (1 << g)) +
                     " is shorter than two grid steps");
        }
        if (half >= step) {
            fail(ErrorKind::resolution, kModule,
                 "level " + std::to_string(g) + ": slit reaches the boundary of its square at this mesh");
        }
        const int squares = 1 << g;
        int a_lo = std::max(0, (c_lo - step) / (2 * step) - 1);
        int a_hi = std::min(squares - 1, (c_hi - step) / (2 * step) + 1);
        int j_lo = std::max(0, (r_lo - half - step) / (2 * step) - 1);
        int j_hi = std::min(squares - 1, (r_hi + half - step) / (2 * step) + 1);
        for (int a = a_lo; a <= a_hi; ++a) {
            const int column = (2 * a + 1) * step;
            if (column < c_lo || column > c_hi) continue;
            for (int j = j_lo; j <= j_hi; ++j) {
                const int centre = (2 * j + 1) * step;
                if (centre + half < r_lo || centre - half > r_hi) continue;
                slits.push_back({column, centre, half});
            }
        }
    }

    std::vector<char> split(cells, 0);
    for (const auto& s : slits) {
        for (int r = s.centre - s.half + 1; r <= s.centre + s.half - 1; ++r) {
            if (inside(s.column, r)) split[cell(s.column, r)] = 1;
        }
    }

    Graph& g = cg.graph;
    cg.plain.assign(cells, -1);
    cg.left.assign(cells, -1);
    cg.right.assign(cells, -1);
    for (int c = c_lo; c <= c_hi; ++c) {
        for (int r = r_lo; r <= r_hi; ++r) {
            const std::size_t k = cell(c, r);
            if (split[k]) {
                cg.left[k] = g.add_node({c, r, 0}, "L");
                cg.right[k] = g.add_node({c, r, 0}, "R");
            } else {
                cg.plain[k] = g.add_node({c, r, 0});
            }
        }
    }
    auto id = [&](int c, int r, bool right_side) -> std::uint32_t { return *cg.node_at(c, r, right_side); };

    for (int c = c_lo; c <= c_hi; ++c) {
        for (int r = r_lo; r <= r_hi; ++r) {
            if (c < c_hi) g.add_edge(id(c, r, true), id(c + 1, r, false));
            if (r < r_hi) {
                const bool s0 = split[cell(c, r)], s1 = split[cell(c, r + 1)];
                if (s0 && s1) {
                    g.add_edge(id(c, r, false), id(c, r + 1, false));
                    g.add_edge(id(c, r, true), id(c, r + 1, true));
                } else {
                    for (bool side0 : {false, true}) {
                        for (bool side1 : {false, true}) g.add_edge(id(c, r, side0), id(c, r + 1, side1));
                    }
                }
            }
        }
    }

    if (!pillows) return cg;

    // Each pillow is two (2 half + 1)^2 sheets in coordinates (u, v): u runs
    // along the slit, v away from the mouth. Sheet A's mouth row is the L
    // side, sheet B's the R side; the rows u = 0, u = 2 half and v = 2 half
    // are shared.
    for (const auto& s : slits) {
        const int side = 2 * s.half + 1;
        const int bottom = s.centre - s.half;
        std::vector<std::int64_t> sheet_a(static_cast<std::size_t>(side) * side, -1);
        std::vector<std::int64_t> sheet_b(static_cast<std::size_t>(side) * side, -1);
        auto at = [side](std::vector<std::int64_t>& sheet, int u, int v) -> std::int64_t& {
            return sheet[static_cast<std::size_t>(u) * side + v];
        };
        for (int u = 0; u < side; ++u) {
            const int r = bottom + u;
            if (!inside(s.column, r)) continue;
            const bool tip = u == 0 || u == side - 1;
            at(sheet_a, u, 0) = id(s.column, r, false);
            at(sheet_b, u, 0) = tip ? at(sheet_a, u, 0) : id(s.column, r, true);
            for (int v = 1; v < side && v <= depth_limit; ++v) {
                at(sheet_a, u, v) = g.add_node({s.column, r, v}, "A");
                const bool shared = tip || v == side - 1;
                at(sheet_b, u, v) = shared ? at(sheet_a, u, v) : g.add_node({s.column, r, v}, "B");
            }
        }
        for (auto* sheet : {&sheet_a, &sheet_b}) {
            for (int u = 0; u < side; ++u) {
                for (int v = 0; v < side; ++v) {
                    const std::int64_t here = at(*sheet, u, v);
                    if (here < 0) continue;
                    if (u + 1 < side && at(*sheet, u + 1, v) >= 0 && v > 0) {
                        g.add_edge(static_cast<std::uint32_t>(here), static_cast<std::uint32_t>(at(*sheet, u + 1, v)));
                    }
                    if (v + 1 < side && at(*sheet, u, v + 1) >= 0) {
                        g.add_edge(static_cast<std::uint32_t>(here), static_cast<std::uint32_t>(at(*sheet, u, v + 1)));
                    }
                }
            }
        }
    }
    return cg;
}

FiniteMetricSpace slit_carpet_space(const SlitSchedule& schedule, double h) {
    return graph_metric(build_carpet_graph(schedule, h, false).graph);
}

FiniteMetricSpace pillow_carpet_space(const SlitSchedule& schedule, double h) {
    return graph_metric(build_carpet_graph(schedule, h, true).graph);
}

// ---------------------------------------------------------------------------

FiniteMetricSpace product_rug_space(const RugOptions& o) {
    if (o.dim < 2) fail(ErrorKind::domain, kModule, "rug dimension must be at least 2");
    if (!(o.h > 0.0)) fail(ErrorKind::domain, kModule, "rug mesh must be positive");
    if (o.line == RugLine::snowflake && !(o.epsilon > 0.0 && o.epsilon < 1.0)) {
        fail(ErrorKind::domain, kModule, "snowflake exponent " + format_number(o.epsilon) + " outside (0, 1)");
    }
    if (o.line == RugLine::wu) validate_wu_schedule(o.wu, o.truncation);
    if (!(o.x1 >= o.x0) || !(o.extent >= 0.0)) fail(ErrorKind::domain, kModule, "empty rug range");

    const long nx = std::lround((o.x1 - o.x0) / o.h) + 1;
    const long ny = std::lround(o.extent / o.h) + 1;
    double total = static_cast<double>(nx);
    for (int d = 1; d < o.dim; ++d) total *= static_cast<double>(ny);
    if (total > 20000) fail(ErrorKind::domain, kModule, "rug sample of " + format_number(total) + " points is too large");
    const std::size_t count = static_cast<std::size_t>(total);

    std::vector<std::vector<double>> coords(count, std::vector<double>(o.dim));
    for (std::size_t p = 0; p < count; ++p) {
        std::size_t rest = p;
        for (int d = o.dim - 1; d >= 1; --d) {
            coords[p][d] = static_cast<double>(rest % ny) * o.h;
            rest /= ny;
        }
        coords[p][0] = o.x0 + static_cast<double>(rest) * o.h;
    }

    auto line = [&](double a, double b) {
        if (o.line == RugLine::wu) return wu_line_metric(a, b, o.wu, o.truncation);
        return std::pow(std::abs(a - b), o.epsilon);
    };
    std::vector<double> dist(count * count, 0.0);
    parallel_for(count, [&](std::size_t i) {
        for (std::size_t j = 0; j < count; ++j) {
            if (i == j) continue;
            const double d1 = line(coords[i][0], coords[j][0]);
            double sq = d1 * d1;
            for (int d = 1; d < o.dim; ++d) {
                const double e = coords[i][d] - coords[j][d];
                sq += e * e;
            }
            dist[i * count + j] = std::sqrt(sq);
        }
    });
    // Wu's delta need not be symmetric in floating point; take the upper triangle
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < i; ++j) dist[i * count + j] = dist[j * count + i];
    }
    std::vector<std::string> labels;
    labels.reserve(count);
    for (const auto& c : coords) {
        std::string s;
        for (std::size_t d = 0; d < c.size(); ++d) s += (d ? "," : "") + format_number(c[d]);
        labels.push_back(std::move(s));
    }
    return FiniteMetricSpace(std::move(labels), std::move(dist));
}

// ---------------------------------------------------------------------------

TPoint square_map_phi(double r, double theta) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
        fail(ErrorKind::domain, kModule, "angle " + format_number(theta) + " outside [0, pi]");
    }
    if (!(r >= 0.0)) fail(ErrorKind::domain, kModule, "negative radius");
    return TPoint{r * r, 2.0 * theta};
}

double t_distance(const TPoint& p, const TPoint& q) {
    if (std::abs(p.angle - q.angle) <= std::numbers::pi) {
        const double dx = p.rho * std::cos(p.angle) - q.rho * std::cos(q.angle);
        const double dy = p.rho * std::sin(p.angle) - q.rho * std::sin(q.angle);
        return std::hypot(dx, dy);
    }
    return p.rho + q.rho;
}

std::pair<FiniteMetricSpace, FiniteMetricSpace> phi_half_disk_sample(double radius, double h, bool exclude_origin) {
    if (!(radius > 0.0) || !(h > 0.0)) fail(ErrorKind::domain, kModule, "radius and mesh must be positive");
    const int k = static_cast<int>(std::floor(radius / h + 1e-9));
    const double limit = (radius / h) * (radius / h) * (1.0 + 1e-12);
    std::vector<std::pair<int, int>> lattice;
    for (int j = 0; j <= k; ++j) {
        for (int i = -k; i <= k; ++i) {
            if (static_cast<double>(i) * i + static_cast<double>(j) * j > limit) continue;
            if (exclude_origin && i == 0 && j == 0) continue;
            lattice.emplace_back(i, j);
        }
    }
    const std::size_t n = lattice.size();
    std::vector<TPoint> images(n);
    std::vector<std::string> labels(n);
    for (std::size_t p = 0; p < n; ++p) {
        const double x = lattice[p].first * h, y = lattice[p].second * h;
        double theta = lattice[p].second == 0 ? (lattice[p].first < 0 ? std::numbers::pi : 0.0) : std::atan2(y, x);
        images[p] = square_map_phi(std::hypot(x, y), theta);
        labels[p] = format_number(x) + "," + format_number(y);
    }
    std::vector<double> dom(n * n), cod(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            dom[a * n + b] = std::hypot(static_cast<double>(lattice[a].first - lattice[b].first),
                                        static_cast<double>(lattice[a].second - lattice[b].second)) * h;
            cod[a * n + b] = a == b ? 0.0 : t_distance(images[a], images[b]);
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < a; ++b) cod[a * n + b] = cod[b * n + a];
    }
    return {FiniteMetricSpace(labels, std::move(dom)), FiniteMetricSpace(labels, std::move(cod))};
}

}  // namespace metriclab

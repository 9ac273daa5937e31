#include "metriclab/errors.hpp"
#include "metriclab/fractal.hpp"
#include "metriclab/space_io.hpp"

#include <cmath>
#include <cctype>
#include <map>
#include <tuple>

namespace metriclab {

namespace {

constexpr const char* kModule = "fractal_gen";

PointedWindow euclidean_model(ModelKind kind, double radius, double h) {
    const int k = static_cast<int>(std::floor(radius / h + 1e-9));
    const double limit = (radius / h) * (radius / h) * (1.0 + 1e-12);
    std::vector<std::pair<int, int>> lattice;
    const int j_lo = kind == ModelKind::plane ? -k : 0;
    const int i_lo = kind == ModelKind::quarter ? 0 : -k;
    const int j_hi = kind == ModelKind::line ? 0 : k;
    for (int i = i_lo; i <= k; ++i) {
        for (int j = kind == ModelKind::line ? 0 : j_lo; j <= j_hi; ++j) {
            if (static_cast<double>(i) * i + static_cast<double>(j) * j <= limit) lattice.emplace_back(i, j);
        }
    }
    const std::size_t n = lattice.size();
    std::size_t base = 0;
    std::vector<std::string> labels(n);
    std::vector<double> dist(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        if (lattice[a] == std::pair{0, 0}) base = a;
        labels[a] = kind == ModelKind::line ? format_number(lattice[a].first * h)
                                            : format_number(lattice[a].first * h) + "," + format_number(lattice[a].second * h);
        for (std::size_t b = 0; b < n; ++b) {
            dist[a * n + b] = std::hypot(static_cast<double>(lattice[a].first - lattice[b].first),
                                         static_cast<double>(lattice[a].second - lattice[b].second)) * h;
        }
    }
    return PointedWindow{FiniteMetricSpace(std::move(labels), std::move(dist)), base, 1.0, radius};
}

// Plane grid on [-k, k]^2 with the positive x-axis split into an upper
// ("U") and a lower ("D") copy; the origin is the single tip node.
struct SlitPlane {
    Graph graph;
    int k;
    std::map<std::tuple<int, int, int>, std::uint32_t> ids;  // (i, j, side), side 1 = lower copy

    SlitPlane(int k_, double h) : graph(h), k(k_) {
        for (int i = -k; i <= k; ++i) {
            for (int j = -k; j <= k; ++j) {
                if (j == 0 && i > 0) {
                    ids[{i, j, 0}] = graph.add_node({i, j, 0}, "U");
                    ids[{i, j, 1}] = graph.add_node({i, j, 0}, "D");
                } else {
                    ids[{i, j, 0}] = graph.add_node({i, j, 0});
                }
            }
        }
        for (int i = -k; i <= k; ++i) {
            for (int j = -k; j <= k; ++j) {
                if (i < k) {
                    if (j == 0 && i >= 0) {
                        graph.add_edge(at(i, 0, false), at(i + 1, 0, false));
                        graph.add_edge(at(i, 0, true), at(i + 1, 0, true));
                    } else {
                        graph.add_edge(at(i, j, false), at(i + 1, j, false));
                    }
                }
                if (j < k) {
                    // the upper copy faces j > 0, the lower copy j < 0
                    graph.add_edge(at(i, j, false), at(i, j + 1, j + 1 == 0));
                }
            }
        }
    }

    std::uint32_t at(int i, int j, bool lower) const {
        auto it = ids.find({i, j, lower && j == 0 && i > 0 ? 1 : 0});
        return it->second;
    }
};

PointedWindow slit_model(ModelKind kind, double radius, double h) {
    const int k = static_cast<int>(std::ceil(2.0 * radius / h - 1e-9));
    if (kind == ModelKind::t || kind == ModelKind::l) {
        SlitPlane t(k, h);
        if (kind == ModelKind::l) {
            // half-plane sheet rows b = 1..k; its boundary row b = 0 is the slit:
            // a > 0 on the upper side, a < 0 on the lower side at |a|
            std::map<std::pair<int, int>, std::uint32_t> sheet;
            auto boundary = [&](int a) { return a == 0 ? t.at(0, 0, false) : t.at(std::abs(a), 0, a < 0); };
            for (int a = -k; a <= k; ++a) {
                for (int b = 1; b <= k; ++b) sheet[{a, b}] = t.graph.add_node({a, 0, b}, "H");
            }
            auto node = [&](int a, int b) { return b == 0 ? boundary(a) : sheet.at({a, b}); };
            for (int a = -k; a <= k; ++a) {
                for (int b = 0; b <= k; ++b) {
                    if (a < k && b > 0) t.graph.add_edge(node(a, b), node(a + 1, b));
                    if (b < k) t.graph.add_edge(node(a, b), node(a, b + 1));
                }
            }
        }
        return graph_ball(t.graph, t.at(0, 0, false), radius);
    }
    // D: two quarter-plane sheets sharing both boundary rays
    Graph g(h);
    std::map<std::tuple<int, int, int>, std::uint32_t> ids;
    for (int sheet = 0; sheet < 2; ++sheet) {
        for (int i = 0; i <= k; ++i) {
            for (int j = 0; j <= k; ++j) {
                if (sheet == 1 && (i == 0 || j == 0)) {
                    ids[{1, i, j}] = ids.at({0, i, j});
                } else {
                    ids[{sheet, i, j}] = g.add_node({i, j, sheet}, sheet ? "B" : "A");
                }
            }
        }
    }
    for (int sheet = 0; sheet < 2; ++sheet) {
        for (int i = 0; i <= k; ++i) {
            for (int j = 0; j <= k; ++j) {
                if (i < k) g.add_edge(ids.at({sheet, i, j}), ids.at({sheet, i + 1, j}));
                if (j < k) g.add_edge(ids.at({sheet, i, j}), ids.at({sheet, i, j + 1}));
            }
        }
    }
    return graph_ball(g, ids.at({0, 0, 0}), radius);
}

}  // namespace

ModelKind parse_model_kind(std::string_view name) {
    std::string s(name);
    for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (s == "plane" || s == "r2") return ModelKind::plane;
    if (s == "half" || s == "h") return ModelKind::half;
    if (s == "quarter" || s == "q") return ModelKind::quarter;
    if (s == "t") return ModelKind::t;
    if (s == "l") return ModelKind::l;
    if (s == "d") return ModelKind::d;
    if (s == "line" || s == "segment") return ModelKind::line;
    fail(ErrorKind::domain, kModule, "unknown model tangent \"" + std::string(name) + "\"");
}

const char* to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::plane: return "plane";
        case ModelKind::half: return "half";
        case ModelKind::quarter: return "quarter";
        case ModelKind::t: return "t";
        case ModelKind::l: return "l";
        case ModelKind::d: return "d";
        case ModelKind::line: return "line";
    }
    return "?";
}

PointedWindow model_tangent_space(ModelKind kind, double radius, double h) {
    if (!(radius > 0.0) || !(h > 0.0)) fail(ErrorKind::domain, kModule, "model radius and mesh must be positive");
    if (radius / h > 4096) fail(ErrorKind::resolution, kModule, "model window needs more than 4096 steps per radius");
    switch (kind) {
        case ModelKind::plane:
        case ModelKind::half:
        case ModelKind::quarter:
        case ModelKind::line: return euclidean_model(kind, radius, h);
        default: return slit_model(kind, radius, h);
    }
}

}  // namespace metriclab

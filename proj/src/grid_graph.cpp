#include "metriclab/grid_graph.hpp"
#include "metriclab/errors.hpp"
#include "metriclab/parallel.hpp"
#include "metriclab/space_io.hpp"

#include <algorithm>
#include <numeric>

namespace metriclab {

std::uint32_t Graph::add_node(NodePos pos, std::string tag) {
    pos_.push_back(pos);
    tag_.push_back(std::move(tag));
    adj_.emplace_back();
    return static_cast<std::uint32_t>(pos_.size() - 1);
}

void Graph::add_edge(std::uint32_t a, std::uint32_t b) {
    if (a == b) return;
    auto& na = adj_[a];
    if (std::find(na.begin(), na.end(), b) != na.end()) return;
    na.push_back(b);
    adj_[b].push_back(a);
}

std::vector<std::int32_t> Graph::hops_from(std::uint32_t source) const {
    std::vector<std::int32_t> hops(size(), -1);
    std::vector<std::uint32_t> queue;
    queue.reserve(size());
    hops[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint32_t u = queue[head];
        for (std::uint32_t v : adj_[u]) {
            if (hops[v] < 0) {
                hops[v] = hops[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return hops;
}

FiniteMetricSpace Graph::metric_on(std::span<const std::uint32_t> nodes) const {
    const std::size_t k = nodes.size();
    std::vector<double> dist(k * k);
    parallel_for(k, [&](std::size_t a) {
        auto hops = hops_from(nodes[a]);
        for (std::size_t b = 0; b < k; ++b) {
            const std::int32_t h = hops[nodes[b]];
            if (h < 0) {
                fail(ErrorKind::construction, "fractal_gen",
                     "graph nodes " + label(nodes[a]) + " and " + label(nodes[b]) + " are disconnected");
            }
            dist[a * k + b] = h * step_;
        }
    });
    std::vector<std::string> labels;
    labels.reserve(k);
    for (auto n : nodes) labels.push_back(label(n));
    return FiniteMetricSpace(std::move(labels), std::move(dist));
}

std::string Graph::label(std::uint32_t i) const {
    const NodePos& p = pos_[i];
    std::string s = format_number(p.x * step_) + "," + format_number(p.y * step_);
    if (p.z != 0) s += "," + format_number(p.z * step_);
    if (!tag_[i].empty()) s += "|" + tag_[i];
    return s;
}

PointedWindow graph_ball(const Graph& g, std::uint32_t base, double radius) {
    auto hops = g.hops_from(base);
    const double limit = radius / g.step() + 1e-9;
    std::vector<std::uint32_t> nodes;
    std::size_t base_index = 0;
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        if (hops[i] >= 0 && hops[i] <= limit) {
            if (i == base) base_index = nodes.size();
            nodes.push_back(i);
        }
    }
    return PointedWindow{g.metric_on(nodes), base_index, 1.0, radius};
}

FiniteMetricSpace graph_metric(const Graph& g) {
    std::vector<std::uint32_t> nodes(g.size());
    std::iota(nodes.begin(), nodes.end(), 0u);
    return g.metric_on(nodes);
}

}  // namespace metriclab

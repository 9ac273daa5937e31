#pragma once

#include "metriclab/metric_space.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace metriclab {

/// Integer position of a graph node in units of the step length. `z` is a
/// depth coordinate for sheets glued onto the plane (pillows, model seams);
/// it is 0 for plane nodes. Positions are 1-Lipschitz in the graph metric
/// under the L-infinity norm, which is what makes box clipping sound.
struct NodePos {
    int x = 0;
    int y = 0;
    int z = 0;
};

/// Undirected unit-weight graph; the metric is hop count times `step`.
class Graph {
public:
    explicit Graph(double step) : step_(step) {}

    std::uint32_t add_node(NodePos pos, std::string tag = {});
    void add_edge(std::uint32_t a, std::uint32_t b);

    std::size_t size() const noexcept { return pos_.size(); }
    double step() const noexcept { return step_; }
    const NodePos& pos(std::uint32_t i) const { return pos_[i]; }
    const std::string& tag(std::uint32_t i) const { return tag_[i]; }
    std::span<const std::uint32_t> neighbours(std::uint32_t i) const { return adj_[i]; }

    /// Hop counts from source; -1 marks unreachable nodes.
    std::vector<std::int32_t> hops_from(std::uint32_t source) const;

    /// Shortest-path metric restricted to `nodes` (one BFS per node).
    /// Throws construction error if two of them are disconnected.
    FiniteMetricSpace metric_on(std::span<const std::uint32_t> nodes) const;

    /// "x,y" in step units scaled to coordinates, plus "|tag" if tagged and
    /// ",z" for depth.
    std::string label(std::uint32_t i) const;

private:
    double step_;
    std::vector<NodePos> pos_;
    std::vector<std::string> tag_;
    std::vector<std::vector<std::uint32_t>> adj_;
};

/// Closed graph ball of the given radius around `base`, with its intrinsic
/// (whole-graph) metric.
PointedWindow graph_ball(const Graph& g, std::uint32_t base, double radius);

/// All nodes of g with their shortest-path metric.
FiniteMetricSpace graph_metric(const Graph& g);

}  // namespace metriclab

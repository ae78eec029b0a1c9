#include "lrwpan/topology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace lrwpan {

namespace {

std::unordered_map<int, int> index_by_id(const std::vector<NodeSpec>& nodes)
{
    std::unordered_map<int, int> map;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
        if (!map.emplace(nodes[i].id, i).second)
            throw std::invalid_argument("duplicate node id " + std::to_string(nodes[i].id));
    }
    return map;
}

}  // namespace

int NetworkSpec::index_of(int external_id) const
{
    for (int i = 0; i < size(); ++i)
        if (nodes_[i].id == external_id)
            return i;
    throw std::invalid_argument("unknown node id " + std::to_string(external_id));
}

NetworkSpec NetworkSpec::build(std::vector<NodeSpec> nodes, int sink_id,
                               const std::vector<std::pair<int, int>>& cs_pairs)
{
    NetworkSpec net;
    net.nodes_ = std::move(nodes);
    auto idx = index_by_id(net.nodes_);
    auto sink_it = idx.find(sink_id);
    if (sink_it == idx.end())
        throw std::invalid_argument("sink id " + std::to_string(sink_id) + " is not a node");
    net.sink_ = sink_it->second;

    const int n = net.size();
    net.adjacency_.assign(n, std::vector<bool>(n, false));
    for (auto [a, b] : cs_pairs) {
        auto ia = idx.find(a);
        auto ib = idx.find(b);
        if (ia == idx.end() || ib == idx.end())
            throw std::invalid_argument("cs pair (" + std::to_string(a) + "," +
                                        std::to_string(b) + ") names an unknown node");
        if (ia->second == ib->second)
            throw std::invalid_argument("cs pair may not be a self loop: " + std::to_string(a));
        net.adjacency_[ia->second][ib->second] = true;
        net.adjacency_[ib->second][ia->second] = true;
    }

    net.parent_index_.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        if (i == net.sink_)
            continue;
        auto p = idx.find(net.nodes_[i].parent);
        if (p == idx.end())
            throw std::invalid_argument("node " + std::to_string(net.nodes_[i].id) +
                                        " routes to unknown parent " +
                                        std::to_string(net.nodes_[i].parent));
        if (p->second == i)
            throw std::invalid_argument("node " + std::to_string(net.nodes_[i].id) +
                                        " routes to itself");
        net.parent_index_[i] = p->second;
    }

    net.finish_build();
    return net;
}

NetworkSpec NetworkSpec::build_from_positions(std::vector<NodeSpec> nodes, int sink_id,
                                              const std::vector<std::pair<double, double>>& xy,
                                              double cs_range)
{
    if (xy.size() != nodes.size())
        throw std::invalid_argument("need one position per node");
    if (!(cs_range > 0.0))
        throw std::invalid_argument("cs_range must be > 0");
    std::vector<std::pair<int, int>> pairs;
    for (size_t i = 0; i < nodes.size(); ++i) {
        for (size_t j = i + 1; j < nodes.size(); ++j) {
            double dx = xy[i].first - xy[j].first;
            double dy = xy[i].second - xy[j].second;
            if (std::hypot(dx, dy) < cs_range)
                pairs.emplace_back(nodes[i].id, nodes[j].id);
        }
    }
    return build(std::move(nodes), sink_id, pairs);
}

void NetworkSpec::finish_build()
{
    const int n = size();

    if (nodes_[sink_].lambda != 0.0)
        throw std::invalid_argument("the sink cannot generate traffic");

    for (int i = 0; i < n; ++i) {
        if (nodes_[i].lambda < 0.0)
            throw std::invalid_argument("node " + std::to_string(nodes_[i].id) +
                                        " has negative lambda");
        if (nodes_[i].link_error < 0.0 || nodes_[i].link_error > 1.0)
            throw std::invalid_argument("node " + std::to_string(nodes_[i].id) +
                                        " has link_error outside [0,1]");
    }

    // every node must reach the sink; depth doubles as the cycle check
    std::vector<int> depth(n, -1);
    depth[sink_] = 0;
    for (int i = 0; i < n; ++i) {
        int hops = 0;
        for (int v = i; depth[v] < 0; v = parent_index_[v]) {
            if (parent_index_[v] < 0 || ++hops > n)
                throw std::invalid_argument("node " + std::to_string(nodes_[i].id) +
                                            " has no route to the sink (cycle or orphan)");
        }
    }
    for (int i = 0; i < n; ++i) {
        if (depth[i] >= 0)
            continue;
        std::vector<int> chain;
        int v = i;
        while (depth[v] < 0) {
            chain.push_back(v);
            v = parent_index_[v];
        }
        for (auto it = chain.rbegin(); it != chain.rend(); ++it)
            depth[*it] = depth[parent_index_[*it]] + 1;
    }

    for (int i = 0; i < n; ++i) {
        if (i == sink_)
            continue;
        if (!adjacency_[i][parent_index_[i]])
            throw std::invalid_argument("node " + std::to_string(nodes_[i].id) +
                                        " cannot hear its parent " +
                                        std::to_string(nodes_[i].parent));
    }

    children_.assign(n, {});
    for (int i = 0; i < n; ++i)
        if (i != sink_)
            children_[parent_index_[i]].push_back(i);

    omega_.assign(n, {});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (adjacency_[i][j])
                omega_[i].push_back(j);

    leaf_to_root_.resize(n);
    for (int i = 0; i < n; ++i)
        leaf_to_root_[i] = i;
    std::sort(leaf_to_root_.begin(), leaf_to_root_.end(), [&](int a, int b) {
        if (depth[a] != depth[b])
            return depth[a] > depth[b];
        return nodes_[a].id < nodes_[b].id;
    });
}

NodeRole NetworkSpec::role(int i) const
{
    if (nodes_[i].lambda > 0.0)
        return children_[i].empty() ? NodeRole::source : NodeRole::source_and_relay;
    return NodeRole::relay;
}

std::vector<int> NetworkSpec::path_to_sink(int i) const
{
    std::vector<int> path;
    for (int v = i; v != sink_; v = parent_index_[v])
        path.push_back(v);
    return path;
}

InterferenceSets interference_sets(const NetworkSpec& net)
{
    const int n = net.size();
    InterferenceSets sets;
    sets.c1.assign(n, {});
    sets.c2.assign(n, {});
    for (int i = 0; i < n; ++i) {
        if (net.is_sink(i))
            continue;
        const int r = net.parent_index(i);
        // I_{r(i)}: CS neighbours of the receiver plus the receiver, minus i
        for (int j = 0; j < n; ++j) {
            if (j == i)
                continue;
            if (j != r && !net.in_cs_range(r, j))
                continue;
            if (net.in_cs_range(i, j))
                sets.c1[i].push_back(j);
            else
                sets.c2[i].push_back(j);
        }
    }
    return sets;
}

bool has_hidden_nodes(const NetworkSpec& net)
{
    const InterferenceSets sets = interference_sets(net);
    for (int i = 0; i < net.size(); ++i)
        if (!sets.c2[i].empty())
            return true;
    for (int i = 0; i < net.size(); ++i) {
        const auto& omega = net.omega(i);
        for (size_t a = 0; a < omega.size(); ++a)
            for (size_t b = a + 1; b < omega.size(); ++b)
                if (!net.in_cs_range(omega[a], omega[b]))
                    return true;
    }
    return false;
}

}  // namespace lrwpan

#ifndef LRWPAN_TOPOLOGY_HPP
#define LRWPAN_TOPOLOGY_HPP

#include <string>
#include <vector>

namespace lrwpan {

enum class NodeRole { source, relay, source_and_relay };

struct NodeSpec
{
    int id = -1;          // external identifier, arbitrary
    int parent = -1;      // external id of the next hop (r(i)); sink has none
    double lambda = 0.0;  // packets per symbol time generated here
    double link_error = 0.0;  // l_i, PHY noise loss on the link to r(i)
};

// Immutable network description: a routing tree rooted at the sink plus a
// symmetric carrier-sense adjacency over all nodes. Nodes are addressed by
// dense index internally; external ids appear only in reports.
class NetworkSpec
{
  public:
    // Builds and validates. `cs_pairs` lists undirected CS-range pairs by
    // external id; every node must hear its parent. Throws
    // std::invalid_argument on cycles, orphans, unknown ids or a parent
    // outside CS range.
    static NetworkSpec build(std::vector<NodeSpec> nodes, int sink_id,
                             const std::vector<std::pair<int, int>>& cs_pairs);

    // Adjacency derived from coordinates and a common CS radius. Strict
    // inequality: distance < cs_range means in range, ties fall out of range.
    static NetworkSpec build_from_positions(std::vector<NodeSpec> nodes, int sink_id,
                                            const std::vector<std::pair<double, double>>& xy,
                                            double cs_range);

    int size() const { return static_cast<int>(nodes_.size()); }
    int sink() const { return sink_; }
    bool is_sink(int i) const { return i == sink_; }
    const NodeSpec& node(int i) const { return nodes_[i]; }
    int index_of(int external_id) const;

    bool in_cs_range(int i, int j) const { return adjacency_[i][j]; }
    // Omega_i: indices within CS range of i
    const std::vector<int>& omega(int i) const { return omega_[i]; }
    const std::vector<int>& children(int i) const { return children_[i]; }
    int parent_index(int i) const { return parent_index_[i]; }  // -1 for sink

    NodeRole role(int i) const;
    // nodes ordered children-before-parents, sink last
    const std::vector<int>& leaf_to_root_order() const { return leaf_to_root_; }
    // path from i to the sink, excluding the sink itself
    std::vector<int> path_to_sink(int i) const;

  private:
    NetworkSpec() = default;
    void finish_build();

    std::vector<NodeSpec> nodes_;
    int sink_ = -1;
    std::vector<std::vector<bool>> adjacency_;
    std::vector<std::vector<int>> omega_;
    std::vector<std::vector<int>> children_;
    std::vector<int> parent_index_;
    std::vector<int> leaf_to_root_;
};

// Per transmitter i: the interference region around its receiver,
// I_{r(i)} = (Omega_{r(i)} u {r(i)}) \ {i}, split into the part i can hear
// (c1) and the part hidden from i (c2). Empty sets for the sink's own entry.
struct InterferenceSets
{
    std::vector<std::vector<int>> c1;
    std::vector<std::vector<int>> c2;
};

InterferenceSets interference_sets(const NetworkSpec& net);

// True when any transmitter has hidden interferers (some C2 non-empty) or
// when some CS neighbourhood contains a mutually out-of-range pair, in which
// case activity periods dilate and the hidden-node analysis applies.
bool has_hidden_nodes(const NetworkSpec& net);

}  // namespace lrwpan

#endif

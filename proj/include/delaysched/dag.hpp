#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ds {

struct cycle_error : std::runtime_error {
    explicit cycle_error(std::string witness)
        : std::runtime_error("precedence graph has a cycle: " + witness), cycle(std::move(witness)) {}
    std::string cycle;
};

/// Precedence DAG over integer job ids. Edge u -> v means u must finish
/// before v starts (u is a predecessor of v). The precedence relation used by
/// validity checks is the transitive closure of the edge set.
class Dag {
public:
    Dag() = default;
    Dag(std::vector<int> nodes, std::vector<std::pair<int, int>> edges);

    const std::vector<int>& nodes() const { return nodes_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    std::size_t size() const { return nodes_.size(); }

    bool has_node(int id) const { return index_.count(id) != 0; }
    int index_of(int id) const;

    /// Deterministic topological order: among ready nodes, smallest id first.
    /// Throws cycle_error naming a cycle if the graph is not acyclic.
    std::vector<int> topological_order() const;

    /// True iff u precedes v in the transitive closure (u != v).
    bool precedes(int u, int v) const;

    /// All transitive predecessors of v, ascending by id.
    std::vector<int> predecessors_of(int v) const;
    /// All transitive successors of u, ascending by id.
    std::vector<int> successors_of(int u) const;

    /// All ordered pairs (u, v) with u preceding v, lexicographic by id.
    std::vector<std::pair<int, int>> closure_pairs() const;

    /// Number of jobs on the longest chain within `subset` (1 for a nonempty
    /// antichain, 0 for an empty subset).
    std::size_t critical_path(const std::vector<int>& subset) const;

    /// Weakly connected components of the induced closure graph on `subset`,
    /// each sorted by id; components ordered by smallest member.
    std::vector<std::vector<int>> weak_components(const std::vector<int>& subset) const;

private:
    void build_closure();
    bool closed(int ui, int vi) const {
        return (closure_[static_cast<std::size_t>(ui) * words_ + static_cast<std::size_t>(vi) / 64] >>
                (vi % 64)) & 1;
    }

    std::vector<int> nodes_;
    std::vector<std::pair<int, int>> edges_;
    std::unordered_map<int, int> index_;
    std::vector<std::vector<int>> adj_;   // direct successors (indices)
    std::vector<std::vector<int>> radj_;  // direct predecessors (indices)
    std::size_t words_{0};
    std::vector<std::uint64_t> closure_;  // row u: bitset of reachable v
};

}  // namespace ds

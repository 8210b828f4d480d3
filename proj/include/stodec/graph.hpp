#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include "stodec/errors.hpp"
#include "stodec/satisfaction.hpp"

namespace stodec {

enum class VarRole { kInfo, kParity, kInternal };

inline const char* name(VarRole r) {
    switch (r) {
        case VarRole::kInfo: return "info";
        case VarRole::kParity: return "parity";
        case VarRole::kInternal: return "internal";
    }
    return "?";
}

struct VariableNode {
    int id = -1;
    Alphabet alphabet{1};
    bool observable = false;
    VarRole role = VarRole::kInternal;
    std::vector<int> edges;  // incident edge ids, in attachment order
};

struct ConstraintNode {
    int id = -1;
    SatisfactionTable table;
    // Packetized node: incoming streams are tabulated into per-edge mass
    // estimates and outgoing streams regenerated from exact sum-product
    // updates at packet boundaries.
    bool supernode = false;
    std::array<int, 3> slot_edge{-1, -1, -1};
};

struct Edge {
    int id = -1;
    int variable = -1;
    int var_slot = -1;
    int constraint = -1;
    Role slot = Role::A;
    bool super = false;  // stream interruption point for cycle breaking
};

// Bipartite constraint graph: variables on one side, degree-3 constraints on
// the other, every edge joining a variable slot to a constraint slot of the
// same alphabet. Immutable after validate().
class ConstraintGraph {
public:
    int add_variable(Alphabet alphabet, VarRole role) {
        assert_mutable();
        VariableNode v;
        v.id = static_cast<int>(variables_.size());
        v.alphabet = alphabet;
        v.role = role;
        v.observable = role != VarRole::kInternal;
        variables_.push_back(std::move(v));
        return variables_.back().id;
    }

    int add_constraint(SatisfactionTable table, bool supernode = false) {
        assert_mutable();
        ConstraintNode c{static_cast<int>(constraints_.size()), std::move(table),
                         supernode};
        constraints_.push_back(std::move(c));
        return constraints_.back().id;
    }

    int connect(int variable, int constraint, Role slot, bool super = false) {
        assert_mutable();
        if (variable < 0 || variable >= static_cast<int>(variables_.size()))
            throw GraphError("connect: unknown variable");
        if (constraint < 0 || constraint >= static_cast<int>(constraints_.size()))
            throw GraphError("connect: unknown constraint");
        ConstraintNode& c = constraints_[static_cast<std::size_t>(constraint)];
        if (c.slot_edge[static_cast<std::size_t>(index(slot))] != -1)
            throw GraphError("connect: constraint slot already connected");
        VariableNode& v = variables_[static_cast<std::size_t>(variable)];
        if (!(v.alphabet == c.table.alphabet(slot)))
            throw GraphError("connect: alphabet mismatch between variable and slot");
        Edge e;
        e.id = static_cast<int>(edges_.size());
        e.variable = variable;
        e.var_slot = static_cast<int>(v.edges.size());
        e.constraint = constraint;
        e.slot = slot;
        e.super = super;
        v.edges.push_back(e.id);
        c.slot_edge[static_cast<std::size_t>(index(slot))] = e.id;
        edges_.push_back(e);
        return edges_.back().id;
    }

    void set_supernode_edge(int edge, bool super = true) {
        assert_mutable();
        edges_[static_cast<std::size_t>(edge)].super = super;
    }

    // Checks structural invariants and seals the graph:
    //  - every constraint slot connected to exactly one edge,
    //  - edge endpoints share an alphabet (enforced at connect time),
    //  - observable variables have exactly one edge.
    // Also computes the graph diameter (in edges, over the bipartite graph).
    void validate() {
        if (validated_) return;
        for (const ConstraintNode& c : constraints_) {
            for (Role r : kRoles) {
                if (c.slot_edge[static_cast<std::size_t>(index(r))] == -1)
                    throw GraphError("constraint " + std::to_string(c.id) +
                                     " slot " + name(r) + " not connected");
            }
        }
        for (const VariableNode& v : variables_) {
            if (v.observable && v.edges.size() != 1)
                throw GraphError("observable variable " + std::to_string(v.id) +
                                 " must have exactly one edge");
            if (v.edges.empty())
                throw GraphError("variable " + std::to_string(v.id) +
                                 " has no edges");
        }
        diameter_ = compute_diameter();
        observables_.clear();
        for (const VariableNode& v : variables_)
            if (v.observable) observables_.push_back(v.id);
        validated_ = true;
    }

    bool validated() const { return validated_; }

    const std::vector<VariableNode>& variables() const { return variables_; }
    const std::vector<ConstraintNode>& constraints() const { return constraints_; }
    const std::vector<Edge>& edges() const { return edges_; }

    const VariableNode& variable(int id) const {
        return variables_[static_cast<std::size_t>(id)];
    }
    const ConstraintNode& constraint(int id) const {
        return constraints_[static_cast<std::size_t>(id)];
    }
    const Edge& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }

    // Observable variable ids in ascending id order. Evidence vectors are
    // indexed against this list.
    const std::vector<int>& observables() const { return observables_; }

    std::vector<int> supernode_edges() const {
        std::vector<int> out;
        for (const Edge& e : edges_)
            if (e.super) out.push_back(e.id);
        return out;
    }

    int diameter() const { return diameter_; }

private:
    void assert_mutable() const {
        if (validated_) throw GraphError("graph is sealed after validate()");
    }

    // Bipartite node indexing for traversals: variables then constraints.
    int node_count() const {
        return static_cast<int>(variables_.size() + constraints_.size());
    }
    int var_node(int id) const { return id; }
    int cons_node(int id) const { return static_cast<int>(variables_.size()) + id; }

    template <typename Fn>
    void for_each_incident(int node, Fn&& fn) const {
        if (node < static_cast<int>(variables_.size())) {
            for (int e : variables_[static_cast<std::size_t>(node)].edges) fn(e);
        } else {
            const ConstraintNode& c =
                constraints_[static_cast<std::size_t>(node -
                                                      static_cast<int>(variables_.size()))];
            for (int e : c.slot_edge)
                if (e != -1) fn(e);
        }
    }

    int other_endpoint(const Edge& e, int node) const {
        int v = var_node(e.variable);
        return node == v ? cons_node(e.constraint) : v;
    }

    int compute_diameter() const {
        int best = 0;
        std::vector<int> dist;
        for (int s = 0; s < node_count(); ++s) {
            dist.assign(static_cast<std::size_t>(node_count()), -1);
            std::deque<int> q{s};
            dist[static_cast<std::size_t>(s)] = 0;
            while (!q.empty()) {
                int u = q.front();
                q.pop_front();
                for_each_incident(u, [&](int eid) {
                    int w = other_endpoint(edges_[static_cast<std::size_t>(eid)], u);
                    if (dist[static_cast<std::size_t>(w)] == -1) {
                        dist[static_cast<std::size_t>(w)] =
                            dist[static_cast<std::size_t>(u)] + 1;
                        q.push_back(w);
                    }
                });
            }
            best = std::max(best, *std::max_element(dist.begin(), dist.end()));
        }
        return best;
    }

    friend std::vector<std::vector<int>> detect_cycles(const ConstraintGraph&);

    std::vector<VariableNode> variables_;
    std::vector<ConstraintNode> constraints_;
    std::vector<Edge> edges_;
    std::vector<int> observables_;
    int diameter_ = 0;
    bool validated_ = false;
};

// Cycles not interrupted by a supernode edge. Supernode edges are removed
// and the remainder searched; an empty result means every cycle passes
// through at least one supernode edge. Otherwise one uncovered cycle is
// returned as an edge-id sequence. Traversal is edge-based, so parallel
// edges between the same two nodes form a reportable 2-cycle.
inline std::vector<std::vector<int>> detect_cycles(const ConstraintGraph& g) {
    int n = g.node_count();
    std::vector<int> parent_edge(static_cast<std::size_t>(n), -1);
    std::vector<int> state(static_cast<std::size_t>(n), 0);  // 0 new, 1 open, 2 done

    for (int root = 0; root < n; ++root) {
        if (state[static_cast<std::size_t>(root)] != 0) continue;
        // Iterative DFS; stack of (node, entering edge).
        std::vector<std::pair<int, int>> stack{{root, -1}};
        while (!stack.empty()) {
            auto [u, in_edge] = stack.back();
            if (state[static_cast<std::size_t>(u)] == 0) {
                state[static_cast<std::size_t>(u)] = 1;
                parent_edge[static_cast<std::size_t>(u)] = in_edge;
                bool found_cycle = false;
                std::vector<int> cycle;
                g.for_each_incident(u, [&](int eid) {
                    if (found_cycle) return;
                    const Edge& e = g.edges_[static_cast<std::size_t>(eid)];
                    if (e.super || eid == in_edge) return;
                    int w = g.other_endpoint(e, u);
                    if (state[static_cast<std::size_t>(w)] == 1) {
                        // Back edge: walk parents from u back to w.
                        cycle.push_back(eid);
                        int x = u;
                        while (x != w) {
                            int pe = parent_edge[static_cast<std::size_t>(x)];
                            cycle.push_back(pe);
                            x = g.other_endpoint(
                                g.edges_[static_cast<std::size_t>(pe)], x);
                        }
                        found_cycle = true;
                    } else if (state[static_cast<std::size_t>(w)] == 0) {
                        stack.emplace_back(w, eid);
                    }
                });
                if (found_cycle) {
                    std::reverse(cycle.begin(), cycle.end());
                    return {cycle};
                }
            } else {
                state[static_cast<std::size_t>(u)] = 2;
                stack.pop_back();
            }
        }
    }
    return {};
}

}  // namespace stodec

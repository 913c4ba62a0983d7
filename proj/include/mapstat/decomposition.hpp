#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "mapstat/mapping.hpp"

namespace mapstat {

inline constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// Rooted tree hanging from a cyclic vertex. The root is part of the tree.
struct Tree {
    Vertex root = 0;
    std::size_t size = 0;
    Vertex min_vertex = kNone;
    std::size_t component = 0;
    std::vector<Vertex> members; // ascending; filled only on request

    bool operator==(const Tree&) const = default;
};

// A directed cycle of rooted trees. tree_ids[k] is the tree rooted at cycle[k].
struct Component {
    std::vector<Vertex> cycle;
    std::vector<std::size_t> tree_ids;
    std::size_t size = 0;
    Vertex min_vertex = kNone;

    bool operator==(const Component&) const = default;
};

struct Decomposition {
    std::size_t n = 0;
    std::vector<Component> components;
    std::vector<Tree> trees;
    std::vector<std::uint32_t> tree_of;      // vertex -> index into trees
    std::vector<std::uint32_t> component_of; // vertex -> index into components
    std::size_t cyclic_vertex_count = 0;

    bool operator==(const Decomposition&) const = default;
};

struct DecomposeOptions {
    bool with_members = false;
};

// Splits the functional digraph of `t` into components, cycles and trees in
// O(n) time.
//
// Cyclic vertices are the ones left after repeatedly deleting vertices of
// in-degree zero. Each peeled vertex is removed before its image, so walking
// the peel order backwards visits T(v) before v and tree membership can be
// inherited from the image in a single pass.
//
// Components are numbered in order of their smallest cyclic vertex and each
// cycle is listed starting from that vertex.
inline Decomposition decompose(const Mapping& t, DecomposeOptions options = {}) {
    const std::size_t n = t.size();
    Decomposition d;
    d.n = n;
    d.tree_of.assign(n, kNone);
    d.component_of.assign(n, kNone);

    std::vector<std::uint32_t> in_degree(n, 0);
    for (std::size_t v = 0; v < n; ++v) ++in_degree[t(static_cast<Vertex>(v))];

    std::vector<Vertex> peeled;
    peeled.reserve(n);
    for (std::size_t v = 0; v < n; ++v)
        if (in_degree[v] == 0) peeled.push_back(static_cast<Vertex>(v));
    for (std::size_t head = 0; head < peeled.size(); ++head) {
        const Vertex next = t(peeled[head]);
        if (--in_degree[next] == 0) peeled.push_back(next);
    }

    for (std::size_t v = 0; v < n; ++v) {
        if (in_degree[v] == 0 || d.component_of[v] != kNone) continue;
        const auto cid = static_cast<std::uint32_t>(d.components.size());
        Component& comp = d.components.emplace_back();
        Vertex u = static_cast<Vertex>(v);
        do {
            const auto tid = static_cast<std::uint32_t>(d.trees.size());
            d.trees.push_back(Tree{.root = u, .size = 0, .min_vertex = kNone, .component = cid, .members = {}});
            comp.cycle.push_back(u);
            comp.tree_ids.push_back(tid);
            d.tree_of[u] = tid;
            d.component_of[u] = cid;
            u = t(u);
        } while (u != v);
    }
    d.cyclic_vertex_count = d.trees.size();

    for (auto it = peeled.rbegin(); it != peeled.rend(); ++it) d.tree_of[*it] = d.tree_of[t(*it)];

    for (std::size_t v = 0; v < n; ++v) {
        Tree& tree = d.trees[d.tree_of[v]];
        d.component_of[v] = static_cast<std::uint32_t>(tree.component);
        Component& comp = d.components[tree.component];
        ++tree.size;
        ++comp.size;
        if (tree.min_vertex == kNone) tree.min_vertex = static_cast<Vertex>(v);
        if (comp.min_vertex == kNone) comp.min_vertex = static_cast<Vertex>(v);
        if (options.with_members) tree.members.push_back(static_cast<Vertex>(v));
    }
    return d;
}

} // namespace mapstat

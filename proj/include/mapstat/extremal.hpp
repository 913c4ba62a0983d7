#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "mapstat/decomposition.hpp"

namespace mapstat {

// Ranked component and tree sizes of one decomposition.
//
// Ranking is by size descending, then by smallest vertex label ascending.
// Ranks in the accessors are 1-indexed (mu(1) is the largest component);
// ranks past the end have size 0 and are never inside the largest component.
struct ExtremalStats {
    std::vector<std::size_t> component_sizes_desc;
    std::vector<std::size_t> tree_sizes_desc;
    std::vector<std::size_t> component_order; // rank -> component index
    std::vector<std::size_t> tree_order;      // rank -> tree index
    std::size_t largest_component_index = 0;
    std::vector<std::size_t> tree_rank_component;
    std::vector<bool> s_in_largest;

    std::size_t mu(std::size_t r) const {
        return r >= 1 && r <= component_sizes_desc.size() ? component_sizes_desc[r - 1] : 0;
    }
    std::size_t tau(std::size_t s) const {
        return s >= 1 && s <= tree_sizes_desc.size() ? tree_sizes_desc[s - 1] : 0;
    }
    bool tree_in_largest(std::size_t s) const {
        return s >= 1 && s <= s_in_largest.size() && s_in_largest[s - 1];
    }
    // Tree index of rank s, or kNone.
    std::size_t tree_id(std::size_t s) const {
        return s >= 1 && s <= tree_order.size() ? tree_order[s - 1] : kNone;
    }
};

namespace detail {

template <class Items>
std::vector<std::size_t> rank_by_size(const Items& items) {
    std::vector<std::size_t> order(items.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (items[a].size != items[b].size) return items[a].size > items[b].size;
        return items[a].min_vertex < items[b].min_vertex;
    });
    return order;
}

} // namespace detail

inline ExtremalStats extremal_stats(const Decomposition& d) {
    ExtremalStats st;
    st.component_order = detail::rank_by_size(d.components);
    st.tree_order = detail::rank_by_size(d.trees);
    st.largest_component_index = st.component_order.front();

    st.component_sizes_desc.reserve(d.components.size());
    for (std::size_t c : st.component_order)
        st.component_sizes_desc.push_back(d.components[c].size);

    st.tree_sizes_desc.reserve(d.trees.size());
    st.tree_rank_component.reserve(d.trees.size());
    st.s_in_largest.reserve(d.trees.size());
    for (std::size_t id : st.tree_order) {
        const Tree& tree = d.trees[id];
        st.tree_sizes_desc.push_back(tree.size);
        st.tree_rank_component.push_back(tree.component);
        st.s_in_largest.push_back(tree.component == st.largest_component_index);
    }
    return st;
}

} // namespace mapstat

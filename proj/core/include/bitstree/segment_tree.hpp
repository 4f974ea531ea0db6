#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "bitstree/bits_tree.hpp"
#include "bitstree/interval.hpp"

namespace bitstree {

/// Static segment tree: a balanced skeleton over the elementary slabs between
/// the sorted distinct endpoints of a fixed segment set, including the two
/// unbounded outer slabs. Each segment id is recorded on its canonical cover:
/// the maximal nodes whose slab lies inside the segment. Immutable after
/// build.
class sst_tree {
public:
    struct slab_node {
        coord lo = 0;
        coord hi = 0;
        bool neg_inf = false;  // slab extends to -infinity
        bool pos_inf = false;  // slab extends to +infinity
        std::int32_t left = -1;
        std::int32_t right = -1;
        id_set list;

        bool contains(coord x) const {
            return (neg_inf || lo <= x) && (pos_inf || x <= hi);
        }
    };

    static sst_tree build(const std::vector<segment>& segs);

    query_trace stab(coord x) const;
    tree_stats stats() const;

    std::int32_t root() const { return root_; }
    const slab_node& node_at(std::int32_t i) const { return nodes_[i]; }
    std::size_t node_count() const { return nodes_.size(); }

private:
    sst_tree() = default;

    std::int32_t build_skeleton(std::vector<slab_node>& leaves, std::int32_t i,
                                std::int32_t j, int& height);
    void place(std::int32_t idx, const segment& s);
    void collect(std::int32_t idx, coord x, query_trace& t) const;

    std::vector<slab_node> nodes_;
    std::int32_t root_ = -1;
    int height_ = -1;
    std::size_t segment_count_ = 0;
};

/// Dynamic segment tree over a fixed integer range [lo, hi]: the complete
/// skeleton whose leaves are the unit slabs of the range, materialized at
/// construction. Segments within the range can be inserted and deleted;
/// deletion removes ids only, the skeleton is never pruned. Inserting a
/// segment outside the range throws std::out_of_range.
class dst_tree {
public:
    struct dst_node {
        coord lo = 0;
        coord hi = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        id_set list;

        bool contains(coord x) const { return lo <= x && x <= hi; }
    };

    dst_tree(coord lo, coord hi);

    void insert(const segment& s);
    bool erase(const segment& s);
    bool erase(segment_id id);

    query_trace stab(coord x) const;
    tree_stats stats() const;

    coord range_lo() const { return lo_; }
    coord range_hi() const { return hi_; }
    std::int32_t root() const { return root_; }
    const dst_node& node_at(std::int32_t i) const { return nodes_[i]; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t segment_count() const { return registry_.size(); }
    const std::map<segment_id, segment>& segments() const { return registry_; }

private:
    std::int32_t build_skeleton(coord lo, coord hi, int& height);
    void place(std::int32_t idx, const segment& s, bool add);
    void collect(std::int32_t idx, coord x, query_trace& t) const;

    std::vector<dst_node> nodes_;
    std::int32_t root_ = -1;
    int height_ = -1;
    coord lo_ = 0;
    coord hi_ = 0;
    std::map<segment_id, segment> registry_;
};

}  // namespace bitstree
